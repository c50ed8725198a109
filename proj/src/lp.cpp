/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdmgs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ColKind { structural, slack, artificial };
enum class ColState { basic, at_lower, at_upper };

struct Column {
    ColKind kind;
    std::size_t index;  // structural index or row index
    double sign;        // coefficient of slack/artificial in its row
    double shift;       // lower bound of the original variable
    double upper;       // upper bound after shifting (may be +inf)
    ColState state = ColState::at_lower;
};

/// Solves M v = rhs in place by Gaussian elimination with partial pivoting.
bool dense_solve(std::vector<double> m, std::size_t n, std::vector<double>& rhs) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(m[i * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < 1e-14) return false;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
            std::swap(rhs[k], rhs[piv]);
        }
        const double d = m[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m[i * n + k] / d;
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
            rhs[i] -= f * rhs[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= m[k * n + j] * rhs[j];
        rhs[k] = s / m[k * n + k];
    }
    return true;
}

class Simplex {
public:
    Simplex(const LpProblem& p, const Tolerances& tol) : p_(p), tol_(tol) {
        m_ = p.rows.size();
        n_ = p.n_vars();
        for (std::size_t j = 0; j < n_; ++j) {
            cols_.push_back({ColKind::structural, j, 1.0, p.lower[j], p.upper[j] - p.lower[j]});
        }
        slack_of_.assign(m_, npos);
        for (std::size_t i = 0; i < m_; ++i) {
            const Relation rel = p.rows[i].relation;
            if (rel == Relation::equal) continue;
            slack_of_[i] = cols_.size();
            cols_.push_back({ColKind::slack, i, rel == Relation::less_equal ? 1.0 : -1.0, 0.0, kInf});
        }
        shifted_rhs_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double b = p.rows[i].rhs;
            for (std::size_t j = 0; j < n_; ++j) b -= p.rows[i].coeffs[j] * p.lower[j];
            shifted_rhs_[i] = b;
        }
        basis_.assign(m_, npos);
        std::vector<double> basic_sign(m_, 1.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t s = slack_of_[i];
            if (s != npos && cols_[s].sign * shifted_rhs_[i] >= 0.0) {
                basis_[i] = s;
                basic_sign[i] = cols_[s].sign;
            } else {
                const double sign = shifted_rhs_[i] >= 0.0 ? 1.0 : -1.0;
                basis_[i] = cols_.size();
                basic_sign[i] = sign;
                cols_.push_back({ColKind::artificial, i, sign, 0.0, kInf});
            }
            cols_[basis_[i]].state = ColState::basic;
        }
        ncols_ = cols_.size();
        tableau_.assign(m_ * ncols_, 0.0);
        xb_.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double k = basic_sign[i];
            double* row = &tableau_[i * ncols_];
            for (std::size_t j = 0; j < n_; ++j) row[j] = k * p.rows[i].coeffs[j];
            for (std::size_t c = n_; c < ncols_; ++c) {
                if (cols_[c].index == i) row[c] = k * cols_[c].sign;
            }
            xb_[i] = k * shifted_rhs_[i];
        }
    }

    LpResult run() {
        LpResult result;
        const bool needs_phase1 = std::any_of(cols_.begin(), cols_.end(), [](const Column& c) {
            return c.kind == ColKind::artificial;
        });
        if (needs_phase1) {
            std::vector<double> cost(ncols_, 0.0);
            for (std::size_t c = 0; c < ncols_; ++c) {
                if (cols_[c].kind == ColKind::artificial) cost[c] = 1.0;
            }
            iterate(cost);
            double infeas = 0.0;
            double scale = 1.0;
            for (std::size_t i = 0; i < m_; ++i) {
                scale = std::max(scale, std::abs(shifted_rhs_[i]));
                if (cols_[basis_[i]].kind == ColKind::artificial) infeas += std::max(0.0, xb_[i]);
            }
            if (infeas > tol_.lp_feasibility * scale) {
                result.status = LpStatus::infeasible;
                result.iterations = iterations_;
                return result;
            }
            drive_out_artificials();
        }
        std::vector<double> cost(ncols_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) cost[j] = p_.objective[j];
        iterate(cost);
        extract(result, cost);
        return result;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    double& at(std::size_t i, std::size_t j) { return tableau_[i * ncols_ + j]; }

    void pivot(std::size_t r, std::size_t e) {
        double* prow = &tableau_[r * ncols_];
        const double piv = prow[e];
        for (std::size_t j = 0; j < ncols_; ++j) prow[j] /= piv;
        prow[e] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &tableau_[i * ncols_];
            const double f = row[e];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < ncols_; ++j) row[j] -= f * prow[j];
            row[e] = 0.0;
        }
        const double f = reduced_[e];
        if (f != 0.0) {
            for (std::size_t j = 0; j < ncols_; ++j) reduced_[j] -= f * prow[j];
            reduced_[e] = 0.0;
        }
    }

    void price(const std::vector<double>& cost) {
        reduced_ = cost;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &tableau_[i * ncols_];
            for (std::size_t j = 0; j < ncols_; ++j) reduced_[j] -= cb * row[j];
        }
    }

    void iterate(const std::vector<double>& cost) {
        price(cost);
        bool bland = false;
        std::size_t stall = 0;
        const std::size_t limit = 1000 + 100 * (m_ + ncols_);
        for (;;) {
            if (++iterations_ > limit) {
                throw Error(ErrorCode::numerical_failure, "simplex iteration limit");
            }
            // Entering column.
            std::size_t e = npos;
            double best = 0.0;
            for (std::size_t j = 0; j < ncols_; ++j) {
                const Column& c = cols_[j];
                if (c.state == ColState::basic || c.upper == 0.0) continue;
                double gain = 0.0;
                if (c.state == ColState::at_lower && reduced_[j] < -tol_.lp_optimality) gain = -reduced_[j];
                if (c.state == ColState::at_upper && reduced_[j] > tol_.lp_optimality) gain = reduced_[j];
                if (gain <= 0.0) continue;
                if (bland) {
                    e = j;
                    break;
                }
                if (gain > best) {
                    best = gain;
                    e = j;
                }
            }
            if (e == npos) return;

            const double dir = cols_[e].state == ColState::at_lower ? 1.0 : -1.0;
            double t = cols_[e].upper;  // bound flip distance
            std::size_t leave = npos;
            double leave_alpha = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double delta = -dir * at(i, e);
                if (std::abs(delta) <= tol_.lp_pivot) continue;
                const Column& b = cols_[basis_[i]];
                double ti;
                if (delta < 0.0) {
                    ti = std::max(0.0, xb_[i]) / -delta;
                } else {
                    if (!std::isfinite(b.upper)) continue;
                    ti = std::max(0.0, b.upper - xb_[i]) / delta;
                }
                const bool better = ti < t - 1e-12;
                const bool tie = !better && ti <= t + 1e-12 && leave != npos;
                if (better) {
                    t = ti;
                    leave = i;
                    leave_alpha = std::abs(delta);
                } else if (tie) {
                    if (bland ? basis_[i] < basis_[leave] : std::abs(delta) > leave_alpha) {
                        leave = i;
                        leave_alpha = std::abs(delta);
                    }
                }
            }
            if (!std::isfinite(t)) throw Error(ErrorCode::numerical_failure, "unbounded direction");

            if (t <= 1e-12) {
                if (++stall > tol_.lp_stall_pivots) bland = true;
            } else {
                stall = 0;
            }

            for (std::size_t i = 0; i < m_; ++i) xb_[i] += -dir * at(i, e) * t;
            if (leave == npos) {
                cols_[e].state = cols_[e].state == ColState::at_lower ? ColState::at_upper : ColState::at_lower;
                continue;
            }
            const std::size_t old = basis_[leave];
            const double delta = -dir * at(leave, e);
            Column& oc = cols_[old];
            oc.state = delta < 0.0 ? ColState::at_lower : ColState::at_upper;
            if (oc.kind == ColKind::artificial) {
                oc.state = ColState::at_lower;
                oc.upper = 0.0;
            }
            const double start = cols_[e].state == ColState::at_lower ? 0.0 : cols_[e].upper;
            cols_[e].state = ColState::basic;
            basis_[leave] = e;
            pivot(leave, e);
            xb_[leave] = start + dir * t;
        }
    }

    void drive_out_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (cols_[basis_[r]].kind != ColKind::artificial) continue;
            std::size_t e = npos;
            double best = 1e-7;
            for (std::size_t j = 0; j < ncols_; ++j) {
                if (cols_[j].kind == ColKind::artificial || cols_[j].state == ColState::basic) continue;
                if (std::abs(at(r, j)) > best) {
                    best = std::abs(at(r, j));
                    e = j;
                }
            }
            Column& art = cols_[basis_[r]];
            if (e == npos) {
                // Redundant row: the artificial stays basic, pinned at zero.
                art.upper = 0.0;
                redundant_rows_.push_back(r);
                continue;
            }
            const double value = cols_[e].state == ColState::at_lower ? 0.0 : cols_[e].upper;
            art.state = ColState::at_lower;
            art.upper = 0.0;
            cols_[e].state = ColState::basic;
            basis_[r] = e;
            reduced_.assign(ncols_, 0.0);
            pivot(r, e);
            xb_[r] = value;
        }
        for (auto& c : cols_) {
            if (c.kind == ColKind::artificial) c.upper = 0.0;
        }
    }

    double column_entry(std::size_t c, std::size_t row) const {
        const Column& col = cols_[c];
        if (col.kind == ColKind::structural) return p_.rows[row].coeffs[col.index];
        return col.index == row ? col.sign : 0.0;
    }

    double nonbasic_value(std::size_t c) const {
        const Column& col = cols_[c];
        return col.state == ColState::at_upper ? col.upper : 0.0;
    }

    void extract(LpResult& result, const std::vector<double>& cost) {
        result.iterations = iterations_;
        // Recompute basic values from the original data.
        std::vector<double> bmat(m_ * m_);
        std::vector<double> rhs(shifted_rhs_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t k = 0; k < m_; ++k) bmat[i * m_ + k] = column_entry(basis_[k], i);
        }
        for (std::size_t c = 0; c < ncols_; ++c) {
            if (cols_[c].state == ColState::basic) continue;
            const double v = nonbasic_value(c);
            if (v == 0.0) continue;
            for (std::size_t i = 0; i < m_; ++i) rhs[i] -= column_entry(c, i) * v;
        }
        if (m_ > 0 && !dense_solve(bmat, m_, rhs)) {
            throw Error(ErrorCode::numerical_failure, "singular final basis");
        }
        std::vector<double> value(ncols_, 0.0);
        for (std::size_t c = 0; c < ncols_; ++c) {
            if (cols_[c].state != ColState::basic) value[c] = nonbasic_value(c);
        }
        for (std::size_t i = 0; i < m_; ++i) value[basis_[i]] = rhs[i];

        result.x.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            double v = cols_[j].shift + value[j];
            const double slack = tol_.lp_residual * std::max(1.0, std::abs(v));
            if (v < p_.lower[j]) {
                if (v < p_.lower[j] - slack) throw Error(ErrorCode::numerical_failure, "bound violation");
                v = p_.lower[j];
            }
            if (v > p_.upper[j]) {
                if (v > p_.upper[j] + slack) throw Error(ErrorCode::numerical_failure, "bound violation");
                v = p_.upper[j];
            }
            result.x[j] = v;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& row = p_.rows[i];
            double act = 0.0;
            double scale = std::max(1.0, std::abs(row.rhs));
            for (std::size_t j = 0; j < n_; ++j) {
                act += row.coeffs[j] * result.x[j];
                scale = std::max(scale, std::abs(row.coeffs[j] * result.x[j]));
            }
            const double viol = row.relation == Relation::less_equal    ? act - row.rhs
                                : row.relation == Relation::greater_equal ? row.rhs - act
                                                                          : std::abs(act - row.rhs);
            if (viol > tol_.lp_residual * scale) {
                throw Error(ErrorCode::numerical_failure, "row " + std::to_string(i) + " residual");
            }
        }

        // Duals: B' y = c_B.
        std::vector<double> bt(m_ * m_);
        std::vector<double> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t k = 0; k < m_; ++k) bt[k * m_ + i] = bmat[i * m_ + k];
        }
        for (std::size_t k = 0; k < m_; ++k) y[k] = cost[basis_[k]];
        if (m_ > 0 && !dense_solve(bt, m_, y)) throw Error(ErrorCode::numerical_failure, "singular dual basis");
        for (std::size_t r : redundant_rows_) y[r] = 0.0;
        result.duals = y;

        double cscale = 1.0;
        for (double c : p_.objective) cscale = std::max(cscale, std::abs(c));
        for (std::size_t c = 0; c < ncols_; ++c) {
            const Column& col = cols_[c];
            if (col.state == ColState::basic || col.kind == ColKind::artificial || col.upper == 0.0) continue;
            double d = cost[c];
            for (std::size_t i = 0; i < m_; ++i) d -= column_entry(c, i) * y[i];
            const double bad = col.state == ColState::at_lower ? -d : d;
            if (bad > 1e2 * tol_.lp_residual * cscale) {
                throw Error(ErrorCode::numerical_failure, "dual infeasible reduced cost");
            }
        }

        result.value = dot(p_.objective, result.x);
        result.status = LpStatus::optimal;
    }

    const LpProblem& p_;
    const Tolerances& tol_;
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::size_t ncols_ = 0;
    std::vector<Column> cols_;
    std::vector<std::size_t> slack_of_;
    std::vector<std::size_t> basis_;
    std::vector<double> shifted_rhs_;
    std::vector<double> tableau_;
    std::vector<double> xb_;
    std::vector<double> reduced_;
    std::vector<std::size_t> redundant_rows_;
    std::size_t iterations_ = 0;
};

}  // namespace

LpResult solve_lp(const LpProblem& problem, const Tolerances& tol) {
    const std::size_t n = problem.n_vars();
    if (problem.lower.size() != n || problem.upper.size() != n) {
        throw Error(ErrorCode::dimension_mismatch, "lp bounds length");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(problem.lower[j]) || !std::isfinite(problem.upper[j])) {
            throw Error(ErrorCode::invalid_argument, "lp variable " + std::to_string(j) + " has an infinite bound");
        }
        if (problem.lower[j] > problem.upper[j]) return LpResult{};
    }
    for (const auto& row : problem.rows) {
        if (row.coeffs.size() != n) throw Error(ErrorCode::dimension_mismatch, "lp row length");
    }
    Simplex simplex(problem, tol);
    return simplex.run();
}

}  // namespace sdmgs
