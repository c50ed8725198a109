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

#include "sdmgs/simplex_qp.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

Eigen::VectorXd initial_weights(const SimplexQpProblem& p) {
    const auto size = static_cast<Eigen::Index>(p.vertices.size());
    if (p.warm_start.size() == p.vertices.size()) {
        Eigen::VectorXd w(size);
        double sum = 0.0;
        for (Eigen::Index j = 0; j < size; ++j) {
            w[j] = std::max(0.0, p.warm_start[static_cast<std::size_t>(j)]);
            sum += w[j];
        }
        if (sum > 0.5 && std::isfinite(sum)) return w / sum;
    }
    Eigen::Index best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < size; ++j) {
        const double v = 0.5 * p.hessian(j, j) + p.linear[j];
        if (v < best_value) {
            best_value = v;
            best = j;
        }
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(size);
    w[best] = 1.0;
    return w;
}

}  // namespace

SimplexQpResult solve_simplex_qp(const SimplexQpProblem& problem, double tol, std::size_t max_iterations) {
    const std::size_t count = problem.vertices.size();
    if (count == 0) throw Error(ErrorCode::invalid_argument, "simplex QP needs at least one vertex");
    const auto p = static_cast<Eigen::Index>(count);
    if (problem.hessian.rows() != p || problem.hessian.cols() != p || problem.linear.size() != p) {
        throw Error(ErrorCode::dimension_mismatch, "simplex QP data size");
    }
    const Eigen::MatrixXd& H = problem.hessian;
    const Eigen::VectorXd& h = problem.linear;

    Eigen::VectorXd w = initial_weights(problem);
    std::vector<bool> free(count);
    for (std::size_t j = 0; j < count; ++j) free[j] = w[static_cast<Eigen::Index>(j)] > 0.0;

    SimplexQpResult result;
    Eigen::VectorXd g;
    double scale = 1.0;
    std::size_t iter = 0;
    bool converged = false;
    for (; iter < max_iterations; ++iter) {
        g = H * w + h;
        scale = std::max(1.0, g.cwiseAbs().maxCoeff());

        // Free set, with the heaviest weight first as the elimination base.
        std::vector<Eigen::Index> F;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (free[static_cast<std::size_t>(j)]) F.push_back(j);
        }
        std::size_t base = 0;
        for (std::size_t t = 1; t < F.size(); ++t) {
            if (w[F[t]] > w[F[base]]) base = t;
        }
        std::swap(F[0], F[base]);
        const auto k = static_cast<Eigen::Index>(F.size());

        Eigen::VectorXd step = Eigen::VectorXd::Zero(k);
        if (k >= 2) {
            const Eigen::Index r = k - 1;
            Eigen::MatrixXd Hr(r, r);
            Eigen::VectorXd gr(r);
            const Eigen::Index b = F[0];
            for (Eigen::Index s = 0; s < r; ++s) {
                gr[s] = g[F[s + 1]] - g[b];
                for (Eigen::Index t = 0; t < r; ++t) {
                    Hr(s, t) = H(F[s + 1], F[t + 1]) - H(F[s + 1], b) - H(b, F[t + 1]) + H(b, b);
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hr);
            const Eigen::VectorXd& ev = eig.eigenvalues();
            const Eigen::MatrixXd& U = eig.eigenvectors();
            const double thr = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
            const Eigen::VectorXd c = U.transpose() * gr;
            Eigen::VectorXd null_part = Eigen::VectorXd::Zero(r);
            Eigen::VectorXd newton = Eigen::VectorXd::Zero(r);
            for (Eigen::Index t = 0; t < r; ++t) {
                if (ev[t] <= thr) {
                    null_part += c[t] * U.col(t);
                } else {
                    newton -= (c[t] / ev[t]) * U.col(t);
                }
            }
            const Eigen::VectorXd y = null_part.norm() > 1e-12 * scale ? Eigen::VectorXd(-null_part) : newton;
            step[0] = -y.sum();
            step.tail(r) = y;
        }

        Eigen::VectorXd gF(k);
        for (Eigen::Index t = 0; t < k; ++t) gF[t] = g[F[t]];
        const double slope = gF.dot(step);
        // The slope is quadratic in the face gradient spread, so test the spread instead.
        const double spread = k >= 2 ? gF.maxCoeff() - gF.minCoeff() : 0.0;
        if (step.cwiseAbs().maxCoeff() > 1e-15 && slope < 0.0 && spread > 0.1 * tol * scale) {
            double curvature = 0.0;
            for (Eigen::Index s = 0; s < k; ++s) {
                for (Eigen::Index t = 0; t < k; ++t) curvature += step[s] * H(F[s], F[t]) * step[t];
            }
            double alpha = curvature > 0.0 ? -slope / curvature : std::numeric_limits<double>::infinity();
            Eigen::Index blocking = -1;
            for (Eigen::Index t = 0; t < k; ++t) {
                if (step[t] < -1e-15) {
                    const double ratio = w[F[t]] / -step[t];
                    if (ratio < alpha) {
                        alpha = ratio;
                        blocking = t;
                    }
                }
            }
            if (!std::isfinite(alpha)) throw Error(ErrorCode::numerical_failure, "simplex QP unbounded ray");
            for (Eigen::Index t = 0; t < k; ++t) w[F[t]] += alpha * step[t];
            if (blocking >= 0) w[F[blocking]] = 0.0;
            for (Eigen::Index t = 0; t < k; ++t) {
                if (w[F[t]] <= 1e-16) {
                    w[F[t]] = 0.0;
                    free[static_cast<std::size_t>(F[t])] = false;
                }
            }
            w /= w.sum();
            continue;
        }

        // Stationary on the free face: release the most violated zero weight.
        double mu = 0.0;
        for (Eigen::Index t = 0; t < k; ++t) mu += w[F[t]] * g[F[t]];
        Eigen::Index enter = -1;
        double lowest = mu - 0.25 * tol * scale;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (free[static_cast<std::size_t>(j)]) continue;
            if (g[j] < lowest) {
                lowest = g[j];
                enter = j;
            }
        }
        if (enter < 0) {
            converged = true;
            break;
        }
        free[static_cast<std::size_t>(enter)] = true;
    }

    g = H * w + h;
    scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    result.kkt_gap = w.dot(g) - g.minCoeff();
    result.iterations = iter;
    if (!converged || result.kkt_gap > tol * scale) {
        throw Error(ErrorCode::max_inner_iterations,
                    "simplex QP stopped with gap " + std::to_string(result.kkt_gap));
    }

    result.weights.assign(w.data(), w.data() + p);
    const std::size_t dim = problem.vertices.front().size();
    result.point.assign(dim, 0.0);
    for (std::size_t v = 0; v < count; ++v) {
        const double wv = result.weights[v];
        if (wv == 0.0) continue;
        for (std::size_t d = 0; d < dim; ++d) result.point[d] += wv * problem.vertices[v][d];
    }
    result.value = 0.5 * w.dot(H * w) + h.dot(w) + problem.constant;
    return result;
}

}  // namespace sdmgs
