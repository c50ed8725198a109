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

#include <doctest.h>

#include <random>

#include "sdmgs/error.hpp"
#include "sdmgs/simplex_qp.hpp"

using namespace sdmgs;

namespace {

// Objective (x - target)^2 on 1-d vertices, written in the weight space.
SimplexQpProblem line_problem(const std::vector<double>& xs, double target) {
    SimplexQpProblem p;
    const auto n = static_cast<Eigen::Index>(xs.size());
    p.hessian.resize(n, n);
    p.linear.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        p.vertices.push_back({xs[a]});
        p.linear[a] = -2.0 * target * xs[a];
        for (Eigen::Index b = 0; b < n; ++b) p.hessian(a, b) = 2.0 * xs[a] * xs[b];
    }
    p.constant = target * target;
    return p;
}

}  // namespace

TEST_CASE("solve_simplex_qp singleton hull") {
    auto p = line_problem({0.7}, 3.0);
    const auto r = solve_simplex_qp(p);
    CHECK(r.weights == Vector{1.0});
    CHECK(r.point == Vector{0.7});
}

TEST_CASE("solve_simplex_qp interior minimum") {
    const auto r = solve_simplex_qp(line_problem({0.0, 1.0}, 0.3));
    CHECK(r.point[0] == doctest::Approx(0.3));
    CHECK(r.weights[0] == doctest::Approx(0.7));
    CHECK(r.weights[1] == doctest::Approx(0.3));
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solve_simplex_qp boundary minimum") {
    const auto r = solve_simplex_qp(line_problem({0.0, 1.0}, 2.0));
    CHECK(r.point[0] == doctest::Approx(1.0));
    CHECK(r.weights[0] == 0.0);
    CHECK(r.weights[1] == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("solve_simplex_qp with duplicate and collinear vertices") {
    const auto r = solve_simplex_qp(line_problem({0.0, 0.5, 0.5, 1.0, 0.25}, 0.6));
    CHECK(r.point[0] == doctest::Approx(0.6));
    CHECK(r.kkt_gap <= 1e-10);
}

TEST_CASE("solve_simplex_qp linear objective picks the best vertex") {
    SimplexQpProblem p;
    p.vertices = {{0.0}, {1.0}, {2.0}};
    p.hessian = Eigen::MatrixXd::Zero(3, 3);
    p.linear = Eigen::Vector3d(3.0, -1.0, 2.0);
    const auto r = solve_simplex_qp(p);
    CHECK(r.weights[1] == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(-1.0));
}

TEST_CASE("solve_simplex_qp dimension mismatch") {
    SimplexQpProblem p = line_problem({0.0, 1.0}, 0.5);
    p.linear.resize(3);
    CHECK_THROWS_AS(solve_simplex_qp(p), Error);
    CHECK_THROWS_AS(solve_simplex_qp(SimplexQpProblem{}), Error);
}

TEST_CASE("solve_simplex_qp matches a long projected-gradient run on random PSD data") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 9;
        const Eigen::Index rank = 1 + trial % 3;
        Eigen::MatrixXd A(rank, n);
        for (Eigen::Index i = 0; i < rank; ++i)
            for (Eigen::Index j = 0; j < n; ++j) A(i, j) = g(rng);
        SimplexQpProblem p;
        p.hessian = A.transpose() * A;
        p.linear.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            p.linear[j] = g(rng);
            p.vertices.push_back({static_cast<double>(j)});
        }
        const auto r = solve_simplex_qp(p);

        double sum = 0.0;
        for (double w : r.weights) {
            CHECK(w >= -1e-12);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (Eigen::Index j = 0; j < n; ++j) {
            CHECK(r.value <= 0.5 * p.hessian(j, j) + p.linear[j] + 1e-12);
        }

        // Frank-Wolfe with exact line search as an independent reference.
        Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        for (int it = 0; it < 20000; ++it) {
            const Eigen::VectorXd grad = p.hessian * w + p.linear;
            Eigen::Index s = 0;
            grad.minCoeff(&s);
            Eigen::VectorXd d = -w;
            d[s] += 1.0;
            const double slope = grad.dot(d);
            if (slope > -1e-14) break;
            const double curv = d.dot(p.hessian * d);
            const double a = curv > 0.0 ? std::min(1.0, -slope / curv) : 1.0;
            w += a * d;
        }
        const double reference = 0.5 * w.dot(p.hessian * w) + p.linear.dot(w);
        CHECK(r.value <= reference + 1e-9);
        CHECK(r.value >= reference - 1e-3);
    }
}
