/*
   Copyright 2026 The perronmc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "perronmc/error.hpp"
#include "perronmc/oracle.hpp"
#include "test_support.hpp"

using namespace perronmc;
using namespace perronmc::testing;

namespace {

// P(tau_k = n) for a stochastic matrix by enumerating every path
// k -> i_1 -> ... -> i_{n-1} -> k with all i_t != k.
double return_probability(const Rows& m, std::size_t k, std::size_t n)
{
    const std::size_t size = m.size();
    if (n == 1)
        return m[k][k];
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t at, std::size_t left) {
        if (left == 0)
            return m[at][k];
        double total = 0.0;
        for (std::size_t j = 0; j < size; ++j)
            if (j != k)
                total += m[at][j] * rec(j, left - 1);
        return total;
    };
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i)
        if (i != k)
            total += m[k][i] * rec(i, n - 2);
    return total;
}

double lemma_limit(const NonNegativeMatrix& a, State k, double lambda)
{
    return lemma_partial_sums(a, k, lambda, 10'000'000, 1e-16).final_sum();
}

}  // namespace

TEST_CASE("power_iteration on the 2x2 closed form")
{
    const auto a = validate(kTwoByTwo);
    const auto pair = power_iteration(a);
    CHECK(std::abs(pair.lambda - kLambda2x2) < 1e-10);
    CHECK(pair.lambda == doctest::Approx(5.3722813).epsilon(1e-8));
    CHECK(l1(pair.u, closed_form_u(1, 2, 3, 4)) < 1e-8);
    CHECK(pair.u[0] == doctest::Approx(0.40693).epsilon(1e-5));
    CHECK(eigen_residual(a, pair) < 1e-10);

    const auto half = power_iteration(validate(Rows{{0.5, 0.5}, {0.5, 0.5}}));
    CHECK(half.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l1(half.u, {0.5, 0.5}) < 1e-14);

    const auto scaled = power_iteration(scale(a, 3.5));
    CHECK(scaled.lambda == doctest::Approx(3.5 * pair.lambda).epsilon(1e-12));
    CHECK(l1(scaled.u, pair.u) < 1e-12);
}

TEST_CASE("power_iteration residual on random primitive matrices")
{
    std::mt19937_64 gen(61);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = validate(random_primitive(gen, 1 + trial % 8));
        const auto pair = power_iteration(a);
        CHECK(eigen_residual(a, pair) < 1e-10);
        double total = 0.0;
        for (double v : pair.u) {
            CHECK(v > 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("power_iteration reports non-convergence")
{
    try {
        power_iteration(validate(Rows{{0, 1, 0}, {0, 0, 1}, {1, 0, 0.001}}), 1e-15, 5);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoConvergence);
    }
}

TEST_CASE("Lemma series for the 2x2 closed form")
{
    const auto a = validate(kTwoByTwo);
    const double lambda = kLambda2x2;
    const auto s = lemma_partial_sums(a, 0, lambda, 400);
    CHECK(s.terms[0] == doctest::Approx(1.0 / lambda).epsilon(1e-15));
    CHECK(s.terms[0] == doctest::Approx(0.186141).epsilon(1e-5));
    CHECK(s.terms[1] == doctest::Approx(6.0 / (lambda * lambda)).epsilon(1e-14));
    CHECK(s.terms[1] == doctest::Approx(0.207891).epsilon(1e-5));
    for (std::size_t n = 1; n < 50; ++n)
        CHECK(s.ratios[n] == doctest::Approx(4.0 / lambda).epsilon(1e-12));
    // term_1 + term_2 / (1 - 4/lambda) = 1
    CHECK(s.terms[0] + s.terms[1] / (1.0 - 4.0 / lambda) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s.final_sum() - 1.0) < 1e-12);
    for (std::size_t n = 1; n < s.partial_sums.size(); ++n)
        CHECK(s.partial_sums[n] >= s.partial_sums[n - 1]);

    // At twice the root every term picks up 2^-n; same geometric closed form.
    const double twice = 2.0 * lambda;
    const double expected = 1.0 / twice + (6.0 / (twice * twice)) / (1.0 - 4.0 / twice);
    CHECK(lemma_limit(a, 0, twice) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected < 1.0);
}

TEST_CASE("Lemma series of a stochastic matrix is the return-time law")
{
    std::mt19937_64 gen(71);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const auto rows = random_dyadic_stochastic(gen, n);
        const auto a = validate(rows);
        const State k = static_cast<State>(trial % n);
        const auto s = lemma_partial_sums(a, k, 1.0, 7);
        for (std::size_t t = 1; t <= s.terms.size(); ++t)
            CHECK(s.terms[t - 1] == doctest::Approx(return_probability(rows, k, t)).epsilon(1e-12));
        CHECK(std::abs(lemma_limit(a, k, 1.0) - 1.0) < 1e-8);
    }
}

TEST_CASE("Lemma identity on random primitive matrices")
{
    std::mt19937_64 gen(81);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto a = validate(random_primitive(gen, n));
        const double lambda = power_iteration(a).lambda;
        for (State k = 0; k < n; ++k) {
            CHECK(std::abs(lemma_partial_sums(a, k, lambda, 10'000'000, 1e-14).final_sum() - 1.0) < 1e-8);

            // Sign of (limit - 1) against sign of (lambda - lambda').
            CHECK(lemma_limit(a, k, 1.1 * lambda) < 1.0);
            bool above = false;
            try {
                above = lemma_limit(a, k, 0.97 * lambda) > 1.0;
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::Divergence);
                above = true;
            }
            CHECK(above);
        }
    }
}

TEST_CASE("Lemma series rejects lambda below the root")
{
    try {
        lemma_partial_sums(validate(kTwoByTwo), 0, 0.9 * kLambda2x2, 1'000'000);
        FAIL("expected Divergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Divergence);
    }
    CHECK_THROWS_AS(lemma_partial_sums(validate(kTwoByTwo), 2, 1.0, 10), Error);
}

TEST_CASE("quasispecies_residual")
{
    const auto a = validate(kTwoByTwo);
    const auto pair = power_iteration(a);
    auto r = quasispecies_residual(a, pair.u);
    CHECK(r.max_abs < 1e-10);
    CHECK(std::abs(r.mean_fitness - pair.lambda) < 1e-10);
    CHECK(r.mean_fitness == doctest::Approx(5.3722813).epsilon(1e-8));

    r = quasispecies_residual(a, {1.0, 0.0});
    // x = (1,0): mean fitness 3; inflow to state 1 is 3 * 1/3 = 1, so |3 - 1| = 2.
    CHECK(r.max_abs > 0.1);
    CHECK(r.per_state[0] == doctest::Approx(2.0));

    r = quasispecies_residual(validate(Rows{{2, 2}, {2, 2}}), {0.5, 0.5});
    CHECK(r.max_abs == 0.0);

    CHECK_THROWS_AS(quasispecies_residual(a, {0.7, 0.7}), Error);
    CHECK_THROWS_AS(quasispecies_residual(a, {1.5, -0.5}), Error);
    CHECK_THROWS_AS(quasispecies_residual(a, {1.0}), Error);
}

TEST_CASE("equilibrium and eigen-equation agree on random matrices")
{
    std::mt19937_64 gen(91);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = validate(random_primitive(gen, 1 + trial % 8));
        const auto pair = power_iteration(a);
        const auto r = quasispecies_residual(a, pair.u);
        CHECK(r.max_abs < 1e-10);
        CHECK(std::abs(r.mean_fitness - pair.lambda) < 1e-10);
    }
}
