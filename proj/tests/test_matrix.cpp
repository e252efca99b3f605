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
#include <random>

#include "doctest.h"
#include "perronmc/error.hpp"
#include "perronmc/matrix.hpp"
#include "test_support.hpp"

using namespace perronmc;
using namespace perronmc::testing;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected perronmc::Error");
    return ErrorKind::InvalidArgument;
}

// i -> i+1 for i < n-1, n-1 -> 0 and n-1 -> 1: primitive with exponent (n-1)^2 + 1.
Rows wielandt_matrix(std::size_t n)
{
    Rows a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i + 1 < n; ++i)
        a[i][i + 1] = 1.0;
    a[n - 1][0] = 1.0;
    a[n - 1][1] = 1.0;
    return a;
}

}  // namespace

TEST_CASE("validate accepts non-negative square input")
{
    const auto a = validate(kTwoByTwo);
    CHECK(a.size() == 2);
    CHECK(a(1, 0) == 3.0);
}

TEST_CASE("validate rejects malformed input")
{
    CHECK(kind_of([] { validate(Rows{{1, -1}, {0, 1}}); }) == ErrorKind::NegativeEntry);
    CHECK(kind_of([] { validate(Rows{{0, 0}, {1, 1}}); }) == ErrorKind::ZeroRow);
    CHECK(kind_of([] { validate(Rows{{1, 2}, {3}}); }) == ErrorKind::NotSquare);
    CHECK(kind_of([] { validate(Rows{{1, 2, 3}, {3, 4, 5}}); }) == ErrorKind::NotSquare);
    CHECK(kind_of([] { validate(Rows{}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { validate(Rows{{1, NAN}, {1, 1}}); }) == ErrorKind::InvalidArgument);

    try {
        validate(Rows{{1, -1}, {0, 1}});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
    }
}

TEST_CASE("check_primitive finds the smallest positive power")
{
    CHECK(check_primitive(validate(kTwoByTwo)).exponent_m == 1);
    CHECK(check_primitive(validate(Rows{{1, 1}, {1, 0}})).exponent_m == 2);
    CHECK(check_primitive(validate(Rows{{5}})).exponent_m == 1);
    CHECK(kind_of([] { check_primitive(validate(Rows{{0, 1}, {1, 0}})); }) == ErrorKind::NotPrimitive);
    CHECK(kind_of([] { check_primitive(validate(Rows{{1, 1}, {0, 1}})); }) == ErrorKind::NotPrimitive);
}

TEST_CASE("Wielandt matrices attain the bound")
{
    for (std::size_t n : {3u, 4u, 5u, 6u}) {
        const auto rows = wielandt_matrix(n);
        REQUIRE(brute_force_exponent(rows, wielandt_bound(n)) == wielandt_bound(n));
        CHECK(check_primitive(validate(rows)).exponent_m == wielandt_bound(n));
    }
}

TEST_CASE("check_primitive agrees with brute force on random patterns")
{
    std::mt19937_64 rng(7);
    std::bernoulli_distribution zero(0.55);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 6;
        Rows a(n, std::vector<double>(n));
        for (auto& row : a) {
            for (double& v : row)
                v = zero(rng) ? 0.0 : 1.0;
            row[trial % n] += 0.5;  // keep rows non-zero
        }
        const auto m = validate(a);
        const std::size_t expected = brute_force_exponent(a, wielandt_bound(n));
        if (expected == 0) {
            CHECK(kind_of([&] { check_primitive(m); }) == ErrorKind::NotPrimitive);
        } else {
            CHECK(check_primitive(m).exponent_m == expected);
            CHECK(check_primitive(scale(m, 0.37)).exponent_m == expected);
        }
    }
}

TEST_CASE("decompose splits row sums from a stochastic kernel")
{
    auto d = decompose(validate(kTwoByTwo));
    CHECK(d.fitness == std::vector<double>{3.0, 7.0});
    CHECK(d.kernel(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(d.kernel(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d.kernel(1, 0) == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    CHECK(d.kernel(1, 1) == doctest::Approx(4.0 / 7.0).epsilon(1e-15));

    const Rows stochastic = {{0.25, 0.75}, {0.5, 0.5}};
    d = decompose(validate(stochastic));
    CHECK(d.fitness == std::vector<double>{1.0, 1.0});
    CHECK(d.kernel.to_rows() == stochastic);
    CHECK(d.constant_fitness());

    d = decompose(validate(Rows{{0, 2}, {2, 0}}));
    CHECK(d.fitness == std::vector<double>{2.0, 2.0});
    CHECK(d.kernel.to_rows() == Rows{{0, 1}, {1, 0}});
}

TEST_CASE("scale multiplies entries and rejects non-positive factors")
{
    const auto a = validate(kTwoByTwo);
    CHECK(scale(a, 2.0).entries().to_rows() == Rows{{2, 4}, {6, 8}});
    CHECK(scale(a, 1.0) == a);
    CHECK(scale(validate(Rows{{0, 2}, {2, 0}}), 0.5).entries().to_rows() == Rows{{0, 1}, {1, 0}});
    CHECK(kind_of([&] { scale(a, 0.0); }) == ErrorKind::NonPositiveScale);
    CHECK(kind_of([&] { scale(a, -1.0); }) == ErrorKind::NonPositiveScale);
}

TEST_CASE("decomposition invariants on random matrices")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> log_c(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = random_primitive(rng, 1 + trial % 8);
        const auto a = validate(rows);
        const auto d = decompose(a);
        const auto back = d.recompose();
        for (std::size_t i = 0; i < a.size(); ++i) {
            double row_sum = 0.0;
            for (std::size_t j = 0; j < a.size(); ++j) {
                CHECK(d.kernel(i, j) >= 0.0);
                CHECK(d.kernel(i, j) <= 1.0);
                row_sum += d.kernel(i, j);
                CHECK(std::abs(back(i, j) - a(i, j)) <= 1e-14 * a(i, j));
            }
            CHECK(std::abs(row_sum - 1.0) <= 1e-12);
        }

        // Power-of-two factors are exact in binary, so the kernel is bitwise unchanged.
        const double c2 = std::ldexp(1.0, trial % 7 - 3);
        const auto d2 = decompose(scale(a, c2));
        CHECK(d2.kernel == d.kernel);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(d2.fitness[i] == c2 * d.fitness[i]);

        const double c = std::exp(log_c(rng));
        const auto dc = decompose(scale(a, c));
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(dc.fitness[i] == doctest::Approx(c * d.fitness[i]).epsilon(1e-14));
            for (std::size_t j = 0; j < a.size(); ++j)
                CHECK(std::abs(dc.kernel(i, j) - d.kernel(i, j)) <= 1e-15);
        }
    }
}
