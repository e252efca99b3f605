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
#include "perronmc/chain.hpp"
#include "perronmc/error.hpp"
#include "test_support.hpp"

using namespace perronmc;
using namespace perronmc::testing;

namespace {

RowSampler sampler_for(const Rows& rows)
{
    return build_sampler(decompose(validate(rows)));
}

}  // namespace

TEST_CASE("build_sampler stores row partial sums")
{
    auto s = sampler_for(Rows{{0, 1}, {1, 0}});
    CHECK(s.cumulative(0)[0] == 0.0);
    CHECK(s.cumulative(0)[1] == 1.0);

    s = sampler_for(Rows{{0.5, 0.5}, {0.5, 0.5}});
    CHECK(s.cumulative(0)[0] == 0.5);
    CHECK(s.cumulative(1)[1] == 1.0);

    s = sampler_for(kTwoByTwo);
    CHECK(s.cumulative(0)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(s.cumulative(0)[1] == 1.0);
    CHECK(s.cumulative(1)[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    CHECK(s.cumulative(1)[1] == 1.0);
}

TEST_CASE("inverse CDF lookup never selects zero-probability states")
{
    const auto s = sampler_for(Rows{{0, 1, 0, 1}, {1, 1, 1, 1}, {1, 0, 0, 0}, {0, 0, 2, 0}});
    CHECK(s.draw(0, 0.0) == 1);
    CHECK(s.draw(0, 0.4999999) == 1);
    CHECK(s.draw(0, 0.5) == 3);
    CHECK(s.draw(0, std::nextafter(1.0, 0.0)) == 3);
    CHECK(s.draw(2, std::nextafter(1.0, 0.0)) == 0);
    CHECK(s.draw(3, 0.0) == 2);
    for (std::size_t i = 0; i < 4; ++i) {
        auto cum = s.cumulative(static_cast<State>(i));
        CHECK(std::is_sorted(cum.begin(), cum.end()));
        CHECK(cum.back() == 1.0);
    }
}

TEST_CASE("one-step frequencies match the kernel")
{
    const Rows rows = {{1, 2, 0, 4}, {3, 3, 1, 0.5}, {0, 0, 1, 9}, {2, 2, 2, 2}};
    const auto d = decompose(validate(rows));
    const auto s = build_sampler(d);
    Rng rng(2024);
    constexpr int kDraws = 1'000'000;
    for (State i = 0; i < 4; ++i) {
        std::vector<double> counts(4, 0.0);
        for (int t = 0; t < kDraws; ++t)
            counts[s.draw(i, rng)] += 1.0;
        double chi2 = 0.0;
        int dof = -1;
        for (std::size_t j = 0; j < 4; ++j) {
            const double p = d.kernel(i, j);
            CHECK(std::abs(counts[j] / kDraws - p) < 0.005);
            if (p == 0.0) {
                CHECK(counts[j] == 0.0);
                continue;
            }
            const double expected = p * kDraws;
            chi2 += (counts[j] - expected) * (counts[j] - expected) / expected;
            ++dof;
        }
        // 99% chi-square quantiles for 1..3 degrees of freedom.
        const double quantile[] = {0.0, 6.635, 9.210, 11.345};
        CHECK(chi2 < quantile[dof]);
    }
}

TEST_CASE("sample_excursion follows deterministic transitions")
{
    const auto s = sampler_for(Rows{{0, 1}, {1, 0}});
    Rng rng(1);
    for (int t = 0; t < 10; ++t) {
        const auto exc = sample_excursion(s, 0, rng, 100);
        REQUIRE(exc.has_value());
        CHECK(exc->visits == std::vector<State>{0, 1});
        CHECK(exc->return_time() == 2);
    }
}

TEST_CASE("sample_excursion reports truncation when the cap is too short")
{
    const auto s = sampler_for(Rows{{0, 1}, {1, 1}});
    Rng rng(5);
    for (int t = 0; t < 100; ++t)
        CHECK_FALSE(sample_excursion(s, 0, rng, 1).has_value());
    CHECK_THROWS_AS(sample_excursion(s, 0, rng, 0), Error);
    CHECK_THROWS_AS(sample_excursion(s, 2, rng, 10), Error);
}

TEST_CASE("return times of the fair two-state chain are geometric")
{
    // P(tau = 1) = 1/2 and P(tau = n) = 2^-n for n >= 2, so E(tau) = 2.
    const auto s = sampler_for(Rows{{0.5, 0.5}, {0.5, 0.5}});
    const auto batch = sample_batch(s, 0, 1'000'000, 99, 10'000, 1);
    REQUIRE(batch.size() == 1'000'000);
    CHECK(batch.truncated_count() == 0);
    const double mean_tau = static_cast<double>(batch.total_steps()) / batch.size();
    CHECK(std::abs(mean_tau - 2.0) < 0.01);

    std::vector<double> freq(5, 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i)
        if (batch[i].return_time() < 5)
            freq[batch[i].return_time()] += 1.0 / batch.size();
    CHECK(freq[1] == doctest::Approx(0.5).epsilon(0.01));
    CHECK(freq[2] == doctest::Approx(0.25).epsilon(0.02));
    CHECK(freq[3] == doctest::Approx(0.125).epsilon(0.03));
}

TEST_CASE("sample_batch on a deterministic chain")
{
    const auto s = sampler_for(Rows{{0, 1}, {1, 0}});
    const auto batch = sample_batch(s, 0, 100, 123456789, 10, 3);
    CHECK(batch.size() == 100);
    CHECK(batch.attempted() == 100);
    CHECK(batch.shards() == 3);
    for (std::size_t i = 0; i < batch.size(); ++i)
        CHECK(std::vector<State>(batch[i].visits.begin(), batch[i].visits.end()) == std::vector<State>{0, 1});
}

TEST_CASE("sample_batch is a pure function of its arguments")
{
    std::mt19937_64 gen(3);
    const auto s = build_sampler(decompose(validate(random_primitive(gen, 6))));
    for (std::size_t shards : {1u, 2u, 7u}) {
        const auto first = sample_batch(s, 2, 5'000, 42, 1'000'000, shards);
        const auto second = sample_batch(s, 2, 5'000, 42, 1'000'000, shards);
        CHECK(first == second);
    }
    CHECK_FALSE(sample_batch(s, 2, 5'000, 42) == sample_batch(s, 2, 5'000, 43));
}

TEST_CASE("shard s replays its contiguous block with the documented stream seed")
{
    std::mt19937_64 gen(8);
    const auto s = build_sampler(decompose(validate(random_primitive(gen, 5))));
    const std::size_t count = 1'003;
    const std::size_t shards = 4;
    const std::uint64_t seed = 0xDEADBEEF;
    const auto batch = sample_batch(s, 1, count, seed, 1'000'000, shards);

    const std::size_t block = (count + shards - 1) / shards;
    std::size_t index = 0;
    for (std::size_t sh = 0; sh < shards; ++sh) {
        CHECK(batch.shard_offsets()[sh] == index);
        Rng rng(stream_seed(seed, sh));
        const std::size_t attempts = std::min(count, (sh + 1) * block) - std::min(count, sh * block);
        for (std::size_t a = 0; a < attempts; ++a) {
            const auto exc = sample_excursion(s, 1, rng, 1'000'000);
            REQUIRE(exc.has_value());
            const auto stored = batch[index++];
            CHECK(std::equal(stored.visits.begin(), stored.visits.end(), exc->visits.begin(), exc->visits.end()));
        }
    }
    CHECK(index == batch.size());
}

TEST_CASE("excursion invariants hold on random chains")
{
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const auto s = build_sampler(decompose(validate(random_primitive(gen, n))));
        const State k = static_cast<State>(trial % n);
        const auto batch = sample_batch(s, k, 500, trial, 1'000'000, 1 + trial % 3);
        CHECK(batch.size() + batch.truncated_count() == batch.attempted());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const auto exc = batch[i];
            REQUIRE(exc.return_time() >= 1);
            CHECK(exc.return_time() <= batch.cap());
            CHECK(exc.visits[0] == k);
            CHECK(std::count(exc.visits.begin(), exc.visits.end(), k) == 1);
        }
    }
}

TEST_CASE("sample_batch reports AllTruncated and counts partial truncation")
{
    const auto never = sampler_for(Rows{{0, 1}, {1, 1}});
    try {
        sample_batch(never, 0, 50, 0, 1, 2);
        FAIL("expected AllTruncated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AllTruncated);
    }

    const auto half = sampler_for(Rows{{1, 1}, {1, 1}});
    const auto batch = sample_batch(half, 0, 10'000, 0, 1, 1);
    CHECK(batch.size() + batch.truncated_count() == 10'000);
    CHECK(batch.truncated_count() > 4'500);
    CHECK(batch.truncated_count() < 5'500);
}

TEST_CASE("stream seeds are distinct across shards")
{
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 1000; ++s)
        seeds.push_back(stream_seed(7, s));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
}
