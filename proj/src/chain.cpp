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

#include "perronmc/chain.hpp"

#include <algorithm>
#include <string>

#include "perronmc/error.hpp"
#include "perronmc/parallel.hpp"

namespace perronmc {

namespace {

// Appends the excursion from k to `out`. On truncation `out` is restored and
// false is returned.
bool walk(const RowSampler& sampler, State k, Rng& rng, std::size_t cap, std::vector<State>& out)
{
    const std::size_t start = out.size();
    State x = k;
    for (std::size_t step = 1; step <= cap; ++step) {
        out.push_back(x);
        x = sampler.draw(x, rng);
        if (x == k)
            return true;
    }
    out.resize(start);
    return false;
}

struct ShardResult {
    std::vector<State> states;
    std::vector<std::size_t> lengths;
    std::size_t attempted = 0;
    std::size_t truncated = 0;
};

}  // namespace

RowSampler::RowSampler(const SquareMatrix& kernel) : cumulative_(kernel.size())
{
    const std::size_t n = kernel.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto cum = cumulative_.row(i);
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += kernel(i, j);
            cum[j] = acc;
            if (kernel(i, j) > 0.0)
                last_positive = j;
        }
        // Pin the tail to exactly 1 so roundoff can neither leave a gap above
        // the final partial sum nor hand mass to trailing zero-probability states.
        for (std::size_t j = last_positive; j < n; ++j)
            cum[j] = 1.0;
    }
}

State RowSampler::draw(State from, double u) const noexcept
{
    auto cum = cumulative(from);
    return static_cast<State>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
}

RowSampler build_sampler(const RowDecomposition& decomp)
{
    return RowSampler(decomp.kernel);
}

std::optional<Excursion> sample_excursion(const RowSampler& sampler, State k, Rng& rng, std::size_t cap)
{
    if (k >= sampler.size())
        throw Error(ErrorKind::InvalidArgument, "base state " + std::to_string(k) + " out of range");
    if (cap == 0)
        throw Error(ErrorKind::InvalidArgument, "excursion cap must be >= 1");
    Excursion exc{k, {}};
    if (!walk(sampler, k, rng, cap, exc.visits))
        return std::nullopt;
    return exc;
}

SampleBatch sample_batch(const RowSampler& sampler, State k, std::size_t count, std::uint64_t seed,
                         std::size_t cap, std::size_t shards)
{
    if (k >= sampler.size())
        throw Error(ErrorKind::InvalidArgument, "base state " + std::to_string(k) + " out of range");
    if (count == 0 || shards == 0 || cap == 0)
        throw Error(ErrorKind::InvalidArgument, "count, shards and cap must all be >= 1");

    const std::size_t block = (count + shards - 1) / shards;
    std::vector<ShardResult> results(shards);
    parallel_for(shards, [&](std::size_t s) {
        const std::size_t begin = std::min(count, s * block);
        const std::size_t end = std::min(count, begin + block);
        ShardResult& r = results[s];
        Rng rng(stream_seed(seed, s));
        for (std::size_t a = begin; a < end; ++a) {
            const std::size_t before = r.states.size();
            ++r.attempted;
            if (walk(sampler, k, rng, cap, r.states))
                r.lengths.push_back(r.states.size() - before);
            else
                ++r.truncated;
        }
    });

    SampleBatch batch;
    batch.base_state_ = k;
    batch.seed_ = seed;
    batch.cap_ = cap;
    for (auto& r : results) {
        batch.attempted_ += r.attempted;
        batch.truncated_ += r.truncated;
        batch.states_.insert(batch.states_.end(), r.states.begin(), r.states.end());
        for (std::size_t len : r.lengths)
            batch.offsets_.push_back(batch.offsets_.back() + len);
        batch.shard_offsets_.push_back(batch.offsets_.size() - 1);
    }
    if (batch.empty())
        throw Error(ErrorKind::AllTruncated, "all " + std::to_string(count) + " excursions exceeded the cap of " +
                                                 std::to_string(cap) + " steps");
    return batch;
}

}  // namespace perronmc
