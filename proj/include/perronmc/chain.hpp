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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "perronmc/matrix.hpp"
#include "perronmc/random.hpp"

namespace perronmc {

inline constexpr std::size_t kDefaultExcursionCap = 1'000'000;

/// Inverse-CDF sampler over the rows of a stochastic kernel.
class RowSampler {
public:
    explicit RowSampler(const SquareMatrix& kernel);

    std::size_t size() const noexcept { return cumulative_.size(); }

    /// Non-decreasing partial sums of row i; the last entry is exactly 1.
    std::span<const double> cumulative(State i) const noexcept { return cumulative_.row(i); }

    /// Smallest j with cumulative(from)[j] > u, for u in [0,1).
    State draw(State from, double u) const noexcept;
    State draw(State from, Rng& rng) const { return draw(from, rng.uniform()); }

private:
    SquareMatrix cumulative_;
};

RowSampler build_sampler(const RowDecomposition& decomp);

/// Path X_0 = base_state, X_1, ..., X_{tau-1} of one first return to the base
/// state. The return itself (X_tau = base_state) is implied.
struct Excursion {
    State base_state = 0;
    std::vector<State> visits;

    std::size_t return_time() const noexcept { return visits.size(); }
};

/// Non-owning view of an excursion stored inside a SampleBatch.
struct ExcursionView {
    State base_state = 0;
    std::span<const State> visits;

    ExcursionView() = default;
    ExcursionView(State k, std::span<const State> v) : base_state(k), visits(v) {}
    ExcursionView(const Excursion& e) : base_state(e.base_state), visits(e.visits) {}  // NOLINT

    std::size_t return_time() const noexcept { return visits.size(); }
};

/// Walks the chain from k until it returns to k. Returns nullopt (a
/// truncation) if no return happens within `cap` steps.
std::optional<Excursion> sample_excursion(const RowSampler& sampler, State k, Rng& rng, std::size_t cap);

/// The Monte Carlo sample behind E_k. Excursions are stored back to back in
/// shard order; truncated attempts are counted but not stored.
class SampleBatch {
public:
    State base_state() const noexcept { return base_state_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t cap() const noexcept { return cap_; }
    std::size_t shards() const noexcept { return shard_offsets_.size() - 1; }
    std::size_t attempted() const noexcept { return attempted_; }
    std::size_t truncated_count() const noexcept { return truncated_; }

    /// Number of non-truncated excursions.
    std::size_t size() const noexcept { return offsets_.size() - 1; }
    bool empty() const noexcept { return size() == 0; }

    ExcursionView operator[](std::size_t i) const noexcept
    {
        return {base_state_, std::span<const State>(states_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i])};
    }

    /// Excursions of shard s occupy indices [shard_offsets()[s], shard_offsets()[s+1]).
    std::span<const std::size_t> shard_offsets() const noexcept { return shard_offsets_; }

    /// Sum of return times over stored excursions.
    std::size_t total_steps() const noexcept { return states_.size(); }

    friend bool operator==(const SampleBatch&, const SampleBatch&) = default;

private:
    friend SampleBatch sample_batch(const RowSampler&, State, std::size_t, std::uint64_t, std::size_t,
                                    std::size_t);

    State base_state_ = 0;
    std::uint64_t seed_ = 0;
    std::size_t cap_ = 0;
    std::size_t attempted_ = 0;
    std::size_t truncated_ = 0;
    std::vector<State> states_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> shard_offsets_{0};
};

/// Draws `count` excursion attempts from base state k. Attempts are split into
/// contiguous blocks of ceil(count/shards); shard s samples its block with
/// Rng(stream_seed(seed, s)). The result depends only on the arguments, not on
/// how the shards are scheduled. Throws AllTruncated if nothing returned.
SampleBatch sample_batch(const RowSampler& sampler, State k, std::size_t count, std::uint64_t seed,
                         std::size_t cap = kDefaultExcursionCap, std::size_t shards = 1);

}  // namespace perronmc
