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
#include <string_view>
#include <vector>

#include "perronmc/chain.hpp"
#include "perronmc/matrix.hpp"
#include "perronmc/random.hpp"

namespace perronmc {

enum class OffspringLaw {
    Poisson,        ///< Poisson(f(i)) children per type-i individual
    Deterministic,  ///< exactly f(i) children; f must be integral
};

std::string_view to_string(OffspringLaw law) noexcept;

inline constexpr std::uint64_t kDefaultPopulationCeiling = 1'000'000'000;

struct BranchingOptions {
    OffspringLaw law = OffspringLaw::Poisson;
    std::uint64_t ceiling = kDefaultPopulationCeiling;
};

struct Population {
    std::vector<std::uint64_t> counts;
    std::size_t generation = 0;

    std::uint64_t total() const noexcept;
    bool extinct() const noexcept { return total() == 0; }
};

/// One-type-i-ancestor population.
Population single_ancestor(std::size_t n, State type);

/// Multitype Galton-Watson process with mean matrix A = diag(f) M. Children of
/// a type-i parent pick their type from row i of M.
class BranchingProcess {
public:
    explicit BranchingProcess(RowDecomposition decomp, BranchingOptions options = {});

    std::size_t size() const noexcept { return decomp_.size(); }
    const BranchingOptions& options() const noexcept { return options_; }

    /// Throws PopulationOverflow if any next-generation count would exceed the ceiling.
    Population step(const Population& pop, Rng& rng) const;

private:
    void split_children(State parent, std::uint64_t children, Rng& rng, std::vector<std::uint64_t>& out) const;

    RowDecomposition decomp_;
    RowSampler sampler_;
    BranchingOptions options_;
};

Population step_generation(const Population& pop, const RowDecomposition& decomp, Rng& rng,
                           const BranchingOptions& options = {});

struct GWOutcome {
    bool survived = false;
    std::vector<std::uint64_t> final_counts;
    std::vector<double> proportions;  ///< empty unless survived
    std::size_t generations = 0;
};

/// Simulates `horizon` generations from `initial` with Rng(seed). A must be primitive.
GWOutcome run_tree(const NonNegativeMatrix& a, const Population& initial, std::size_t horizon, std::uint64_t seed,
                   const BranchingOptions& options = {});

struct TreeEnsemble {
    std::size_t trials = 0;
    std::size_t survivors = 0;
    std::vector<double> averaged;  ///< mean of per-tree proportions over survivors
    std::vector<double> pooled;    ///< normalized sum of survivor counts

    double survival_fraction() const noexcept
    {
        return trials == 0 ? 0.0 : static_cast<double>(survivors) / static_cast<double>(trials);
    }
};

/// `trials` independent trees from `initial`; tree t uses Rng(stream_seed(seed, t)).
/// No criticality precondition.
TreeEnsemble simulate_trees(const NonNegativeMatrix& a, const Population& initial, std::size_t trials,
                            std::size_t horizon, std::uint64_t seed, const BranchingOptions& options = {});

/// simulate_trees from a single type-1 ancestor, restricted to supercritical A.
/// Throws Subcritical if the Perron root is <= 1 and NoSurvivors if every tree died.
TreeEnsemble conditioned_proportions(const NonNegativeMatrix& a, std::size_t trials, std::size_t horizon,
                                     std::uint64_t seed, const BranchingOptions& options = {});

}  // namespace perronmc
