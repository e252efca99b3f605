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

#include "perronmc/galton_watson.hpp"

#include <cmath>
#include <random>
#include <string>

#include "perronmc/error.hpp"
#include "perronmc/oracle.hpp"
#include "perronmc/parallel.hpp"

namespace perronmc {

namespace {

// Below this many children, types are drawn one child at a time by inverse CDF.
constexpr std::uint64_t kPerChildThreshold = 32;

}  // namespace

std::string_view to_string(OffspringLaw law) noexcept
{
    switch (law) {
    case OffspringLaw::Poisson: return "poisson";
    case OffspringLaw::Deterministic: return "deterministic";
    }
    return "unknown";
}

std::uint64_t Population::total() const noexcept
{
    std::uint64_t t = 0;
    for (auto c : counts)
        t += c;
    return t;
}

Population single_ancestor(std::size_t n, State type)
{
    if (type >= n)
        throw Error(ErrorKind::InvalidArgument, "ancestor type " + std::to_string(type) + " out of range");
    Population p{std::vector<std::uint64_t>(n, 0), 0};
    p.counts[type] = 1;
    return p;
}

BranchingProcess::BranchingProcess(RowDecomposition decomp, BranchingOptions options)
    : decomp_(std::move(decomp)), sampler_(decomp_.kernel), options_(options)
{
    if (options_.law == OffspringLaw::Deterministic) {
        for (std::size_t i = 0; i < decomp_.size(); ++i) {
            const double f = decomp_.fitness[i];
            if (std::abs(f - std::round(f)) > 1e-9 * std::max(1.0, f))
                throw Error(ErrorKind::InvalidArgument, "deterministic offspring law needs integral row sums; row " +
                                                            std::to_string(i) + " sums to " + std::to_string(f));
        }
    }
}

void BranchingProcess::split_children(State parent, std::uint64_t children, Rng& rng,
                                      std::vector<std::uint64_t>& out) const
{
    if (children <= kPerChildThreshold) {
        for (std::uint64_t c = 0; c < children; ++c)
            ++out[sampler_.draw(parent, rng)];
        return;
    }
    // Multinomial by sequential conditional binomials.
    const std::size_t n = size();
    std::size_t last = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (decomp_.kernel(parent, j) > 0.0)
            last = j;
    std::uint64_t remaining = children;
    double remaining_p = 1.0;
    for (std::size_t j = 0; j < n && remaining > 0; ++j) {
        const double p = decomp_.kernel(parent, j);
        if (p == 0.0)
            continue;
        if (j == last) {
            out[j] += remaining;
            break;
        }
        const double q = std::clamp(p / remaining_p, 0.0, 1.0);
        const auto k = static_cast<std::uint64_t>(
            std::binomial_distribution<std::int64_t>(static_cast<std::int64_t>(remaining), q)(rng));
        out[j] += k;
        remaining -= k;
        remaining_p -= p;
    }
}

Population BranchingProcess::step(const Population& pop, Rng& rng) const
{
    const std::size_t n = size();
    if (pop.counts.size() != n)
        throw Error(ErrorKind::InvalidArgument, "population has " + std::to_string(pop.counts.size()) +
                                                    " types, process has " + std::to_string(n));
    Population next{std::vector<std::uint64_t>(n, 0), pop.generation + 1};
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t parents = pop.counts[i];
        if (parents == 0)
            continue;
        const double mean = static_cast<double>(parents) * decomp_.fitness[i];
        double children = 0.0;
        if (options_.law == OffspringLaw::Poisson)
            children = static_cast<double>(std::poisson_distribution<std::int64_t>(mean)(rng));
        else
            children = static_cast<double>(parents) * std::round(decomp_.fitness[i]);
        // More children than n * ceiling forces some type past the ceiling.
        if (children > static_cast<double>(options_.ceiling) * static_cast<double>(n))
            throw Error(ErrorKind::PopulationOverflow,
                        "population exceeds ceiling at generation " + std::to_string(next.generation));
        split_children(static_cast<State>(i), static_cast<std::uint64_t>(children), rng, next.counts);
    }
    for (auto c : next.counts)
        if (c > options_.ceiling)
            throw Error(ErrorKind::PopulationOverflow, "a type count exceeds " + std::to_string(options_.ceiling) +
                                                           " at generation " + std::to_string(next.generation));
    return next;
}

Population step_generation(const Population& pop, const RowDecomposition& decomp, Rng& rng,
                           const BranchingOptions& options)
{
    return BranchingProcess(decomp, options).step(pop, rng);
}

namespace {

GWOutcome simulate_one(const BranchingProcess& process, const Population& initial, std::size_t horizon, Rng& rng)
{
    Population pop = initial;
    for (std::size_t g = 0; g < horizon && !pop.extinct(); ++g)
        pop = process.step(pop, rng);

    GWOutcome out;
    out.generations = horizon;
    const std::uint64_t total = pop.total();
    out.survived = total > 0;
    out.final_counts = std::move(pop.counts);
    if (out.survived) {
        out.proportions.reserve(out.final_counts.size());
        for (auto c : out.final_counts)
            out.proportions.push_back(static_cast<double>(c) / static_cast<double>(total));
    }
    return out;
}

void check_tree_args(const NonNegativeMatrix& a, const Population& initial, std::size_t horizon)
{
    if (horizon == 0)
        throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
    if (initial.counts.size() != a.size())
        throw Error(ErrorKind::InvalidArgument, "initial population does not match the matrix size");
    check_primitive(a);
}

}  // namespace

GWOutcome run_tree(const NonNegativeMatrix& a, const Population& initial, std::size_t horizon, std::uint64_t seed,
                   const BranchingOptions& options)
{
    check_tree_args(a, initial, horizon);
    const BranchingProcess process(decompose(a), options);
    Rng rng(seed);
    return simulate_one(process, initial, horizon, rng);
}

TreeEnsemble simulate_trees(const NonNegativeMatrix& a, const Population& initial, std::size_t trials,
                            std::size_t horizon, std::uint64_t seed, const BranchingOptions& options)
{
    check_tree_args(a, initial, horizon);
    if (trials == 0)
        throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    const BranchingProcess process(decompose(a), options);
    std::vector<GWOutcome> outcomes(trials);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng(stream_seed(seed, t));
        outcomes[t] = simulate_one(process, initial, horizon, rng);
    });

    const std::size_t n = a.size();
    TreeEnsemble e;
    e.trials = trials;
    e.averaged.assign(n, 0.0);
    e.pooled.assign(n, 0.0);
    for (const auto& o : outcomes) {
        if (!o.survived)
            continue;
        ++e.survivors;
        for (std::size_t i = 0; i < n; ++i) {
            e.averaged[i] += o.proportions[i];
            e.pooled[i] += static_cast<double>(o.final_counts[i]);
        }
    }
    if (e.survivors > 0) {
        double pooled_total = 0.0;
        for (double v : e.pooled)
            pooled_total += v;
        for (std::size_t i = 0; i < n; ++i) {
            e.averaged[i] /= static_cast<double>(e.survivors);
            e.pooled[i] /= pooled_total;
        }
    }
    return e;
}

TreeEnsemble conditioned_proportions(const NonNegativeMatrix& a, std::size_t trials, std::size_t horizon,
                                     std::uint64_t seed, const BranchingOptions& options)
{
    check_primitive(a);
    const double lambda = power_iteration(a).lambda;
    if (!(lambda > 1.0))
        throw Error(ErrorKind::Subcritical, "Perron root " + std::to_string(lambda) +
                                                " <= 1; survival has probability zero");
    TreeEnsemble e = simulate_trees(a, single_ancestor(a.size(), 0), trials, horizon, seed, options);
    if (e.survivors == 0)
        throw Error(ErrorKind::NoSurvivors, "no tree survived " + std::to_string(horizon) + " generations out of " +
                                                std::to_string(trials) + "; raise trials or lower the horizon");
    return e;
}

}  // namespace perronmc
