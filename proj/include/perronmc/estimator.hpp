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
#include <span>
#include <vector>

#include "perronmc/chain.hpp"
#include "perronmc/log_sum_exp.hpp"
#include "perronmc/matrix.hpp"

namespace perronmc {

inline constexpr double kDefaultBisectionTol = 1e-10;
inline constexpr std::size_t kBisectionIterationCap = 200;
/// Largest tolerated fraction of truncated excursion attempts.
inline constexpr double kTruncationBiasLimit = 1e-3;
/// Jackknife groups used when the batch was drawn as a single shard.
inline constexpr std::size_t kSingleShardJackknifeGroups = 10;

/// Log weights along one excursion:
///   per_step_log[n] = sum_{t<n} log f(X_t) - n log(lambda),  n = 0..tau-1
///   return_log      = sum_{t<tau} log f(X_t) - tau log(lambda)
struct PathLogWeights {
    std::vector<double> per_step_log;
    double return_log = 0.0;
};

PathLogWeights path_log_weights(ExcursionView exc, std::span<const double> fitness, double log_lambda);

/// log(lambda^-tau * prod_{t<tau} f(X_t)), evaluated in log space.
double return_weight_log(ExcursionView exc, std::span<const double> fitness, double log_lambda);

/// Monte Carlo estimate of E_k(lambda^-tau prod f(X_t)); equals 1 in
/// expectation at the Perron root. Strictly decreasing in lambda.
double g_hat(const SampleBatch& batch, std::span<const double> fitness, double lambda);

/// Bisection root of g_hat(lambda) = 1 on [min f, max f], reusing the same
/// paths at every trial value. Throws BracketFailure, EmptyBatch.
double estimate_lambda(const SampleBatch& batch, std::span<const double> fitness,
                       double tol = kDefaultBisectionTol);

/// Weighted visit counts of the excursions:
///   numerator(i) = sum_paths sum_n w_n 1{X_n = i},  denominator = sum_i numerator(i)
/// with w_n = lambda^-n prod_{t<n} f(X_t). Held in log space per state.
class VisitTally {
public:
    VisitTally() = default;
    explicit VisitTally(std::size_t n) : numerators_(n) {}

    void add(ExcursionView exc, std::span<const double> log_fitness, double log_lambda);
    void merge(const VisitTally& other);

    std::size_t size() const noexcept { return numerators_.size(); }
    std::size_t paths() const noexcept { return paths_; }

    const LogSumExp& log_numerator(std::size_t i) const noexcept { return numerators_[i]; }
    double numerator(std::size_t i) const noexcept { return numerators_[i].value(); }
    LogSumExp log_denominator() const noexcept;
    double denominator() const noexcept { return log_denominator().value(); }

    /// numerator(i) / denominator, computed without overflow.
    std::vector<double> shares() const;

private:
    std::vector<LogSumExp> numerators_;
    std::size_t paths_ = 0;
};

VisitTally tally_visits(const SampleBatch& batch, std::span<const double> fitness, double lambda);

/// Excursion-weighted visit ratio; lies on the unit simplex.
std::vector<double> estimate_u(const SampleBatch& batch, std::span<const double> fitness, double lambda);

/// Coordinate of the base state: (paths) / denominator. Bitwise equal to
/// estimate_u(batch, fitness, lambda)[batch.base_state()].
double estimate_uk(const SampleBatch& batch, std::span<const double> fitness, double lambda);

struct EstimationConfig {
    State base_state = 0;
    std::size_t samples = 100'000;
    std::uint64_t seed = 0;
    std::size_t cap = kDefaultExcursionCap;
    std::size_t shards = 1;
    double tol = kDefaultBisectionTol;
};

struct EstimateReport {
    double lambda_hat = 0.0;
    std::vector<double> u_hat;
    State base_state = 0;
    std::size_t sample_count = 0;  ///< non-truncated excursions
    std::size_t attempted = 0;
    std::size_t truncated_count = 0;
    double g_residual = 0.0;       ///< |g_hat(lambda_hat) - 1|
    std::vector<double> dispersion;  ///< jackknife standard error of each u_hat entry
    double lambda_dispersion = 0.0;  ///< jackknife standard error of lambda_hat
    std::size_t jackknife_groups = 0;
};

/// check_primitive -> decompose -> sample_batch -> estimate_lambda -> estimate_u.
/// Throws NotPrimitive, AllTruncated, TruncationBiasGuard, BracketFailure.
EstimateReport run_estimation(const NonNegativeMatrix& a, const EstimationConfig& config);

}  // namespace perronmc
