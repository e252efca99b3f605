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

#include "perronmc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perronmc/error.hpp"

namespace perronmc {

namespace {

struct Range {
    std::size_t begin;
    std::size_t end;
};

std::vector<double> logs_of(std::span<const double> fitness)
{
    std::vector<double> out(fitness.size());
    std::transform(fitness.begin(), fitness.end(), out.begin(), [](double f) { return std::log(f); });
    return out;
}

void require_non_empty(const SampleBatch& batch)
{
    if (batch.empty())
        throw Error(ErrorKind::EmptyBatch, "batch holds no completed excursion");
}

void require_fitness(const SampleBatch& batch, std::span<const double> fitness, std::size_t min_size)
{
    if (fitness.size() < min_size || batch.base_state() >= fitness.size())
        throw Error(ErrorKind::InvalidArgument, "fitness vector does not cover the batch's states");
}

std::size_t states_spanned(const SampleBatch& batch)
{
    State top = batch.base_state();
    for (std::size_t i = 0; i < batch.size(); ++i)
        for (State s : batch[i].visits)
            top = std::max(top, s);
    return static_cast<std::size_t>(top) + 1;
}

// Per excursion: sum_{t<tau} log f(X_t) and tau. Everything g_hat needs, so
// trial lambdas cost one pass over the excursions rather than over all steps.
struct ReturnProfile {
    std::vector<double> log_f_sum;
    std::vector<double> tau;
};

ReturnProfile return_profile(const SampleBatch& batch, std::span<const double> log_f)
{
    ReturnProfile p;
    p.log_f_sum.reserve(batch.size());
    p.tau.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double acc = 0.0;
        for (State s : batch[i].visits)
            acc += log_f[s];
        p.log_f_sum.push_back(acc);
        p.tau.push_back(static_cast<double>(batch[i].return_time()));
    }
    return p;
}

// log g_hat over the excursions in `ranges`.
double log_g(const ReturnProfile& p, std::span<const Range> ranges, double log_lambda)
{
    LogSumExp acc;
    std::size_t count = 0;
    for (const Range& r : ranges) {
        for (std::size_t i = r.begin; i < r.end; ++i)
            acc.add(p.log_f_sum[i] - p.tau[i] * log_lambda);
        count += r.end - r.begin;
    }
    return acc.log() - std::log(static_cast<double>(count));
}

struct RootResult {
    double lambda;
    double residual;
};

RootResult bisect_lambda(const ReturnProfile& p, std::span<const Range> ranges, double low, double high, double tol)
{
    if (low == high)
        return {low, std::abs(std::exp(log_g(p, ranges, std::log(low))) - 1.0)};

    const double g_low = std::exp(log_g(p, ranges, std::log(low)));
    const double g_high = std::exp(log_g(p, ranges, std::log(high)));
    if (g_low < 1.0 - tol || g_high > 1.0 + tol)
        throw Error(ErrorKind::BracketFailure, "g_hat does not cross 1 on [" + std::to_string(low) + ", " +
                                                   std::to_string(high) + "]; draw more samples");

    RootResult best = std::abs(g_low - 1.0) <= std::abs(g_high - 1.0) ? RootResult{low, std::abs(g_low - 1.0)}
                                                                       : RootResult{high, std::abs(g_high - 1.0)};
    // Runs until the bracket collapses to adjacent doubles, about 60 steps.
    for (std::size_t iter = 0; iter < kBisectionIterationCap && best.residual > 0.0; ++iter) {
        const double mid = low + 0.5 * (high - low);
        if (mid <= low || mid >= high)
            break;
        const double g_mid = std::exp(log_g(p, ranges, std::log(mid)));
        const double residual = std::abs(g_mid - 1.0);
        if (residual < best.residual || (residual == best.residual && mid < best.lambda))
            best = {mid, residual};
        if (g_mid > 1.0)
            low = mid;
        else
            high = mid;
    }
    if (best.residual > tol)
        throw Error(ErrorKind::NoConvergence,
                    "bisection stalled with |g_hat - 1| = " + std::to_string(best.residual));
    return best;
}

VisitTally tally_ranges(const SampleBatch& batch, std::span<const Range> ranges, std::size_t n,
                        std::span<const double> log_f, double log_lambda)
{
    VisitTally total(n);
    for (const Range& r : ranges) {
        VisitTally part(n);
        for (std::size_t i = r.begin; i < r.end; ++i)
            part.add(batch[i], log_f, log_lambda);
        total.merge(part);
    }
    return total;
}

std::vector<Range> shard_ranges(const SampleBatch& batch)
{
    std::vector<Range> out;
    auto offsets = batch.shard_offsets();
    for (std::size_t s = 0; s + 1 < offsets.size(); ++s)
        if (offsets[s + 1] > offsets[s])
            out.push_back({offsets[s], offsets[s + 1]});
    return out;
}

// Jackknife groups: the shards when there are several, otherwise contiguous
// blocks of the single shard.
std::vector<Range> jackknife_groups(const SampleBatch& batch)
{
    std::vector<Range> groups = shard_ranges(batch);
    if (groups.size() >= 2)
        return groups;
    const std::size_t s = batch.size();
    const std::size_t g = std::min(kSingleShardJackknifeGroups, s);
    groups.clear();
    for (std::size_t b = 0; b < g; ++b)
        groups.push_back({b * s / g, (b + 1) * s / g});
    return groups;
}

}  // namespace

PathLogWeights path_log_weights(ExcursionView exc, std::span<const double> fitness, double log_lambda)
{
    PathLogWeights w;
    w.per_step_log.reserve(exc.return_time());
    double log_f_sum = 0.0;
    for (std::size_t n = 0; n < exc.return_time(); ++n) {
        w.per_step_log.push_back(log_f_sum - static_cast<double>(n) * log_lambda);
        log_f_sum += std::log(fitness[exc.visits[n]]);
    }
    w.return_log = log_f_sum - static_cast<double>(exc.return_time()) * log_lambda;
    return w;
}

double return_weight_log(ExcursionView exc, std::span<const double> fitness, double log_lambda)
{
    double log_f_sum = 0.0;
    for (State s : exc.visits)
        log_f_sum += std::log(fitness[s]);
    return log_f_sum - static_cast<double>(exc.return_time()) * log_lambda;
}

double g_hat(const SampleBatch& batch, std::span<const double> fitness, double lambda)
{
    require_non_empty(batch);
    require_fitness(batch, fitness, states_spanned(batch));
    if (!(lambda > 0.0))
        throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
    const auto log_f = logs_of(fitness);
    const Range all{0, batch.size()};
    return std::exp(log_g(return_profile(batch, log_f), {&all, 1}, std::log(lambda)));
}

double estimate_lambda(const SampleBatch& batch, std::span<const double> fitness, double tol)
{
    require_non_empty(batch);
    require_fitness(batch, fitness, states_spanned(batch));
    if (!(tol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    const auto log_f = logs_of(fitness);
    const Range all{0, batch.size()};
    const auto [lo, hi] = std::minmax_element(fitness.begin(), fitness.end());
    return bisect_lambda(return_profile(batch, log_f), {&all, 1}, *lo, *hi, tol).lambda;
}

void VisitTally::add(ExcursionView exc, std::span<const double> log_fitness, double log_lambda)
{
    double log_w = 0.0;
    for (State s : exc.visits) {
        numerators_[s].add(log_w);
        log_w += log_fitness[s] - log_lambda;
    }
    ++paths_;
}

void VisitTally::merge(const VisitTally& other)
{
    for (std::size_t i = 0; i < numerators_.size(); ++i)
        numerators_[i].merge(other.numerators_[i]);
    paths_ += other.paths_;
}

LogSumExp VisitTally::log_denominator() const noexcept
{
    LogSumExp d;
    for (const auto& num : numerators_)
        d.merge(num);
    return d;
}

std::vector<double> VisitTally::shares() const
{
    double reference = -std::numeric_limits<double>::infinity();
    for (const auto& num : numerators_)
        if (num.scaled_sum() > 0.0)
            reference = std::max(reference, num.shift());
    std::vector<double> out(numerators_.size());
    double den = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = numerators_[i].value_relative_to(reference);
        den += out[i];
    }
    for (double& v : out)
        v /= den;
    return out;
}

VisitTally tally_visits(const SampleBatch& batch, std::span<const double> fitness, double lambda)
{
    require_non_empty(batch);
    const std::size_t n = fitness.size();
    require_fitness(batch, fitness, states_spanned(batch));
    if (!(lambda > 0.0))
        throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
    const auto log_f = logs_of(fitness);
    const auto ranges = shard_ranges(batch);
    return tally_ranges(batch, ranges, n, log_f, std::log(lambda));
}

std::vector<double> estimate_u(const SampleBatch& batch, std::span<const double> fitness, double lambda)
{
    return tally_visits(batch, fitness, lambda).shares();
}

double estimate_uk(const SampleBatch& batch, std::span<const double> fitness, double lambda)
{
    return tally_visits(batch, fitness, lambda).shares()[batch.base_state()];
}

EstimateReport run_estimation(const NonNegativeMatrix& a, const EstimationConfig& config)
{
    const std::size_t n = a.size();
    if (config.base_state >= n)
        throw Error(ErrorKind::InvalidArgument, "base state " + std::to_string(config.base_state + 1) +
                                                    " outside 1.." + std::to_string(n));
    if (!(config.tol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    check_primitive(a);
    const RowDecomposition decomp = decompose(a);

    EstimateReport report;
    report.base_state = config.base_state;
    if (n == 1) {
        report.lambda_hat = decomp.fitness[0];
        report.u_hat = {1.0};
        report.dispersion = {0.0};
        return report;
    }

    const SampleBatch batch = sample_batch(build_sampler(decomp), config.base_state, config.samples, config.seed,
                                           config.cap, config.shards);
    report.sample_count = batch.size();
    report.attempted = batch.attempted();
    report.truncated_count = batch.truncated_count();
    if (static_cast<double>(batch.truncated_count()) > kTruncationBiasLimit * static_cast<double>(batch.attempted()))
        throw Error(ErrorKind::TruncationBiasGuard,
                    std::to_string(batch.truncated_count()) + " of " + std::to_string(batch.attempted()) +
                        " excursions hit the cap of " + std::to_string(config.cap) + " steps");

    const auto log_f = logs_of(decomp.fitness);
    const ReturnProfile profile = return_profile(batch, log_f);
    const double f_min = decomp.min_fitness();
    const double f_max = decomp.max_fitness();

    const auto all = shard_ranges(batch);
    const RootResult root = bisect_lambda(profile, all, f_min, f_max, config.tol);
    report.lambda_hat = root.lambda;
    report.g_residual = root.residual;
    report.u_hat = tally_ranges(batch, all, n, log_f, std::log(root.lambda)).shares();

    // Leave-one-group-out jackknife; lambda is re-solved for every replicate.
    const auto groups = jackknife_groups(batch);
    const std::size_t g = groups.size();
    report.jackknife_groups = g;
    report.dispersion.assign(n, 0.0);
    if (g >= 2) {
        std::vector<std::vector<double>> u_rep(g);
        std::vector<double> lambda_rep(g);
        for (std::size_t drop = 0; drop < g; ++drop) {
            std::vector<Range> kept;
            for (std::size_t b = 0; b < g; ++b)
                if (b != drop)
                    kept.push_back(groups[b]);
            lambda_rep[drop] = bisect_lambda(profile, kept, f_min, f_max, config.tol).lambda;
            u_rep[drop] = tally_ranges(batch, kept, n, log_f, std::log(lambda_rep[drop])).shares();
        }
        const double factor = static_cast<double>(g - 1) / static_cast<double>(g);
        auto jackknife_se = [&](auto value_of) {
            double mean = 0.0;
            for (std::size_t r = 0; r < g; ++r)
                mean += value_of(r);
            mean /= static_cast<double>(g);
            double ss = 0.0;
            for (std::size_t r = 0; r < g; ++r)
                ss += (value_of(r) - mean) * (value_of(r) - mean);
            return std::sqrt(factor * ss);
        };
        for (std::size_t i = 0; i < n; ++i)
            report.dispersion[i] = jackknife_se([&](std::size_t r) { return u_rep[r][i]; });
        report.lambda_dispersion = jackknife_se([&](std::size_t r) { return lambda_rep[r]; });
    }
    return report;
}

}  // namespace perronmc
