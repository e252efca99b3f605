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

#include "perronmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perronmc/error.hpp"

namespace perronmc {

namespace {

std::vector<double> left_multiply(const std::vector<double>& v, const NonNegativeMatrix& a)
{
    const std::size_t n = a.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0.0)
            continue;
        auto row = a.row(i);
        for (std::size_t j = 0; j < n; ++j)
            out[j] += v[i] * row[j];
    }
    return out;
}

double l1_sum(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

}  // namespace

PerronPair power_iteration(const NonNegativeMatrix& a, double tol, std::size_t max_iter)
{
    const std::size_t n = a.size();
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        std::vector<double> next = left_multiply(v, a);
        const double norm = l1_sum(next);
        double diff = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] /= norm;
            diff += std::abs(next[j] - v[j]);
        }
        v = std::move(next);
        if (diff < tol) {
            // Read lambda off the final iterate: |v^T A|_1 = sum_i v_i f(i).
            return {l1_sum(left_multiply(v, a)), std::move(v), iter};
        }
    }
    throw Error(ErrorKind::NoConvergence,
                "power iteration did not settle within " + std::to_string(max_iter) + " iterations");
}

double eigen_residual(const NonNegativeMatrix& a, const PerronPair& pair)
{
    const auto ua = left_multiply(pair.u, a);
    double r = 0.0;
    for (std::size_t j = 0; j < ua.size(); ++j)
        r += std::abs(ua[j] - pair.lambda * pair.u[j]);
    return r;
}

LemmaSeries lemma_partial_sums(const NonNegativeMatrix& a, State k, double lambda, std::size_t n_max,
                               double stop_below)
{
    const std::size_t n = a.size();
    if (k >= n)
        throw Error(ErrorKind::InvalidArgument, "base state " + std::to_string(k) + " out of range");
    if (!(lambda > 0.0) || n_max == 0)
        throw Error(ErrorKind::InvalidArgument, "lambda must be > 0 and n_max >= 1");

    LemmaSeries series;
    double sum = 0.0;
    auto push = [&](double term) {
        if (!series.terms.empty() && series.terms.back() > 0.0)
            series.ratios.push_back(term / series.terms.back());
        series.terms.push_back(term);
        sum += term;
        series.partial_sums.push_back(sum);
        if (sum > 1.0 + kDivergenceSlack)
            throw Error(ErrorKind::Divergence, "partial sum exceeded 1 after " +
                                                   std::to_string(series.terms.size()) +
                                                   " terms; lambda is below the Perron root");
    };

    push(a(k, k) / lambda);

    // walk_j = lambda^-(n-1) (A(k,.) B^{n-2})_j restricted to j != k; B never
    // touches index k, so that entry stays zero throughout.
    std::vector<double> walk(n, 0.0);
    double max_into_k = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == k)
            continue;
        walk[j] = a(k, j) / lambda;
        max_into_k = std::max(max_into_k, a(j, k));
    }
    std::vector<double> next(n);
    for (std::size_t term = 2; term <= n_max; ++term) {
        double into_k = 0.0;
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            into_k += walk[j] * a(j, k);
            mass += walk[j];
        }
        if (stop_below > 0.0 && mass * max_into_k / lambda < stop_below)
            break;
        push(into_k / lambda);

        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || walk[i] == 0.0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k)
                    next[j] += walk[i] * a(i, j);
        }
        for (std::size_t j = 0; j < n; ++j)
            walk[j] = next[j] / lambda;
    }
    return series;
}

EquilibriumResidual quasispecies_residual(const NonNegativeMatrix& a, const std::vector<double>& x)
{
    const std::size_t n = a.size();
    if (x.size() != n)
        throw Error(ErrorKind::NotOnSimplex, "vector has " + std::to_string(x.size()) + " entries, expected " +
                                                 std::to_string(n));
    double total = 0.0;
    for (double v : x) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::NotOnSimplex, "entries must be finite and non-negative");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorKind::NotOnSimplex, "entries sum to " + std::to_string(total));

    const RowDecomposition d = decompose(a);
    EquilibriumResidual r;
    for (std::size_t i = 0; i < n; ++i)
        r.mean_fitness += x[i] * d.fitness[i];
    r.per_state.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double inflow = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inflow += x[i] * d.fitness[i] * d.kernel(i, k);
        r.per_state[k] = std::abs(x[k] * r.mean_fitness - inflow);
        r.max_abs = std::max(r.max_abs, r.per_state[k]);
    }
    return r;
}

}  // namespace perronmc
