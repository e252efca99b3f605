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
#include <vector>

#include "perronmc/matrix.hpp"

namespace perronmc {

/// Dominant eigenvalue and its left eigenvector on the unit simplex,
/// u^T A = lambda u^T.
struct PerronPair {
    double lambda = 0.0;
    std::vector<double> u;
    std::size_t iterations = 0;
};

inline constexpr double kPowerIterationTol = 1e-14;
inline constexpr std::size_t kPowerIterationMaxIter = 1'000'000;

/// Left power iteration v <- v^T A / |v^T A|_1 from the uniform vector, until
/// successive iterates differ by less than tol in L1. Throws NoConvergence.
PerronPair power_iteration(const NonNegativeMatrix& a, double tol = kPowerIterationTol,
                           std::size_t max_iter = kPowerIterationMaxIter);

/// |u^T A - lambda u^T|_1
double eigen_residual(const NonNegativeMatrix& a, const PerronPair& pair);

inline constexpr double kDivergenceSlack = 1e-6;

/// Terms of the first-return series
///   1 = A(k,k)/lambda + sum_{n>=2} lambda^-n sum_{i,j != k} A(k,i) (B^{n-2})(i,j) A(j,k)
/// where B is A with row and column k zeroed. terms[0] is the n = 1 term.
struct LemmaSeries {
    std::vector<double> terms;
    std::vector<double> partial_sums;
    /// terms[n+1] / terms[n] where terms[n] > 0; tends to rho(B)/lambda.
    std::vector<double> ratios;

    double final_sum() const noexcept { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
    std::size_t terms_used() const noexcept { return terms.size(); }
};

/// Evaluates up to n_max terms by iterating a row vector through B, never
/// forming B^n. Stops early once an upper bound on the next term drops below
/// stop_below (0 disables). Throws Divergence if a partial sum exceeds
/// 1 + kDivergenceSlack, meaning lambda is below the Perron root.
LemmaSeries lemma_partial_sums(const NonNegativeMatrix& a, State k, double lambda, std::size_t n_max,
                               double stop_below = 0.0);

/// Both sides of the mutation-selection equilibrium x_k sum_i x_i f(i) = sum_i x_i f(i) M(i,k).
struct EquilibriumResidual {
    std::vector<double> per_state;
    double max_abs = 0.0;
    double mean_fitness = 0.0;  ///< sum_i x_i f(i)
};

/// Throws NotOnSimplex unless x has one non-negative entry per state summing
/// to 1 within 1e-9.
EquilibriumResidual quasispecies_residual(const NonNegativeMatrix& a, const std::vector<double>& x);

}  // namespace perronmc
