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

namespace perronmc {

/// State index of the chain, 0-based internally.
using State = std::uint32_t;

/// Dense square matrix of doubles, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }

    std::span<const double> values() const noexcept { return data_; }

    std::vector<std::vector<double>> to_rows() const;

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// A square matrix with non-negative finite entries and strictly positive row
/// sums. Only obtainable through validate() or scale(), so holding one is proof
/// that the invariants were checked.
class NonNegativeMatrix {
public:
    std::size_t size() const noexcept { return entries_.size(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
    std::span<const double> row(std::size_t i) const noexcept { return entries_.row(i); }
    const SquareMatrix& entries() const noexcept { return entries_; }

    friend bool operator==(const NonNegativeMatrix&, const NonNegativeMatrix&) = default;

private:
    explicit NonNegativeMatrix(SquareMatrix m) : entries_(std::move(m)) {}

    friend NonNegativeMatrix validate(SquareMatrix raw);

    SquareMatrix entries_;
};

/// Throws NotSquare, NegativeEntry(i,j), ZeroRow(i), or InvalidArgument for
/// non-finite entries and the empty matrix.
NonNegativeMatrix validate(SquareMatrix raw);
NonNegativeMatrix validate(const std::vector<std::vector<double>>& rows);

/// Entrywise product with c > 0; throws NonPositiveScale otherwise.
NonNegativeMatrix scale(const NonNegativeMatrix& a, double c);

struct PrimitivityCertificate {
    std::size_t exponent_m = 0;
};

/// (n-1)^2 + 1: if no power up to this one is positive, none is.
std::size_t wielandt_bound(std::size_t n) noexcept;

/// Smallest m with A^m entrywise positive, computed on the zero pattern only.
/// Throws NotPrimitive for reducible or periodic patterns.
PrimitivityCertificate check_primitive(const NonNegativeMatrix& a);

/// A(i,j) = fitness(i) * kernel(i,j), fitness(i) the i-th row sum.
struct RowDecomposition {
    std::vector<double> fitness;
    SquareMatrix kernel;

    std::size_t size() const noexcept { return fitness.size(); }
    double min_fitness() const noexcept;
    double max_fitness() const noexcept;
    bool constant_fitness() const noexcept { return min_fitness() == max_fitness(); }

    /// fitness(i) * kernel(i,j) entrywise.
    NonNegativeMatrix recompose() const;
};

RowDecomposition decompose(const NonNegativeMatrix& a);

}  // namespace perronmc
