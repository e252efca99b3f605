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

#include "perronmc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perronmc/error.hpp"

namespace perronmc {

namespace {

// Zero/nonzero pattern of a square matrix, row-major.
struct Pattern {
    std::size_t n;
    std::vector<std::uint8_t> bits;

    bool all_positive() const
    {
        return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
    }
};

Pattern pattern_of(const NonNegativeMatrix& a)
{
    const std::size_t n = a.size();
    Pattern p{n, std::vector<std::uint8_t>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p.bits[i * n + j] = a(i, j) > 0.0 ? 1 : 0;
    return p;
}

Pattern boolean_product(const Pattern& x, const Pattern& y)
{
    const std::size_t n = x.n;
    Pattern out{n, std::vector<std::uint8_t>(n * n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
            if (!x.bits[i * n + l])
                continue;
            for (std::size_t j = 0; j < n; ++j)
                out.bits[i * n + j] |= y.bits[l * n + j];
        }
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> SquareMatrix::to_rows() const
{
    std::vector<std::vector<double>> rows(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        auto r = row(i);
        rows[i].assign(r.begin(), r.end());
    }
    return rows;
}

NonNegativeMatrix validate(SquareMatrix raw)
{
    const std::size_t n = raw.size();
    if (n == 0)
        throw Error(ErrorKind::InvalidArgument, "matrix must have at least one row");
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = raw(i, j);
            if (!std::isfinite(v))
                throw Error(ErrorKind::InvalidArgument,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
            if (v < 0.0)
                throw Error(ErrorKind::NegativeEntry,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
            row_sum += v;
        }
        if (!(row_sum > 0.0))
            throw Error(ErrorKind::ZeroRow, "row " + std::to_string(i) + " sums to zero");
    }
    return NonNegativeMatrix(std::move(raw));
}

NonNegativeMatrix validate(const std::vector<std::vector<double>>& rows)
{
    const std::size_t n = rows.size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw Error(ErrorKind::NotSquare, "row " + std::to_string(i) + " has " +
                                                  std::to_string(rows[i].size()) + " entries, expected " +
                                                  std::to_string(n));
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return validate(std::move(m));
}

NonNegativeMatrix scale(const NonNegativeMatrix& a, double c)
{
    if (!(c > 0.0) || !std::isfinite(c))
        throw Error(ErrorKind::NonPositiveScale, "scale factor must be finite and > 0");
    SquareMatrix m = a.entries();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (double& v : m.row(i))
            v *= c;
    return validate(std::move(m));
}

std::size_t wielandt_bound(std::size_t n) noexcept
{
    return (n - 1) * (n - 1) + 1;
}

PrimitivityCertificate check_primitive(const NonNegativeMatrix& a)
{
    const Pattern base = pattern_of(a);
    const std::size_t bound = wielandt_bound(a.size());

    // Rows are never zero, so once a power is positive every higher power is
    // too. Squaring past the bound settles primitivity in O(n^3 log n).
    Pattern squared = base;
    std::size_t power = 1;
    while (power < bound) {
        squared = boolean_product(squared, squared);
        power *= 2;
    }
    if (!squared.all_positive())
        throw Error(ErrorKind::NotPrimitive, "no power up to the Wielandt bound " + std::to_string(bound) +
                                                 " is entrywise positive");

    Pattern current = base;
    for (std::size_t m = 1; m <= bound; ++m) {
        if (current.all_positive())
            return {m};
        current = boolean_product(current, base);
    }
    // Unreachable: the squaring pass proved some power <= bound is positive.
    throw Error(ErrorKind::NotPrimitive, "pattern power search exhausted");
}

double RowDecomposition::min_fitness() const noexcept
{
    return *std::min_element(fitness.begin(), fitness.end());
}

double RowDecomposition::max_fitness() const noexcept
{
    return *std::max_element(fitness.begin(), fitness.end());
}

NonNegativeMatrix RowDecomposition::recompose() const
{
    const std::size_t n = size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = fitness[i] * kernel(i, j);
    return validate(std::move(m));
}

RowDecomposition decompose(const NonNegativeMatrix& a)
{
    const std::size_t n = a.size();
    RowDecomposition d{std::vector<double>(n), SquareMatrix(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double f = 0.0;
        for (double v : a.row(i))
            f += v;
        d.fitness[i] = f;
        for (std::size_t j = 0; j < n; ++j)
            d.kernel(i, j) = a(i, j) / f;
    }
    return d;
}

}  // namespace perronmc
