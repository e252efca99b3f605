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

#include <cmath>
#include <limits>

namespace perronmc {

/// Streaming sum of exp(x) held as sum * exp(shift), with shift the running
/// maximum. Terms equal to the current shift add exactly 1 to `sum`, so a run
/// of zeros accumulates an exact integer count.
class LogSumExp {
public:
    void add(double x) noexcept
    {
        if (x == -std::numeric_limits<double>::infinity())
            return;
        if (x <= shift_) {
            sum_ += std::exp(x - shift_);
        } else {
            sum_ = sum_ * std::exp(shift_ - x) + 1.0;
            shift_ = x;
        }
    }

    void merge(const LogSumExp& other) noexcept
    {
        if (other.sum_ == 0.0)
            return;
        if (sum_ == 0.0) {
            *this = other;
            return;
        }
        if (other.shift_ <= shift_) {
            sum_ += other.sum_ * std::exp(other.shift_ - shift_);
        } else {
            sum_ = sum_ * std::exp(shift_ - other.shift_) + other.sum_;
            shift_ = other.shift_;
        }
    }

    double shift() const noexcept { return shift_; }
    double scaled_sum() const noexcept { return sum_; }

    /// log of the accumulated sum; -inf when empty.
    double log() const noexcept { return shift_ + std::log(sum_); }

    /// The accumulated sum itself (may overflow where log() does not).
    double value() const noexcept { return sum_ == 0.0 ? 0.0 : sum_ * std::exp(shift_); }

    /// The accumulated sum divided by exp(reference).
    double value_relative_to(double reference) const noexcept
    {
        return sum_ == 0.0 ? 0.0 : sum_ * std::exp(shift_ - reference);
    }

private:
    double shift_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

}  // namespace perronmc
