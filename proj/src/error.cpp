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

#include "perronmc/error.hpp"

namespace perronmc {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::AllTruncated: return "AllTruncated";
    case ErrorKind::EmptyBatch: return "EmptyBatch";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::TruncationBiasGuard: return "TruncationBiasGuard";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Divergence: return "Divergence";
    case ErrorKind::NotOnSimplex: return "NotOnSimplex";
    case ErrorKind::PopulationOverflow: return "PopulationOverflow";
    case ErrorKind::NoSurvivors: return "NoSurvivors";
    case ErrorKind::Subcritical: return "Subcritical";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace perronmc
