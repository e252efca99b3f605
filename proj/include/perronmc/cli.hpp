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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "perronmc/error.hpp"
#include "perronmc/galton_watson.hpp"
#include "perronmc/matrix.hpp"

namespace perronmc::cli {

enum class Subcommand { Estimate, Oracle, Compare, LemmaCheck, GwSim };
enum class OutputFormat { Json, Text };

std::string_view to_string(Subcommand cmd) noexcept;

/// Fully resolved flags. base_state is 1-based here and nowhere else.
struct RunConfig {
    Subcommand subcommand = Subcommand::Estimate;
    std::string matrix_path;
    std::size_t base_state = 1;
    std::size_t samples = 100'000;
    std::uint64_t seed = 0;
    std::size_t cap = 1'000'000;
    std::size_t shards = 1;
    double tol = 1e-10;
    std::size_t horizon = 10;
    std::size_t trials = 10'000;
    OffspringLaw law = OffspringLaw::Poisson;
    std::size_t lemma_max_terms = 10'000'000;
    OutputFormat output = OutputFormat::Json;
};

/// {"n": <int>, "rows": [[...], ...]}
NonNegativeMatrix parse_matrix_json(std::string_view text);
/// n lines of n comma-separated reals, no header.
NonNegativeMatrix parse_matrix_csv(std::string_view text);
/// Dispatches on the .json / .csv extension. Errors name the file.
NonNegativeMatrix parse_matrix(const std::filesystem::path& path);

/// 1 for validation and parse errors, 2 for NotPrimitive, 3 for statistical guards.
int exit_code_for(ErrorKind kind) noexcept;

nlohmann::json config_json(const RunConfig& config);

/// The report for one subcommand, config embedded. Throws perronmc::Error.
nlohmann::json build_report(const RunConfig& config);

/// Writes the report to `out` (or the error to `err`) and returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace perronmc::cli
