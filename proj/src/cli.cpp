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

#include "perronmc/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "perronmc/estimator.hpp"
#include "perronmc/oracle.hpp"

namespace perronmc::cli {

namespace {

using nlohmann::json;

constexpr double kLemmaStopBelow = 1e-14;

[[noreturn]] void parse_error(const std::string& what)
{
    throw Error(ErrorKind::ParseError, what);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view field, std::size_t line, std::size_t column)
{
    field = trim(field);
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        parse_error("line " + std::to_string(line) + ", field " + std::to_string(column) + ": '" +
                    std::string(field) + "' is not a real number");
    return value;
}

State zero_based_state(const RunConfig& config, std::size_t n)
{
    if (config.base_state < 1 || config.base_state > n)
        throw Error(ErrorKind::InvalidArgument,
                    "base state " + std::to_string(config.base_state) + " outside 1.." + std::to_string(n));
    return static_cast<State>(config.base_state - 1);
}

double l1_distance(const std::vector<double>& x, const std::vector<double>& y)
{
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        d += std::abs(x[i] - y[i]);
    return d;
}

json estimate_json(const EstimateReport& r)
{
    return {
        {"lambda_hat", r.lambda_hat},
        {"u_hat", r.u_hat},
        {"base_state", r.base_state + 1},
        {"samples", r.sample_count},
        {"attempted", r.attempted},
        {"truncated", r.truncated_count},
        {"g_residual", r.g_residual},
        {"dispersion", r.dispersion},
        {"lambda_dispersion", r.lambda_dispersion},
        {"jackknife_groups", r.jackknife_groups},
    };
}

EstimationConfig estimation_config(const RunConfig& config, std::size_t n)
{
    EstimationConfig c;
    c.base_state = zero_based_state(config, n);
    c.samples = config.samples;
    c.seed = config.seed;
    c.cap = config.cap;
    c.shards = config.shards;
    c.tol = config.tol;
    return c;
}

json oracle_json(const NonNegativeMatrix& a, const PerronPair& pair)
{
    const auto eq = quasispecies_residual(a, pair.u);
    return {
        {"lambda", pair.lambda},
        {"u", pair.u},
        {"iterations", pair.iterations},
        {"eigen_residual", eigen_residual(a, pair)},
        {"quasispecies_residual", {{"max_abs", eq.max_abs}, {"per_state", eq.per_state}, {"mean_fitness", eq.mean_fitness}}},
    };
}

void write_text(const json& j, const std::string& prefix, std::ostream& out)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object())
            write_text(*it, key, out);
        else
            out << key << ": " << it->dump() << '\n';
    }
}

}  // namespace

std::string_view to_string(Subcommand cmd) noexcept
{
    switch (cmd) {
    case Subcommand::Estimate: return "estimate";
    case Subcommand::Oracle: return "oracle";
    case Subcommand::Compare: return "compare";
    case Subcommand::LemmaCheck: return "lemma-check";
    case Subcommand::GwSim: return "gw-sim";
    }
    return "unknown";
}

NonNegativeMatrix parse_matrix_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows"))
        parse_error("expected an object with fields \"n\" and \"rows\"");
    if (!doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() == 0)
        parse_error("field \"n\" must be a positive integer");
    const auto n = doc["n"].get<std::size_t>();
    const json& rows = doc["rows"];
    if (!rows.is_array() || rows.size() != n)
        parse_error("field \"rows\" must be an array of " + std::to_string(n) + " rows");

    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            parse_error("rows[" + std::to_string(i) + "] must hold " + std::to_string(n) + " numbers");
        for (std::size_t j = 0; j < n; ++j) {
            if (!rows[i][j].is_number())
                parse_error("rows[" + std::to_string(i) + "][" + std::to_string(j) + "] is not a number");
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return validate(std::move(m));
}

NonNegativeMatrix parse_matrix_csv(std::string_view text)
{
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (trim(line).empty())
            continue;
        std::vector<double> row;
        std::size_t column = 0;
        while (true) {
            const auto comma = line.find(',');
            row.push_back(parse_real(line.substr(0, comma), line_no, ++column));
            if (comma == std::string_view::npos)
                break;
            line.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            parse_error("line " + std::to_string(line_no) + ": " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        parse_error("no rows found");
    if (rows.size() != rows.front().size())
        parse_error(std::to_string(rows.size()) + " rows of " + std::to_string(rows.front().size()) +
                    " fields; the matrix must be square");
    return validate(rows);
}

NonNegativeMatrix parse_matrix(const std::filesystem::path& path)
{
    const auto ext = path.extension().string();
    if (ext != ".json" && ext != ".csv")
        throw Error(ErrorKind::ParseError, path.string() + ": unsupported extension '" + ext + "' (use .json or .csv)");
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return ext == ".json" ? parse_matrix_json(text) : parse_matrix_csv(text);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NotPrimitive:
        return 2;
    case ErrorKind::AllTruncated:
    case ErrorKind::EmptyBatch:
    case ErrorKind::BracketFailure:
    case ErrorKind::TruncationBiasGuard:
    case ErrorKind::NoConvergence:
    case ErrorKind::Divergence:
    case ErrorKind::PopulationOverflow:
    case ErrorKind::NoSurvivors:
        return 3;
    default:
        return 1;
    }
}

json config_json(const RunConfig& config)
{
    return {
        {"subcommand", to_string(config.subcommand)},
        {"matrix_path", config.matrix_path},
        {"base_state", config.base_state},
        {"samples", config.samples},
        {"seed", config.seed},
        {"cap", config.cap},
        {"shards", config.shards},
        {"tol", config.tol},
        {"horizon", config.horizon},
        {"trials", config.trials},
        {"law", to_string(config.law)},
        {"lemma_max_terms", config.lemma_max_terms},
        {"output", config.output == OutputFormat::Json ? "json" : "text"},
    };
}

json build_report(const RunConfig& config)
{
    const NonNegativeMatrix a = parse_matrix(config.matrix_path);
    json report;
    switch (config.subcommand) {
    case Subcommand::Estimate:
        report = estimate_json(run_estimation(a, estimation_config(config, a.size())));
        break;
    case Subcommand::Oracle:
        check_primitive(a);
        report = oracle_json(a, power_iteration(a));
        break;
    case Subcommand::Compare: {
        const EstimateReport est = run_estimation(a, estimation_config(config, a.size()));
        const PerronPair pair = power_iteration(a);
        report["estimate"] = estimate_json(est);
        report["oracle"] = oracle_json(a, pair);
        report["l1_error"] = l1_distance(est.u_hat, pair.u);
        report["lambda_rel_error"] = std::abs(est.lambda_hat - pair.lambda) / pair.lambda;
        break;
    }
    case Subcommand::LemmaCheck: {
        const State k = zero_based_state(config, a.size());
        check_primitive(a);
        const PerronPair pair = power_iteration(a);
        const LemmaSeries s = lemma_partial_sums(a, k, pair.lambda, config.lemma_max_terms, kLemmaStopBelow);
        report = {
            {"lambda", pair.lambda},
            {"base_state", config.base_state},
            {"final_partial_sum", s.final_sum()},
            {"gap", std::abs(s.final_sum() - 1.0)},
            {"terms_used", s.terms_used()},
            {"last_ratio", s.ratios.empty() ? 0.0 : s.ratios.back()},
        };
        break;
    }
    case Subcommand::GwSim: {
        const BranchingOptions options{config.law, kDefaultPopulationCeiling};
        const TreeEnsemble e = conditioned_proportions(a, config.trials, config.horizon, config.seed, options);
        const PerronPair pair = power_iteration(a);
        report = {
            {"proportions", e.averaged},
            {"pooled_proportions", e.pooled},
            {"survivors", e.survivors},
            {"trials", e.trials},
            {"survival_fraction", e.survival_fraction()},
            {"oracle_lambda", pair.lambda},
            {"oracle_u", pair.u},
            {"l1_to_oracle", l1_distance(e.averaged, pair.u)},
        };
        break;
    }
    }
    report["subcommand"] = to_string(config.subcommand);
    report["config"] = config_json(config);
    return report;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        const json report = build_report(config);
        if (config.output == OutputFormat::Json)
            out << report.dump(2) << '\n';
        else
            write_text(report, "", out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}

}  // namespace perronmc::cli
