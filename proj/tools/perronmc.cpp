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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "perronmc/cli.hpp"

namespace {

using perronmc::cli::RunConfig;
using perronmc::cli::Subcommand;

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("matrix", cfg.matrix_path, "Matrix file (.json or .csv)")->required();
    sub->add_option("-k,--base-state", cfg.base_state, "Base state k, 1-based")->check(CLI::PositiveNumber);
    sub->add_option_function<std::string>(
           "--output",
           [&cfg](const std::string& v) {
               cfg.output = v == "text" ? perronmc::cli::OutputFormat::Text : perronmc::cli::OutputFormat::Json;
           },
           "Report format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
}

void add_sampling(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("-n,--samples", cfg.samples, "Excursion attempts")->check(CLI::PositiveNumber);
    sub->add_option("-s,--seed", cfg.seed, "64-bit seed");
    sub->add_option("--cap", cfg.cap, "Excursion length cap")->check(CLI::PositiveNumber);
    sub->add_option("--shards", cfg.shards, "Independent RNG shards")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "Bisection tolerance on |g_hat - 1|")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo Perron-Frobenius eigenpairs from Markov chain excursions"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* estimate = app.add_subcommand("estimate", "Excursion estimate of lambda and u");
    auto* oracle = app.add_subcommand("oracle", "Power-iteration eigenpair and equilibrium residual");
    auto* compare = app.add_subcommand("compare", "Estimate and oracle side by side");
    auto* lemma = app.add_subcommand("lemma-check", "First-return series at the oracle lambda");
    auto* gw = app.add_subcommand("gw-sim", "Galton-Watson proportions conditioned on survival");

    for (auto* sub : {estimate, oracle, compare, lemma, gw})
        add_common(sub, cfg);
    add_sampling(estimate, cfg);
    add_sampling(compare, cfg);
    lemma->add_option("--max-terms", cfg.lemma_max_terms, "Series term limit")->check(CLI::PositiveNumber);
    gw->add_option("-s,--seed", cfg.seed, "64-bit seed");
    gw->add_option("--trials", cfg.trials, "Independent trees")->check(CLI::PositiveNumber);
    gw->add_option("--horizon", cfg.horizon, "Generations per tree")->check(CLI::PositiveNumber);
    gw->add_option_function<std::string>(
          "--law",
          [&cfg](const std::string& v) {
              cfg.law = v == "deterministic" ? perronmc::OffspringLaw::Deterministic : perronmc::OffspringLaw::Poisson;
          },
          "Offspring law: poisson or deterministic")
        ->check(CLI::IsMember({"poisson", "deterministic"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (estimate->parsed())
        cfg.subcommand = Subcommand::Estimate;
    else if (oracle->parsed())
        cfg.subcommand = Subcommand::Oracle;
    else if (compare->parsed())
        cfg.subcommand = Subcommand::Compare;
    else if (lemma->parsed())
        cfg.subcommand = Subcommand::LemmaCheck;
    else
        cfg.subcommand = Subcommand::GwSim;

    return perronmc::cli::run(cfg, std::cout, std::cerr);
}
