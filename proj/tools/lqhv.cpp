// Copyright 2026 The LqHV Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lqhv: build signed local distributions for multi-qudit scenarios, check
// their marginals and norms, and compare Bell violations with upper bounds.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lqhv/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Signed local distributions and Bell-violation bounds for N-qudit states", "lqhv"};
  app.require_subcommand(1, 1);

  lqhv::RunConfig cfg;
  std::string format = "text";
  std::string sites = "2..3", dims = "2..3", settings = "2..4";

  auto add_common = [&](CLI::App* sub, bool needs_case) {
    if (needs_case) {
      sub->add_option("--scenario", cfg.scenario_path, "Case file (JSON)");
      sub->add_option("--preset", cfg.preset, "Built-in case: singlet-chsh, singlet-ch, ghz3-mk3, ...");
      sub->add_option("--functional", cfg.functional, "Functional preset (chsh, ch, mk2..mk10) or JSON file");
      sub->add_option("--optimize", cfg.optimize, "Optimizer for the functional")->check(CLI::IsMember({"seesaw", "none"}));
      sub->add_option("--iters", cfg.iters, "See-saw iteration cap");
      sub->add_option("--tol", cfg.tol, "Numeric tolerance for checks (default 1e-9)");
      sub->add_option("--cluster-tol", cfg.cluster_tol, "Relative eigenvalue clustering tolerance (default 1e-9)");
      sub->add_option("--seed", cfg.seed, "Seed for random states and see-saw starts (default 0)");
      sub->add_option("--threads", cfg.threads, "Worker threads (default LQHV_THREADS or all cores)");
      sub->add_flag("--no-timestamp", cfg.no_timestamp, "Omit the timestamp from text reports");
    }
    sub->add_option("--out", cfg.out_path, "Write output to FILE");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  };

  struct Entry {
    const char* name;
    const char* help;
    lqhv::Command command;
  };
  const Entry entries[] = {
      {"build", "Build the signed distribution and export it", lqhv::Command::build},
      {"check-marginals", "Compare distribution marginals with quantum joint probabilities", lqhv::Command::check_marginals},
      {"tvnorm", "Total-variation norm against its upper bounds", lqhv::Command::tvnorm},
      {"bounds", "Tabulate violation bounds over ranges of N, d, S", lqhv::Command::bounds},
      {"violate", "Classical bound, quantum value and violation ratio of a functional", lqhv::Command::violate},
      {"report", "Everything above for one case", lqhv::Command::report},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, e.command != lqhv::Command::bounds);
    if (e.command == lqhv::Command::bounds) {
      sub->add_option("--sites", sites, "Range of N, e.g. 2..3");
      sub->add_option("--dims", dims, "Range of d, e.g. 2..3");
      sub->add_option("--settings", settings, "Range of S, e.g. 2..4");
    }
    sub->callback([&cfg, command = e.command] { cfg.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lqhv::kExitInput;
  }

  cfg.format = format == "csv" ? lqhv::OutputFormat::csv
               : format == "json" ? lqhv::OutputFormat::json
                                  : lqhv::OutputFormat::text;
  try {
    cfg.sites = lqhv::parse_range(sites);
    cfg.dims = lqhv::parse_range(dims);
    cfg.settings = lqhv::parse_range(settings);
  } catch (const lqhv::Error& e) {
    std::cerr << "lqhv: " << e.what() << "\n";
    return lqhv::kExitInput;
  }
  return lqhv::run_command(cfg, std::cout, std::cerr);
}
