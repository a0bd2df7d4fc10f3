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

/**
 * @file
 * Command orchestration behind the lqhv executable. Commands write to a
 * stream and return the process exit code: 0 when every check passes, 1 on
 * a numeric assertion failure, 2 on input errors.
 */

#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lqhv/bell.hpp"
#include "lqhv/bounds.hpp"
#include "lqhv/config.hpp"
#include "lqhv/distribution.hpp"
#include "lqhv/numeric.hpp"
#include "lqhv/random.hpp"

namespace lqhv {

enum class Command { build, check_marginals, tvnorm, bounds, violate, report };
enum class OutputFormat { text, csv, json };

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  Command command = Command::report;
  std::optional<std::string> scenario_path;
  std::optional<std::string> preset;
  std::optional<std::string> functional;  // preset name or JSON file
  std::optional<std::string> optimize;    // "seesaw"
  std::optional<int> iters;
  std::optional<double> tol;
  std::optional<double> cluster_tol;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_path;
  OutputFormat format = OutputFormat::text;
  bool no_timestamp = false;
  IntRange sites{2, 3};
  IntRange dims{2, 3};
  IntRange settings{2, 4};
};

inline std::optional<Command> parse_command(const std::string& name) {
  if (name == "build") return Command::build;
  if (name == "check-marginals") return Command::check_marginals;
  if (name == "tvnorm") return Command::tvnorm;
  if (name == "bounds") return Command::bounds;
  if (name == "violate") return Command::violate;
  if (name == "report") return Command::report;
  return std::nullopt;
}

/// "a..b" or "a".
inline IntRange parse_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw InputError("malformed range '" + text + "', expected a..b");
  }
}

/// Settings resolved from flags over the case file's run section over defaults.
struct EffectiveRun {
  double tol = 1e-9;
  double cluster_tol = kDefaultClusterTol;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_outcomes = kDefaultMaxOutcomes;
  bool seesaw = false;
  int iters = 50;
};

namespace cli {

inline EffectiveRun resolve(const RunConfig& cfg, const RunSection& file) {
  EffectiveRun r;
  r.tol = cfg.tol.value_or(file.tol.value_or(r.tol));
  r.cluster_tol = cfg.cluster_tol.value_or(file.cluster_tol.value_or(r.cluster_tol));
  r.seed = cfg.seed.value_or(file.seed.value_or(r.seed));
  r.threads = cfg.threads.value_or(file.threads.value_or(default_thread_count()));
  r.max_outcomes = file.max_outcomes.value_or(r.max_outcomes);
  const std::string opt = cfg.optimize.value_or(file.optimize.value_or("none"));
  if (opt != "seesaw" && opt != "none") throw InputError("--optimize: expected 'seesaw' or 'none'");
  r.seesaw = opt == "seesaw";
  r.iters = cfg.iters.value_or(file.iters.value_or(r.iters));
  if (r.iters < 0) throw InputError("--iters must be non-negative");
  if (!(r.tol > 0)) throw InputError("--tol must be positive");
  return r;
}

inline Problem load_problem(const RunConfig& cfg) {
  if (cfg.scenario_path && cfg.preset) throw InputError("use either --scenario or --preset, not both");
  if (!cfg.scenario_path && !cfg.preset) throw InputError("this command needs --scenario FILE or --preset NAME");
  Problem p = cfg.preset ? problem_from_preset(*cfg.preset)
                         : load_problem_file(*cfg.scenario_path, cfg.cluster_tol.value_or(kDefaultClusterTol));
  if (cfg.functional) {
    if (auto preset = functional_preset(*cfg.functional)) {
      p.functional = *preset;
    } else {
      std::ifstream in(*cfg.functional);
      if (!in) throw InputError("--functional: '" + *cfg.functional + "' is neither a preset nor a readable file");
      try {
        p.functional = parse_functional(Json::parse(in));
      } catch (const Json::exception& e) {
        throw InputError(std::string("functional file: ") + e.what());
      }
    }
  }
  return p;
}

inline std::string join_one_based(const std::vector<int>& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i] + 1;
  out << ")";
  return out.str();
}

/// Ordered key/value report rendered as aligned text or JSON.
class Report {
 public:
  void add(const std::string& key, Json value) { json_[key] = std::move(value); }
  void fail(const std::string& message) {
    if (failure_.empty()) failure_ = message;
  }
  bool failed() const { return !failure_.empty(); }
  const std::string& failure() const { return failure_; }
  Json& json() { return json_; }

  void write(std::ostream& out, OutputFormat format, bool timestamp) {
    json_["status"] = failed() ? "FAIL" : "PASS";
    if (failed()) json_["failure"] = failure_;
    if (format == OutputFormat::json) {
      out << json_.dump(2) << "\n";
      return;
    }
    if (format == OutputFormat::csv) {
      out << "key,value\n";
      for (const auto& item : json_.items()) out << item.key() << "," << render(item.value(), true) << "\n";
      return;
    }
    if (timestamp) {
      const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      out << std::left << std::setw(28) << "generated_at" << buf << "\n";
    }
    for (const auto& item : json_.items()) {
      out << std::left << std::setw(28) << item.key() << render(item.value(), false) << "\n";
    }
  }

 private:
  static std::string render(const Json& v, bool quote) {
    if (v.is_number_float()) {
      std::ostringstream s;
      s << std::setprecision(12) << v.get<double>();
      return s.str();
    }
    if (v.is_string()) return quote ? "\"" + v.get<std::string>() + "\"" : v.get<std::string>();
    const std::string dumped = v.dump();
    return quote ? "\"" + [&] {
      std::string e;
      for (char c : dumped) e += c == '"' ? std::string("\"\"") : std::string(1, c);
      return e;
    }() + "\"" : dumped;
  }

  Json json_ = Json::object();
  std::string failure_;
};

struct Evaluation {
  std::optional<SignedScenarioDistribution> nu;
};

inline Json settings_to_json(const Settings& settings) {
  Json j = Json::array();
  for (const auto& site : settings) {
    Json row = Json::array();
    for (const auto& o : site) row.push_back(io::matrix_to_json(o.matrix().matrix()));
    j.push_back(std::move(row));
  }
  return j;
}

inline void add_norm_section(Report& rep, const Problem& p, const SignedScenarioDistribution& nu, double tol) {
  const Scenario& sc = p.scenario;
  rep.add("outcome_space_size", nu.outcome_space().size());
  rep.add("total_mass", nu.total_mass());
  rep.add("min_value", nu.min_value());
  rep.add("tv_norm", nu.tv_norm());
  if (std::abs(nu.total_mass() - 1.0) > tol) rep.fail("total mass " + format_real(nu.total_mass()) + " differs from 1");
  if (sc.num_sites() >= 2) {
    const double norm_bound = lqhv_norm_bound(sc.num_sites(), sc.local_dim(), sc.num_settings());
    rep.add("lqhv_norm_bound", norm_bound);
    rep.add("combined_bound", combined_bound(sc.num_sites(), sc.local_dim(), sc.num_settings()).value);
    if (nu.tv_norm() > norm_bound + tol) {
      rep.fail("tv_norm " + format_real(nu.tv_norm()) + " exceeds the norm bound " + format_real(norm_bound));
    }
  }
  if (sc.num_sites() == 2) {
    const int other = 1 - sc.pivot();
    std::vector<HermitianMatrix> ys;
    for (int s = 0; s < sc.num_settings(); ++s) ys.push_back(sc.observable(other, s).matrix());
    try {
      const double chain = chain_overlap_bound(partial_trace(p.state, {other + 1}), ys);
      rep.add("chain_overlap_bound", chain);
      if (nu.tv_norm() > chain + tol) rep.fail("tv_norm exceeds the chain overlap bound " + format_real(chain));
    } catch (const UnsupportedError&) {
      rep.add("chain_overlap_bound", "n/a (degenerate spectrum)");
    }
  }
}

inline void add_marginal_section(Report& rep, const SignedScenarioDistribution& nu, const DensityMatrix& rho,
                                 double tol) {
  const MarginalCheck check = max_marginal_deviation(nu, rho);
  rep.add("max_marginal_deviation", check.max_deviation);
  rep.add("worst_settings", join_one_based(check.settings));
  rep.add("worst_outcomes", join_one_based(check.outcomes));
  if (check.max_deviation > tol) {
    rep.fail("marginal deviation " + format_real(check.max_deviation) + " at settings " +
             join_one_based(check.settings) + " outcomes " + join_one_based(check.outcomes) + ": model " +
             format_real(check.model_value) + " vs quantum " + format_real(check.quantum_value));
  }
}

inline void add_violation_section(Report& rep, const Problem& p, const EffectiveRun& run,
                                  const std::optional<SignedScenarioDistribution>& nu) {
  if (!p.functional) return;
  const BellFunctional& f = *p.functional;
  rep.add("functional", f.name());
  ViolationResult fixed;
  try {
    fixed = violation_ratio(f, p.state, p.scenario.settings(), run.threads);
  } catch (const AssertionFailure& e) {
    rep.fail(e.what());
    return;
  }
  rep.add("classical_bound", fixed.classical_bound);
  rep.add("quantum_value", fixed.quantum_value);
  rep.add("ratio", fixed.ratio);
  rep.add("ratio_upper_bound", fixed.upper_bound);
  if (nu && fixed.ratio > nu->tv_norm() + kRatioSlack) {
    rep.fail("ratio " + format_real(fixed.ratio) + " exceeds tv_norm " + format_real(nu->tv_norm()));
  }
  if (!run.seesaw) return;
  std::mt19937_64 rng(run.seed);
  Settings start;
  for (int n = 0; n < f.num_sites(); ++n) {
    std::vector<Observable> row;
    for (int s = 0; s < f.num_settings(); ++s) row.emplace_back(random_dichotomic(p.state.local_dim(), rng));
    start.push_back(std::move(row));
  }
  ViolationResult opt;
  try {
    opt = seesaw_optimize(f, p.state, std::move(start), run.iters, 1e-12, run.threads);
  } catch (const AssertionFailure& e) {
    rep.fail(e.what());
    return;
  }
  rep.add("seesaw_iterations", static_cast<int>(opt.trace.size()) - 1);
  rep.add("seesaw_quantum_value", opt.quantum_value);
  rep.add("seesaw_ratio", opt.ratio);
  rep.add("seesaw_trace", opt.trace);
  rep.add("seesaw_settings", settings_to_json(opt.settings));
  for (std::size_t k = 1; k < opt.trace.size(); ++k) {
    if (opt.trace[k] < opt.trace[k - 1] - 1e-12) rep.fail("see-saw objective decreased at iteration " + std::to_string(k));
  }
  BuildOptions build{run.threads, run.max_outcomes};
  Scenario optimized(p.state.local_dim(), opt.settings, p.scenario.pivot());
  const auto opt_nu = build_scenario_distribution(p.state, optimized, build);
  rep.add("seesaw_tv_norm", opt_nu.tv_norm());
  if (opt.ratio > opt_nu.tv_norm() + kRatioSlack) rep.fail("see-saw ratio exceeds tv_norm of its distribution");
}

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == Command::bounds) {
    const auto rows = bounds_table(cfg.sites, cfg.dims, cfg.settings);
    if (cfg.format == OutputFormat::csv) {
      write_bounds_csv(rows, out);
    } else if (cfg.format == OutputFormat::json) {
      Json j = Json::array();
      for (const auto& r : rows) j.push_back(bound_report_to_json(r));
      out << j.dump(2) << "\n";
    } else {
      write_bounds_text(rows, out);
    }
    for (const auto& r : rows) {
      if (!(r.combined_bound <= r.lqhv_norm_bound)) return kExitAssertion;
    }
    return kExitPass;
  }

  Problem p = load_problem(cfg);
  const EffectiveRun run = resolve(cfg, p.run);
  const BuildOptions build{run.threads, run.max_outcomes};

  if (cfg.command == Command::violate) {
    if (!p.functional) throw InputError("violate needs a functional (--functional or the case file)");
    Report rep;
    add_violation_section(rep, p, run, std::nullopt);
    rep.write(out, cfg.format, !cfg.no_timestamp);
    if (rep.failed()) err << "lqhv: " << rep.failure() << "\n";
    return rep.failed() ? kExitAssertion : kExitPass;
  }

  const SignedScenarioDistribution nu = build_scenario_distribution(p.state, p.scenario, build);

  if (cfg.command == Command::build) {
    if (cfg.format == OutputFormat::csv) {
      write_distribution_csv(nu, out);
    } else if (cfg.format == OutputFormat::json) {
      out << distribution_to_json(nu).dump(2) << "\n";
    } else {
      Report rep;
      rep.add("outcome_space_size", nu.outcome_space().size());
      rep.add("total_mass", nu.total_mass());
      rep.add("min_value", nu.min_value());
      rep.add("tv_norm", nu.tv_norm());
      rep.write(out, cfg.format, !cfg.no_timestamp);
    }
    return std::abs(nu.total_mass() - 1.0) > run.tol ? kExitAssertion : kExitPass;
  }

  Report rep;
  rep.add("N", p.scenario.num_sites());
  rep.add("d", p.scenario.local_dim());
  rep.add("S", p.scenario.num_settings());
  rep.add("pivot_site", p.scenario.pivot() + 1);
  switch (cfg.command) {
    case Command::check_marginals:
      add_marginal_section(rep, nu, p.state, run.tol);
      break;
    case Command::tvnorm:
      add_norm_section(rep, p, nu, run.tol);
      break;
    default:
      add_norm_section(rep, p, nu, run.tol);
      add_marginal_section(rep, nu, p.state, run.tol);
      add_violation_section(rep, p, run, nu);
      break;
  }
  rep.write(out, cfg.format, !cfg.no_timestamp);
  if (rep.failed()) err << "lqhv: " << rep.failure() << "\n";
  return rep.failed() ? kExitAssertion : kExitPass;
}

}  // namespace cli

/// Runs one command, writing results to cfg.out_path (or `out`) and diagnostics to `err`.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* target = &out;
    if (cfg.out_path) {
      file.open(*cfg.out_path);
      if (!file) throw InputError("cannot write output file '" + *cfg.out_path + "'");
      target = &file;
    }
    return cli::execute(cfg, *target, err);
  } catch (const AssertionFailure& e) {
    err << "lqhv: assertion failed: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const Error& e) {
    err << "lqhv: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "lqhv: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace lqhv
