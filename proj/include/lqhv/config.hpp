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
 * JSON case files and exports.
 *
 * A case file is one JSON object with the sections
 *
 *   scenario   {num_sites, local_dim, num_settings, pivot_site, observables}
 *   state      {type: ghz | singlet | pure | explicit | random_mixed, ...}
 *   functional preset name or {name, form, num_sites, num_settings, num_outcomes, terms}
 *   run        {tol, seed, threads, cluster_tol, max_outcomes, optimize, iters}
 *
 * Complex numbers are [re, im] pairs and matrices are row-major arrays of
 * rows. Sites, settings and outcomes are 1-based in files; a setting of 0
 * in a functional term leaves that site unmeasured. Unknown keys are errors.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lqhv/bell.hpp"
#include "lqhv/bounds.hpp"
#include "lqhv/distribution.hpp"
#include "lqhv/presets.hpp"
#include "lqhv/qlinalg.hpp"
#include "lqhv/scenario.hpp"

namespace lqhv {

using Json = nlohmann::ordered_json;

/// Malformed case file or flag; carries the offending path.
class InputError : public Error {
 public:
  using Error::Error;
};

struct RunSection {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> cluster_tol;
  std::optional<std::size_t> max_outcomes;
  std::optional<std::string> optimize;
  std::optional<int> iters;
};

/// A fully validated case: state, scenario and optional functional.
struct Problem {
  DensityMatrix state;
  Scenario scenario;
  std::optional<BellFunctional> functional;
  RunSection run;
};

namespace io {

inline void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) throw InputError(where + ": unknown field '" + item.key() + "'");
  }
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

inline int get_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<int>();
}

inline double get_real(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  return v.get<double>();
}

inline Complex parse_complex(const Json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InputError(where + ": malformed complex entry, expected [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

inline Matrix parse_matrix(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw InputError(where + ": expected a non-empty array of rows");
  const std::size_t rows = v.size();
  Matrix m(rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != rows) {
      throw InputError(where + ": row " + std::to_string(i + 1) + " must have " + std::to_string(rows) + " entries");
    }
    for (std::size_t j = 0; j < rows; ++j) {
      m(i, j) = parse_complex(v[i][j], where + " entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  }
  return m;
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename F>
auto with_context(const std::string& where, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace io

inline Scenario parse_scenario(const Json& j, double cluster_tol = kDefaultClusterTol) {
  const std::string where = "scenario";
  io::check_keys(j, {"num_sites", "local_dim", "num_settings", "pivot_site", "observables"}, where);
  const int num_sites = io::get_int(io::require(j, "num_sites", where), where + ".num_sites");
  const int local_dim = io::get_int(io::require(j, "local_dim", where), where + ".local_dim");
  const int num_settings = io::get_int(io::require(j, "num_settings", where), where + ".num_settings");
  const int pivot = j.contains("pivot_site") ? io::get_int(j.at("pivot_site"), where + ".pivot_site") : 1;
  if (num_sites < 1 || local_dim < 1 || num_settings < 1) throw InputError(where + ": sizes must be positive");
  if (pivot < 1 || pivot > num_sites) throw InputError(where + ".pivot_site: must lie in 1.." + std::to_string(num_sites));
  const Json& obs = io::require(j, "observables", where);
  if (!obs.is_array() || static_cast<int>(obs.size()) != num_sites) {
    throw InputError(where + ".observables: expected one list per site (" + std::to_string(num_sites) + ")");
  }
  Settings settings;
  for (int n = 0; n < num_sites; ++n) {
    const std::string site_where = where + ".observables[" + std::to_string(n + 1) + "]";
    if (!obs[n].is_array() || static_cast<int>(obs[n].size()) != num_settings) {
      throw InputError(site_where + ": expected " + std::to_string(num_settings) + " observables");
    }
    std::vector<Observable> row;
    for (int s = 0; s < num_settings; ++s) {
      const std::string w = site_where + "[" + std::to_string(s + 1) + "]";
      const Matrix m = io::parse_matrix(obs[n][s], w);
      if (m.rows() != local_dim) {
        throw InputError(w + ": dimension mismatch, matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " but local_dim is " + std::to_string(local_dim));
      }
      row.push_back(io::with_context(w, [&] { return Observable(HermitianMatrix(m), cluster_tol); }));
    }
    settings.push_back(std::move(row));
  }
  return io::with_context(where, [&] { return Scenario(local_dim, std::move(settings), pivot - 1); });
}

inline Json scenario_to_json(const Scenario& sc) {
  Json j;
  j["num_sites"] = sc.num_sites();
  j["local_dim"] = sc.local_dim();
  j["num_settings"] = sc.num_settings();
  j["pivot_site"] = sc.pivot() + 1;
  Json obs = Json::array();
  for (const auto& site : sc.settings()) {
    Json row = Json::array();
    for (const auto& o : site) row.push_back(io::matrix_to_json(o.matrix().matrix()));
    obs.push_back(std::move(row));
  }
  j["observables"] = std::move(obs);
  return j;
}

inline StateSpec parse_state_spec(const Json& j, std::uint64_t default_seed = 0) {
  const std::string where = "state";
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  const Json& type = io::require(j, "type", where);
  if (!type.is_string()) throw InputError(where + ".type: expected a string");
  const std::string t = type.get<std::string>();
  auto sizes = [&](int& n, int& d) {
    n = io::get_int(io::require(j, "num_sites", where), where + ".num_sites");
    d = io::get_int(io::require(j, "local_dim", where), where + ".local_dim");
  };
  if (t == "singlet") {
    io::check_keys(j, {"type"}, where);
    return SingletState{};
  }
  if (t == "ghz") {
    io::check_keys(j, {"type", "num_sites", "local_dim"}, where);
    GhzState s;
    sizes(s.num_sites, s.local_dim);
    return s;
  }
  if (t == "random_mixed") {
    io::check_keys(j, {"type", "num_sites", "local_dim", "seed"}, where);
    RandomMixedState s;
    sizes(s.num_sites, s.local_dim);
    s.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : default_seed;
    return s;
  }
  if (t == "pure") {
    io::check_keys(j, {"type", "num_sites", "local_dim", "vector"}, where);
    PureState s;
    sizes(s.num_sites, s.local_dim);
    const Json& v = io::require(j, "vector", where);
    if (!v.is_array()) throw InputError(where + ".vector: expected an array of [re, im] pairs");
    s.amplitudes.resize(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      s.amplitudes(static_cast<Index>(i)) = io::parse_complex(v[i], where + ".vector[" + std::to_string(i + 1) + "]");
    }
    return s;
  }
  if (t == "explicit") {
    io::check_keys(j, {"type", "num_sites", "local_dim", "matrix"}, where);
    ExplicitState s;
    sizes(s.num_sites, s.local_dim);
    s.entries = io::parse_matrix(io::require(j, "matrix", where), where + ".matrix");
    return s;
  }
  throw InputError(where + ".type: unknown state type '" + t + "'");
}

inline DensityMatrix parse_state(const Json& j, std::uint64_t default_seed = 0) {
  const StateSpec spec = parse_state_spec(j, default_seed);
  return io::with_context("state", [&] { return make_state(spec); });
}

inline Json state_to_json(const DensityMatrix& rho) {
  Json j;
  j["type"] = "explicit";
  j["num_sites"] = rho.num_sites();
  j["local_dim"] = rho.local_dim();
  j["matrix"] = io::matrix_to_json(rho.matrix());
  return j;
}

inline BellFunctional parse_functional(const Json& j) {
  const std::string where = "functional";
  if (j.is_string()) {
    auto preset = functional_preset(j.get<std::string>());
    if (!preset) throw InputError(where + ": unknown functional preset '" + j.get<std::string>() + "'");
    return *preset;
  }
  io::check_keys(j, {"name", "form", "num_sites", "num_settings", "num_outcomes", "terms"}, where);
  const std::string name = j.contains("name") ? j.at("name").get<std::string>() : "custom";
  const Json& form_json = io::require(j, "form", where);
  if (!form_json.is_string()) throw InputError(where + ".form: expected a string");
  const std::string form_name = form_json.get<std::string>();
  FunctionalForm form;
  if (form_name == "correlation") {
    form = FunctionalForm::correlation;
  } else if (form_name == "probability") {
    form = FunctionalForm::probability;
  } else {
    throw InputError(where + ".form: expected 'correlation' or 'probability'");
  }
  const int num_sites = io::get_int(io::require(j, "num_sites", where), where + ".num_sites");
  const int num_settings = io::get_int(io::require(j, "num_settings", where), where + ".num_settings");
  const int num_outcomes = j.contains("num_outcomes") ? io::get_int(j.at("num_outcomes"), where + ".num_outcomes") : 2;
  const Json& terms_json = io::require(j, "terms", where);
  if (!terms_json.is_array()) throw InputError(where + ".terms: expected an array");
  std::vector<BellTerm> terms;
  for (std::size_t t = 0; t < terms_json.size(); ++t) {
    const std::string tw = where + ".terms[" + std::to_string(t + 1) + "]";
    const Json& tj = terms_json[t];
    io::check_keys(tj, {"settings", "outcomes", "coefficient"}, tw);
    BellTerm term;
    term.coefficient = io::get_real(io::require(tj, "coefficient", tw), tw + ".coefficient");
    const Json& st = io::require(tj, "settings", tw);
    if (!st.is_array()) throw InputError(tw + ".settings: expected an array");
    for (const auto& s : st) term.settings.push_back(io::get_int(s, tw + ".settings") - 1);
    if (tj.contains("outcomes")) {
      for (const auto& x : tj.at("outcomes")) term.outcomes.push_back(io::get_int(x, tw + ".outcomes") - 1);
    }
    terms.push_back(std::move(term));
  }
  return io::with_context(where, [&] {
    return BellFunctional(name, form, num_sites, num_settings, num_outcomes, std::move(terms));
  });
}

inline Json functional_to_json(const BellFunctional& f) {
  Json j;
  j["name"] = f.name();
  j["form"] = f.form() == FunctionalForm::correlation ? "correlation" : "probability";
  j["num_sites"] = f.num_sites();
  j["num_settings"] = f.num_settings();
  j["num_outcomes"] = f.num_outcomes();
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json tj;
    Json st = Json::array();
    for (int s : t.settings) st.push_back(s + 1);
    tj["settings"] = std::move(st);
    if (f.form() == FunctionalForm::probability) {
      Json oc = Json::array();
      for (std::size_t n = 0; n < t.outcomes.size(); ++n) oc.push_back(t.settings[n] == kUnmeasured ? 0 : t.outcomes[n] + 1);
      tj["outcomes"] = std::move(oc);
    }
    tj["coefficient"] = t.coefficient;
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline RunSection parse_run_section(const Json& j) {
  const std::string where = "run";
  io::check_keys(j, {"tol", "seed", "threads", "cluster_tol", "max_outcomes", "optimize", "iters"}, where);
  RunSection r;
  if (j.contains("tol")) r.tol = io::get_real(j.at("tol"), where + ".tol");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InputError(where + ".seed: expected an unsigned integer");
    r.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("threads")) r.threads = static_cast<unsigned>(io::get_int(j.at("threads"), where + ".threads"));
  if (j.contains("cluster_tol")) r.cluster_tol = io::get_real(j.at("cluster_tol"), where + ".cluster_tol");
  if (j.contains("max_outcomes")) {
    r.max_outcomes = static_cast<std::size_t>(io::get_int(j.at("max_outcomes"), where + ".max_outcomes"));
  }
  if (j.contains("optimize")) {
    if (!j.at("optimize").is_string()) throw InputError(where + ".optimize: expected a string");
    r.optimize = j.at("optimize").get<std::string>();
    if (*r.optimize != "seesaw" && *r.optimize != "none") throw InputError(where + ".optimize: expected 'seesaw' or 'none'");
  }
  if (j.contains("iters")) r.iters = io::get_int(j.at("iters"), where + ".iters");
  return r;
}

/// Parses a whole case document. cluster_tol applies to every observable.
inline Problem parse_problem(const Json& j, double cluster_tol = kDefaultClusterTol) {
  io::check_keys(j, {"scenario", "state", "functional", "run"}, "config");
  RunSection run = j.contains("run") ? parse_run_section(j.at("run")) : RunSection{};
  const double ctol = run.cluster_tol.value_or(cluster_tol);
  Scenario scenario = parse_scenario(io::require(j, "scenario", "config"), ctol);
  DensityMatrix state = parse_state(io::require(j, "state", "config"), run.seed.value_or(0));
  if (state.num_sites() != scenario.num_sites() || state.local_dim() != scenario.local_dim()) {
    throw InputError("state: dimension mismatch with scenario (" + std::to_string(state.num_sites()) + " sites of dim " +
                     std::to_string(state.local_dim()) + " vs " + std::to_string(scenario.num_sites()) +
                     " sites of dim " + std::to_string(scenario.local_dim()) + ")");
  }
  std::optional<BellFunctional> functional;
  if (j.contains("functional")) functional = parse_functional(j.at("functional"));
  return Problem{std::move(state), std::move(scenario), std::move(functional), run};
}

inline Json problem_to_json(const Problem& p) {
  Json j;
  j["scenario"] = scenario_to_json(p.scenario);
  j["state"] = state_to_json(p.state);
  if (p.functional) j["functional"] = functional_to_json(*p.functional);
  return j;
}

inline Problem load_problem_file(const std::string& path, double cluster_tol = kDefaultClusterTol) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_problem(j, cluster_tol);
  } catch (const Json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

inline Problem problem_from_preset(const std::string& name) {
  auto preset = case_preset(name);
  if (!preset) throw InputError("unknown preset '" + name + "'");
  DensityMatrix state = make_state(preset->state);
  return Problem{std::move(state), Scenario(preset->local_dim, preset->settings), preset->functional, {}};
}

// ---------------------------------------------------------------------------
// Exports.

inline std::string format_real(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

/// Columns "site.setting" (1-based) holding eigenvalues, then the value.
inline void write_distribution_csv(const SignedScenarioDistribution& nu, std::ostream& out) {
  const Scenario& sc = nu.scenario();
  for (int n = 0; n < sc.num_sites(); ++n)
    for (int s = 0; s < sc.num_settings(); ++s) out << n + 1 << "." << s + 1 << ",";
  out << "value\n";
  const MixedRadix& space = nu.outcome_space();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const std::vector<int> digits = space.decode(i);
    for (int n = 0; n < sc.num_sites(); ++n)
      for (int s = 0; s < sc.num_settings(); ++s) {
        out << format_real(sc.observable(n, s).eigenvalue(digits[sc.coordinate(n, s)])) << ",";
      }
    out << format_real(nu.values()[i]) << "\n";
  }
}

inline Json distribution_to_json(const SignedScenarioDistribution& nu) {
  Json j;
  j["scenario"] = scenario_to_json(nu.scenario());
  j["order"] = "mixed-radix, site-major, setting-minor, last coordinate fastest";
  j["values"] = nu.values();
  j["total_mass"] = nu.total_mass();
  j["tv_norm"] = nu.tv_norm();
  return j;
}

inline Json bound_component_to_json(const BoundComponent& c) {
  Json j;
  j["name"] = c.name;
  if (c.value) {
    j["lo"] = c.value->lo;
    j["hi"] = c.value->hi;
  } else {
    j["lo"] = nullptr;
    j["hi"] = nullptr;
  }
  j["source"] = c.source;
  j["exact"] = c.exact;
  return j;
}

inline Json bound_report_to_json(const BoundReport& r) {
  Json j;
  j["N"] = r.num_sites;
  j["d"] = r.local_dim;
  j["S"] = r.num_settings;
  j["lqhv_norm_bound"] = r.lqhv_norm_bound;
  j["combined_bound"] = r.combined_bound;
  j["components"] = Json::array();
  for (const auto& c : r.component_bounds) j["components"].push_back(bound_component_to_json(c));
  j["literature"] = Json::array();
  for (const auto& c : r.literature) j["literature"].push_back(bound_component_to_json(c));
  j["grothendieck_real"] = Json::array({r.grothendieck_real.lo, r.grothendieck_real.hi});
  j["grothendieck_real_order3"] = Json::array({r.grothendieck_real_order3.lo, r.grothendieck_real_order3.hi});
  j["improves_on_literature"] = r.improves_on_literature();
  return j;
}

inline std::string interval_text(const std::optional<Interval>& v) {
  if (!v) return "~";
  std::ostringstream out;
  out << std::setprecision(6);
  if (v->is_point()) {
    out << v->lo;
  } else {
    out << "[" << v->lo << "," << v->hi << "]";
  }
  return out.str();
}

/// One row per exact literature comparison; approximate entries carry no
/// number and appear only in the text and JSON tables.
inline void write_bounds_csv(const std::vector<BoundReport>& rows, std::ostream& out) {
  out << "N,d,S,lqhv_norm_bound,combined_bound,literature,literature_lo,literature_hi,improves\n";
  for (const auto& r : rows) {
    for (const auto& lit : r.literature) {
      if (!lit.exact || !lit.value) continue;
      out << r.num_sites << "," << r.local_dim << "," << r.num_settings << "," << format_real(r.lqhv_norm_bound)
          << "," << format_real(r.combined_bound) << "," << lit.name << "," << format_real(lit.value->lo) << ","
          << format_real(lit.value->hi) << "," << (r.combined_bound < lit.value->lo ? "yes" : "no") << "\n";
    }
  }
}

inline void write_bounds_text(const std::vector<BoundReport>& rows, std::ostream& out) {
  out << std::left << std::setw(4) << "N" << std::setw(4) << "d" << std::setw(4) << "S" << std::setw(14) << "lqhv-norm"
      << std::setw(14) << "combined"
      << "literature\n";
  for (const auto& r : rows) {
    std::ostringstream lit;
    for (std::size_t k = 0; k < r.literature.size(); ++k) {
      if (k) lit << "  ";
      lit << r.literature[k].name << "=" << interval_text(r.literature[k].value);
    }
    std::ostringstream a, b;
    a << std::setprecision(8) << r.lqhv_norm_bound;
    b << std::setprecision(8) << r.combined_bound;
    out << std::left << std::setw(4) << r.num_sites << std::setw(4) << r.local_dim << std::setw(4) << r.num_settings
        << std::setw(14) << a.str() << std::setw(14) << b.str() << lit.str() << "\n";
  }
}

}  // namespace lqhv
