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
 * Bell functionals, exact classical bounds by enumeration of deterministic
 * local strategies, quantum values, violation ratios and see-saw ascent over
 * dichotomic observables.
 *
 * Settings and outcomes are 0-based. Outcome index k of an observable is its
 * k-th largest distinct eigenvalue, so for dichotomic observables index 0 is
 * +1 and index 1 is -1. A term may leave a site unmeasured (kUnmeasured),
 * which gives marginal probabilities and restricted correlators.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lqhv/bounds.hpp"
#include "lqhv/numeric.hpp"
#include "lqhv/qlinalg.hpp"
#include "lqhv/scenario.hpp"

namespace lqhv {

enum class FunctionalForm { correlation, probability };

inline constexpr int kUnmeasured = -1;
inline constexpr double kMaxStrategies = 1e8;
inline constexpr int kMaxMerminKlyshkoSites = 10;

struct BellTerm {
  std::vector<int> settings;  // per site, or kUnmeasured
  std::vector<int> outcomes;  // per site; probability form only
  double coefficient = 0.0;
};

class BellFunctional {
 public:
  BellFunctional(std::string name, FunctionalForm form, int num_sites, int num_settings, int num_outcomes,
                 std::vector<BellTerm> terms)
      : name_(std::move(name)),
        form_(form),
        num_sites_(num_sites),
        num_settings_(num_settings),
        num_outcomes_(num_outcomes),
        terms_(std::move(terms)) {
    if (num_sites_ < 1 || num_settings_ < 1) throw ValidationError("functional needs N >= 1 and S >= 1");
    if (form_ == FunctionalForm::correlation && num_outcomes_ != 2) {
      throw ValidationError("correlation functionals are dichotomic (2 outcomes)");
    }
    if (num_outcomes_ < 1) throw ValidationError("functional needs at least one outcome per setting");
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const BellTerm& term = terms_[t];
      const std::string where = "term " + std::to_string(t + 1) + ": ";
      if (static_cast<int>(term.settings.size()) != num_sites_) throw ValidationError(where + "wrong settings length");
      for (int s : term.settings) {
        if (s != kUnmeasured && (s < 0 || s >= num_settings_)) throw ValidationError(where + "setting out of range");
      }
      if (form_ == FunctionalForm::probability) {
        if (static_cast<int>(term.outcomes.size()) != num_sites_) throw ValidationError(where + "wrong outcomes length");
        for (int n = 0; n < num_sites_; ++n) {
          if (term.settings[n] == kUnmeasured) continue;
          if (term.outcomes[n] < 0 || term.outcomes[n] >= num_outcomes_) {
            throw ValidationError(where + "outcome out of range");
          }
        }
      } else if (!term.outcomes.empty()) {
        throw ValidationError(where + "correlation terms take no outcomes");
      }
    }
  }

  const std::string& name() const { return name_; }
  FunctionalForm form() const { return form_; }
  int num_sites() const { return num_sites_; }
  int num_settings() const { return num_settings_; }
  int num_outcomes() const { return num_outcomes_; }
  const std::vector<BellTerm>& terms() const { return terms_; }

  BellFunctional scaled(double factor) const {
    std::vector<BellTerm> terms = terms_;
    for (auto& t : terms) t.coefficient *= factor;
    return BellFunctional(name_, form_, num_sites_, num_settings_, num_outcomes_, std::move(terms));
  }

 private:
  std::string name_;
  FunctionalForm form_;
  int num_sites_;
  int num_settings_;
  int num_outcomes_;
  std::vector<BellTerm> terms_;
};

/// E11 + E12 + E21 - E22.
inline BellFunctional chsh() {
  return BellFunctional("chsh", FunctionalForm::correlation, 2, 2, 2,
                        {{{0, 0}, {}, 1.0}, {{0, 1}, {}, 1.0}, {{1, 0}, {}, 1.0}, {{1, 1}, {}, -1.0}});
}

/// Clauser-Horne functional on "+" outcomes,
///   p(++|11) + p(++|12) + p(++|21) - p(++|22) - pA(+|1) - pB(+|1),
/// shifted by half the total probability of context (1,1) so that its
/// deterministic values are symmetric about zero. The shift is itself a sum
/// of joint probabilities, so the functional stays homogeneous.
inline BellFunctional ch() {
  constexpr int u = kUnmeasured;
  std::vector<BellTerm> terms = {
      {{0, 0}, {0, 0}, 1.0},  {{0, 1}, {0, 0}, 1.0},  {{1, 0}, {0, 0}, 1.0}, {{1, 1}, {0, 0}, -1.0},
      {{0, u}, {0, 0}, -1.0}, {{u, 0}, {0, 0}, -1.0},
  };
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) terms.push_back({{0, 0}, {a, b}, 0.5});
  return BellFunctional("ch", FunctionalForm::probability, 2, 2, 2, std::move(terms));
}

/// Mermin-Klyshko functional B_N from
///   B_1 = A_1,  B_n = (1/2) B_{n-1}(A_n + A'_n) + (1/2) B'_{n-1}(A_n - A'_n),
/// where B' swaps primed and unprimed settings throughout.
inline BellFunctional mermin_klyshko(int num_sites) {
  if (num_sites < 2) throw ValidationError("Mermin-Klyshko functional needs N >= 2");
  if (num_sites > kMaxMerminKlyshkoSites) {
    throw SizeError("Mermin-Klyshko functional supports N <= " + std::to_string(kMaxMerminKlyshkoSites));
  }
  using Poly = std::map<std::vector<int>, double>;
  Poly b{{{0}, 1.0}};
  Poly b_swapped{{{1}, 1.0}};
  auto extend = [](Poly& out, const Poly& poly, int setting, double factor) {
    for (const auto& [key, coeff] : poly) {
      std::vector<int> k = key;
      k.push_back(setting);
      out[k] += factor * coeff;
    }
  };
  for (int n = 1; n < num_sites; ++n) {
    Poly next, next_swapped;
    extend(next, b, 0, 0.5);
    extend(next, b, 1, 0.5);
    extend(next, b_swapped, 0, 0.5);
    extend(next, b_swapped, 1, -0.5);
    extend(next_swapped, b_swapped, 1, 0.5);
    extend(next_swapped, b_swapped, 0, 0.5);
    extend(next_swapped, b, 1, 0.5);
    extend(next_swapped, b, 0, -0.5);
    b = std::move(next);
    b_swapped = std::move(next_swapped);
  }
  std::vector<BellTerm> terms;
  for (const auto& [key, coeff] : b) {
    if (std::abs(coeff) > 1e-15) terms.push_back({key, {}, coeff});
  }
  return BellFunctional("mk" + std::to_string(num_sites), FunctionalForm::correlation, num_sites, 2, 2,
                        std::move(terms));
}

/// Value of f on the deterministic strategy strategy[site][setting] = outcome index.
inline double evaluate_deterministic(const BellFunctional& f, const std::vector<std::vector<int>>& strategy) {
  double acc = 0.0;
  for (const auto& term : f.terms()) {
    double v = term.coefficient;
    for (int n = 0; n < f.num_sites() && v != 0.0; ++n) {
      const int s = term.settings[n];
      if (s == kUnmeasured) continue;
      const int x = strategy[n][s];
      if (f.form() == FunctionalForm::correlation) {
        v *= x == 0 ? 1.0 : -1.0;
      } else if (x != term.outcomes[n]) {
        v = 0.0;
      }
    }
    acc += v;
  }
  return acc;
}

/// Max |f| over deterministic local strategies. The last site's assignment is
/// optimized in closed form: every term touches at most one of its settings,
/// so f is separable in them and the extremes are sums of per-setting extremes.
inline double classical_bound(const BellFunctional& f, unsigned threads = 1) {
  const int num_sites = f.num_sites();
  const int settings = f.num_settings();
  const int outcomes = f.num_outcomes();
  double per_site = detail::int_pow(outcomes, settings);
  if (detail::int_pow(per_site, num_sites) > kMaxStrategies) {
    throw SizeError("strategy space exceeds " + std::to_string(static_cast<long long>(kMaxStrategies)));
  }
  const MixedRadix site_strategies(std::vector<int>(settings, outcomes));
  const MixedRadix outer(std::vector<int>(num_sites - 1, static_cast<int>(site_strategies.size())));
  const int last = num_sites - 1;

  std::vector<double> chunk_best(std::max(1u, threads), 0.0);
  std::vector<std::vector<int>> decoded(site_strategies.size());
  for (std::size_t i = 0; i < site_strategies.size(); ++i) decoded[i] = site_strategies.decode(i);

  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), outer.size());
  const std::size_t chunk = (outer.size() + workers - 1) / workers;
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      double best = 0.0;
      std::vector<std::vector<int>> strategy(num_sites);
      std::vector<std::vector<double>> gain(settings, std::vector<double>(outcomes));
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(outer.size(), begin + chunk);
      for (std::size_t o = begin; o < end; ++o) {
        const std::vector<int> choice = outer.decode(o);
        for (int n = 0; n < last; ++n) strategy[n] = decoded[choice[n]];
        double constant = 0.0;
        for (auto& g : gain) std::fill(g.begin(), g.end(), 0.0);
        for (const auto& term : f.terms()) {
          double v = term.coefficient;
          for (int n = 0; n < last && v != 0.0; ++n) {
            const int s = term.settings[n];
            if (s == kUnmeasured) continue;
            const int x = strategy[n][s];
            if (f.form() == FunctionalForm::correlation) {
              v *= x == 0 ? 1.0 : -1.0;
            } else if (x != term.outcomes[n]) {
              v = 0.0;
            }
          }
          if (v == 0.0) continue;
          const int s_last = term.settings[last];
          if (s_last == kUnmeasured) {
            constant += v;
          } else if (f.form() == FunctionalForm::correlation) {
            gain[s_last][0] += v;
            gain[s_last][1] -= v;
          } else {
            gain[s_last][term.outcomes[last]] += v;
          }
        }
        double hi = constant, lo = constant;
        for (const auto& g : gain) {
          hi += *std::max_element(g.begin(), g.end());
          lo += *std::min_element(g.begin(), g.end());
        }
        best = std::max({best, std::abs(hi), std::abs(lo)});
      }
      chunk_best[w] = best;
    }
  });
  return *std::max_element(chunk_best.begin(), chunk_best.end());
}

namespace detail {

inline void check_settings(const BellFunctional& f, const DensityMatrix& rho, const Settings& settings) {
  if (static_cast<int>(settings.size()) != f.num_sites() || rho.num_sites() != f.num_sites()) {
    throw ValidationError("functional, state and settings disagree on the number of sites");
  }
  for (std::size_t n = 0; n < settings.size(); ++n) {
    if (static_cast<int>(settings[n].size()) != f.num_settings()) {
      throw ValidationError("site " + std::to_string(n + 1) + " needs " + std::to_string(f.num_settings()) +
                            " settings");
    }
    for (std::size_t s = 0; s < settings[n].size(); ++s) {
      const Observable& obs = settings[n][s];
      if (obs.matrix().dim() != rho.local_dim()) throw ValidationError("observable dimension does not match the state");
      if (f.form() == FunctionalForm::correlation) {
        for (double ev : obs.spectrum().eigenvalues) {
          if (std::abs(std::abs(ev) - 1.0) > 1e-10) {
            throw ValidationError("observable " + std::to_string(n + 1) + "." + std::to_string(s + 1) +
                                  " has eigenvalue " + std::to_string(ev) + " outside {-1,+1}");
          }
        }
      } else if (obs.num_outcomes() > f.num_outcomes()) {
        throw ValidationError("observable " + std::to_string(n + 1) + "." + std::to_string(s + 1) +
                              " has more outcomes than the functional");
      }
    }
  }
}

/// Local factor of a term at one site; identity when unmeasured.
inline Matrix term_factor(const BellFunctional& f, const BellTerm& term, const Settings& settings, int site,
                          int local_dim) {
  const int s = term.settings[site];
  if (s == kUnmeasured) return Matrix::Identity(local_dim, local_dim);
  const Observable& obs = settings[site][s];
  if (f.form() == FunctionalForm::correlation) return obs.matrix().matrix();
  // Outcomes absent from a degenerate observable's spectrum have zero probability.
  if (term.outcomes[site] >= obs.num_outcomes()) return Matrix::Zero(local_dim, local_dim);
  return obs.projector(term.outcomes[site]);
}

}  // namespace detail

/// Sum of coefficient * tr[rho (x)_n local factor] over the terms of f.
inline double quantum_value(const BellFunctional& f, const DensityMatrix& rho, const Settings& settings) {
  detail::check_settings(f, rho, settings);
  std::vector<double> terms;
  terms.reserve(f.terms().size());
  for (const auto& term : f.terms()) {
    std::vector<Matrix> factors;
    for (int n = 0; n < f.num_sites(); ++n) factors.push_back(detail::term_factor(f, term, settings, n, rho.local_dim()));
    terms.push_back(term.coefficient * rho.expectation(tensor_product(factors)));
  }
  return pairwise_sum(terms);
}

struct ViolationResult {
  double classical_bound = 0.0;
  double quantum_value = 0.0;
  double ratio = 0.0;        // |quantum_value| / classical_bound
  double upper_bound = 0.0;  // combined_bound(N, d, S)
  Settings settings;
  std::vector<double> trace;  // objective after each see-saw iteration, starting with the initial value
};

inline constexpr double kRatioSlack = 1e-6;

inline ViolationResult violation_ratio(const BellFunctional& f, const DensityMatrix& rho, const Settings& settings,
                                       unsigned threads = 1) {
  ViolationResult out;
  out.classical_bound = classical_bound(f, threads);
  if (!(out.classical_bound > 1e-12)) {
    throw DegenerateFunctionalError("functional '" + f.name() + "' has zero classical bound");
  }
  out.quantum_value = quantum_value(f, rho, settings);
  out.ratio = std::abs(out.quantum_value) / out.classical_bound;
  out.upper_bound = f.num_sites() >= 2 ? combined_bound(f.num_sites(), rho.local_dim(), f.num_settings()).value
                                       : std::numeric_limits<double>::infinity();
  out.settings = settings;
  out.trace = {out.quantum_value};
  if (out.ratio > out.upper_bound + kRatioSlack) {
    throw AssertionFailure("violation ratio " + std::to_string(out.ratio) + " exceeds the upper bound " +
                           std::to_string(out.upper_bound));
  }
  return out;
}

/// sgn(E) via spectral decomposition, with sgn(0) = +1.
inline HermitianMatrix sign_operator(const HermitianMatrix& e) {
  const Eigensystem eig = hermitian_eig(e);
  const Index n = e.dim();
  RVector signs(n);
  for (Index k = 0; k < n; ++k) signs(k) = eig.eigenvalues(k) >= 0.0 ? 1.0 : -1.0;
  return HermitianMatrix::symmetrized(eig.eigenvectors * signs.cast<Complex>().asDiagonal() *
                                      eig.eigenvectors.adjoint());
}

/// Operator E on one site such that the objective restricted to terms with
/// settings[site] == setting equals tr[X E].
inline HermitianMatrix effective_operator(const BellFunctional& f, const DensityMatrix& rho, const Settings& settings,
                                          int site, int setting) {
  const int d = rho.local_dim();
  const Index dim = rho.dim();
  Matrix others = Matrix::Zero(dim, dim);
  for (const auto& term : f.terms()) {
    if (term.settings[site] != setting) continue;
    std::vector<Matrix> factors;
    for (int n = 0; n < f.num_sites(); ++n) {
      factors.push_back(n == site ? Matrix::Identity(d, d) : detail::term_factor(f, term, settings, n, d));
    }
    others += term.coefficient * tensor_product(factors);
  }
  return HermitianMatrix::symmetrized(
      partial_trace_operator(others * rho.matrix(), {site + 1}, f.num_sites(), d));
}

/// Coordinate ascent: each sweep replaces every observable of site n by
/// sgn(E_n^{(s)}) with all other sites fixed, which never lowers the objective.
/// Stops after max_iters sweeps or when a sweep gains less than tol.
inline ViolationResult seesaw_optimize(const BellFunctional& f, const DensityMatrix& rho, Settings initial,
                                       int max_iters, double tol, unsigned threads = 1) {
  if (f.form() != FunctionalForm::correlation) {
    throw UnsupportedError("see-saw optimization supports dichotomic correlation functionals only");
  }
  if (max_iters < 0) throw ValidationError("max_iters must be non-negative");
  double value = quantum_value(f, rho, initial);
  std::vector<double> trace{value};
  Settings current = std::move(initial);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int n = 0; n < f.num_sites(); ++n) {
      std::vector<Observable> updated;
      for (int s = 0; s < f.num_settings(); ++s) {
        updated.emplace_back(sign_operator(effective_operator(f, rho, current, n, s)));
      }
      current[n] = std::move(updated);
    }
    const double next = quantum_value(f, rho, current);
    trace.push_back(next);
    const double gain = next - value;
    value = next;
    if (gain < tol) break;
  }
  ViolationResult out = violation_ratio(f, rho, current, threads);
  out.trace = std::move(trace);
  return out;
}

}  // namespace lqhv
