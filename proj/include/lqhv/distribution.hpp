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
 * Signed local distribution over the outcome space of a scenario that
 * reproduces every joint measurement probability of an N-qudit state.
 *
 * One site (the pivot) carries conditional weights; all other sites enter
 * through the weight operator of a conditioning tuple c, which fixes an
 * outcome for every (non-pivot site, setting) pair:
 *
 *   T_c = (x)_{n != pivot} (1/2) (P_n^1(c) P_n^2(c) ... P_n^S(c) + h.c.)
 *
 * With T_c = T_c^+ - T_c^- and w_c^{+/-} = tr[rho (I (x) T_c^{+/-})], the
 * conditional weights are
 *
 *   alpha_s^{+/-}(x | c) = tr[rho (P_pivot^s(x) (x) T_c^{+/-})] / w_c^{+/-}
 *
 * and the distribution is
 *
 *   nu(omega) = prod_s alpha_s^+(x_s | c) w_c^+ - prod_s alpha_s^-(x_s | c) w_c^-.
 *
 * Summing T_c over every tuple with a fixed outcome for one setting per site
 * collapses to the corresponding product of projectors, which is why the
 * marginals of nu equal the quantum joint probabilities.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lqhv/numeric.hpp"
#include "lqhv/qlinalg.hpp"
#include "lqhv/scenario.hpp"

namespace lqhv {

inline constexpr double kDegenerateMass = 1e-12;
inline constexpr std::size_t kDefaultMaxOutcomes = 1'000'000;

struct BuildOptions {
  unsigned threads = 1;
  std::size_t max_outcomes = kDefaultMaxOutcomes;
};

struct WeightOperator {
  std::vector<int> condition;  // outcome index per (non-pivot site, setting)
  HermitianMatrix op;          // acts on the non-pivot sites in ascending order
  PosNegParts parts;
};

struct WeightOperatorTable {
  std::vector<int> non_pivot_sites;  // 0-based, ascending
  MixedRadix condition_space;
  std::vector<WeightOperator> entries;  // indexed by condition_space
};

namespace detail {

inline std::vector<int> non_pivot_sites(const Scenario& scenario) {
  std::vector<int> out;
  for (int n = 0; n < scenario.num_sites(); ++n)
    if (n != scenario.pivot()) out.push_back(n);
  return out;
}

inline std::vector<int> one_based(const std::vector<int>& sites) {
  std::vector<int> out(sites);
  for (int& s : out) ++s;
  return out;
}

/// (1/2)(P^1(x^1) ... P^S(x^S) + h.c.) for one site.
inline Matrix site_chain_operator(const Scenario& scenario, int site, std::span<const int> outcomes) {
  Matrix prod = scenario.observable(site, 0).projector(outcomes[0]);
  for (int s = 1; s < scenario.num_settings(); ++s) prod = prod * scenario.observable(site, s).projector(outcomes[s]);
  return (prod + prod.adjoint()) * 0.5;
}

}  // namespace detail

/// Weight operator and its positive/negative parts for every conditioning tuple.
/// With a single site there is one empty tuple whose operator is the scalar 1.
inline WeightOperatorTable build_weight_operators(const Scenario& scenario, unsigned threads = 1) {
  WeightOperatorTable table;
  table.non_pivot_sites = detail::non_pivot_sites(scenario);
  std::vector<int> radices;
  for (int n : table.non_pivot_sites)
    for (int s = 0; s < scenario.num_settings(); ++s) radices.push_back(scenario.observable(n, s).num_outcomes());
  table.condition_space = MixedRadix(std::move(radices));
  table.entries.resize(table.condition_space.size());

  const int settings = scenario.num_settings();
  parallel_for(table.entries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      WeightOperator& entry = table.entries[c];
      entry.condition = table.condition_space.decode(c);
      Matrix op;
      if (table.non_pivot_sites.empty()) {
        op = Matrix::Identity(1, 1);
      } else {
        std::vector<Matrix> factors;
        for (std::size_t j = 0; j < table.non_pivot_sites.size(); ++j) {
          factors.push_back(detail::site_chain_operator(
              scenario, table.non_pivot_sites[j],
              std::span<const int>(entry.condition).subspan(j * settings, settings)));
        }
        op = tensor_product(factors);
      }
      entry.op = HermitianMatrix::symmetrized(op);
      entry.parts = pos_neg_parts(entry.op);
    }
  });
  return table;
}

/// Conditional weights of one conditioning tuple.
struct ConditionalWeightEntry {
  std::vector<std::vector<double>> plus;   // [pivot setting][outcome]
  std::vector<std::vector<double>> minus;
  double plus_mass = 0.0;   // tr[rho (I (x) T^+)]
  double minus_mass = 0.0;  // tr[rho (I (x) T^-)]
};

struct ConditionalWeights {
  std::vector<ConditionalWeightEntry> entries;  // indexed like WeightOperatorTable::entries
};

namespace detail {

/// Probability vector proportional to max(0, numerators); uniform when the mass is degenerate.
inline std::vector<double> normalize_weights(std::vector<double> numerators, double mass) {
  double total = 0.0;
  for (double& v : numerators) {
    v = std::max(0.0, v);
    total += v;
  }
  if (!(mass > kDegenerateMass) || !(total > 0.0)) {
    return std::vector<double>(numerators.size(), 1.0 / static_cast<double>(numerators.size()));
  }
  for (double& v : numerators) v /= total;
  return numerators;
}

inline void check_state(const DensityMatrix& rho, const Scenario& scenario) {
  if (rho.num_sites() != scenario.num_sites() || rho.local_dim() != scenario.local_dim()) {
    throw ValidationError("state is " + std::to_string(rho.num_sites()) + " sites of dimension " +
                          std::to_string(rho.local_dim()) + " but the scenario has " +
                          std::to_string(scenario.num_sites()) + " sites of dimension " +
                          std::to_string(scenario.local_dim()));
  }
}

}  // namespace detail

inline ConditionalWeights conditional_weights(const DensityMatrix& rho, const Scenario& scenario,
                                              const WeightOperatorTable& table, unsigned threads = 1) {
  detail::check_state(rho, scenario);
  const int num_sites = scenario.num_sites();
  const int d = scenario.local_dim();
  const int pivot = scenario.pivot();
  const bool single_site = table.non_pivot_sites.empty();
  const std::vector<int> keep = detail::one_based(table.non_pivot_sites);

  // reduced[s][x] = tr_pivot[rho (P_pivot^s(x) (x) I)], an operator on the non-pivot sites.
  Matrix rest_state = single_site ? Matrix::Constant(1, 1, 1.0) : partial_trace_operator(rho.matrix(), keep, num_sites, d);
  std::vector<std::vector<Matrix>> reduced(scenario.num_settings());
  for (int s = 0; s < scenario.num_settings(); ++s) {
    const Observable& obs = scenario.observable(pivot, s);
    for (int x = 0; x < obs.num_outcomes(); ++x) {
      const Matrix weighted = rho.matrix() * embed_operator(obs.projector(x), pivot + 1, num_sites, d);
      reduced[s].push_back(single_site ? Matrix::Constant(1, 1, weighted.trace())
                                       : partial_trace_operator(weighted, keep, num_sites, d));
    }
  }

  ConditionalWeights out;
  out.entries.resize(table.entries.size());
  parallel_for(table.entries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const PosNegParts& parts = table.entries[c].parts;
      ConditionalWeightEntry& entry = out.entries[c];
      entry.plus_mass = trace_product(rest_state, parts.positive.matrix()).real();
      entry.minus_mass = trace_product(rest_state, parts.negative.matrix()).real();
      for (int s = 0; s < scenario.num_settings(); ++s) {
        std::vector<double> plus, minus;
        for (const Matrix& r : reduced[s]) {
          plus.push_back(trace_product(r, parts.positive.matrix()).real());
          minus.push_back(trace_product(r, parts.negative.matrix()).real());
        }
        entry.plus.push_back(detail::normalize_weights(std::move(plus), entry.plus_mass));
        entry.minus.push_back(detail::normalize_weights(std::move(minus), entry.minus_mass));
      }
    }
  });
  return out;
}

/// Table of signed values over the outcome space of a scenario.
class SignedScenarioDistribution {
 public:
  SignedScenarioDistribution(Scenario scenario, std::vector<double> values)
      : scenario_(std::move(scenario)), values_(std::move(values)) {
    if (values_.size() != scenario_.outcome_space().size()) {
      throw ValidationError("value table size does not match the outcome space");
    }
    tv_norm_ = pairwise_abs_sum(values_);
  }

  const Scenario& scenario() const { return scenario_; }
  const MixedRadix& outcome_space() const { return scenario_.outcome_space(); }
  const std::vector<double>& values() const { return values_; }
  double value(std::span<const int> outcome) const { return values_[outcome_space().encode(outcome)]; }

  /// Sum of |nu(omega)|, cached at construction.
  double tv_norm() const { return tv_norm_; }
  double total_mass() const { return pairwise_sum(values_); }
  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }

 private:
  Scenario scenario_;
  std::vector<double> values_;
  double tv_norm_ = 0.0;
};

inline SignedScenarioDistribution build_scenario_distribution(const DensityMatrix& rho, const Scenario& scenario,
                                                              const BuildOptions& options = {}) {
  detail::check_state(rho, scenario);
  const MixedRadix& space = scenario.outcome_space();
  if (space.size() > options.max_outcomes) {
    throw SizeError("outcome space has " + std::to_string(space.size()) + " points, cap is " +
                    std::to_string(options.max_outcomes));
  }
  const WeightOperatorTable table = build_weight_operators(scenario, options.threads);
  const ConditionalWeights weights = conditional_weights(rho, scenario, table, options.threads);

  const int settings = scenario.num_settings();
  const int pivot = scenario.pivot();
  std::vector<int> pivot_radices;
  std::vector<std::size_t> pivot_strides;
  for (int s = 0; s < settings; ++s) {
    pivot_radices.push_back(scenario.observable(pivot, s).num_outcomes());
    pivot_strides.push_back(space.stride(scenario.coordinate(pivot, s)));
  }
  const MixedRadix pivot_space(pivot_radices);
  std::vector<std::size_t> condition_strides;
  for (int n : table.non_pivot_sites)
    for (int s = 0; s < settings; ++s) condition_strides.push_back(space.stride(scenario.coordinate(n, s)));

  std::vector<double> values(space.size(), 0.0);
  parallel_for(table.entries.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const std::vector<int>& cond = table.entries[c].condition;
      std::size_t base = 0;
      for (std::size_t k = 0; k < cond.size(); ++k) base += static_cast<std::size_t>(cond[k]) * condition_strides[k];
      const ConditionalWeightEntry& w = weights.entries[c];
      for (std::size_t p = 0; p < pivot_space.size(); ++p) {
        const std::vector<int> xs = pivot_space.decode(p);
        double plus = w.plus_mass;
        double minus = w.minus_mass;
        std::size_t index = base;
        for (int s = 0; s < settings; ++s) {
          plus *= w.plus[s][xs[s]];
          minus *= w.minus[s][xs[s]];
          index += static_cast<std::size_t>(xs[s]) * pivot_strides[s];
        }
        values[index] = plus - minus;
      }
    }
  });
  return SignedScenarioDistribution(scenario, std::move(values));
}

inline double tv_norm(const SignedScenarioDistribution& nu) { return pairwise_abs_sum(nu.values()); }

/// Sum of nu over every omega whose coordinate (n, settings[n]) equals outcomes[n] for all n.
inline double marginal_joint_prob(const SignedScenarioDistribution& nu, std::span<const int> settings,
                                  std::span<const int> outcomes) {
  const Scenario& sc = nu.scenario();
  const MixedRadix& space = nu.outcome_space();
  if (static_cast<int>(settings.size()) != sc.num_sites() || static_cast<int>(outcomes.size()) != sc.num_sites()) {
    throw ValidationError("settings and outcomes need one entry per site");
  }
  std::vector<std::size_t> strides;
  std::vector<std::size_t> radices;
  for (int n = 0; n < sc.num_sites(); ++n) {
    if (settings[n] < 0 || settings[n] >= sc.num_settings()) throw ValidationError("setting index out of range");
    if (outcomes[n] < 0 || outcomes[n] >= sc.observable(n, settings[n]).num_outcomes()) {
      throw ValidationError("outcome index out of range");
    }
    const std::size_t coord = sc.coordinate(n, settings[n]);
    strides.push_back(space.stride(coord));
    radices.push_back(static_cast<std::size_t>(space.radices()[coord]));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    bool match = true;
    for (std::size_t n = 0; n < strides.size() && match; ++n) {
      match = static_cast<int>((i / strides[n]) % radices[n]) == outcomes[n];
    }
    if (match) acc += nu.values()[i];
  }
  return acc;
}

struct MarginalCheck {
  double max_deviation = 0.0;
  std::vector<int> settings;  // worst offender
  std::vector<int> outcomes;
  double model_value = 0.0;
  double quantum_value = 0.0;
};

/// Worst |marginal of nu - quantum joint probability| over all settings and outcome tuples.
inline MarginalCheck max_marginal_deviation(const SignedScenarioDistribution& nu, const DensityMatrix& rho) {
  const Scenario& sc = nu.scenario();
  const MixedRadix& space = nu.outcome_space();
  const int num_sites = sc.num_sites();
  MarginalCheck worst;
  worst.max_deviation = -1.0;
  const MixedRadix setting_space(std::vector<int>(num_sites, sc.num_settings()));
  for (std::size_t st = 0; st < setting_space.size(); ++st) {
    const std::vector<int> settings = setting_space.decode(st);
    std::vector<int> radices;
    std::vector<std::size_t> strides;
    for (int n = 0; n < num_sites; ++n) {
      const std::size_t coord = sc.coordinate(n, settings[n]);
      radices.push_back(space.radices()[coord]);
      strides.push_back(space.stride(coord));
    }
    const MixedRadix local(radices);
    std::vector<double> table(local.size(), 0.0);
    for (std::size_t i = 0; i < space.size(); ++i) {
      std::size_t j = 0;
      for (int n = 0; n < num_sites; ++n) {
        j += ((i / strides[n]) % static_cast<std::size_t>(radices[n])) * local.stride(n);
      }
      table[j] += nu.values()[i];
    }
    for (std::size_t j = 0; j < local.size(); ++j) {
      const std::vector<int> outcomes = local.decode(j);
      const double q = quantum_joint_prob(rho, sc, settings, outcomes);
      const double dev = std::abs(table[j] - q);
      if (dev > worst.max_deviation) worst = {dev, settings, outcomes, table[j], q};
    }
  }
  return worst;
}

/// Chain sum from explicit eigenbases: column k of bases[s] is the k-th
/// eigenvector of the s-th observable. Any column phases give the same value.
inline double chain_overlap_bound(const DensityMatrix& reduced, std::span<const Matrix> bases);

/// Closed-form value of sum over chains of tr[rho~ |T|] for two sites with
/// non-degenerate observables Y_1..Y_S at the non-pivot site, expressed via
/// eigenvector overlaps. Upper-bounds the total-variation norm of the
/// distribution built with the other site as pivot.
inline double chain_overlap_bound(const DensityMatrix& reduced, std::span<const HermitianMatrix> observables,
                                  double cluster_tol = kDefaultClusterTol) {
  if (reduced.num_sites() != 1) throw ValidationError("chain overlap bound needs a single-site reduced state");
  if (observables.empty()) throw ValidationError("chain overlap bound needs at least one observable");
  const Index d = reduced.dim();
  std::vector<Matrix> bases;
  for (std::size_t s = 0; s < observables.size(); ++s) {
    if (observables[s].dim() != d) throw ValidationError("observable dimension does not match the reduced state");
    if (static_cast<Index>(spectral_measure(observables[s], cluster_tol).size()) != d) {
      throw UnsupportedError("chain overlap bound requires non-degenerate spectra; observable " +
                             std::to_string(s + 1) + " is degenerate");
    }
    bases.push_back(hermitian_eig(observables[s]).eigenvectors);
  }
  return chain_overlap_bound(reduced, std::span<const Matrix>(bases));
}

inline double chain_overlap_bound(const DensityMatrix& reduced, std::span<const Matrix> bases) {
  if (reduced.num_sites() != 1) throw ValidationError("chain overlap bound needs a single-site reduced state");
  if (bases.empty()) throw ValidationError("chain overlap bound needs at least one basis");
  const Index d = reduced.dim();
  for (const auto& b : bases) {
    if (b.rows() != d || b.cols() != d) throw ValidationError("basis dimension does not match the reduced state");
  }
  const int settings = static_cast<int>(bases.size());
  // Overlap tables <phi_s^k | phi_{s+1}^l>.
  std::vector<Matrix> overlaps;
  for (int s = 0; s + 1 < settings; ++s) overlaps.push_back(bases[s].adjoint() * bases[s + 1]);

  const MixedRadix chains(std::vector<int>(settings, static_cast<int>(d)));
  std::vector<double> terms(chains.size(), 0.0);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const std::vector<int> k = chains.decode(i);
    Complex beta = 1.0;
    for (int s = 0; s + 1 < settings; ++s) beta *= overlaps[s](k[s], k[s + 1]);
    const double mod = std::abs(beta);
    if (mod < 1e-300) continue;
    const CVector first = bases.front().col(k.front());
    const CVector last = bases.back().col(k.back());
    const Complex alpha = last.dot(first);  // <phi_S | phi_1>
    const Complex coupling = alpha * beta * beta / (mod * mod);
    Matrix gram = first * first.adjoint() + last * last.adjoint();
    const Matrix cross = coupling * (first * last.adjoint());
    gram += cross + cross.adjoint();
    const Eigensystem eig = hermitian_eig(HermitianMatrix::symmetrized(gram));
    // A has rank at most two; drop round-off in its null space before the square root.
    const double floor = 1e-12 * std::max(1.0, eig.eigenvalues(0));
    Matrix root = Matrix::Zero(d, d);
    for (Index j = 0; j < d; ++j) {
      const double lambda = eig.eigenvalues(j) > floor ? eig.eigenvalues(j) : 0.0;
      root += std::sqrt(lambda) * (eig.eigenvectors.col(j) * eig.eigenvectors.col(j).adjoint());
    }
    terms[i] = 0.5 * mod * reduced.expectation(root);
  }
  return pairwise_sum(terms);
}

}  // namespace lqhv
