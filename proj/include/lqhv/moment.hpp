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
 * Symmetrized moment measure of a state restricted to a finite collection of
 * observables. For observables X_1..X_m the measure of an outcome set F is
 *
 *   mu(F) = sum over (x_1..x_m) in F of tr[rho sym(P_{X_1}(x_1) ... P_{X_m}(x_m))]
 *
 * where sym() averages the product over all factor orderings. The measure is
 * normalized and real but can take negative values on non-commuting
 * collections.
 */

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "lqhv/numeric.hpp"
#include "lqhv/qlinalg.hpp"

namespace lqhv {

namespace detail {

inline int outcome_index(const SpectralDecomposition& spec, double value, double scale, double cluster_tol,
                         std::size_t position) {
  const double tol = cluster_tol * std::max(1.0, scale);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (std::abs(spec.eigenvalues[k] - value) <= tol) return static_cast<int>(k);
  }
  std::ostringstream msg;
  msg << "outcome " << value << " for observable " << position + 1 << " is not in its spectrum";
  throw ValidationError(msg.str());
}

inline void check_collection(const DensityMatrix& rho, std::span<const HermitianMatrix> observables) {
  for (const auto& x : observables) {
    if (x.dim() != rho.dim()) throw ValidationError("observable dimension does not match the state");
  }
}

/// Measure of one outcome tuple, given projector indices.
inline double moment_atom(const DensityMatrix& rho, const std::vector<SpectralDecomposition>& specs,
                          std::span<const int> indices) {
  std::vector<HermitianMatrix> factors;
  factors.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) factors.push_back(specs[i].projectors[indices[i]]);
  return rho.expectation(sym_product(factors).matrix());
}

}  // namespace detail

/// mu_rho of the cylinder set over `outcome_set` (each entry is one tuple of eigenvalues).
inline double moment_measure_value(const DensityMatrix& rho, std::span<const HermitianMatrix> observables,
                                   const std::vector<std::vector<double>>& outcome_set,
                                   double cluster_tol = kDefaultClusterTol) {
  detail::check_collection(rho, observables);
  std::vector<SpectralDecomposition> specs;
  std::vector<double> scales;
  for (const auto& x : observables) {
    specs.push_back(spectral_measure(x, cluster_tol));
    scales.push_back(std::max(std::abs(specs.back().eigenvalues.front()), std::abs(specs.back().eigenvalues.back())));
  }
  std::vector<double> terms;
  terms.reserve(outcome_set.size());
  std::vector<int> idx(observables.size());
  for (const auto& tuple : outcome_set) {
    if (tuple.size() != observables.size()) throw ValidationError("outcome tuple length does not match collection");
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      idx[i] = detail::outcome_index(specs[i], tuple[i], scales[i], cluster_tol, i);
    }
    terms.push_back(detail::moment_atom(rho, specs, idx));
  }
  return pairwise_sum(terms);
}

/// Every outcome tuple of the collection, i.e. the full product of spectra.
inline std::vector<std::vector<double>> full_outcome_set(std::span<const HermitianMatrix> observables,
                                                         double cluster_tol = kDefaultClusterTol) {
  std::vector<SpectralDecomposition> specs;
  std::vector<int> radices;
  for (const auto& x : observables) {
    specs.push_back(spectral_measure(x, cluster_tol));
    radices.push_back(static_cast<int>(specs.back().size()));
  }
  const MixedRadix space(radices);
  std::vector<std::vector<double>> out;
  out.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto digits = space.decode(i);
    std::vector<double> tuple(digits.size());
    for (std::size_t k = 0; k < digits.size(); ++k) tuple[k] = specs[k].eigenvalues[digits[k]];
    out.push_back(std::move(tuple));
  }
  return out;
}

/// |tr[rho sym(X_1...X_m)] - sum_omega x_1...x_m mu({omega})| for one collection.
inline double moment_identity_deviation(const DensityMatrix& rho, std::span<const HermitianMatrix> observables,
                                        double cluster_tol = kDefaultClusterTol) {
  detail::check_collection(rho, observables);
  const double lhs = rho.expectation(sym_product(observables).matrix());

  std::vector<SpectralDecomposition> specs;
  std::vector<int> radices;
  for (const auto& x : observables) {
    specs.push_back(spectral_measure(x, cluster_tol));
    radices.push_back(static_cast<int>(specs.back().size()));
  }
  const MixedRadix space(radices);
  std::vector<double> terms(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto digits = space.decode(i);
    double weight = 1.0;
    for (std::size_t k = 0; k < digits.size(); ++k) weight *= specs[k].eigenvalues[digits[k]];
    terms[i] = weight * detail::moment_atom(rho, specs, digits);
  }
  return std::abs(lhs - pairwise_sum(terms));
}

/// Max deviation of the moment identity over a list of observable collections.
inline double check_moment_identity(const DensityMatrix& rho,
                                    const std::vector<std::vector<HermitianMatrix>>& trials,
                                    double cluster_tol = kDefaultClusterTol) {
  double worst = 0.0;
  for (const auto& collection : trials) {
    worst = std::max(worst, moment_identity_deviation(rho, collection, cluster_tol));
  }
  return worst;
}

}  // namespace lqhv
