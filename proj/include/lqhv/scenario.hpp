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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "lqhv/numeric.hpp"
#include "lqhv/qlinalg.hpp"

namespace lqhv {

/// Local observable with its spectral decomposition computed once.
class Observable {
 public:
  explicit Observable(HermitianMatrix matrix, double cluster_tol = kDefaultClusterTol)
      : matrix_(std::move(matrix)), spectrum_(spectral_measure(matrix_, cluster_tol)) {}

  const HermitianMatrix& matrix() const { return matrix_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  int num_outcomes() const { return static_cast<int>(spectrum_.size()); }
  double eigenvalue(int outcome) const { return spectrum_.eigenvalues.at(outcome); }
  const Matrix& projector(int outcome) const { return spectrum_.projectors.at(outcome).matrix(); }

 private:
  HermitianMatrix matrix_;
  SpectralDecomposition spectrum_;
};

/// observables[site][setting]; both indices 0-based.
using Settings = std::vector<std::vector<Observable>>;

/// N sites, S projective settings per site, each a d x d observable.
///
/// The outcome space is the product of the distinct-eigenvalue lists of all
/// N*S observables, enumerated in mixed radix with coordinate order
/// (site 0, setting 0), (site 0, setting 1), ..., (site N-1, setting S-1)
/// and the last coordinate varying fastest. Outcome indices follow the
/// descending eigenvalue order of each observable.
class Scenario {
 public:
  Scenario(int local_dim, Settings observables, int pivot = 0)
      : local_dim_(local_dim), observables_(std::move(observables)), pivot_(pivot) {
    if (observables_.empty()) throw ValidationError("scenario needs at least one site");
    num_settings_ = static_cast<int>(observables_.front().size());
    if (num_settings_ < 1) throw ValidationError("scenario needs at least one setting per site");
    detail::check_space(num_sites(), local_dim_);
    for (std::size_t n = 0; n < observables_.size(); ++n) {
      if (static_cast<int>(observables_[n].size()) != num_settings_) {
        throw ValidationError("site " + std::to_string(n + 1) + " has " + std::to_string(observables_[n].size()) +
                              " settings, expected " + std::to_string(num_settings_));
      }
      for (std::size_t s = 0; s < observables_[n].size(); ++s) {
        if (observables_[n][s].matrix().dim() != local_dim_) {
          throw ValidationError("observable " + std::to_string(n + 1) + "." + std::to_string(s + 1) + " is not " +
                                std::to_string(local_dim_) + "x" + std::to_string(local_dim_));
        }
      }
    }
    if (pivot_ < 0 || pivot_ >= num_sites()) throw ValidationError("pivot site out of range");
    std::vector<int> radices;
    for (const auto& site : observables_)
      for (const auto& obs : site) radices.push_back(obs.num_outcomes());
    space_ = MixedRadix(std::move(radices));
  }

  int num_sites() const { return static_cast<int>(observables_.size()); }
  int local_dim() const { return local_dim_; }
  int num_settings() const { return num_settings_; }
  int pivot() const { return pivot_; }
  const Settings& settings() const { return observables_; }
  const Observable& observable(int site, int setting) const { return observables_.at(site).at(setting); }

  const MixedRadix& outcome_space() const { return space_; }
  std::size_t coordinate(int site, int setting) const {
    return static_cast<std::size_t>(site) * num_settings_ + setting;
  }

  Scenario with_pivot(int pivot) const { return Scenario(local_dim_, observables_, pivot); }

 private:
  int local_dim_;
  Settings observables_;
  int pivot_;
  int num_settings_ = 0;
  MixedRadix space_;
};

/// Wraps raw matrices into a validated settings table.
inline Settings make_settings(const std::vector<std::vector<Matrix>>& matrices,
                              double cluster_tol = kDefaultClusterTol) {
  Settings out;
  for (const auto& site : matrices) {
    std::vector<Observable> row;
    for (const auto& m : site) row.emplace_back(HermitianMatrix(m), cluster_tol);
    out.push_back(std::move(row));
  }
  return out;
}

/// tr[rho (x)_n P_{X_n^{(s_n)}}(x_n)].
inline double quantum_joint_prob(const DensityMatrix& rho, const Scenario& scenario, std::span<const int> settings,
                                 std::span<const int> outcomes) {
  std::vector<Matrix> factors;
  for (int n = 0; n < scenario.num_sites(); ++n) {
    factors.push_back(scenario.observable(n, settings[n]).projector(outcomes[n]));
  }
  return rho.expectation(tensor_product(factors));
}

}  // namespace lqhv
