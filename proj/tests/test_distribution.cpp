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

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "lqhv/distribution.hpp"
#include "lqhv/random.hpp"
#include "oracles.hpp"

using namespace lqhv;

namespace {

using oracle::Mat;

/// Distinct eigenvalues in descending order.
std::vector<double> distinct_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  std::vector<double> out;
  for (long k = h.rows() - 1; k >= 0; --k) {
    const double v = es.eigenvalues()(k);
    if (out.empty() || out.back() - v > 1e-7) out.push_back(v);
  }
  return out;
}

Mat positive_part(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Mat out = Mat::Zero(h.rows(), h.cols());
  for (long k = 0; k < h.rows(); ++k) {
    if (es.eigenvalues()(k) > 0) out += es.eigenvalues()(k) * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return out;
}

/// Signed distribution computed straight from the definition on the full
/// Hilbert space, indexed site-major, setting next, last coordinate fastest.
std::vector<double> reference_distribution(const Mat& rho, const std::vector<std::vector<Mat>>& obs, int d,
                                           int pivot) {
  const int n_sites = static_cast<int>(obs.size());
  const int n_set = static_cast<int>(obs[0].size());
  std::vector<std::vector<std::vector<double>>> spec(n_sites);
  std::vector<int> radices;
  for (int n = 0; n < n_sites; ++n)
    for (int s = 0; s < n_set; ++s) {
      spec[n].push_back(distinct_eigenvalues(obs[n][s]));
      radices.push_back(static_cast<int>(spec[n][s].size()));
    }
  std::size_t total = 1;
  for (int r : radices) total *= r;
  auto proj = [&](int n, int s, int k) { return oracle::eigenprojector(obs[n][s], spec[n][s][k]); };
  const Mat id = Mat::Identity(d, d);

  std::vector<double> out(total);
  std::map<std::vector<int>, std::pair<Mat, Mat>> cache;  // condition -> (T+, T-) on the full space
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<int> digits(radices.size());
    std::size_t rest = i;
    for (std::size_t k = radices.size(); k-- > 0;) {
      digits[k] = static_cast<int>(rest % radices[k]);
      rest /= radices[k];
    }
    std::vector<int> cond;
    for (int n = 0; n < n_sites; ++n)
      if (n != pivot)
        for (int s = 0; s < n_set; ++s) cond.push_back(digits[n * n_set + s]);
    if (!cache.count(cond)) {
      std::vector<Mat> factors;
      for (int n = 0; n < n_sites; ++n) {
        if (n == pivot) {
          factors.push_back(id);
          continue;
        }
        Mat p = id;
        for (int s = 0; s < n_set; ++s) p = p * proj(n, s, digits[n * n_set + s]);
        factors.push_back((p + p.adjoint()) / 2.0);
      }
      const Mat t = oracle::kron_by_index(factors);
      cache[cond] = {positive_part(t), positive_part(-t)};
    }
    const auto& [tp, tm] = cache[cond];
    double plus = (rho * tp).trace().real();
    double minus = (rho * tm).trace().real();
    const double wp = plus, wm = minus;
    for (int s = 0; s < n_set; ++s) {
      std::vector<Mat> f(n_sites, id);
      f[pivot] = proj(pivot, s, digits[pivot * n_set + s]);
      const Mat p = oracle::kron_by_index(f);
      const double k = static_cast<double>(spec[pivot][s].size());
      plus *= wp > 1e-12 ? (rho * p * tp).trace().real() / wp : 1.0 / k;
      minus *= wm > 1e-12 ? (rho * p * tm).trace().real() / wm : 1.0 / k;
    }
    out[i] = plus - minus;
  }
  return out;
}

Scenario scenario_of(const std::vector<std::vector<Mat>>& obs, int d, int pivot = 0) {
  return Scenario(d, make_settings(obs), pivot);
}

std::vector<std::vector<Mat>> random_observables(int n_sites, int d, int settings, std::mt19937_64& rng) {
  std::vector<std::vector<Mat>> obs(n_sites);
  for (auto& site : obs)
    for (int s = 0; s < settings; ++s) site.push_back(random_hermitian(d, rng).matrix());
  return obs;
}

}  // namespace

TEST(WeightOperators, SingleSettingIsPositive) {
  std::mt19937_64 rng(31);
  const Scenario sc = scenario_of(random_observables(2, 3, 1, rng), 3);
  const DensityMatrix rho = random_density(2, 3, rng);
  for (const auto& e : build_weight_operators(sc).entries) {
    EXPECT_GE(hermitian_eig(e.op).eigenvalues.minCoeff(), -1e-12);
  }
  EXPECT_NEAR(build_scenario_distribution(rho, sc).tv_norm(), 1.0, 1e-10);
}

TEST(WeightOperators, IdenticalSettingsHaveNoNegativePart) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat y = random_hermitian(3, rng).matrix();
    const std::vector<std::vector<Mat>> obs{{random_hermitian(3, rng).matrix(), random_hermitian(3, rng).matrix()},
                                            {y, y}};
    const Scenario sc = scenario_of(obs, 3);
    for (const auto& e : build_weight_operators(sc).entries) {
      EXPECT_LE(oracle::operator_norm(e.parts.negative.matrix()), 1e-12);
    }
    EXPECT_GE(build_scenario_distribution(random_density(2, 3, rng), sc).min_value(), -1e-12);
  }
}

TEST(WeightOperators, ZThenXHasIndefiniteChains) {
  const Scenario sc = scenario_of({{pauli_z(), pauli_x()}, {pauli_z(), pauli_x()}}, 2);
  const auto table = build_weight_operators(sc);
  ASSERT_EQ(table.entries.size(), 4u);
  const double r = 1.0 / (2.0 * std::numbers::sqrt2);
  for (const auto& e : table.entries) {
    const auto ev = hermitian_eig(e.op).eigenvalues;
    EXPECT_NEAR(ev(0), 0.25 + r, 1e-12);
    EXPECT_NEAR(ev(1), 0.25 - r, 1e-12);
  }
}

TEST(WeightOperators, SumToIdentity) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2, d = 2 + (trial / 2) % 2, s = 1 + trial % 3;
    const Scenario sc = scenario_of(random_observables(n, d, s, rng), d);
    const auto table = build_weight_operators(sc);
    const Index dim = table.entries.front().op.dim();
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& e : table.entries) sum += e.op.matrix();
    EXPECT_LE(oracle::operator_norm(sum - Matrix::Identity(dim, dim)), 1e-10);
  }
}

TEST(ConditionalWeights, MaximallyMixedGivesHalf) {
  const Scenario sc = scenario_of({{pauli_z(), pauli_x()}, {pauli_z(), pauli_x()}}, 2);
  const DensityMatrix rho(2, 2, Matrix::Identity(4, 4) / 4.0);
  const auto table = build_weight_operators(sc);
  for (const auto& e : conditional_weights(rho, sc, table).entries) {
    for (int s = 0; s < 2; ++s)
      for (int x = 0; x < 2; ++x) {
        EXPECT_NEAR(e.plus[s][x], 0.5, 1e-12);
        EXPECT_NEAR(e.minus[s][x], 0.5, 1e-12);
      }
  }
}

TEST(ConditionalWeights, UniformWhenMassVanishes) {
  Matrix ket = Matrix::Zero(4, 4);
  ket(0, 0) = 1.0;
  const DensityMatrix rho(2, 2, ket);
  const Scenario sc = scenario_of({{pauli_x(), pauli_z()}, {pauli_z(), pauli_z()}}, 2);
  const auto table = build_weight_operators(sc);
  const auto weights = conditional_weights(rho, sc, table);
  for (std::size_t c = 0; c < table.entries.size(); ++c) {
    const auto& e = weights.entries[c];
    EXPECT_LE(e.minus_mass, 1e-12);
    EXPECT_EQ(e.minus[0], (std::vector<double>{0.5, 0.5}));
    if (e.plus_mass <= 1e-12) {
      EXPECT_EQ(e.plus[1], (std::vector<double>{0.5, 0.5}));
    }
  }
}

TEST(SignedDistribution, SingletMarginals) {
  const Scenario sc = scenario_of({{pauli_z(), pauli_x()}, {pauli_z(), pauli_x()}}, 2);
  const auto nu = build_scenario_distribution(make_state(SingletState{}), sc);
  const std::vector<int> zz{0, 0};
  EXPECT_NEAR(marginal_joint_prob(nu, zz, std::vector<int>{0, 0}), 0.0, 1e-12);
  EXPECT_NEAR(marginal_joint_prob(nu, zz, std::vector<int>{0, 1}), 0.5, 1e-12);
  EXPECT_NEAR(nu.total_mass(), 1.0, 1e-12);
}

TEST(SignedDistribution, GhzXXXMarginals) {
  const std::vector<std::vector<Mat>> obs(3, {pauli_x(), pauli_z()});
  const auto nu = build_scenario_distribution(make_state(GhzState{3, 2}), scenario_of(obs, 2));
  const std::vector<int> xxx{0, 0, 0};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double want = (a + b + c) % 2 == 0 ? 0.25 : 0.0;
        EXPECT_NEAR(marginal_joint_prob(nu, xxx, std::vector<int>{a, b, c}), want, 1e-12);
      }
}

TEST(SignedDistribution, MatchesDefinition) {
  std::mt19937_64 rng(34);
  struct Shape {
    int n, d, s, pivot;
  };
  for (const Shape sh : {Shape{2, 2, 2, 0}, Shape{2, 3, 2, 1}, Shape{3, 2, 2, 1}, Shape{2, 2, 3, 0}}) {
    auto obs = random_observables(sh.n, sh.d, sh.s, rng);
    obs[0][0] = random_dichotomic(sh.d, rng).matrix();  // a degenerate spectrum in the mix
    const DensityMatrix rho = random_density(sh.n, sh.d, rng);
    const auto nu = build_scenario_distribution(rho, scenario_of(obs, sh.d, sh.pivot));
    const auto want = reference_distribution(rho.matrix(), obs, sh.d, sh.pivot);
    ASSERT_EQ(nu.values().size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(nu.values()[i], want[i], 1e-10) << i;
  }
}

TEST(SignedDistribution, MarginalsOnRandomScenarios) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 2 + trial % 2, d = 2 + (trial / 2) % 2, s = 1 + (trial / 4) % 3;
    const Scenario sc = scenario_of(random_observables(n, d, s, rng), d, trial % n);
    const DensityMatrix rho = random_density(n, d, rng);
    const auto nu = build_scenario_distribution(rho, sc);
    EXPECT_LE(max_marginal_deviation(nu, rho).max_deviation, 1e-10);
    EXPECT_NEAR(nu.total_mass(), 1.0, 1e-10);
    EXPECT_GE(nu.tv_norm(), 1.0 - 1e-10);
  }
}

TEST(SignedDistribution, PivotChoiceKeepsMarginals) {
  std::mt19937_64 rng(36);
  const auto obs = random_observables(3, 2, 2, rng);
  const DensityMatrix rho = random_density(3, 2, rng);
  for (int pivot = 0; pivot < 3; ++pivot) {
    const auto nu = build_scenario_distribution(rho, scenario_of(obs, 2, pivot));
    EXPECT_LE(max_marginal_deviation(nu, rho).max_deviation, 1e-10) << pivot;
  }
}

TEST(SignedDistribution, ThreadCountDoesNotChangeValues) {
  std::mt19937_64 rng(37);
  const Scenario sc = scenario_of(random_observables(3, 2, 3, rng), 2);
  const DensityMatrix rho = random_density(3, 2, rng);
  const auto a = build_scenario_distribution(rho, sc, {1});
  const auto b = build_scenario_distribution(rho, sc, {3});
  EXPECT_EQ(a.values(), b.values());
}

TEST(SignedDistribution, TvNormOfTable) {
  const Scenario sc = scenario_of({{Eigen::Vector3d(3, 2, 1).cast<Complex>().asDiagonal()}}, 3);
  const SignedScenarioDistribution nu(sc, {0.6, 0.6, -0.2});
  EXPECT_NEAR(tv_norm(nu), 1.4, 1e-15);
  EXPECT_NEAR(nu.tv_norm(), 1.4, 1e-15);
  EXPECT_THROW(SignedScenarioDistribution(sc, {1.0}), ValidationError);
}

TEST(SignedDistribution, SizeCap) {
  std::mt19937_64 rng(38);
  const Scenario sc = scenario_of(random_observables(2, 3, 3, rng), 3);
  BuildOptions opts;
  opts.max_outcomes = 100;
  EXPECT_THROW(build_scenario_distribution(random_density(2, 3, rng), sc, opts), SizeError);
}

TEST(SignedDistribution, RejectsMismatchedState) {
  const Scenario sc = scenario_of({{pauli_z()}, {pauli_z()}}, 2);
  EXPECT_THROW(build_scenario_distribution(make_state(GhzState{3, 2}), sc), ValidationError);
}

TEST(ChainOverlap, SingleSettingIsOne) {
  std::mt19937_64 rng(39);
  const std::vector<HermitianMatrix> ys{random_hermitian(3, rng)};
  EXPECT_NEAR(chain_overlap_bound(random_density(1, 3, rng), ys), 1.0, 1e-10);
}

TEST(ChainOverlap, ZThenXOnMaximallyMixed) {
  const std::vector<HermitianMatrix> ys{HermitianMatrix(pauli_z()), HermitianMatrix(pauli_x())};
  EXPECT_NEAR(chain_overlap_bound(DensityMatrix(1, 2, Matrix::Identity(2, 2) / 2.0), ys), std::numbers::sqrt2,
              1e-12);
}

TEST(ChainOverlap, EqualsAbsoluteWeightSum) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2, s = 2 + trial % 3;
    std::vector<Mat> ys;
    std::vector<HermitianMatrix> hs;
    for (int k = 0; k < s; ++k) {
      hs.push_back(random_hermitian(d, rng));
      ys.push_back(hs.back().matrix());
    }
    const DensityMatrix rho = random_density(2, d, rng);
    const Scenario sc = scenario_of({std::vector<Mat>(s, random_hermitian(d, rng).matrix()), ys}, d);
    const DensityMatrix reduced = partial_trace(rho, {2});
    double direct = 0.0;
    for (const auto& e : build_weight_operators(sc).entries) direct += reduced.expectation(e.parts.absolute_value.matrix());
    const double chain = chain_overlap_bound(reduced, hs);
    EXPECT_NEAR(chain, direct, 1e-9);
    const double tv = build_scenario_distribution(rho, sc).tv_norm();
    EXPECT_LE(tv, chain + 1e-10);
    EXPECT_LE(chain, std::pow(d, s / 2.0) + 1e-10);
    if (s == 2) {
      EXPECT_LE(chain, std::sqrt(d) + 1e-10);
    }
  }
}

TEST(ChainOverlap, UnitaryCovariance) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = random_density(1, 3, rng);
    const std::vector<HermitianMatrix> ys{random_hermitian(3, rng), random_hermitian(3, rng), random_hermitian(3, rng)};
    const Matrix u = random_unitary(3, rng);
    std::vector<HermitianMatrix> rotated;
    for (const auto& y : ys) rotated.push_back(HermitianMatrix::symmetrized(u * y.matrix() * u.adjoint()));
    const DensityMatrix rho_rot(1, 3, u * rho.matrix() * u.adjoint());
    EXPECT_NEAR(chain_overlap_bound(rho, ys), chain_overlap_bound(rho_rot, rotated), 1e-10);
  }
}

TEST(ChainOverlap, EigenvectorPhasesDoNotMatter) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2, s = 2 + trial % 2;
    const DensityMatrix rho = random_density(1, d, rng);
    std::vector<Matrix> bases, rephased;
    for (int k = 0; k < s; ++k) {
      bases.push_back(random_unitary(d, rng));
      CVector phases(d);
      for (int j = 0; j < d; ++j) phases(j) = std::polar(1.0, angle(rng));
      rephased.push_back(bases.back() * phases.asDiagonal());
    }
    EXPECT_NEAR(chain_overlap_bound(rho, std::span<const Matrix>(bases)),
                chain_overlap_bound(rho, std::span<const Matrix>(rephased)), 1e-10);
  }
}

TEST(ChainOverlap, RejectsDegenerateObservable) {
  const std::vector<HermitianMatrix> ys{HermitianMatrix(pauli_z()), HermitianMatrix::identity(2)};
  EXPECT_THROW(chain_overlap_bound(DensityMatrix(1, 2, Matrix::Identity(2, 2) / 2.0), ys), UnsupportedError);
}
