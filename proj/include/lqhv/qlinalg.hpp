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
 * Dense complex Hermitian linear algebra on N-qudit spaces: eigensystems,
 * spectral measures, positive/negative parts, tensor embedding, partial
 * traces, symmetrized products and standard state constructors.
 *
 * Site numbering is 1-based and site 1 is the leftmost (slowest-varying)
 * tensor factor. Every multi-site operator in the library is assembled with
 * tensor_embed so the ordering convention lives in one place.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lqhv/errors.hpp"

namespace lqhv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDefaultClusterTol = 1e-9;
inline constexpr Index kMaxDimension = 4096;

struct AsymmetryReport {
  double max_deviation = 0.0;
  Index row = 0;  // 0-based
  Index col = 0;
};

/// Largest |m(i,j) - conj(m(j,i))| and where it occurs.
inline AsymmetryReport max_asymmetry(const Matrix& m) {
  AsymmetryReport report;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i; j < m.cols(); ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > report.max_deviation) report = {dev, i, j};
    }
  }
  return report;
}

/// Square complex matrix equal to its conjugate transpose.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Validates; throws ValidationError naming the worst entry (1-based).
  explicit HermitianMatrix(Matrix entries, double tol = kHermitianTol) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
      std::ostringstream msg;
      msg << "matrix must be square and non-empty, got " << entries_.rows() << "x" << entries_.cols();
      throw ValidationError(msg.str());
    }
    const AsymmetryReport report = max_asymmetry(entries_);
    if (report.max_deviation > tol) {
      std::ostringstream msg;
      msg << "matrix is not Hermitian: max asymmetry " << report.max_deviation << " at entry ("
          << report.row + 1 << "," << report.col + 1 << ")";
      throw ValidationError(msg.str());
    }
  }

  /// (m + m^dagger)/2 without validation; for results of operator arithmetic.
  static HermitianMatrix symmetrized(const Matrix& m) {
    HermitianMatrix h;
    h.entries_ = (m + m.adjoint()) * 0.5;
    return h;
  }

  static HermitianMatrix identity(Index dim) { return symmetrized(Matrix::Identity(dim, dim)); }

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// All eigenvalues (descending) with orthonormal eigenvectors as columns.
struct Eigensystem {
  RVector eigenvalues;
  Matrix eigenvectors;
};

inline Eigensystem hermitian_eig(const HermitianMatrix& h) {
  const Matrix sym = (h.matrix() + h.matrix().adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver failed to converge");
  const Index n = sym.rows();
  Eigensystem out{RVector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline double operator_norm(const HermitianMatrix& h) {
  const RVector ev = hermitian_eig(h).eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Distinct eigenvalues (descending) and their spectral projectors.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<HermitianMatrix> projectors;

  std::size_t size() const { return eigenvalues.size(); }

  Matrix reconstruct() const {
    Matrix out = Matrix::Zero(projectors.front().dim(), projectors.front().dim());
    for (std::size_t k = 0; k < size(); ++k) out += eigenvalues[k] * projectors[k].matrix();
    return out;
  }
};

/// Eigenvalues closer than cluster_tol * max(1, ||H||) to their neighbour
/// share one projector.
inline SpectralDecomposition spectral_measure(const HermitianMatrix& h,
                                              double cluster_tol = kDefaultClusterTol) {
  if (!(cluster_tol > 0.0)) throw ValidationError("cluster tolerance must be positive");
  const Eigensystem eig = hermitian_eig(h);
  const Index n = eig.eigenvalues.size();
  const double norm = std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  const double gap = cluster_tol * std::max(1.0, norm);

  SpectralDecomposition out;
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && eig.eigenvalues(end - 1) - eig.eigenvalues(end) <= gap) ++end;
    const auto block = eig.eigenvectors.middleCols(start, end - start);
    out.eigenvalues.push_back(eig.eigenvalues.segment(start, end - start).mean());
    out.projectors.push_back(HermitianMatrix::symmetrized(block * block.adjoint()));
    start = end;
  }
  return out;
}

/// Z = positive - negative with positive * negative = 0.
struct PosNegParts {
  HermitianMatrix positive;
  HermitianMatrix negative;
  HermitianMatrix absolute_value;  // positive + negative
};

inline PosNegParts pos_neg_parts(const HermitianMatrix& z) {
  const Eigensystem eig = hermitian_eig(z);
  const Index n = eig.eigenvalues.size();
  const double norm = std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  const double floor = 1e-12 * std::max(1.0, norm);
  Matrix pos = Matrix::Zero(n, n);
  Matrix neg = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const double lambda = eig.eigenvalues(k);
    if (std::abs(lambda) <= floor) continue;
    const auto v = eig.eigenvectors.col(k);
    if (lambda > 0) {
      pos += lambda * (v * v.adjoint());
    } else {
      neg += (-lambda) * (v * v.adjoint());
    }
  }
  PosNegParts out{HermitianMatrix::symmetrized(pos), HermitianMatrix::symmetrized(neg), {}};
  out.absolute_value = HermitianMatrix::symmetrized(out.positive.matrix() + out.negative.matrix());
  return out;
}

/// tr[a b] without forming the product.
inline Complex trace_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Index ipow(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

inline void check_space(int num_sites, int local_dim) {
  if (num_sites < 1 || local_dim < 1) throw ValidationError("num_sites and local_dim must be positive");
  Index dim = 1;
  for (int i = 0; i < num_sites; ++i) {
    dim *= local_dim;
    if (dim > kMaxDimension) {
      throw SizeError("total dimension d^N exceeds " + std::to_string(kMaxDimension));
    }
  }
}

}  // namespace detail

/// I^{(n-1)} (x) op (x) I^{(N-n)} for a general (not necessarily Hermitian) d x d operator.
inline Matrix embed_operator(const Matrix& op, int site, int num_sites, int local_dim) {
  detail::check_space(num_sites, local_dim);
  if (op.rows() != local_dim || op.cols() != local_dim) {
    std::ostringstream msg;
    msg << "operator is " << op.rows() << "x" << op.cols() << " but local dimension is " << local_dim;
    throw ValidationError(msg.str());
  }
  if (site < 1 || site > num_sites) {
    throw ValidationError("site " + std::to_string(site) + " outside 1.." + std::to_string(num_sites));
  }
  const Index left = detail::ipow(local_dim, site - 1);
  const Index right = detail::ipow(local_dim, num_sites - site);
  return detail::kron(detail::kron(Matrix::Identity(left, left), op), Matrix::Identity(right, right));
}

inline HermitianMatrix tensor_embed(const HermitianMatrix& x, int site, int num_sites, int local_dim) {
  return HermitianMatrix::symmetrized(embed_operator(x.matrix(), site, num_sites, local_dim));
}

/// factors[0] (x) factors[1] (x) ...; all factors d x d.
inline Matrix tensor_product(std::span<const Matrix> factors) {
  if (factors.empty()) throw ValidationError("tensor product of zero factors");
  const int n = static_cast<int>(factors.size());
  const int d = static_cast<int>(factors.front().rows());
  Matrix out = embed_operator(factors[0], 1, n, d);
  for (int k = 1; k < n; ++k) out = out * embed_operator(factors[k], k + 1, n, d);
  return out;
}

/// Traces out every site not in keep_sites (1-based). Kept sites stay in ascending order.
inline Matrix partial_trace_operator(const Matrix& m, std::vector<int> keep_sites, int num_sites,
                                     int local_dim) {
  if (keep_sites.empty()) throw ValidationError("partial trace needs at least one kept site");
  std::sort(keep_sites.begin(), keep_sites.end());
  if (std::adjacent_find(keep_sites.begin(), keep_sites.end()) != keep_sites.end()) {
    throw ValidationError("duplicate site in keep set");
  }
  for (int s : keep_sites) {
    if (s < 1 || s > num_sites) throw ValidationError("kept site " + std::to_string(s) + " out of range");
  }
  const Index dim = detail::ipow(local_dim, num_sites);
  if (m.rows() != dim || m.cols() != dim) throw ValidationError("operator dimension does not match d^N");

  std::vector<int> traced;
  for (int s = 1; s <= num_sites; ++s) {
    if (!std::binary_search(keep_sites.begin(), keep_sites.end(), s)) traced.push_back(s);
  }
  std::vector<Index> stride(num_sites + 1);
  for (int s = 1; s <= num_sites; ++s) stride[s] = detail::ipow(local_dim, num_sites - s);

  auto spread = [&](Index compact, const std::vector<int>& sites) {
    Index full = 0;
    for (std::size_t k = sites.size(); k-- > 0;) {
      full += (compact % local_dim) * stride[sites[k]];
      compact /= local_dim;
    }
    return full;
  };

  const Index kept_dim = detail::ipow(local_dim, static_cast<int>(keep_sites.size()));
  const Index traced_dim = detail::ipow(local_dim, static_cast<int>(traced.size()));
  std::vector<Index> kept_offset(kept_dim), traced_offset(traced_dim);
  for (Index i = 0; i < kept_dim; ++i) kept_offset[i] = spread(i, keep_sites);
  for (Index r = 0; r < traced_dim; ++r) traced_offset[r] = spread(r, traced);

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (Index i = 0; i < kept_dim; ++i) {
    for (Index j = 0; j < kept_dim; ++j) {
      Complex acc = 0.0;
      for (Index r = 0; r < traced_dim; ++r) acc += m(kept_offset[i] + traced_offset[r], kept_offset[j] + traced_offset[r]);
      out(i, j) = acc;
    }
  }
  return out;
}

inline constexpr int kMaxSymProductFactors = 6;

/// (1/m!) times the sum of Z_{p(1)}...Z_{p(m)} over all permutations p.
inline HermitianMatrix sym_product(std::span<const HermitianMatrix> factors) {
  const int m = static_cast<int>(factors.size());
  if (m < 1) throw ValidationError("symmetrized product needs at least one factor");
  if (m > kMaxSymProductFactors) {
    throw SizeError("symmetrized product supports at most " + std::to_string(kMaxSymProductFactors) +
                    " factors, got " + std::to_string(m));
  }
  const Index dim = factors.front().dim();
  for (const auto& f : factors) {
    if (f.dim() != dim) throw ValidationError("symmetrized product factors differ in dimension");
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  Matrix sum = Matrix::Zero(dim, dim);
  double count = 0.0;
  do {
    Matrix prod = factors[order[0]].matrix();
    for (int k = 1; k < m; ++k) prod = prod * factors[order[k]].matrix();
    sum += prod;
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  return HermitianMatrix::symmetrized(sum / count);
}

/// N-qudit state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  DensityMatrix(int num_sites, int local_dim, const Matrix& entries) : num_sites_(num_sites), local_dim_(local_dim) {
    detail::check_space(num_sites, local_dim);
    const Index dim = detail::ipow(local_dim, num_sites);
    if (entries.rows() != dim || entries.cols() != dim) {
      std::ostringstream msg;
      msg << "density matrix is " << entries.rows() << "x" << entries.cols() << ", expected " << dim << "x" << dim;
      throw ValidationError(msg.str());
    }
    entries_ = HermitianMatrix(entries, kHermitianTol);
    const Complex tr = entries.trace();
    if (std::abs(tr - Complex(1.0)) > 1e-10) {
      std::ostringstream msg;
      msg << "density matrix trace is " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i, expected 1";
      throw ValidationError(msg.str());
    }
    const double min_eig = hermitian_eig(entries_).eigenvalues.minCoeff();
    if (min_eig < -1e-10) {
      std::ostringstream msg;
      msg << "density matrix is not positive semidefinite: minimum eigenvalue " << min_eig;
      throw ValidationError(msg.str());
    }
  }

  int num_sites() const { return num_sites_; }
  int local_dim() const { return local_dim_; }
  Index dim() const { return entries_.dim(); }
  const Matrix& matrix() const { return entries_.matrix(); }
  const HermitianMatrix& hermitian() const { return entries_; }

  /// Re tr[rho op].
  double expectation(const Matrix& op) const { return trace_product(entries_.matrix(), op).real(); }

 private:
  int num_sites_;
  int local_dim_;
  HermitianMatrix entries_;
};

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep_sites) {
  const int kept = static_cast<int>(keep_sites.size());
  Matrix reduced = partial_trace_operator(rho.matrix(), std::move(keep_sites), rho.num_sites(), rho.local_dim());
  return DensityMatrix(kept, rho.local_dim(), (reduced + reduced.adjoint()) * 0.5);
}

// State descriptors accepted by make_state.
struct GhzState {
  int num_sites = 3;
  int local_dim = 2;
};
struct SingletState {};
struct PureState {
  int num_sites = 1;
  int local_dim = 2;
  CVector amplitudes;
};
struct ExplicitState {
  int num_sites = 1;
  int local_dim = 2;
  Matrix entries;
};
struct RandomMixedState {
  int num_sites = 2;
  int local_dim = 2;
  std::uint64_t seed = 0;
};
using StateSpec = std::variant<GhzState, SingletState, PureState, ExplicitState, RandomMixedState>;

inline DensityMatrix pure_density(int num_sites, int local_dim, const CVector& amplitudes) {
  detail::check_space(num_sites, local_dim);
  if (amplitudes.size() != detail::ipow(local_dim, num_sites)) {
    throw ValidationError("state vector length " + std::to_string(amplitudes.size()) + " does not match d^N");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 1e-12)) throw ValidationError("state vector has zero norm");
  const CVector psi = amplitudes / norm;
  return DensityMatrix(num_sites, local_dim, psi * psi.adjoint());
}

/// Ginibre-ensemble mixed state: G G^dagger / tr.
template <typename Rng>
DensityMatrix random_density(int num_sites, int local_dim, Rng& rng) {
  detail::check_space(num_sites, local_dim);
  const Index dim = detail::ipow(local_dim, num_sites);
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(num_sites, local_dim, (rho + rho.adjoint()) * 0.5);
}

inline DensityMatrix make_state(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> DensityMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GhzState>) {
          if (s.num_sites < 2 || s.local_dim < 2) throw ValidationError("ghz state needs N >= 2 and d >= 2");
          detail::check_space(s.num_sites, s.local_dim);
          const Index dim = detail::ipow(s.local_dim, s.num_sites);
          CVector psi = CVector::Zero(dim);
          // |k k ... k> sits at index k * (1 + d + d^2 + ...).
          Index repunit = 0;
          for (int n = 0; n < s.num_sites; ++n) repunit = repunit * s.local_dim + 1;
          for (int k = 0; k < s.local_dim; ++k) psi(k * repunit) = 1.0;
          return pure_density(s.num_sites, s.local_dim, psi);
        } else if constexpr (std::is_same_v<T, SingletState>) {
          CVector psi = CVector::Zero(4);
          psi(1) = 1.0;
          psi(2) = -1.0;
          return pure_density(2, 2, psi);
        } else if constexpr (std::is_same_v<T, PureState>) {
          return pure_density(s.num_sites, s.local_dim, s.amplitudes);
        } else if constexpr (std::is_same_v<T, ExplicitState>) {
          return DensityMatrix(s.num_sites, s.local_dim, s.entries);
        } else {
          std::mt19937_64 rng(s.seed);
          return random_density(s.num_sites, s.local_dim, rng);
        }
      },
      spec);
}

// Single-qubit Pauli matrices.
inline Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
inline Matrix pauli_y() { return (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(); }
inline Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }

}  // namespace lqhv
