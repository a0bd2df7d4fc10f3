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

#include <random>

#include "lqhv/qlinalg.hpp"

namespace lqhv {

template <typename Rng>
Matrix random_ginibre(Index dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the R-diagonal phases removed).
template <typename Rng>
Matrix random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_ginibre(dim, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    if (std::abs(diag) > 0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

/// GUE-style random Hermitian matrix; non-degenerate with probability one.
template <typename Rng>
HermitianMatrix random_hermitian(Index dim, Rng& rng) {
  return HermitianMatrix::symmetrized(random_ginibre(dim, rng));
}

/// U diag(+1,...,+1,-1,...,-1) U^dagger with ceil(d/2) positive signs.
template <typename Rng>
HermitianMatrix random_dichotomic(Index dim, Rng& rng) {
  const Matrix u = random_unitary(dim, rng);
  RVector signs(dim);
  for (Index k = 0; k < dim; ++k) signs(k) = k < (dim + 1) / 2 ? 1.0 : -1.0;
  return HermitianMatrix::symmetrized(u * signs.cast<Complex>().asDiagonal() * u.adjoint());
}

}  // namespace lqhv
