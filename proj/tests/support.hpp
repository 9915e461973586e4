// Copyright 2026 The qotto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <random>

#include "qotto/linalg.hpp"

namespace qotto::testing {

using linalg::Complex;
using linalg::ComplexMatrix;

inline const ComplexMatrix& sx() {
  static const ComplexMatrix m = (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished();
  return m;
}
inline const ComplexMatrix& sy() {
  static const ComplexMatrix m =
      (ComplexMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}
inline const ComplexMatrix& sz() {
  static const ComplexMatrix m = (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished();
  return m;
}

// Kronecker product, written out so the tests do not share code with the
// bit-twiddling embedding under test.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Pauli `p` on `site` (1-based, site 1 leftmost) of an n-site chain.
inline ComplexMatrix embed(const ComplexMatrix& p, int site, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 1; k <= n; ++k) out = kron(out, k == site ? p : ComplexMatrix::Identity(2, 2));
  return out;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  }
  return 0.5 * (m + m.adjoint());
}

// Random density matrix: W W^dagger normalized.
inline ComplexMatrix random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexMatrix w(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) w(i, j) = Complex(nd(rng), nd(rng));
  }
  ComplexMatrix rho = w * w.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

// Taylor series of exp(-i h dt) with repeated squaring; independent of the
// spectral path.
inline ComplexMatrix taylor_expm(const ComplexMatrix& h, double dt) {
  const double norm = max_abs(h) * h.rows() * std::abs(dt);
  int squarings = 0;
  while (norm / (1 << squarings) > 0.5) ++squarings;
  const ComplexMatrix a = Complex(0, -dt / (1 << squarings)) * h;
  ComplexMatrix term = ComplexMatrix::Identity(h.rows(), h.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace qotto::testing
