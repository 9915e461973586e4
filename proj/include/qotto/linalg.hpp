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
#include <functional>
#include <span>

#include <Eigen/Dense>

namespace qotto::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Largest chain supported by the dense backend (2^10 = 1024 rows).
inline constexpr int kMaxSites = 10;

enum class Axis { x, y, z };

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are ascending. Each eigenvector column has its phase fixed so
/// that its first largest-magnitude component is real and positive, which
/// makes the output reproducible for identical inputs.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  [[nodiscard]] int dim() const { return static_cast<int>(eigenvalues.size()); }
};

[[nodiscard]] inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// max|M - M^dagger|.
[[nodiscard]] double hermiticity_defect(const ComplexMatrix& m);

[[nodiscard]] bool is_power_of_two(Eigen::Index n);

// I x ... x sigma^axis x ... x I with the Pauli factor at `site` (1-based,
// site 1 is the leftmost tensor factor).
[[nodiscard]] ComplexMatrix pauli_embed(Axis axis, int site, int num_sites);

// Throws ContractViolation if `m` is not square, not 2^N-dimensional, or not
// Hermitian within 1e-12 relative.
[[nodiscard]] Spectrum hermitian_spectrum(const ComplexMatrix& m);

// V diag(f(lambda)) V^dagger.
[[nodiscard]] ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                               const std::function<double(double)>& f);

[[nodiscard]] ComplexMatrix reconstruct(const Spectrum& s, std::span<const double> values);

// Principal square root of a positive-semidefinite matrix. Negative
// eigenvalues are clamped to zero; clamps larger than 1e-10 are logged.
[[nodiscard]] ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// exp(-i H dt), hbar = 1.
[[nodiscard]] ComplexMatrix unitary_step(const ComplexMatrix& h, double dt);

// Tr[A B] without forming the product.
[[nodiscard]] Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Re Tr[rho H].
[[nodiscard]] double expectation(const ComplexMatrix& rho, const ComplexMatrix& h);

[[nodiscard]] ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// -Tr[rho ln rho] (natural log); eigenvalues below 1e-300 contribute zero.
[[nodiscard]] double von_neumann_entropy(const ComplexMatrix& rho);

[[nodiscard]] double purity(const ComplexMatrix& rho);

}  // namespace qotto::linalg
