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

#include "qotto/linalg.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "qotto/errors.hpp"
#include "qotto/log.hpp"

namespace qotto::linalg {

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

ComplexMatrix pauli_embed(Axis axis, int site, int num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw ArgumentError("pauli_embed: chain length " + std::to_string(num_sites) +
                        " outside [1, " + std::to_string(kMaxSites) + "]");
  }
  if (site < 1 || site > num_sites) {
    throw ArgumentError("pauli_embed: site " + std::to_string(site) + " outside [1, " +
                        std::to_string(num_sites) + "]");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  const Eigen::Index mask = Eigen::Index{1} << (num_sites - site);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const bool down = (k & mask) != 0;
    switch (axis) {
      case Axis::x: out(k ^ mask, k) = 1.0; break;
      case Axis::y: out(k ^ mask, k) = down ? Complex(0, -1) : Complex(0, 1); break;
      case Axis::z: out(k, k) = down ? -1.0 : 1.0; break;
    }
  }
  return out;
}

Spectrum hermitian_spectrum(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || !is_power_of_two(m.rows())) {
    std::ostringstream os;
    os << "hermitian_spectrum: expected a 2^N square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ContractViolation(os.str());
  }
  const double scale = max_abs(m);
  if (!std::isfinite(scale)) throw ContractViolation("hermitian_spectrum: non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > 1e-12 * scale) {
    std::ostringstream os;
    os << "hermitian_spectrum: matrix is not Hermitian (max|M - M^+| = " << defect
       << ", max|M| = " << scale << ")";
    throw ContractViolation(os.str());
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ContractViolation("hermitian_spectrum: eigensolver did not converge");
  }
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < s.eigenvectors.rows(); ++r) {
      const double a = std::abs(s.eigenvectors(r, c));
      if (a > best * (1.0 + 1e-12) + 1e-300) {
        best = a;
        pivot = r;
      }
    }
    const Complex z = s.eigenvectors(pivot, c);
    if (std::abs(z) > 0.0) s.eigenvectors.col(c) *= std::conj(z) / std::abs(z);
  }
  return s;
}

ComplexMatrix reconstruct(const Spectrum& s, std::span<const double> values) {
  const Eigen::Index n = s.eigenvectors.rows();
  ComplexMatrix scaled = s.eigenvectors;
  for (Eigen::Index c = 0; c < n; ++c) scaled.col(c) *= values[static_cast<std::size_t>(c)];
  return scaled * s.eigenvectors.adjoint();
}

ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                 const std::function<double(double)>& f) {
  const Spectrum s = hermitian_spectrum(m);
  std::vector<double> values(static_cast<std::size_t>(s.dim()));
  for (int i = 0; i < s.dim(); ++i) values[static_cast<std::size_t>(i)] = f(s.eigenvalues(i));
  return reconstruct(s, values);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const Spectrum s = hermitian_spectrum(m);
  std::vector<double> values(static_cast<std::size_t>(s.dim()));
  double worst = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    const double v = s.eigenvalues(i);
    if (v < 0.0) worst = std::min(worst, v);
    values[static_cast<std::size_t>(i)] = std::sqrt(std::max(v, 0.0));
  }
  if (worst < -1e-10) {
    std::ostringstream os;
    os << "psd_sqrt: clamped negative eigenvalue " << worst;
    log::warning(os.str());
  }
  return reconstruct(s, values);
}

ComplexMatrix unitary_step(const ComplexMatrix& h, double dt) {
  const Spectrum s = hermitian_spectrum(h);
  const Eigen::Index n = s.eigenvectors.rows();
  ComplexMatrix scaled = s.eigenvectors;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double phase = -s.eigenvalues(c) * dt;
    scaled.col(c) *= Complex(std::cos(phase), std::sin(phase));
  }
  ComplexMatrix u = scaled * s.eigenvectors.adjoint();
  // One Newton-Schulz polar step removes the O(n eps) departure from
  // unitarity that would otherwise accumulate over many steps.
  const ComplexMatrix gram = u.adjoint() * u;
  ComplexMatrix correction = -0.5 * gram;
  correction.diagonal().array() += 1.5;
  return u * correction;
}

Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    std::ostringstream os;
    os << "trace_inner: dimension mismatch " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw ArgumentError(os.str());
  }
  // Tr[AB] = sum_ik A_ik B_ki = sum of (A o B^T).
  return a.cwiseProduct(b.transpose()).sum();
}

double expectation(const ComplexMatrix& rho, const ComplexMatrix& h) {
  return trace_inner(rho, h).real();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  const Spectrum s = hermitian_spectrum(rho);
  double entropy = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    const double p = s.eigenvalues(i);
    if (p > 1e-300) entropy -= p * std::log(p);
  }
  return entropy;
}

double purity(const ComplexMatrix& rho) { return trace_inner(rho, rho).real(); }

}  // namespace qotto::linalg
