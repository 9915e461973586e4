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

#include "qotto/gauge.hpp"

#include <cmath>
#include <sstream>

#include "qotto/errors.hpp"

namespace qotto::gauge {
namespace {

using linalg::Complex;

void check_dims(const ComplexMatrix& h0, const ComplexMatrix& dh0, const ComplexMatrix& a) {
  const auto n = h0.rows();
  if (h0.cols() != n || dh0.rows() != n || dh0.cols() != n || a.rows() != n || a.cols() != n) {
    throw ArgumentError("gauge: operator dimensions differ");
  }
}

// S(alpha_j = x, others zero) for x in {-1, 0, 1}.
struct SiteSamples {
  double minus, zero, plus;
};

std::vector<SiteSamples> sample_action(const model::FieldPoint& point) {
  const ComplexMatrix h0 = model::build_h0(point.value);
  const ComplexMatrix dh0 = model::build_dh0(point.rate);
  const int n = point.value.num_sites();
  const Eigen::Index dim = h0.rows();
  const double base = action(h0, dh0, ComplexMatrix::Zero(dim, dim));
  std::vector<SiteSamples> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const ComplexMatrix y = linalg::pauli_embed(linalg::Axis::y, j, n);
    out.push_back({action(h0, dh0, -y), base, action(h0, dh0, y)});
  }
  return out;
}

}  // namespace

ComplexMatrix LocalAnsatz::as_operator() const { return model::build_sigma_y_sum(alpha); }

ComplexMatrix compute_g(const ComplexMatrix& h0, const ComplexMatrix& dh0,
                        const ComplexMatrix& a) {
  check_dims(h0, dh0, a);
  return dh0 + Complex(0, 1) * linalg::commutator(a, h0);
}

double action(const ComplexMatrix& h0, const ComplexMatrix& dh0, const ComplexMatrix& a) {
  const ComplexMatrix g = compute_g(h0, dh0, a);
  return linalg::trace_inner(g, g).real();
}

double closed_form_action(const model::FieldPoint& point, const LocalAnsatz& ansatz) {
  const model::FieldSet& v = point.value;
  const model::FieldSet& d = point.rate;
  const int n = v.num_sites();
  if (n < 3) throw ArgumentError("closed_form_action: requires a ring of at least 3 sites");
  if (ansatz.num_sites() != n || d.num_sites() != n) {
    throw ArgumentError("closed_form_action: ansatz length differs from chain length");
  }
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto s = static_cast<std::size_t>(j);
    const auto prev = static_cast<std::size_t>((j + n - 1) % n);
    const double a = ansatz.alpha[s];
    const double x = d.h[s] - 2.0 * a * v.b[s];
    const double z = d.b[s] + 2.0 * a * v.h[s];
    sum += x * x + z * z + d.J[s] * d.J[s] +
           4.0 * a * a * (v.J[prev] * v.J[prev] + v.J[s] * v.J[s]);
  }
  return std::ldexp(sum, n);
}

LocalAnsatz minimize_action(const model::FieldPoint& point) {
  const std::vector<SiteSamples> samples = sample_action(point);
  LocalAnsatz out;
  out.alpha.reserve(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const SiteSamples& s = samples[j];
    // S(x) = c2 x^2 + c1 x + c0 through x = -1, 0, 1.
    const double c2 = 0.5 * (s.plus + s.minus) - s.zero;
    const double c1 = 0.5 * (s.plus - s.minus);
    if (!(c2 > 1e-14 * std::max(1.0, std::abs(s.zero)))) {
      std::ostringstream os;
      os << "minimize_action: action is flat in alpha_" << j + 1 << " (curvature " << 2 * c2
         << ")";
      throw SingularPointError(os.str());
    }
    out.alpha.push_back(-c1 / (2.0 * c2));
  }
  return out;
}

std::vector<double> action_curvatures(const model::FieldPoint& point) {
  std::vector<double> out;
  for (const SiteSamples& s : sample_action(point)) out.push_back(s.plus + s.minus - 2 * s.zero);
  return out;
}

ComplexMatrix exact_cd(const ComplexMatrix& h0, const ComplexMatrix& dh0) {
  check_dims(h0, dh0, dh0);
  const Eigen::Index dim = h0.rows();
  if (linalg::max_abs(dh0) == 0.0) return ComplexMatrix::Zero(dim, dim);
  const linalg::Spectrum s = linalg::hermitian_spectrum(h0);
  const double range = s.eigenvalues(dim - 1) - s.eigenvalues(0);
  double min_gap = std::numeric_limits<double>::infinity();
  Eigen::Index where = 0;
  for (Eigen::Index k = 0; k + 1 < dim; ++k) {
    const double gap = s.eigenvalues(k + 1) - s.eigenvalues(k);
    if (gap < min_gap) {
      min_gap = gap;
      where = k;
    }
  }
  if (dim > 1 && !(min_gap > 1e-8 * range)) {
    std::ostringstream os;
    os << "exact_cd: near-degenerate spectrum, gap " << min_gap << " between levels " << where
       << " and " << where + 1 << " (spectral range " << range << ")";
    throw DegeneracyError(os.str());
  }
  const ComplexMatrix& v = s.eigenvectors;
  ComplexMatrix m = v.adjoint() * dh0 * v;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = r == c ? Complex(0.0)
                       : Complex(0, 1) * m(r, c) / (s.eigenvalues(c) - s.eigenvalues(r));
    }
  }
  ComplexMatrix out = v * m * v.adjoint();
  return 0.5 * (out + out.adjoint());
}

double commutator_residual(const ComplexMatrix& h0, const ComplexMatrix& dh0, const ComplexMatrix& a) {
  check_dims(h0, dh0, a);
  const ComplexMatrix inner = Complex(0, 1) * dh0 - linalg::commutator(a, h0);
  return linalg::max_abs(linalg::commutator(inner, h0));
}

}  // namespace qotto::gauge
