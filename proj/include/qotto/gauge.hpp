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

#include <vector>

#include "qotto/linalg.hpp"
#include "qotto/model.hpp"

// Variational adiabatic gauge potentials for the Ising ring.
namespace qotto::gauge {

using linalg::ComplexMatrix;

// Coefficients alpha_j of the single-site ansatz A = sum_j alpha_j sigma_j^y.
struct LocalAnsatz {
  std::vector<double> alpha;

  [[nodiscard]] int num_sites() const { return static_cast<int>(alpha.size()); }
  [[nodiscard]] ComplexMatrix as_operator() const;
};

// G = dH0 + i [A, H0].
[[nodiscard]] ComplexMatrix compute_g(const ComplexMatrix& h0, const ComplexMatrix& dh0,
                                      const ComplexMatrix& a);

// S = Tr[G^2], evaluated on the full matrices.
[[nodiscard]] double action(const ComplexMatrix& h0, const ComplexMatrix& dh0,
                            const ComplexMatrix& a);

/// Closed-form action for the single-site ansatz on a ring of N >= 3 sites:
///
///   S = 2^N sum_j [ (hdot_j - 2 a_j b_j)^2 + (bdot_j + 2 a_j h_j)^2
///                   + Jdot_j^2 + 4 a_j^2 (J_{j-1}^2 + J_j^2) ].
///
/// Cross-site Pauli strings are traceless, so the per-site terms decouple.
/// For N < 3 the ring bonds alias onto each other and the formula does not
/// hold; ArgumentError is thrown.
[[nodiscard]] double closed_form_action(const model::FieldPoint& point, const LocalAnsatz& ansatz);

/// Minimizes Tr[G^2] over the ansatz coefficients using only matrix
/// evaluations of the action. The action is a separable quadratic in the
/// alpha_j, so each coordinate is recovered from a three-point parabola fit.
[[nodiscard]] LocalAnsatz minimize_action(const model::FieldPoint& point);

// Curvature d^2 S / d alpha_j^2 estimated from the same three-point fit.
[[nodiscard]] std::vector<double> action_curvatures(const model::FieldPoint& point);

/// Exact counter-diabatic Hamiltonian in the instantaneous eigenbasis,
///
///   H_CD = i sum_{m != n} |m><m| dH0 |n><n| / (E_n - E_m),
///
/// the unique off-diagonal solution of [i dH0 - [H_CD, H0], H0] = 0.
/// Returns zero if dH0 vanishes. Throws DegeneracyError when the smallest
/// level spacing is below 1e-8 times the spectral range.
[[nodiscard]] ComplexMatrix exact_cd(const ComplexMatrix& h0, const ComplexMatrix& dh0);

// max|[i dH0 - [A, H0], H0]|.
[[nodiscard]] double commutator_residual(const ComplexMatrix& h0, const ComplexMatrix& dh0,
                                 const ComplexMatrix& a);

}  // namespace qotto::gauge
