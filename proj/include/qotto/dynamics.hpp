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

#include <functional>
#include <vector>

#include "qotto/linalg.hpp"
#include "qotto/model.hpp"

namespace qotto::dynamics {

using linalg::ComplexMatrix;

enum class Integrator {
  midpoint,  // exp(-i H(t + dt/2) dt), second order
  cf4,       // two-exponential commutator-free Magnus at the Gauss points, fourth order
};

enum class WorkQuadrature { trapezoid, simpson };

struct PropagationConfig {
  // Time slices per stroke; 0 selects max(min_steps, ceil(step_density * scale * tau)).
  int steps = 0;
  double step_density = 2.0;
  int min_steps = 250;
  Integrator integrator = Integrator::cf4;
  // Rule for the Tr[rho dH/dt] cross-check integrals.
  WorkQuadrature work_quadrature = WorkQuadrature::trapezoid;
  // Central-difference step for dH_CD/dt; 0 selects min(dt / 10, 1e-4 tau).
  double derivative_eps = 0.0;
  bool quadrature_cross_check = true;
  bool record_samples = false;

  // Throws ArgumentError if the resolved count is below 16.
  [[nodiscard]] int resolve_steps(double tau, double field_scale) const;
  [[nodiscard]] double resolve_eps(double tau, int steps) const;
  // Same config with twice the time resolution.
  [[nodiscard]] PropagationConfig refined() const;
};

struct HamiltonianSample {
  ComplexMatrix h0;
  ComplexMatrix h_cd;  // empty matrix means no counter-diabatic term
};

/// Time-dependent Hamiltonian of one isentropic stroke on [0, tau].
struct StrokeHamiltonian {
  double tau = 1.0;
  // Rough bound on the fastest precession frequency; sets the automatic step count.
  double field_scale = 1.0;
  std::function<HamiltonianSample(double)> sample;
  std::function<ComplexMatrix(double)> dh0;
  // Empty: central differences of sample(t).h_cd.
  std::function<ComplexMatrix(double)> dh_cd;
};

struct WorkSample {
  double t;
  double power0;   // Tr[rho dH0/dt]
  double power_cd; // Tr[rho dH_CD/dt]
};

/// Work exchanged during one stroke.
///
/// W0 = d<H0> - X and WCD = d<H_CD> + X, where X integrates the power
/// -i Tr(rho [H0, H_CD]) that the drive moves into H0 (Simpson rule). Hence
/// W0 + WCD equals the energy change of the full Hamiltonian to rounding
/// error. The *_quadrature fields integrate Tr[rho dH/dt] on the step grid
/// independently.
struct WorkLedger {
  double W0 = 0.0;
  double WCD = 0.0;
  double WSTA = 0.0;
  double W0_quadrature = 0.0;
  double WCD_quadrature = 0.0;
  double energy_start = 0.0;  // <H(0)>_{rho(0)}
  double energy_end = 0.0;    // <H(tau)>_{rho(tau)}
  int steps = 0;
  std::vector<WorkSample> samples;

  [[nodiscard]] double delta_energy() const { return energy_end - energy_start; }
};

struct StrokeDiagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  double entropy_start = 0.0;
  double entropy_end = 0.0;
  double purity_start = 0.0;
  double purity_end = 0.0;
};

struct StrokeResult {
  ComplexMatrix rho;
  WorkLedger ledger;
  StrokeDiagnostics diagnostics;
};

// Throws ContractViolation unless rho is Hermitian, unit trace and PSD within 1e-10.
void check_state(const ComplexMatrix& rho, const char* who);

/// Propagates rho0 through the stroke and accumulates the work integrals.
/// Throws ContractViolation for an invalid initial state or a non-finite
/// Hamiltonian sample.
[[nodiscard]] StrokeResult propagate_stroke(const ComplexMatrix& rho0,
                                            const StrokeHamiltonian& hamiltonian,
                                            const PropagationConfig& cfg);

// Final state only; skips all work bookkeeping.
[[nodiscard]] ComplexMatrix propagate_state(const ComplexMatrix& rho0,
                                            const StrokeHamiltonian& hamiltonian,
                                            const PropagationConfig& cfg);

// d/dt of a matrix-valued function on [0, tau]: central difference inside,
// one-sided within eps of a boundary.
[[nodiscard]] ComplexMatrix time_derivative(const std::function<ComplexMatrix(double)>& f,
                                            double t, double eps, double tau);

// dH_CD/dt of the local drive; exactly zero at t = 0 and t = tau.
[[nodiscard]] ComplexMatrix cd_time_derivative(const model::DriveSchedule& s,
                                               const model::ControlFunction& c, double t,
                                               double eps);

}  // namespace qotto::dynamics
