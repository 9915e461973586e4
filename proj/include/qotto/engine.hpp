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

#include <optional>
#include <string>
#include <string_view>

#include "qotto/dynamics.hpp"
#include "qotto/linalg.hpp"
#include "qotto/model.hpp"

// Four-stroke Otto cycle on an Ising working medium.
namespace qotto::engine {

using linalg::ComplexMatrix;

enum class Protocol { bare, local_sta, exact_sta };
enum class Regime { heat_engine, hybrid, adiabatic_limit, not_engine };

[[nodiscard]] std::string_view to_string(Protocol p);
[[nodiscard]] std::string_view to_string(Regime r);
// Throws ArgumentError on unknown names.
[[nodiscard]] Protocol parse_protocol(std::string_view name);

struct CycleConfig {
  // Stroke 1 (compression); its tau is tau1. Stroke 3 runs the endpoints in reverse.
  model::DriveSchedule schedule{model::FieldSet::uniform(1, 0.5, 0.0, 0.0),
                                model::FieldSet::uniform(1, 0.0, 1.0, 0.0), 1.0};
  double Tc = 0.22;
  double Th = 22.0;
  double tau2 = 0.1;
  double tau3 = 1.0;
  double tau4 = 0.1;
  Protocol protocol = Protocol::local_sta;
  // Fixed drive strength; empty means optimize on stroke 1 (local_sta only).
  std::optional<double> theta0;
  // Optimize stroke 3 separately on F3 instead of reusing the stroke-1 value.
  bool per_stroke_theta0 = false;
  double regime_threshold = 1e-3;
  dynamics::PropagationConfig propagation;

  [[nodiscard]] double tau1() const { return schedule.tau(); }
  [[nodiscard]] double tau_cycle() const { return tau1() + tau2 + tau3 + tau4; }
  // Throws ArgumentError on a violated invariant.
  void validate() const;
};

struct CycleReport {
  double W0_1 = 0, W0_3 = 0;
  double WCD_1 = 0, WCD_3 = 0;
  double WSTA_1 = 0, WSTA_3 = 0;
  double Qh = 0, Qc = 0;
  double P = 0;
  std::optional<double> eta;
  bool efficiency_anomaly = false;
  Regime regime = Regime::not_engine;
  double F1 = 0, F3 = 0;
  // Drive strength used on strokes 1 and 3 (absent for exact_sta).
  std::optional<double> theta0_star;
  std::optional<double> theta0_star_3;
  double tau_cycle = 0;
  double Tc = 0, Th = 0;

  dynamics::WorkLedger ledger1, ledger3;
  dynamics::StrokeDiagnostics stroke1, stroke3;

  [[nodiscard]] double W0_13() const { return W0_1 + W0_3; }
  [[nodiscard]] double WCD_13() const { return WCD_1 + WCD_3; }
  [[nodiscard]] double WSTA_13() const { return WSTA_1 + WSTA_3; }
  // WSTA_1 + WSTA_3 + Qh + Qc.
  [[nodiscard]] double first_law_residual() const { return WSTA_13() + Qh + Qc; }
  [[nodiscard]] double energy_scale() const;
};

// exp(-H/T)/Z with the ground energy shifted out. Throws ArgumentError for T <= 0.
[[nodiscard]] ComplexMatrix gibbs_state(const ComplexMatrix& h, double temperature);

/// State reached by perfectly adiabatic transport of `rho_source` (diagonal in
/// the eigenbasis of `h_source`) along the straight path h_source -> h_dest:
/// source populations in ascending-energy order are placed on the destination
/// eigenstates in ascending-energy order.
///
/// Degenerate destination levels are resolved into the states the path
/// approaches (degenerate perturbation theory in h_source - h_dest, to second
/// order). DegeneracyError if a degeneracy survives and the populations
/// assigned to it differ.
[[nodiscard]] ComplexMatrix adiabatic_target(const ComplexMatrix& rho_source,
                                             const ComplexMatrix& h_source,
                                             const ComplexMatrix& h_dest);

// Uhlmann fidelity Tr sqrt(sqrt(rho') rho sqrt(rho')), clipped to [0, 1].
[[nodiscard]] double fidelity(const ComplexMatrix& rho_prime, const ComplexMatrix& rho);

[[nodiscard]] Regime classify_regime(double wcd_13, double w0_13, double threshold = 1e-3);

struct Efficiency {
  std::optional<double> eta;
  bool anomaly = false;  // engine regime with Qh <= 0
};
[[nodiscard]] Efficiency efficiency(Regime regime, double w0_13, double wcd_13, double qh);
[[nodiscard]] Efficiency efficiency(const CycleReport& report);

// Stroke Hamiltonians for each protocol. theta0 is ignored unless local_sta.
[[nodiscard]] dynamics::StrokeHamiltonian bare_stroke(const model::DriveSchedule& s);
[[nodiscard]] dynamics::StrokeHamiltonian local_sta_stroke(const model::DriveSchedule& s,
                                                           double theta0);
[[nodiscard]] dynamics::StrokeHamiltonian exact_sta_stroke(const model::DriveSchedule& s);
[[nodiscard]] dynamics::StrokeHamiltonian make_stroke(Protocol protocol,
                                                      const model::DriveSchedule& s,
                                                      double theta0);

struct Theta0Search {
  double theta0;
  double fidelity;
  int evaluations;
};

/// Maximizes the stroke fidelity F(rho', target) of the local drive over
/// theta0 in [0, 1]: 21-point grid, then golden-section refinement of the
/// bracketing interval to 1e-3. Returns the best point evaluated, so the
/// result is never worse than theta0 = 0.
[[nodiscard]] Theta0Search optimize_theta0(const model::DriveSchedule& s,
                                           const ComplexMatrix& rho_start,
                                           const ComplexMatrix& target,
                                           const dynamics::PropagationConfig& cfg);

// Stroke-1 optimization for a cycle config (protocol must be local_sta).
[[nodiscard]] Theta0Search optimize_theta0(const CycleConfig& cfg);

// Stroke-1 fidelity for a fixed theta0 under the local drive.
[[nodiscard]] double stroke1_fidelity(const CycleConfig& cfg, double theta0);

[[nodiscard]] CycleReport run_cycle(const CycleConfig& cfg);

}  // namespace qotto::engine
