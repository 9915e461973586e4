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

#include <span>
#include <vector>

#include "qotto/linalg.hpp"

namespace qotto::model {

using linalg::ComplexMatrix;

/// Per-site Ising parameters: transverse field h_j (sigma^x), longitudinal
/// field b_j (sigma^z) and the coupling J_j between sites j and j+1 on a ring.
/// The same container carries time derivatives of those parameters.
struct FieldSet {
  std::vector<double> h;
  std::vector<double> b;
  std::vector<double> J;

  [[nodiscard]] int num_sites() const { return static_cast<int>(h.size()); }

  // Broadcast scalars to N sites.
  [[nodiscard]] static FieldSet uniform(int num_sites, double h, double b, double J);
  [[nodiscard]] static FieldSet zeros(int num_sites) { return uniform(num_sites, 0, 0, 0); }
};

// Field values and their time derivatives at one instant.
struct FieldPoint {
  FieldSet value;
  FieldSet rate;
};

enum class Direction { forward, reversed };

// r(t) = sin^2[(pi/2) sin^2(pi t / 2 tau)] and its derivative.
struct RampSample {
  double value;
  double rate;
};
[[nodiscard]] RampSample ramp(double t, double tau);

/// Linear-in-ramp interpolation between two endpoint field sets over [0, tau].
///
/// A reversed schedule traverses the same endpoints from `final` back to
/// `initial`; it is the schedule of the expansion stroke.
class DriveSchedule {
 public:
  DriveSchedule(FieldSet initial, FieldSet final, double tau,
                Direction direction = Direction::forward);

  [[nodiscard]] int num_sites() const { return initial_.num_sites(); }
  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] Direction direction() const { return direction_; }
  [[nodiscard]] const FieldSet& initial() const { return initial_; }
  [[nodiscard]] const FieldSet& final() const { return final_; }

  // Endpoints in traversal order.
  [[nodiscard]] const FieldSet& start() const;
  [[nodiscard]] const FieldSet& end() const;

  [[nodiscard]] DriveSchedule reversed() const;
  [[nodiscard]] DriveSchedule with_tau(double tau) const;

  // Throws ArgumentError for t outside [0, tau].
  [[nodiscard]] FieldPoint evaluate(double t) const;

 private:
  FieldSet initial_;
  FieldSet final_;
  double tau_;
  Direction direction_;
};

/// theta(t) = theta0 r(t): envelope of the local counter-diabatic drive.
/// Its derivative vanishes (to second order) at both stroke boundaries.
class ControlFunction {
 public:
  ControlFunction(double theta0, double tau);

  [[nodiscard]] double theta0() const { return theta0_; }
  [[nodiscard]] double tau() const { return tau_; }

  struct Sample {
    double theta;
    double rate;
  };
  // Throws ArgumentError for t outside [0, tau].
  [[nodiscard]] Sample evaluate(double t) const;

 private:
  double theta0_;
  double tau_;
};

// Single-spin Landau-Zener protocol H = -h_x sigma^x - b_z sigma^z.
struct LZSchedule {
  double hx_i = 0.1;
  double hx_f = 0.0;
  double bz_i = 0.0;
  double bz_f = 0.5;
  double tau = 1.0;

  [[nodiscard]] DriveSchedule to_drive_schedule() const;
};

// Coefficient f_CD(t) of sigma^y in the exact CD term of the LZ model.
// Throws SingularPointError when h_x^2 + b_z^2 <= 1e-14.
[[nodiscard]] double lz_fcd(const LZSchedule& s, double t);

// -sum h_j X_j - sum b_j Z_j - sum J_j Z_j Z_{j+1} + sum y_j Y_j on a ring
// (Z_{N+1} = Z_1). `y` may be empty.
[[nodiscard]] ComplexMatrix assemble_ising(const FieldSet& fields, std::span<const double> y = {});

[[nodiscard]] ComplexMatrix build_h0(const FieldSet& fields);
// Same operator structure as build_h0 evaluated on the field rates.
[[nodiscard]] ComplexMatrix build_dh0(const FieldSet& rates);
// sum_j y_j sigma_j^y.
[[nodiscard]] ComplexMatrix build_sigma_y_sum(std::span<const double> y);

// alpha_j = (hdot_j b_j - bdot_j h_j) / (2 (h_j^2 + b_j^2 + J_{j-1}^2 + J_j^2)),
// with J_0 = J_N. Throws SingularPointError when a denominator is < 1e-14.
[[nodiscard]] std::vector<double> cd_alpha(const FieldPoint& point);

// Y_j = alpha_j * theta_dot. Exactly zero at t = 0 and t = tau.
[[nodiscard]] std::vector<double> local_cd_fields(const DriveSchedule& s,
                                                  const ControlFunction& c, double t);

[[nodiscard]] ComplexMatrix build_h_cd(const DriveSchedule& s, const ControlFunction& c, double t);
[[nodiscard]] ComplexMatrix build_h_sta(const DriveSchedule& s, const ControlFunction& c, double t);

}  // namespace qotto::model
