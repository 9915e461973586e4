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

#include "qotto/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qotto/errors.hpp"

namespace qotto::model {
namespace {

using linalg::Complex;
constexpr double kPi = std::numbers::pi;

void check_time(double t, double tau, const char* who) {
  if (!(t >= 0.0 && t <= tau)) {
    std::ostringstream os;
    os << who << ": t = " << t << " outside [0, " << tau << "]";
    throw ArgumentError(os.str());
  }
}

void check_fields(const FieldSet& f, const char* who) {
  const auto n = f.h.size();
  if (n < 1 || f.b.size() != n || f.J.size() != n) {
    std::ostringstream os;
    os << who << ": field arrays must share a nonzero length (h=" << f.h.size()
       << ", b=" << f.b.size() << ", J=" << f.J.size() << ")";
    throw ArgumentError(os.str());
  }
  if (static_cast<int>(n) > linalg::kMaxSites) {
    throw ArgumentError(std::string(who) + ": chain longer than " +
                        std::to_string(linalg::kMaxSites) + " sites");
  }
}

FieldSet interpolate(const FieldSet& from, const FieldSet& to, double weight) {
  FieldSet out = from;
  for (std::size_t j = 0; j < from.h.size(); ++j) {
    out.h[j] += (to.h[j] - from.h[j]) * weight;
    out.b[j] += (to.b[j] - from.b[j]) * weight;
    out.J[j] += (to.J[j] - from.J[j]) * weight;
  }
  return out;
}

}  // namespace

FieldSet FieldSet::uniform(int num_sites, double h, double b, double J) {
  const auto n = static_cast<std::size_t>(num_sites);
  return FieldSet{std::vector<double>(n, h), std::vector<double>(n, b),
                  std::vector<double>(n, J)};
}

RampSample ramp(double t, double tau) {
  if (t <= 0.0) return {0.0, 0.0};
  if (t >= tau) return {1.0, 0.0};
  const double s = std::sin(kPi * t / (2.0 * tau));
  const double inner = s * s;
  const double outer = std::sin(0.5 * kPi * inner);
  const double rate = (kPi * kPi / (4.0 * tau)) * std::sin(kPi * t / tau) * std::sin(kPi * inner);
  return {outer * outer, rate};
}

DriveSchedule::DriveSchedule(FieldSet initial, FieldSet final, double tau, Direction direction)
    : initial_(std::move(initial)), final_(std::move(final)), tau_(tau), direction_(direction) {
  check_fields(initial_, "DriveSchedule");
  check_fields(final_, "DriveSchedule");
  if (initial_.num_sites() != final_.num_sites()) {
    throw ArgumentError("DriveSchedule: initial and final chain lengths differ");
  }
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw ArgumentError("DriveSchedule: tau must be positive and finite");
  }
}

const FieldSet& DriveSchedule::start() const {
  return direction_ == Direction::forward ? initial_ : final_;
}

const FieldSet& DriveSchedule::end() const {
  return direction_ == Direction::forward ? final_ : initial_;
}

DriveSchedule DriveSchedule::reversed() const {
  return DriveSchedule(initial_, final_, tau_,
                       direction_ == Direction::forward ? Direction::reversed
                                                        : Direction::forward);
}

DriveSchedule DriveSchedule::with_tau(double tau) const {
  return DriveSchedule(initial_, final_, tau, direction_);
}

FieldPoint DriveSchedule::evaluate(double t) const {
  check_time(t, tau_, "DriveSchedule::evaluate");
  const RampSample r = ramp(t, tau_);
  const FieldSet& a = start();
  const FieldSet& z = end();
  FieldPoint p{interpolate(a, z, r.value), FieldSet::zeros(num_sites())};
  for (std::size_t j = 0; j < a.h.size(); ++j) {
    p.rate.h[j] = (z.h[j] - a.h[j]) * r.rate;
    p.rate.b[j] = (z.b[j] - a.b[j]) * r.rate;
    p.rate.J[j] = (z.J[j] - a.J[j]) * r.rate;
  }
  return p;
}

ControlFunction::ControlFunction(double theta0, double tau) : theta0_(theta0), tau_(tau) {
  if (!(theta0 >= 0.0 && theta0 <= 1.0)) {
    std::ostringstream os;
    os << "ControlFunction: theta0 = " << theta0 << " outside [0, 1]";
    throw ArgumentError(os.str());
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ArgumentError("ControlFunction: tau must be positive and finite");
  }
}

ControlFunction::Sample ControlFunction::evaluate(double t) const {
  check_time(t, tau_, "ControlFunction::evaluate");
  const RampSample r = ramp(t, tau_);
  return {theta0_ * r.value, theta0_ * r.rate};
}

DriveSchedule LZSchedule::to_drive_schedule() const {
  return DriveSchedule(FieldSet{{hx_i}, {bz_i}, {0.0}}, FieldSet{{hx_f}, {bz_f}, {0.0}}, tau);
}

double lz_fcd(const LZSchedule& s, double t) {
  const FieldPoint p = s.to_drive_schedule().evaluate(t);
  const double h = p.value.h[0], b = p.value.b[0];
  const double denom = h * h + b * b;
  if (denom <= 1e-14) {
    std::ostringstream os;
    os << "lz_fcd: h_x^2 + b_z^2 = " << denom << " vanishes at t = " << t;
    throw SingularPointError(os.str());
  }
  return 0.5 * (p.rate.h[0] * b - p.rate.b[0] * h) / denom;
}

ComplexMatrix assemble_ising(const FieldSet& fields, std::span<const double> y) {
  check_fields(fields, "assemble_ising");
  const int n = fields.num_sites();
  if (!y.empty() && static_cast<int>(y.size()) != n) {
    throw ArgumentError("assemble_ising: sigma^y coefficient count differs from chain length");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      const Eigen::Index mask = Eigen::Index{1} << (n - 1 - j);
      const Eigen::Index next = Eigen::Index{1} << (n - 1 - ((j + 1) % n));
      const double zj = (k & mask) ? -1.0 : 1.0;
      const double zn = (k & next) ? -1.0 : 1.0;
      diag -= fields.b[sj] * zj;
      // A one-site ring has no bond; Z_1 Z_1 would only shift the energy.
      if (n > 1) diag -= fields.J[sj] * zj * zn;
      Complex off = -fields.h[sj];
      if (!y.empty()) off += y[sj] * ((k & mask) ? Complex(0, -1) : Complex(0, 1));
      out(k ^ mask, k) += off;
    }
    out(k, k) += diag;
  }
  return out;
}

ComplexMatrix build_h0(const FieldSet& fields) { return assemble_ising(fields); }

ComplexMatrix build_dh0(const FieldSet& rates) { return assemble_ising(rates); }

ComplexMatrix build_sigma_y_sum(std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  return assemble_ising(FieldSet::zeros(n), y);
}

std::vector<double> cd_alpha(const FieldPoint& point) {
  const FieldSet& v = point.value;
  const FieldSet& d = point.rate;
  check_fields(v, "cd_alpha");
  check_fields(d, "cd_alpha");
  const int n = v.num_sites();
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const auto prev = static_cast<std::size_t>((j + n - 1) % n);
    double denom = v.h[sj] * v.h[sj] + v.b[sj] * v.b[sj];
    if (n > 1) denom += v.J[prev] * v.J[prev] + v.J[sj] * v.J[sj];
    if (denom < 1e-14) {
      std::ostringstream os;
      os << "cd_alpha: vanishing denominator " << denom << " at site " << j + 1;
      throw SingularPointError(os.str());
    }
    alpha[sj] = 0.5 * (d.h[sj] * v.b[sj] - d.b[sj] * v.h[sj]) / denom;
  }
  return alpha;
}

namespace {
void check_pair(const DriveSchedule& s, const ControlFunction& c) {
  if (std::abs(s.tau() - c.tau()) > 1e-12 * s.tau()) {
    throw ArgumentError("schedule and control function durations differ");
  }
}
}  // namespace

std::vector<double> local_cd_fields(const DriveSchedule& s, const ControlFunction& c, double t) {
  check_pair(s, c);
  const double rate = c.evaluate(t).rate;
  std::vector<double> y = cd_alpha(s.evaluate(t));
  for (double& v : y) v *= rate;
  return y;
}

ComplexMatrix build_h_cd(const DriveSchedule& s, const ControlFunction& c, double t) {
  return build_sigma_y_sum(local_cd_fields(s, c, t));
}

ComplexMatrix build_h_sta(const DriveSchedule& s, const ControlFunction& c, double t) {
  const std::vector<double> y = local_cd_fields(s, c, t);
  return assemble_ising(s.evaluate(t).value, y);
}

}  // namespace qotto::model
