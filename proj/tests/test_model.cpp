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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qotto/errors.hpp"
#include "qotto/model.hpp"
#include "support.hpp"

using namespace qotto;
using namespace qotto::testing;
using model::FieldSet;

namespace {

constexpr double kPi = std::numbers::pi;

// Oracle: -sum h X - sum b Z - sum J Z Z + sum y Y from explicit Kronecker products.
ComplexMatrix ising_oracle(const FieldSet& f, const std::vector<double>& y = {}) {
  const int n = f.num_sites();
  const int dim = 1 << n;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int j = 1; j <= n; ++j) {
    const int next = j % n + 1;
    const auto s = static_cast<std::size_t>(j - 1);
    out -= f.h[s] * embed(sx(), j, n) + f.b[s] * embed(sz(), j, n);
    if (n > 1) out -= f.J[s] * embed(sz(), j, n) * embed(sz(), next, n);
    if (!y.empty()) out += y[s] * embed(sy(), j, n);
  }
  return out;
}

FieldSet random_fields(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FieldSet f = FieldSet::zeros(n);
  for (int j = 0; j < n; ++j) {
    f.h[j] = u(rng);
    f.b[j] = u(rng);
    f.J[j] = u(rng);
  }
  return f;
}

model::DriveSchedule ramp_schedule(int n, double tau) {
  return {FieldSet::uniform(n, 0.5, 0.0, 0.0), FieldSet::uniform(n, 0.0, 1.0, 0.0), tau};
}

}  // namespace

TEST_CASE("ramp closed-form values") {
  CHECK(model::ramp(0.0, 2.0).value == 0.0);
  CHECK(model::ramp(0.0, 2.0).rate == 0.0);
  CHECK(model::ramp(2.0, 2.0).value == 1.0);
  CHECK(model::ramp(2.0, 2.0).rate == 0.0);
  CHECK(model::ramp(1.0, 2.0).value == doctest::Approx(0.5).epsilon(1e-15));
  // Symmetry r(tau - t) = 1 - r(t).
  for (double t : {0.1, 0.4, 0.77, 1.3}) {
    CHECK(model::ramp(2.0 - t, 2.0).value == doctest::Approx(1.0 - model::ramp(t, 2.0).value));
  }
}

TEST_CASE("schedule endpoints, midpoint and rates") {
  std::mt19937_64 rng(1);
  const FieldSet a = random_fields(3, rng);
  const FieldSet z = random_fields(3, rng);
  const model::DriveSchedule s(a, z, 1.7);
  const model::FieldPoint p0 = s.evaluate(0.0);
  const model::FieldPoint p1 = s.evaluate(1.7);
  const model::FieldPoint mid = s.evaluate(0.85);
  for (int j = 0; j < 3; ++j) {
    CHECK(p0.value.h[j] == a.h[j]);
    CHECK(p1.value.b[j] == z.b[j]);
    CHECK(p0.rate.J[j] == 0.0);
    CHECK(p1.rate.h[j] == 0.0);
    CHECK(mid.value.J[j] == doctest::Approx(0.5 * (a.J[j] + z.J[j])).epsilon(1e-14));
  }
  CHECK(linalg::max_abs(model::build_dh0(p0.rate)) == 0.0);
  CHECK(linalg::max_abs(model::build_dh0(p1.rate)) == 0.0);

  const double eps = 1e-5;
  for (double t : {0.2, 0.85, 1.5}) {
    const ComplexMatrix fd =
        (model::build_h0(s.evaluate(t + eps).value) - model::build_h0(s.evaluate(t - eps).value)) /
        (2 * eps);
    CHECK(max_abs(fd - model::build_dh0(s.evaluate(t).rate)) < 1e-8);
  }
  CHECK_THROWS_AS((void)s.evaluate(-1e-9), ArgumentError);
  CHECK_THROWS_AS((void)s.evaluate(1.7 + 1e-9), ArgumentError);
}

TEST_CASE("schedule construction rejects bad input") {
  CHECK_THROWS_AS(model::DriveSchedule(FieldSet::zeros(2), FieldSet::zeros(3), 1.0),
                  ArgumentError);
  CHECK_THROWS_AS(model::DriveSchedule(FieldSet::zeros(2), FieldSet::zeros(2), 0.0),
                  ArgumentError);
  CHECK_THROWS_AS(model::DriveSchedule(FieldSet::zeros(0), FieldSet::zeros(0), 1.0),
                  ArgumentError);
}

TEST_CASE("build_h0 examples") {
  CHECK(max_abs(model::build_h0(FieldSet::uniform(1, 0.5, 0.0, 0.7)) + 0.5 * sx()) == 0.0);

  const double J = 0.3;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << -2 * J, 2 * J, 2 * J, -2 * J;
  CHECK(max_abs(model::build_h0(FieldSet::uniform(2, 0.0, 0.0, J)) - expected) < 1e-15);

  CHECK(max_abs(model::build_h0(FieldSet::zeros(3))) == 0.0);
}

TEST_CASE("build_h0 and assemble_ising match the Kronecker oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 5; ++n) {
    const FieldSet f = random_fields(n, rng);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y) v = u(rng);
    CHECK(max_abs(model::build_h0(f) - ising_oracle(f)) < 1e-14);
    CHECK(max_abs(model::assemble_ising(f, y) - ising_oracle(f, y)) < 1e-14);
    CHECK(linalg::hermiticity_defect(model::assemble_ising(f, y)) == 0.0);
  }
}

TEST_CASE("cd_alpha examples") {
  model::FieldPoint p{FieldSet::uniform(3, 0.4, 0.0, 0.2), FieldSet::uniform(3, 1.3, 0.0, 0.5)};
  for (double a : model::cd_alpha(p)) CHECK(a == 0.0);

  std::mt19937_64 rng(3);
  p = {random_fields(4, rng), random_fields(4, rng)};
  const std::vector<double> alpha = model::cd_alpha(p);
  for (int j = 0; j < 4; ++j) {
    const int prev = (j + 3) % 4;
    const double denom = p.value.h[j] * p.value.h[j] + p.value.b[j] * p.value.b[j] +
                         p.value.J[prev] * p.value.J[prev] + p.value.J[j] * p.value.J[j];
    const double num = p.rate.h[j] * p.value.b[j] - p.rate.b[j] * p.value.h[j];
    CHECK(alpha[j] == doctest::Approx(0.5 * num / denom).epsilon(1e-14));
  }

  model::FieldPoint dead{FieldSet::zeros(2), FieldSet::uniform(2, 1, 1, 1)};
  CHECK_THROWS_AS((void)model::cd_alpha(dead), SingularPointError);
}

TEST_CASE("cd_alpha reduces to the single-spin counter-diabatic coefficient") {
  const model::LZSchedule lz{0.1, 0.0, 0.0, 0.5, 3.0};
  const model::DriveSchedule s = lz.to_drive_schedule();
  for (double t : {0.3, 1.0, 1.5, 2.2, 2.9}) {
    CHECK(model::cd_alpha(s.evaluate(t))[0] ==
          doctest::Approx(model::lz_fcd(lz, t)).epsilon(1e-14));
  }
  CHECK(model::lz_fcd(lz, 0.0) == 0.0);
  CHECK(model::lz_fcd(lz, 3.0) == 0.0);
}

TEST_CASE("lz_fcd profile is a single negative lobe scaled by 1/tau") {
  const model::LZSchedule a{0.1, 0.0, 0.0, 0.5, 1.0};
  const model::LZSchedule b{0.1, 0.0, 0.0, 0.5, 10.0};
  for (int k = 1; k < 100; ++k) {
    const double x = k / 100.0;
    const double f = model::lz_fcd(a, x);
    CHECK(f < 0.0);
    CHECK(model::lz_fcd(b, 10.0 * x) == doctest::Approx(f / 10.0).epsilon(1e-12));
  }
  const model::LZSchedule dead{0.0, 0.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS((void)model::lz_fcd(dead, 0.5), SingularPointError);
}

TEST_CASE("control function values and derivative") {
  const model::ControlFunction c(0.6, 2.0);
  CHECK(c.evaluate(0.0).theta == 0.0);
  CHECK(c.evaluate(0.0).rate == 0.0);
  CHECK(c.evaluate(2.0).theta == 0.6);
  CHECK(c.evaluate(2.0).rate == 0.0);
  CHECK(c.evaluate(1.0).theta == doctest::Approx(0.3).epsilon(1e-15));
  const double eps = 1e-5;
  for (double t : {0.05, 0.7, 1.0, 1.9}) {
    const double fd = (c.evaluate(t + eps).theta - c.evaluate(t - eps).theta) / (2 * eps);
    CHECK(std::abs(fd - c.evaluate(t).rate) < 1e-9);
    const double closed = 0.6 * (kPi * kPi / 8.0) * std::sin(kPi * t / 2.0) *
                          std::sin(kPi * std::pow(std::sin(kPi * t / 4.0), 2));
    CHECK(c.evaluate(t).rate == doctest::Approx(closed).epsilon(1e-13));
  }
  CHECK_THROWS_AS(model::ControlFunction(1.2, 1.0), ArgumentError);
  CHECK_THROWS_AS(model::ControlFunction(-0.1, 1.0), ArgumentError);
  CHECK_THROWS_AS((void)c.evaluate(2.5), ArgumentError);
}

TEST_CASE("reversed schedule runs the same path backwards") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const model::DriveSchedule fwd(random_fields(3, rng), random_fields(3, rng), 1.3);
    const model::DriveSchedule rev = fwd.reversed();
    CHECK(rev.reversed().direction() == model::Direction::forward);
    for (double t : {0.0, 0.2, 0.65, 1.1, 1.3}) {
      const model::FieldPoint a = fwd.evaluate(1.3 - t);
      const model::FieldPoint b = rev.evaluate(t);
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(a.value.h[j] - b.value.h[j]) < 1e-12);
        CHECK(std::abs(a.value.b[j] - b.value.b[j]) < 1e-12);
        CHECK(std::abs(a.value.J[j] - b.value.J[j]) < 1e-12);
        CHECK(std::abs(a.rate.h[j] + b.rate.h[j]) < 1e-12);
      }
      if (t > 0.0 && t < 1.3) {
        const std::vector<double> af = model::cd_alpha(a);
        const std::vector<double> ar = model::cd_alpha(b);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(af[j] + ar[j]) < 1e-10);
      }
    }
  }
}

TEST_CASE("STA Hamiltonian boundaries and special cases") {
  const model::DriveSchedule s = ramp_schedule(3, 1.5);
  const model::ControlFunction c(0.7, 1.5);
  for (double t : {0.0, 1.5}) {
    for (double y : model::local_cd_fields(s, c, t)) CHECK(y == 0.0);
    CHECK(max_abs(model::build_h_sta(s, c, t) - model::build_h0(s.evaluate(t).value)) == 0.0);
  }
  const model::ControlFunction off(0.0, 1.5);
  for (double t : {0.3, 0.75, 1.2}) {
    CHECK(max_abs(model::build_h_sta(s, off, t) - model::build_h0(s.evaluate(t).value)) == 0.0);
    const ComplexMatrix h = model::build_h_sta(s, c, t);
    CHECK(linalg::hermiticity_defect(h) == 0.0);
    CHECK(max_abs(h - model::build_h0(s.evaluate(t).value) - model::build_h_cd(s, c, t)) <
          1e-15);
  }
  CHECK_THROWS_AS((void)model::build_h_sta(s, model::ControlFunction(0.5, 1.0), 0.5),
                  ArgumentError);
}

TEST_CASE("single-spin STA Hamiltonian carries the exact counter-diabatic term") {
  const model::LZSchedule lz{0.1, 0.0, 0.0, 0.5, 2.0};
  const model::DriveSchedule s = lz.to_drive_schedule();
  const model::ControlFunction c(1.0, 2.0);
  for (double t : {0.4, 1.0, 1.7}) {
    const double fcd = model::lz_fcd(lz, t);
    const model::FieldPoint p = s.evaluate(t);
    const ComplexMatrix lz_sta = -p.value.h[0] * sx() - p.value.b[0] * sz() + fcd * sy();
    CHECK(max_abs(model::assemble_ising(p.value, std::vector<double>{fcd}) - lz_sta) < 1e-15);
    CHECK(max_abs(model::build_h_cd(s, c, t) - c.evaluate(t).rate * fcd * sy()) < 1e-15);
  }
}

TEST_CASE("uncoupled uniform chain splits into commuting single-site terms") {
  const model::DriveSchedule s = ramp_schedule(4, 1.0);
  const model::ControlFunction c(0.8, 1.0);
  const double t = 0.37;
  const model::FieldPoint p = s.evaluate(t);
  const std::vector<double> y = model::local_cd_fields(s, c, t);
  std::vector<ComplexMatrix> local;
  ComplexMatrix total = ComplexMatrix::Zero(16, 16);
  for (int j = 1; j <= 4; ++j) {
    local.push_back(-p.value.h[j - 1] * embed(sx(), j, 4) - p.value.b[j - 1] * embed(sz(), j, 4) +
                    y[j - 1] * embed(sy(), j, 4));
    total += local.back();
  }
  CHECK(max_abs(model::build_h_sta(s, c, t) - total) < 1e-14);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      CHECK(max_abs(linalg::commutator(local[a], local[b])) < 1e-12);
    }
  }
}
