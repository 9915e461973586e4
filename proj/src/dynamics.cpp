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

#include "qotto/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "qotto/errors.hpp"

namespace qotto::dynamics {
namespace {

using linalg::Complex;

// Gauss nodes and weights of the fourth-order commutator-free exponential.
const double kGaussLow = 0.5 - std::sqrt(3.0) / 6.0;
const double kGaussHigh = 0.5 + std::sqrt(3.0) / 6.0;
const double kWeightSmall = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double kWeightLarge = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

// H0 and H_CD parts of the Hamiltonian that generates one sub-step.
struct Slice {
  ComplexMatrix h0;
  ComplexMatrix cd;

  [[nodiscard]] ComplexMatrix full() const { return h0 + cd; }
};

Slice take(const StrokeHamiltonian& ham, double t) {
  HamiltonianSample s = ham.sample(t);
  const Eigen::Index dim = s.h0.rows();
  if (s.h_cd.size() == 0) s.h_cd = ComplexMatrix::Zero(dim, dim);
  if (!s.h0.allFinite() || !s.h_cd.allFinite()) {
    std::ostringstream os;
    os << "propagate_stroke: non-finite Hamiltonian sample at t = " << t;
    throw ContractViolation(os.str());
  }
  return {std::move(s.h0), std::move(s.h_cd)};
}

void evolve(ComplexMatrix& rho, const ComplexMatrix& u) {
  const ComplexMatrix tmp = u * rho;
  rho.noalias() = tmp * u.adjoint();
}

// Power H_CD feeds into H0: d<H0>/dt - Tr[rho dH0/dt] = -i Tr(rho [H0, H_CD]).
double transfer(const ComplexMatrix& rho, const Slice& at) {
  const ComplexMatrix rho_h0 = rho * at.h0;
  return 2.0 * linalg::trace_inner(rho_h0, at.cd).imag();
}

double integrate(const std::vector<double>& f, double dt, WorkQuadrature rule) {
  const std::size_t n = f.size() - 1;
  if (rule == WorkQuadrature::simpson && n % 2 == 0) {
    double s = f.front() + f.back();
    for (std::size_t k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f[k];
    return s * dt / 3.0;
  }
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t k = 1; k < n; ++k) s += f[k];
  return s * dt;
}

class Propagator {
 public:
  Propagator(const StrokeHamiltonian& ham, const PropagationConfig& cfg, bool bookkeeping)
      : ham_(ham), cfg_(cfg), bookkeeping_(bookkeeping) {
    if (!(ham.tau > 0.0) || !std::isfinite(ham.tau)) {
      throw ArgumentError("propagate_stroke: tau must be positive and finite");
    }
    if (!ham.sample) throw ArgumentError("propagate_stroke: Hamiltonian has no sampler");
    steps_ = cfg.resolve_steps(ham.tau, ham.field_scale);
    if (bookkeeping && steps_ % 2) ++steps_;
    dt_ = ham.tau / steps_;
    eps_ = cfg.resolve_eps(ham.tau, steps_);
  }

  StrokeResult run(const ComplexMatrix& rho0) {
    StrokeResult out;
    out.rho = rho0;
    out.ledger.steps = steps_;
    StrokeDiagnostics& diag = out.diagnostics;
    if (bookkeeping_) {
      diag.entropy_start = linalg::von_neumann_entropy(rho0);
      diag.purity_start = linalg::purity(rho0);
    }

    Slice at_grid;
    if (bookkeeping_) {
      at_grid = take(ham_, 0.0);
      out.ledger.energy_start = linalg::expectation(rho0, at_grid.full());
      h0_start_ = linalg::expectation(rho0, at_grid.h0);
      cd_start_ = linalg::expectation(rho0, at_grid.cd);
      sample_power(out, at_grid, 0.0);
    }
    for (int k = 0; k < steps_; ++k) {
      const double t0 = k * dt_;
      const double t1 = k + 1 == steps_ ? ham_.tau : (k + 1) * dt_;
      if (cfg_.integrator == Integrator::midpoint) {
        evolve(out.rho, linalg::unitary_step(take(ham_, t0 + 0.5 * dt_).full(), dt_));
      } else {
        const ComplexMatrix low = take(ham_, t0 + kGaussLow * dt_).full();
        const ComplexMatrix high = take(ham_, t0 + kGaussHigh * dt_).full();
        // exp(-i dt A2) exp(-i dt A1), rightmost first.
        evolve(out.rho, linalg::unitary_step(kWeightLarge * low + kWeightSmall * high, dt_));
        evolve(out.rho, linalg::unitary_step(kWeightSmall * low + kWeightLarge * high, dt_));
      }
      if (bookkeeping_) {
        at_grid = take(ham_, t1);
        diag.max_trace_drift =
            std::max(diag.max_trace_drift, std::abs(out.rho.trace() - Complex(1.0)));
        diag.max_hermiticity_drift =
            std::max(diag.max_hermiticity_drift, linalg::hermiticity_defect(out.rho));
        sample_power(out, at_grid, t1);
      }
    }
    if (bookkeeping_) {
      WorkLedger& w = out.ledger;
      // Simpson on an even grid; closure W0 + WCD = dE holds for any rule.
      const double moved = integrate(transfer_, dt_, WorkQuadrature::simpson);
      w.W0 = linalg::expectation(out.rho, at_grid.h0) - h0_start_ - moved;
      w.WCD = linalg::expectation(out.rho, at_grid.cd) - cd_start_ + moved;
      w.WSTA = w.W0 + w.WCD;
      w.energy_end = linalg::expectation(out.rho, at_grid.full());
      if (cfg_.quadrature_cross_check) {
        w.W0_quadrature = integrate(power0_, dt_, cfg_.work_quadrature);
        w.WCD_quadrature = integrate(power_cd_, dt_, cfg_.work_quadrature);
      }
      diag.entropy_end = linalg::von_neumann_entropy(out.rho);
      diag.purity_end = linalg::purity(out.rho);
    }
    return out;
  }

 private:
  void sample_power(StrokeResult& out, const Slice& at, double t) {
    transfer_.push_back(transfer(out.rho, at));
    if (!cfg_.quadrature_cross_check && !cfg_.record_samples) return;
    const double p0 = linalg::expectation(out.rho, ham_.dh0(t));
    ComplexMatrix dcd;
    if (ham_.dh_cd) {
      dcd = ham_.dh_cd(t);
    } else {
      dcd = time_derivative(
          [this](double s) {
            HamiltonianSample h = ham_.sample(s);
            return h.h_cd.size() ? h.h_cd : ComplexMatrix::Zero(h.h0.rows(), h.h0.cols());
          },
          t, eps_, ham_.tau);
    }
    const double pcd = linalg::expectation(out.rho, dcd);
    power0_.push_back(p0);
    power_cd_.push_back(pcd);
    if (cfg_.record_samples) out.ledger.samples.push_back({t, p0, pcd});
  }

  const StrokeHamiltonian& ham_;
  const PropagationConfig& cfg_;
  bool bookkeeping_;
  int steps_ = 0;
  double dt_ = 0.0;
  double eps_ = 0.0;
  double h0_start_ = 0.0;
  double cd_start_ = 0.0;
  std::vector<double> transfer_;
  std::vector<double> power0_;
  std::vector<double> power_cd_;
};

}  // namespace

int PropagationConfig::resolve_steps(double tau, double field_scale) const {
  long n = steps;
  if (n <= 0) {
    const double want = std::ceil(step_density * std::max(field_scale, 0.0) * tau);
    n = std::max<long>(min_steps, std::isfinite(want) ? static_cast<long>(want) : 0);
  }
  if (n < 16) {
    throw ArgumentError("PropagationConfig: at least 16 steps per stroke are required, got " +
                        std::to_string(n));
  }
  return static_cast<int>(n);
}

double PropagationConfig::resolve_eps(double tau, int n) const {
  const double dt = tau / n;
  const double eps = derivative_eps > 0.0 ? derivative_eps : std::min(dt / 10.0, 1e-4 * tau);
  if (eps > dt / 10.0 * (1.0 + 1e-12)) {
    throw ArgumentError("PropagationConfig: derivative_eps exceeds a tenth of the time step");
  }
  return eps;
}

PropagationConfig PropagationConfig::refined() const {
  PropagationConfig out = *this;
  if (out.steps > 0) out.steps *= 2;
  out.step_density *= 2.0;
  out.min_steps *= 2;
  return out;
}

void check_state(const ComplexMatrix& rho, const char* who) {
  std::ostringstream os;
  if (rho.rows() != rho.cols() || !linalg::is_power_of_two(rho.rows())) {
    os << who << ": density matrix must be 2^N square";
    throw ContractViolation(os.str());
  }
  if (!rho.allFinite()) {
    os << who << ": density matrix has non-finite entries";
    throw ContractViolation(os.str());
  }
  const double herm = linalg::hermiticity_defect(rho);
  if (herm > 1e-10) {
    os << who << ": density matrix not Hermitian (defect " << herm << ")";
    throw ContractViolation(os.str());
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0)) > 1e-10) {
    os << who << ": trace " << tr.real() << " differs from 1";
    throw ContractViolation(os.str());
  }
  const linalg::Spectrum s = linalg::hermitian_spectrum(0.5 * (rho + rho.adjoint()));
  if (s.eigenvalues(0) < -1e-10) {
    os << who << ": density matrix has negative eigenvalue " << s.eigenvalues(0);
    throw ContractViolation(os.str());
  }
}

StrokeResult propagate_stroke(const ComplexMatrix& rho0, const StrokeHamiltonian& hamiltonian,
                              const PropagationConfig& cfg) {
  check_state(rho0, "propagate_stroke");
  if (!hamiltonian.dh0) throw ArgumentError("propagate_stroke: Hamiltonian has no dH0/dt");
  Propagator p(hamiltonian, cfg, true);
  return p.run(rho0);
}

ComplexMatrix propagate_state(const ComplexMatrix& rho0, const StrokeHamiltonian& hamiltonian,
                              const PropagationConfig& cfg) {
  check_state(rho0, "propagate_state");
  Propagator p(hamiltonian, cfg, false);
  return p.run(rho0).rho;
}

ComplexMatrix time_derivative(const std::function<ComplexMatrix(double)>& f, double t,
                              double eps, double tau) {
  if (!(eps > 0.0) || 2.0 * eps > tau) {
    throw ArgumentError("time_derivative: eps must lie in (0, tau / 2]");
  }
  if (t < eps) return (f(t + eps) - f(t)) / eps;
  if (t > tau - eps) return (f(t) - f(t - eps)) / eps;
  return (f(t + eps) - f(t - eps)) / (2.0 * eps);
}

ComplexMatrix cd_time_derivative(const model::DriveSchedule& s, const model::ControlFunction& c,
                                 double t, double eps) {
  const Eigen::Index dim = Eigen::Index{1} << s.num_sites();
  if (t == 0.0 || t == s.tau() || c.theta0() == 0.0) {
    if (!(t >= 0.0 && t <= s.tau())) throw ArgumentError("cd_time_derivative: t outside stroke");
    return ComplexMatrix::Zero(dim, dim);
  }
  return time_derivative([&](double u) { return model::build_h_cd(s, c, u); }, t, eps, s.tau());
}

}  // namespace qotto::dynamics
