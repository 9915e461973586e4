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

#include "qotto/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qotto/errors.hpp"
#include "qotto/gauge.hpp"
#include "qotto/golden.hpp"

namespace qotto::engine {
namespace {

using linalg::Complex;

// Points used to estimate the largest local field along a stroke.
constexpr int kScaleSamples = 65;

double site_field_sum(const model::FieldSet& f, int j) {
  const int n = f.num_sites();
  const auto s = static_cast<std::size_t>(j);
  const auto prev = static_cast<std::size_t>((j + n - 1) % n);
  return std::abs(f.h[s]) + std::abs(f.b[s]) + std::abs(f.J[prev]) + std::abs(f.J[s]);
}

template <class ExtraAt>
double estimate_scale(const model::DriveSchedule& s, ExtraAt&& extra_at) {
  double scale = 0.0;
  for (int i = 0; i < kScaleSamples; ++i) {
    const double t = s.tau() * i / (kScaleSamples - 1);
    const model::FieldPoint p = s.evaluate(t);
    for (int j = 0; j < s.num_sites(); ++j) {
      scale = std::max(scale, site_field_sum(p.value, j) + extra_at(t, p, j));
    }
  }
  return scale;
}

// Runs of consecutive values closer than tol.
std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const linalg::RealVector& v,
                                                            double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= v.size(); ++k) {
    if (k == v.size() || v(k) - v(k - 1) > tol) {
      out.emplace_back(start, k - start);
      start = k;
    }
  }
  return out;
}

// Rotates `cols` (orthonormal, spanning a degenerate subspace) into the
// eigenbasis of the Hermitian matrix `m` (expressed in that subspace) and
// returns the ascending eigenvalues.
linalg::RealVector rotate_into(ComplexMatrix& cols, const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  cols = cols * es.eigenvectors();
  return es.eigenvalues();
}

}  // namespace

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::bare: return "bare";
    case Protocol::local_sta: return "local_sta";
    case Protocol::exact_sta: return "exact_sta";
  }
  return "?";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::heat_engine: return "heat_engine";
    case Regime::hybrid: return "hybrid";
    case Regime::adiabatic_limit: return "adiabatic_limit";
    case Regime::not_engine: return "not_engine";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  for (Protocol p : {Protocol::bare, Protocol::local_sta, Protocol::exact_sta}) {
    if (name == to_string(p)) return p;
  }
  throw ArgumentError("unknown protocol '" + std::string(name) +
                      "' (expected bare, local_sta or exact_sta)");
}

void CycleConfig::validate() const {
  if (!(Tc > 0.0 && Th > Tc) || !std::isfinite(Th)) {
    throw ArgumentError("CycleConfig: temperatures must satisfy Th > Tc > 0");
  }
  for (double t : {tau1(), tau2, tau3, tau4}) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw ArgumentError("CycleConfig: stroke durations must be positive");
    }
  }
  if (theta0 && !(*theta0 >= 0.0 && *theta0 <= 1.0)) {
    throw ArgumentError("CycleConfig: theta0 must lie in [0, 1]");
  }
  if (!(regime_threshold >= 0.0)) throw ArgumentError("CycleConfig: negative regime threshold");
}

double CycleReport::energy_scale() const {
  return std::max({1.0, std::abs(Qh), std::abs(Qc), std::abs(WSTA_1), std::abs(WSTA_3)});
}

ComplexMatrix gibbs_state(const ComplexMatrix& h, double temperature) {
  if (!(temperature > 0.0)) {
    std::ostringstream os;
    os << "gibbs_state: temperature " << temperature << " must be positive";
    throw ArgumentError(os.str());
  }
  const linalg::Spectrum s = linalg::hermitian_spectrum(h);
  std::vector<double> w(static_cast<std::size_t>(s.dim()));
  double z = 0.0;
  for (int k = 0; k < s.dim(); ++k) {
    w[static_cast<std::size_t>(k)] = std::exp(-(s.eigenvalues(k) - s.eigenvalues(0)) / temperature);
    z += w[static_cast<std::size_t>(k)];
  }
  for (double& x : w) x /= z;
  return linalg::reconstruct(s, w);
}

ComplexMatrix adiabatic_target(const ComplexMatrix& rho_source, const ComplexMatrix& h_source,
                               const ComplexMatrix& h_dest) {
  if (rho_source.rows() != h_source.rows() || h_source.rows() != h_dest.rows()) {
    throw ArgumentError("adiabatic_target: dimension mismatch");
  }
  const linalg::Spectrum src = linalg::hermitian_spectrum(h_source);
  const linalg::Spectrum dst = linalg::hermitian_spectrum(h_dest);
  const Eigen::Index dim = src.eigenvectors.rows();
  std::vector<double> pop(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    pop[static_cast<std::size_t>(k)] =
        (src.eigenvectors.col(k).adjoint() * rho_source * src.eigenvectors.col(k))(0, 0).real();
  }

  ComplexMatrix basis = dst.eigenvectors;
  const ComplexMatrix toward_source = h_source - h_dest;
  const double range = dst.eigenvalues(dim - 1) - dst.eigenvalues(0);
  const double e_tol = 1e-9 * std::max(1.0, range);
  const double v_tol = 1e-9 * std::max(1.0, linalg::max_abs(toward_source));
  const double p_tol = 1e-9 * *std::max_element(pop.begin(), pop.end());

  auto require_equal_populations = [&](Eigen::Index first, Eigen::Index count) {
    for (Eigen::Index k = first + 1; k < first + count; ++k) {
      const double a = pop[static_cast<std::size_t>(first)], b = pop[static_cast<std::size_t>(k)];
      if (std::abs(a - b) > p_tol) {
        std::ostringstream os;
        os << "adiabatic_target: destination levels " << first << ".." << first + count - 1
           << " stay degenerate along the path but receive populations " << a << " and " << b;
        throw DegeneracyError(os.str());
      }
    }
  };

  for (const auto& [first, count] : clusters(dst.eigenvalues, e_tol)) {
    if (count == 1) continue;
    const double energy = dst.eigenvalues(first);
    ComplexMatrix cols = basis.middleCols(first, count);
    const linalg::RealVector mu = rotate_into(cols, cols.adjoint() * toward_source * cols);

    // Second order inside groups the first-order term leaves degenerate.
    ComplexMatrix outside(dim, dim - count);
    linalg::RealVector inv_gap(dim - count);
    for (Eigen::Index k = 0, c = 0; k < dim; ++k) {
      if (k >= first && k < first + count) continue;
      outside.col(c) = basis.col(k);
      inv_gap(c++) = 1.0 / (energy - dst.eigenvalues(k));
    }
    for (const auto& [sub, sub_count] : clusters(mu, v_tol)) {
      if (sub_count == 1) continue;
      ComplexMatrix group = cols.middleCols(sub, sub_count);
      const ComplexMatrix coupling = group.adjoint() * toward_source * outside;
      const ComplexMatrix second = coupling * inv_gap.asDiagonal() * coupling.adjoint();
      const linalg::RealVector nu = rotate_into(group, second);
      cols.middleCols(sub, sub_count) = group;
      for (const auto& [g, g_count] : clusters(nu, v_tol)) {
        if (g_count > 1) require_equal_populations(first + sub + g, g_count);
      }
    }
    basis.middleCols(first, count) = cols;
  }
  return linalg::reconstruct(linalg::Spectrum{dst.eigenvalues, basis}, pop);
}

double fidelity(const ComplexMatrix& rho_prime, const ComplexMatrix& rho) {
  dynamics::check_state(rho_prime, "fidelity");
  dynamics::check_state(rho, "fidelity");
  const ComplexMatrix root = linalg::psd_sqrt(rho_prime);
  ComplexMatrix inner = root * rho * root;
  inner = 0.5 * (inner + inner.adjoint());
  const linalg::Spectrum s = linalg::hermitian_spectrum(inner);
  double f = 0.0;
  for (int k = 0; k < s.dim(); ++k) f += std::sqrt(std::max(s.eigenvalues(k), 0.0));
  return std::clamp(f, 0.0, 1.0);
}

Regime classify_regime(double wcd_13, double w0_13, double threshold) {
  if (w0_13 >= 0.0) return Regime::not_engine;
  if (std::abs(wcd_13) < threshold) return Regime::adiabatic_limit;
  return wcd_13 < 0.0 ? Regime::heat_engine : Regime::hybrid;
}

Efficiency efficiency(Regime regime, double w0_13, double wcd_13, double qh) {
  if (regime == Regime::not_engine) return {};
  if (!(qh > 0.0)) return {std::nullopt, true};
  if (regime == Regime::hybrid) return {-w0_13 / (qh + wcd_13), false};
  return {-w0_13 / qh, false};
}

Efficiency efficiency(const CycleReport& r) {
  return efficiency(r.regime, r.W0_13(), r.WCD_13(), r.Qh);
}

dynamics::StrokeHamiltonian bare_stroke(const model::DriveSchedule& s) {
  dynamics::StrokeHamiltonian out;
  out.tau = s.tau();
  out.field_scale = estimate_scale(s, [](double, const model::FieldPoint&, int) { return 0.0; });
  out.sample = [s](double t) {
    return dynamics::HamiltonianSample{model::build_h0(s.evaluate(t).value), {}};
  };
  out.dh0 = [s](double t) { return model::build_dh0(s.evaluate(t).rate); };
  const Eigen::Index dim = Eigen::Index{1} << s.num_sites();
  out.dh_cd = [dim](double) { return ComplexMatrix::Zero(dim, dim); };
  return out;
}

dynamics::StrokeHamiltonian local_sta_stroke(const model::DriveSchedule& s, double theta0) {
  const model::ControlFunction c(theta0, s.tau());
  auto y_fields = [s, c](double t, const model::FieldPoint& p) {
    const double rate = c.evaluate(t).rate;
    std::vector<double> y(static_cast<std::size_t>(s.num_sites()), 0.0);
    if (rate != 0.0) {
      y = model::cd_alpha(p);
      for (double& v : y) v *= rate;
    }
    return y;
  };
  dynamics::StrokeHamiltonian out;
  out.tau = s.tau();
  out.field_scale = estimate_scale(s, [&](double t, const model::FieldPoint& p, int j) {
    return std::abs(y_fields(t, p)[static_cast<std::size_t>(j)]);
  });
  out.sample = [s, y_fields](double t) {
    const model::FieldPoint p = s.evaluate(t);
    const std::vector<double> y = y_fields(t, p);
    return dynamics::HamiltonianSample{model::build_h0(p.value), model::build_sigma_y_sum(y)};
  };
  out.dh0 = [s](double t) { return model::build_dh0(s.evaluate(t).rate); };
  return out;
}

dynamics::StrokeHamiltonian exact_sta_stroke(const model::DriveSchedule& s) {
  auto cd_at = [s](const model::FieldPoint& p) {
    return gauge::exact_cd(model::build_h0(p.value), model::build_dh0(p.rate));
  };
  dynamics::StrokeHamiltonian out;
  out.tau = s.tau();
  out.field_scale = estimate_scale(s, [&](double, const model::FieldPoint& p, int) {
    return linalg::max_abs(cd_at(p));
  });
  out.sample = [s, cd_at](double t) {
    const model::FieldPoint p = s.evaluate(t);
    return dynamics::HamiltonianSample{model::build_h0(p.value), cd_at(p)};
  };
  out.dh0 = [s](double t) { return model::build_dh0(s.evaluate(t).rate); };
  return out;
}

dynamics::StrokeHamiltonian make_stroke(Protocol protocol, const model::DriveSchedule& s,
                                        double theta0) {
  switch (protocol) {
    case Protocol::bare: return bare_stroke(s);
    case Protocol::local_sta: return local_sta_stroke(s, theta0);
    case Protocol::exact_sta: return exact_sta_stroke(s);
  }
  throw ArgumentError("make_stroke: unknown protocol");
}

Theta0Search optimize_theta0(const model::DriveSchedule& s, const ComplexMatrix& rho_start,
                             const ComplexMatrix& target, const dynamics::PropagationConfig& cfg) {
  int evaluations = 0;
  auto score = [&](double theta0) {
    ++evaluations;
    const ComplexMatrix rho = dynamics::propagate_state(rho_start, local_sta_stroke(s, theta0), cfg);
    return fidelity(rho, target);
  };
  constexpr int kGrid = 21;
  std::vector<double> values(kGrid);
  int best = 0;
  for (int i = 0; i < kGrid; ++i) {
    values[static_cast<std::size_t>(i)] = score(static_cast<double>(i) / (kGrid - 1));
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
  }
  const double lo = static_cast<double>(std::max(best - 1, 0)) / (kGrid - 1);
  const double hi = static_cast<double>(std::min(best + 1, kGrid - 1)) / (kGrid - 1);
  const numeric::ScalarOptimum refined = numeric::golden_section_maximize(score, lo, hi, 1e-3);
  Theta0Search out{static_cast<double>(best) / (kGrid - 1), values[static_cast<std::size_t>(best)],
                   0};
  if (refined.value > out.fidelity) {
    out.theta0 = refined.x;
    out.fidelity = refined.value;
  }
  out.evaluations = evaluations;
  return out;
}

namespace {

struct Endpoints {
  model::DriveSchedule stroke1;
  model::DriveSchedule stroke3;
  ComplexMatrix h_cold, h_hot;
  ComplexMatrix rho_a, rho_b, rho_c, rho_d;
};

Endpoints prepare(const CycleConfig& cfg) {
  cfg.validate();
  Endpoints e{cfg.schedule, cfg.schedule.reversed().with_tau(cfg.tau3), {}, {}, {}, {}, {}, {}};
  e.h_cold = model::build_h0(e.stroke1.start());
  e.h_hot = model::build_h0(e.stroke1.end());
  e.rho_a = gibbs_state(e.h_cold, cfg.Tc);
  e.rho_c = gibbs_state(e.h_hot, cfg.Th);
  e.rho_b = adiabatic_target(e.rho_a, e.h_cold, e.h_hot);
  e.rho_d = adiabatic_target(e.rho_c, e.h_hot, e.h_cold);
  return e;
}

}  // namespace

Theta0Search optimize_theta0(const CycleConfig& cfg) {
  if (cfg.protocol != Protocol::local_sta) {
    throw ArgumentError("optimize_theta0: only the local_sta protocol has a free strength");
  }
  const Endpoints e = prepare(cfg);
  return optimize_theta0(e.stroke1, e.rho_a, e.rho_b, cfg.propagation);
}

double stroke1_fidelity(const CycleConfig& cfg, double theta0) {
  const Endpoints e = prepare(cfg);
  const ComplexMatrix rho =
      dynamics::propagate_state(e.rho_a, local_sta_stroke(e.stroke1, theta0), cfg.propagation);
  return fidelity(rho, e.rho_b);
}

CycleReport run_cycle(const CycleConfig& cfg) {
  const Endpoints e = prepare(cfg);
  CycleReport r;
  r.Tc = cfg.Tc;
  r.Th = cfg.Th;
  r.tau_cycle = cfg.tau_cycle();

  double theta1 = 0.0, theta3 = 0.0;
  if (cfg.protocol == Protocol::local_sta) {
    theta1 = cfg.theta0 ? *cfg.theta0
                        : optimize_theta0(e.stroke1, e.rho_a, e.rho_b, cfg.propagation).theta0;
    theta3 = theta1;
    if (!cfg.theta0 && cfg.per_stroke_theta0) {
      theta3 = optimize_theta0(e.stroke3, e.rho_c, e.rho_d, cfg.propagation).theta0;
    }
    r.theta0_star = theta1;
    r.theta0_star_3 = theta3;
  } else if (cfg.protocol == Protocol::bare) {
    r.theta0_star = 0.0;
    r.theta0_star_3 = 0.0;
  }

  const dynamics::StrokeResult s1 = dynamics::propagate_stroke(
      e.rho_a, make_stroke(cfg.protocol, e.stroke1, theta1), cfg.propagation);
  r.Qh = linalg::expectation(e.rho_c, e.h_hot) - linalg::expectation(s1.rho, e.h_hot);
  const dynamics::StrokeResult s3 = dynamics::propagate_stroke(
      e.rho_c, make_stroke(cfg.protocol, e.stroke3, theta3), cfg.propagation);
  r.Qc = linalg::expectation(e.rho_a, e.h_cold) - linalg::expectation(s3.rho, e.h_cold);

  r.W0_1 = s1.ledger.W0;
  r.WCD_1 = s1.ledger.WCD;
  r.WSTA_1 = s1.ledger.WSTA;
  r.W0_3 = s3.ledger.W0;
  r.WCD_3 = s3.ledger.WCD;
  r.WSTA_3 = s3.ledger.WSTA;
  r.ledger1 = s1.ledger;
  r.ledger3 = s3.ledger;
  r.stroke1 = s1.diagnostics;
  r.stroke3 = s3.diagnostics;
  r.F1 = fidelity(s1.rho, e.rho_b);
  r.F3 = fidelity(s3.rho, e.rho_d);
  r.P = r.W0_13() / r.tau_cycle;
  r.regime = classify_regime(r.WCD_13(), r.W0_13(), cfg.regime_threshold);
  const Efficiency eff = efficiency(r);
  r.eta = eff.eta;
  r.efficiency_anomaly = eff.anomaly;
  return r;
}

}  // namespace qotto::engine
