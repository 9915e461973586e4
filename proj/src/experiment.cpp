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

#include "qotto/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "qotto/errors.hpp"
#include "qotto/gauge.hpp"
#include "qotto/golden.hpp"
#include "qotto/log.hpp"

namespace qotto::expcli {
namespace {

using engine::CycleReport;
using linalg::ComplexMatrix;
using engine::Protocol;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in the open interval (0, 1), keyed by three counters.
double open_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t key = splitmix(splitmix(splitmix(seed) ^ a) ^ b);
  return (static_cast<double>(key >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> broadcast(const std::vector<double>& v, int n) {
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), v.front());
  if (static_cast<int>(v.size()) != n) {
    throw ConfigError("per-site array of length " + std::to_string(v.size()) +
                      " cannot be used with N = " + std::to_string(n));
  }
  return v;
}

const std::vector<std::string> kCycleColumns{
    "row_type", "N",     "tau",   "sigma",  "instance", "seed", "protocol", "theta0_star",
    "W0_13",    "WCD_13", "WSTA_13", "W0_1", "W0_3",     "WCD_1", "WCD_3",  "Qh",
    "Qc",       "P",     "eta",   "regime", "F1",       "F3"};
// Columns that get median / min / max rows.
const std::vector<std::string> kAggregated{"theta0_star", "W0_13", "WCD_13", "WSTA_13", "W0_1",
                                           "W0_3",        "WCD_1", "WCD_3",  "Qh",      "Qc",
                                           "P",           "eta",   "F1",     "F3"};

Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

void check_closure(const dynamics::WorkLedger& w, const char* stroke) {
  const double scale =
      std::max({1.0, std::abs(w.energy_start), std::abs(w.energy_end)});
  const double gap = std::abs(w.W0 + w.WCD - w.delta_energy());
  if (gap > 1e-8 * scale) {
    std::ostringstream os;
    os << "work ledger of stroke " << stroke << " misses the energy change by " << gap;
    throw ContractViolation(os.str());
  }
}

// Re-asserts the cycle invariants before a row is emitted.
void check_report(const CycleReport& r) {
  check_closure(r.ledger1, "1");
  check_closure(r.ledger3, "3");
  if (std::abs(r.first_law_residual()) > 1e-8 * r.energy_scale()) {
    std::ostringstream os;
    os << "first law violated: WSTA_13 + Qh + Qc = " << r.first_law_residual();
    throw ContractViolation(os.str());
  }
}

struct PointKey {
  int n;
  double tau;
  double sigma;
};

std::vector<Cell> cycle_row(const PointKey& k, int instance, std::uint64_t seed, Protocol p,
                            const CycleReport& r) {
  return {std::string("instance"), std::int64_t{k.n}, k.tau, k.sigma, std::int64_t{instance},
          std::to_string(seed), std::string(engine::to_string(p)), opt(r.theta0_star),
          r.W0_13(), r.WCD_13(), r.WSTA_13(), r.W0_1, r.W0_3, r.WCD_1, r.WCD_3, r.Qh, r.Qc, r.P,
          opt(r.eta), std::string(engine::to_string(r.regime)), r.F1, r.F3};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Appends median, min and max rows over rows [first, end) of `t`.
void aggregate(Table& t, std::size_t first, const std::vector<std::string>& numeric) {
  const std::size_t last = t.rows.size();
  if (first >= last) return;
  const std::vector<Cell> proto = t.rows[first];
  for (const char* kind : {"median", "min", "max"}) {
    std::vector<Cell> row(t.columns.size());
    row[t.column("row_type")] = std::string(kind);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const std::string& name = t.columns[c];
      if (name == "N" || name == "tau" || name == "sigma" || name == "protocol" ||
          name == "tau1") {
        row[c] = proto[c];
      }
      if (std::find(numeric.begin(), numeric.end(), name) == numeric.end()) continue;
      std::vector<double> vals;
      for (std::size_t i = first; i < last; ++i) {
        if (const double* d = std::get_if<double>(&t.rows[i][c])) vals.push_back(*d);
      }
      if (vals.empty()) continue;
      const std::string k = kind;
      row[c] = k == "median" ? median(vals)
               : k == "min"  ? *std::min_element(vals.begin(), vals.end())
                             : *std::max_element(vals.begin(), vals.end());
    }
    t.rows.push_back(std::move(row));
  }
}

Table cycle_table() { return Table{"cycles", kCycleColumns, {}}; }

// Runs every protocol and disorder instance at one sweep point.
void run_point(const ExperimentConfig& cfg, const PointKey& k, const DisorderSpec& disorder,
               const std::vector<Protocol>& protocols, Table& out) {
  const std::vector<std::vector<double>> draws = draw_disorder(disorder, k.n);
  for (Protocol p : protocols) {
    const std::size_t first = out.rows.size();
    for (int i = 0; i < disorder.instances; ++i) {
      std::ostringstream os;
      os << "N=" << k.n << " tau=" << k.tau << " sigma=" << k.sigma << " "
         << engine::to_string(p) << " instance " << i;
      log::info(os.str());
      const CycleReport r = engine::run_cycle(
          make_cycle(cfg, k.n, k.tau, draws[static_cast<std::size_t>(i)], p));
      check_report(r);
      out.add_row(cycle_row(k, i, disorder.seed, p, r));
    }
    aggregate(out, first, kAggregated);
  }
}

std::vector<double> grid_or(const ExperimentConfig& cfg, SweepVariable v,
                            std::vector<double> fallback) {
  return cfg.sweep.variable == v ? cfg.sweep.grid : fallback;
}

Dataset with_header(const ExperimentConfig& cfg, std::string_view command) {
  Dataset d;
  d.header = make_header(cfg, command);
  return d;
}

}  // namespace

double standard_normal(std::uint64_t seed, std::uint64_t instance, std::uint64_t site) {
  static const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(unit, open_uniform(seed, instance, site));
}

std::vector<std::vector<double>> draw_disorder(const DisorderSpec& spec, int num_sites) {
  spec.validate();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(spec.instances));
  for (int i = 0; i < spec.instances; ++i) {
    auto& row = out[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(num_sites));
    for (int j = 0; j < num_sites; ++j) {
      row[static_cast<std::size_t>(j)] =
          spec.sigma == 0.0 ? 0.0
                            : spec.sigma * standard_normal(spec.seed, static_cast<std::uint64_t>(i),
                                                           static_cast<std::uint64_t>(j));
    }
  }
  return out;
}

engine::CycleConfig make_cycle(const ExperimentConfig& cfg, int num_sites, double tau,
                               const std::vector<double>& disorder, Protocol protocol) {
  if (num_sites > linalg::kMaxSites) {
    throw ResourceGuardError("N = " + std::to_string(num_sites) + " exceeds the limit of " +
                             std::to_string(linalg::kMaxSites) + " sites");
  }
  const SiteFields& f = cfg.fields;
  model::FieldSet initial{broadcast(f.h_i, num_sites), broadcast(f.b_i, num_sites),
                          broadcast(f.J_i, num_sites)};
  model::FieldSet final{broadcast(f.h_f, num_sites), broadcast(f.b_f, num_sites),
                        broadcast(f.J_f, num_sites)};
  if (!disorder.empty()) {
    if (static_cast<int>(disorder.size()) != num_sites) {
      throw ArgumentError("make_cycle: disorder draw has the wrong length");
    }
    for (int j = 0; j < num_sites; ++j) {
      final.J[static_cast<std::size_t>(j)] += disorder[static_cast<std::size_t>(j)];
    }
  }
  engine::CycleConfig c = cfg.cycle;
  c.schedule = model::DriveSchedule(std::move(initial), std::move(final), tau > 0 ? tau : cfg.tau1);
  c.tau3 = tau > 0 ? tau : cfg.tau3;
  c.protocol = protocol;
  return c;
}

std::vector<std::pair<std::string, std::string>> make_header(const ExperimentConfig& cfg,
                                                             std::string_view command) {
  return {{"tool", "qotto"},
          {"version", std::string(kVersion)},
          {"command", std::string(command)},
          {"seed", std::to_string(cfg.disorder.seed)},
          {"config_hash", hash_hex(fnv1a(cfg.canonical()))}};
}

Dataset run_single(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset d = with_header(cfg, "cycle");
  const std::vector<double> draw = draw_disorder(cfg.disorder, cfg.num_sites).front();
  const CycleReport r =
      engine::run_cycle(make_cycle(cfg, cfg.num_sites, 0.0, draw, cfg.cycle.protocol));
  check_report(r);
  Table cycles = cycle_table();
  cycles.add_row(cycle_row({cfg.num_sites, cfg.tau1, cfg.disorder.sigma}, 0, cfg.disorder.seed,
                           cfg.cycle.protocol, r));
  Table strokes{"strokes",
                {"stroke", "tau", "steps", "W0", "WCD", "WSTA", "delta_E", "W0_quadrature",
                 "WCD_quadrature", "trace_drift", "hermiticity_drift", "entropy_start",
                 "entropy_end", "purity_start", "purity_end"},
                {}};
  auto add = [&](std::int64_t k, double tau, const dynamics::WorkLedger& w,
                 const dynamics::StrokeDiagnostics& s) {
    strokes.add_row({k, tau, std::int64_t{w.steps}, w.W0, w.WCD, w.WSTA, w.delta_energy(),
                     w.W0_quadrature, w.WCD_quadrature, s.max_trace_drift,
                     s.max_hermiticity_drift, s.entropy_start, s.entropy_end, s.purity_start,
                     s.purity_end});
  };
  add(1, cfg.tau1, r.ledger1, r.stroke1);
  add(3, cfg.tau3, r.ledger3, r.stroke3);
  d.tables = {std::move(cycles), std::move(strokes)};
  return d;
}

Dataset sweep_tau(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset d = with_header(cfg, "sweep-tau");
  Table t = cycle_table();
  for (double tau : grid_or(cfg, SweepVariable::tau, log_grid(0.1, 100.0, 25))) {
    run_point(cfg, {cfg.num_sites, tau, cfg.disorder.sigma}, cfg.disorder, cfg.sweep.protocols, t);
  }
  d.tables.push_back(std::move(t));
  return d;
}

Dataset sweep_size(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = grid_or(cfg, SweepVariable::N, {2, 3, 4, 5, 6});
  for (double n : grid) {
    if (n > linalg::kMaxSites) {
      throw ResourceGuardError("sweep-size: N = " + format_double(n) + " exceeds the limit of " +
                               std::to_string(linalg::kMaxSites) + " sites");
    }
  }
  Dataset d = with_header(cfg, "sweep-size");
  Table t = cycle_table();
  for (double n : grid) {
    run_point(cfg, {static_cast<int>(n), cfg.tau1, cfg.disorder.sigma}, cfg.disorder,
              cfg.sweep.protocols, t);
  }
  // Least-squares line through the median power per protocol.
  Table fit{"power_fit", {"protocol", "slope", "intercept", "r_squared", "points"}, {}};
  for (Protocol p : cfg.sweep.protocols) {
    std::vector<double> xs, ys;
    for (const auto& row : t.rows) {
      if (std::get<std::string>(row[t.column("row_type")]) != "median") continue;
      if (std::get<std::string>(row[t.column("protocol")]) != engine::to_string(p)) continue;
      xs.push_back(static_cast<double>(std::get<std::int64_t>(row[t.column("N")])));
      ys.push_back(std::get<double>(row[t.column("P")]));
    }
    const auto m = static_cast<double>(xs.size());
    if (xs.size() < 2) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    const double vx = sxx - sx * sx / m, vy = syy - sy * sy / m, cxy = sxy - sx * sy / m;
    const double slope = cxy / vx;
    const double r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
    fit.add_row({std::string(engine::to_string(p)), slope, (sy - slope * sx) / m, r2,
                 std::int64_t{static_cast<std::int64_t>(xs.size())}});
  }
  d.tables = {std::move(t), std::move(fit)};
  return d;
}

Dataset sweep_sigma(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset d = with_header(cfg, "sweep-sigma");
  Table t{"fidelity",
          {"row_type", "N", "tau1", "sigma", "instance", "seed", "theta0_star", "F1"},
          {}};
  for (double sigma : grid_or(cfg, SweepVariable::sigma, {0.1, 0.5, 1.0, 1.5, 2.0})) {
    DisorderSpec spec = cfg.disorder;
    spec.sigma = sigma;
    const std::vector<std::vector<double>> draws = draw_disorder(spec, cfg.num_sites);
    const std::size_t first = t.rows.size();
    for (int i = 0; i < spec.instances; ++i) {
      std::ostringstream os;
      os << "sigma=" << sigma << " instance " << i;
      log::info(os.str());
      const engine::CycleConfig c = make_cycle(cfg, cfg.num_sites, cfg.tau1,
                                               draws[static_cast<std::size_t>(i)],
                                               Protocol::local_sta);
      double theta0 = 0.0, f1 = 0.0;
      if (c.theta0) {
        theta0 = *c.theta0;
        f1 = engine::stroke1_fidelity(c, theta0);
      } else {
        const engine::Theta0Search s = engine::optimize_theta0(c);
        theta0 = s.theta0;
        f1 = s.fidelity;
      }
      t.add_row({std::string("instance"), std::int64_t{cfg.num_sites}, cfg.tau1, sigma,
                 std::int64_t{i}, std::to_string(spec.seed), theta0, f1});
    }
    aggregate(t, first, {"theta0_star", "F1"});
  }
  d.tables.push_back(std::move(t));
  return d;
}

Dataset lz_report(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.num_sites != 1) throw ConfigError("lz: schedule.N must be 1");
  Dataset d = with_header(cfg, "lz");
  Table t = cycle_table();
  DisorderSpec none = cfg.disorder;
  none.sigma = 0.0;
  none.instances = 1;
  for (double tau : grid_or(cfg, SweepVariable::tau, log_grid(0.1, 100.0, 25))) {
    run_point(cfg, {1, tau, 0.0}, none, cfg.sweep.protocols, t);
  }
  // Aggregates over a single instance add nothing here.
  std::erase_if(t.rows, [&](const std::vector<Cell>& r) {
    return std::get<std::string>(r[t.column("row_type")]) != "instance";
  });

  const model::LZSchedule lz{cfg.fields.h_i.front(), cfg.fields.h_f.front(),
                             cfg.fields.b_i.front(), cfg.fields.b_f.front(), cfg.tau1};
  Table profile{"fcd_profile", {"t", "f_cd", "f_cd_rate"}, {}};
  constexpr int kSamples = 101;
  const double eps = 1e-5 * lz.tau;
  for (int k = 0; k < kSamples; ++k) {
    const double s = lz.tau * k / (kSamples - 1);
    double rate = 0.0;
    if (k == 0) {
      rate = (model::lz_fcd(lz, eps) - model::lz_fcd(lz, 0.0)) / eps;
    } else if (k == kSamples - 1) {
      rate = (model::lz_fcd(lz, lz.tau) - model::lz_fcd(lz, lz.tau - eps)) / eps;
    } else {
      rate = (model::lz_fcd(lz, s + eps) - model::lz_fcd(lz, s - eps)) / (2 * eps);
    }
    profile.add_row({s, model::lz_fcd(lz, s), rate});
  }
  d.tables = {std::move(t), std::move(profile)};
  return d;
}

Dataset gauge_check(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset d = with_header(cfg, "gauge-check");
  Table rows{"instances",
             {"N", "instance", "alpha_max_diff", "action_rel_diff", "commutator_residual"},
             {}};
  double worst_alpha = 0, worst_action = 0, worst_residual = 0;
  const std::uint64_t seed = cfg.disorder.seed;
  for (int n : {3, 4}) {
    for (int r = 0; r < cfg.gauge_instances; ++r) {
      std::uint64_t counter = 0;
      auto uniform = [&] {
        const auto inst = static_cast<std::uint64_t>(n) << 32 | static_cast<std::uint64_t>(r);
        return 2.0 * open_uniform(seed ^ 0x6a09e667f3bcc909ULL, inst, counter++) - 1.0;
      };
      auto draw = [&] {
        model::FieldSet f = model::FieldSet::zeros(n);
        for (int j = 0; j < n; ++j) {
          const auto s = static_cast<std::size_t>(j);
          f.h[s] = uniform();
          f.b[s] = uniform();
          f.J[s] = uniform();
        }
        return f;
      };
      model::FieldPoint p{draw(), draw()};
      const ComplexMatrix h0 = model::build_h0(p.value);
      const ComplexMatrix dh0 = model::build_dh0(p.rate);

      const std::vector<double> closed = model::cd_alpha(p);
      double alpha_diff = 0.0;
      for (int j = 0; j < n; ++j) {
        auto site_action = [&](double x) {
          gauge::LocalAnsatz a{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
          a.alpha[static_cast<std::size_t>(j)] = x;
          return gauge::action(h0, dh0, a.as_operator());
        };
        const numeric::ScalarOptimum m =
            numeric::golden_section_minimize(site_action, -100.0, 100.0, 1e-10);
        alpha_diff = std::max(alpha_diff, std::abs(m.x - closed[static_cast<std::size_t>(j)]));
      }

      gauge::LocalAnsatz trial{std::vector<double>(static_cast<std::size_t>(n))};
      for (double& a : trial.alpha) a = uniform();
      const double brute = gauge::action(h0, dh0, trial.as_operator());
      const double formula = gauge::closed_form_action(p, trial);
      const double action_diff = std::abs(brute - formula) / std::max(std::abs(formula), 1e-300);

      const double residual = gauge::commutator_residual(h0, dh0, gauge::exact_cd(h0, dh0));

      worst_alpha = std::max(worst_alpha, alpha_diff);
      worst_action = std::max(worst_action, action_diff);
      worst_residual = std::max(worst_residual, residual);
      rows.add_row({std::int64_t{n}, std::int64_t{r}, alpha_diff, action_diff, residual});
    }
  }
  Table summary{"summary", {"check", "max_value", "tolerance", "status"}, {}};
  auto verdict = [&](const char* name, double v, double tol) {
    summary.add_row({std::string(name), v, tol, std::string(v < tol ? "PASS" : "FAIL")});
  };
  verdict("alpha_closed_form_vs_numeric", worst_alpha, 1e-6);
  verdict("action_bruteforce_vs_closed_form", worst_action, 1e-9);
  verdict("exact_gauge_commutator_residual", worst_residual, 1e-8);
  d.tables = {std::move(rows), std::move(summary)};
  return d;
}

}  // namespace qotto::expcli
