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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qotto/errors.hpp"
#include "qotto/experiment.hpp"

namespace qotto::expcli {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    bad(key, "expected a finite number, got '" + t + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    bad(key, "expected an integer, got '" + t + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    bad(key, "expected an unsigned 64-bit integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  bad(key, "expected true or false, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) out.push_back(to_double(key, item));
  if (out.empty()) bad(key, "empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

using Setter = void (*)(ExperimentConfig&, const std::string& key, const std::string& value);

// Recognized keys per section.
const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table{
      {"cycle",
       {
           {"Tc", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.Tc = to_double(k, v);
            }},
           {"Th", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.Th = to_double(k, v);
            }},
           {"tau2", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.tau2 = to_double(k, v);
            }},
           {"tau4", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.tau4 = to_double(k, v);
            }},
           {"protocol", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              try {
                c.cycle.protocol = engine::parse_protocol(trim(v));
              } catch (const ArgumentError& e) {
                bad(k, e.what());
              }
            }},
           {"theta0", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (lower(trim(v)) == "optimize") {
                c.cycle.theta0.reset();
              } else {
                c.cycle.theta0 = to_double(k, v);
              }
            }},
           {"per_stroke_theta0", [](ExperimentConfig& c, const std::string& k,
                                    const std::string& v) {
              c.cycle.per_stroke_theta0 = to_bool(k, v);
            }},
           {"regime_threshold", [](ExperimentConfig& c, const std::string& k,
                                   const std::string& v) {
              c.cycle.regime_threshold = to_double(k, v);
            }},
       }},
      {"schedule",
       {
           {"N", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.num_sites = static_cast<int>(std::clamp<long long>(to_integer(k, v), -1, 1 << 20));
            }},
           {"tau1", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.tau1 = to_double(k, v);
            }},
           {"tau3", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.tau3 = to_double(k, v);
            }},
           {"h_i", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.fields.h_i = to_doubles(k, v);
            }},
           {"b_i", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.fields.b_i = to_doubles(k, v);
            }},
           {"J_i", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.fields.J_i = to_doubles(k, v);
            }},
           {"h_f", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.fields.h_f = to_doubles(k, v);
            }},
           {"b_f", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.fields.b_f = to_doubles(k, v);
            }},
           {"J_f", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.fields.J_f = to_doubles(k, v);
            }},
       }},
      {"disorder",
       {
           {"sigma", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.disorder.sigma = to_double(k, v);
            }},
           {"instances", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.disorder.instances =
                  static_cast<int>(std::clamp<long long>(to_integer(k, v), -1, 1 << 24));
            }},
           {"seed", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.disorder.seed = to_u64(k, v);
            }},
       }},
      {"sweep",
       {
           {"variable", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "tau") {
                c.sweep.variable = SweepVariable::tau;
              } else if (t == "N") {
                c.sweep.variable = SweepVariable::N;
              } else if (t == "sigma") {
                c.sweep.variable = SweepVariable::sigma;
              } else {
                bad(k, "expected tau, N or sigma, got '" + t + "'");
              }
            }},
           {"grid", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.sweep.grid = split_list(v).empty() ? std::vector<double>{} : to_doubles(k, v);
            }},
           {"log_grid", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              const std::vector<double> p = to_doubles(k, v);
              if (p.size() != 3 || !(p[0] > 0.0 && p[1] > p[0]) || p[2] < 2.0 ||
                  p[2] != std::floor(p[2])) {
                bad(k, "expected 'lo, hi, count' with 0 < lo < hi and integer count >= 2");
              }
              c.sweep.grid = log_grid(p[0], p[1], static_cast<int>(p[2]));
            }},
           {"protocols", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.sweep.protocols.clear();
              for (const std::string& name : split_list(v)) {
                try {
                  c.sweep.protocols.push_back(engine::parse_protocol(name));
                } catch (const ArgumentError& e) {
                  bad(k, e.what());
                }
              }
            }},
           {"gauge_instances", [](ExperimentConfig& c, const std::string& k,
                                  const std::string& v) {
              c.gauge_instances =
                  static_cast<int>(std::clamp<long long>(to_integer(k, v), -1, 1 << 24));
            }},
       }},
      {"propagation",
       {
           {"steps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.propagation.steps =
                  static_cast<int>(std::clamp<long long>(to_integer(k, v), -1, 1 << 30));
            }},
           {"step_density", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.propagation.step_density = to_double(k, v);
            }},
           {"min_steps", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.cycle.propagation.min_steps =
                  static_cast<int>(std::clamp<long long>(to_integer(k, v), -1, 1 << 30));
            }},
           {"integrator", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "midpoint") {
                c.cycle.propagation.integrator = dynamics::Integrator::midpoint;
              } else if (t == "cf4") {
                c.cycle.propagation.integrator = dynamics::Integrator::cf4;
              } else {
                bad(k, "expected midpoint or cf4, got '" + t + "'");
              }
            }},
           {"work_quadrature", [](ExperimentConfig& c, const std::string& k,
                                  const std::string& v) {
              const std::string t = trim(v);
              if (t == "trapezoid") {
                c.cycle.propagation.work_quadrature = dynamics::WorkQuadrature::trapezoid;
              } else if (t == "simpson") {
                c.cycle.propagation.work_quadrature = dynamics::WorkQuadrature::simpson;
              } else {
                bad(k, "expected trapezoid or simpson, got '" + t + "'");
              }
            }},
           {"derivative_eps", [](ExperimentConfig& c, const std::string& k,
                                 const std::string& v) {
              c.cycle.propagation.derivative_eps = to_double(k, v);
            }},
       }},
  };
  return table;
}

void check_site_array(const std::vector<double>& v, int n, const char* key) {
  if (v.size() != 1 && static_cast<int>(v.size()) != n) {
    bad(std::string("schedule.") + key, "expected 1 or N = " + std::to_string(n) +
                                            " values, got " + std::to_string(v.size()));
  }
}

std::string_view variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::tau: return "tau";
    case SweepVariable::N: return "N";
    case SweepVariable::sigma: return "sigma";
  }
  return "?";
}

}  // namespace

void DisorderSpec::validate() const {
  if (!(sigma >= 0.0)) bad("disorder.sigma", "must be >= 0");
  if (instances < 1) bad("disorder.instances", "must be >= 1");
}

void SweepSpec::validate() const {
  if (grid.empty()) bad("sweep.grid", "grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) bad("sweep.grid", "values must be strictly increasing");
  }
  for (double g : grid) {
    if (variable == SweepVariable::tau && !(g > 0.0)) bad("sweep.grid", "tau values must be > 0");
    if (variable == SweepVariable::sigma && !(g >= 0.0)) {
      bad("sweep.grid", "sigma values must be >= 0");
    }
    if (variable == SweepVariable::N && (g < 1.0 || g != std::floor(g))) {
      bad("sweep.grid", "N values must be positive integers");
    }
  }
  if (protocols.empty()) bad("sweep.protocols", "no protocols listed");
}

void ExperimentConfig::validate() const {
  if (num_sites < 1) bad("schedule.N", "must be >= 1");
  if (num_sites > linalg::kMaxSites) {
    throw ResourceGuardError("schedule.N = " + std::to_string(num_sites) + " exceeds the limit of " +
                             std::to_string(linalg::kMaxSites) + " sites");
  }
  check_site_array(fields.h_i, num_sites, "h_i");
  check_site_array(fields.b_i, num_sites, "b_i");
  check_site_array(fields.J_i, num_sites, "J_i");
  check_site_array(fields.h_f, num_sites, "h_f");
  check_site_array(fields.b_f, num_sites, "b_f");
  check_site_array(fields.J_f, num_sites, "J_f");
  if (!(tau1 > 0.0)) bad("schedule.tau1", "must be > 0");
  if (!(tau3 > 0.0)) bad("schedule.tau3", "must be > 0");
  if (!(cycle.Tc > 0.0)) bad("cycle.Tc", "must be > 0");
  if (!(cycle.Th > cycle.Tc)) bad("cycle.Th", "must exceed Tc");
  if (!(cycle.tau2 > 0.0)) bad("cycle.tau2", "must be > 0");
  if (!(cycle.tau4 > 0.0)) bad("cycle.tau4", "must be > 0");
  if (cycle.theta0 && !(*cycle.theta0 >= 0.0 && *cycle.theta0 <= 1.0)) {
    bad("cycle.theta0", "must lie in [0, 1] or be 'optimize'");
  }
  if (!(cycle.regime_threshold >= 0.0)) bad("cycle.regime_threshold", "must be >= 0");
  const dynamics::PropagationConfig& p = cycle.propagation;
  if (p.steps < 0) bad("propagation.steps", "must be >= 0 (0 selects automatic)");
  if (p.steps > 0 && p.steps < 16) bad("propagation.steps", "must be >= 16");
  if (p.steps == 0 && p.min_steps < 16) bad("propagation.min_steps", "must be >= 16");
  if (!(p.step_density > 0.0)) bad("propagation.step_density", "must be > 0");
  if (!(p.derivative_eps >= 0.0)) bad("propagation.derivative_eps", "must be >= 0");
  if (gauge_instances < 1) bad("sweep.gauge_instances", "must be >= 1");
  disorder.validate();
  sweep.validate();
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  const dynamics::PropagationConfig& p = cycle.propagation;
  os << "[cycle]\n"
     << "Tc = " << format_double(cycle.Tc) << "\nTh = " << format_double(cycle.Th)
     << "\ntau2 = " << format_double(cycle.tau2) << "\ntau4 = " << format_double(cycle.tau4)
     << "\nprotocol = " << engine::to_string(cycle.protocol)
     << "\ntheta0 = " << (cycle.theta0 ? format_double(*cycle.theta0) : "optimize")
     << "\nper_stroke_theta0 = " << (cycle.per_stroke_theta0 ? "true" : "false")
     << "\nregime_threshold = " << format_double(cycle.regime_threshold) << "\n\n[schedule]\n"
     << "N = " << num_sites << "\ntau1 = " << format_double(tau1)
     << "\ntau3 = " << format_double(tau3) << "\nh_i = " << join(fields.h_i)
     << "\nb_i = " << join(fields.b_i) << "\nJ_i = " << join(fields.J_i)
     << "\nh_f = " << join(fields.h_f) << "\nb_f = " << join(fields.b_f)
     << "\nJ_f = " << join(fields.J_f) << "\n\n[disorder]\n"
     << "sigma = " << format_double(disorder.sigma) << "\ninstances = " << disorder.instances
     << "\nseed = " << disorder.seed << "\n\n[sweep]\n"
     << "variable = " << variable_name(sweep.variable) << "\ngrid = " << join(sweep.grid)
     << "\nprotocols = ";
  for (std::size_t i = 0; i < sweep.protocols.size(); ++i) {
    os << (i ? ", " : "") << engine::to_string(sweep.protocols[i]);
  }
  os << "\ngauge_instances = " << gauge_instances << "\n\n[propagation]\n"
     << "steps = " << p.steps << "\nstep_density = " << format_double(p.step_density)
     << "\nmin_steps = " << p.min_steps << "\nintegrator = "
     << (p.integrator == dynamics::Integrator::cf4 ? "cf4" : "midpoint")
     << "\nwork_quadrature = "
     << (p.work_quadrature == dynamics::WorkQuadrature::simpson ? "simpson" : "trapezoid")
     << "\nderivative_eps = " << format_double(p.derivative_eps) << "\n";
  return os.str();
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) {
    throw ArgumentError("log_grid: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

ExperimentConfig chain_preset() {
  ExperimentConfig c;
  c.sweep.grid = log_grid(0.1, 100.0, 25);
  return c;
}

ExperimentConfig lz_preset() {
  ExperimentConfig c = chain_preset();
  c.num_sites = 1;
  c.fields = SiteFields{{0.1}, {0.0}, {0.0}, {0.0}, {0.5}, {0.0}};
  c.cycle.Tc = 0.02;
  c.cycle.Th = 2.0;
  c.cycle.protocol = engine::Protocol::exact_sta;
  c.disorder.sigma = 0.0;
  c.disorder.instances = 1;
  c.sweep.protocols = {engine::Protocol::bare, engine::Protocol::exact_sta};
  return c;
}

ExperimentConfig preset(std::string_view name) {
  if (name == "chain") return chain_preset();
  if (name == "lz") return lz_preset();
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected chain or lz)");
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
  // '#' comments are accepted alongside the ';' comments the INI reader knows.
  std::string cleaned;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    const std::string t = trim(line);
    cleaned += (!t.empty() && t[0] == '#') ? std::string() : line;
    cleaned += '\n';
  }
  pt::ptree tree;
  std::istringstream in(cleaned);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  std::vector<std::string> unknown;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    const auto sec = table.find(section);
    if (sec == table.end() || !body.data().empty()) {
      unknown.push_back(section);
      continue;
    }
    for (const auto& [key, node] : body) {
      if (!sec->second.contains(key)) unknown.push_back(section + "." + key);
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (const std::string& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw ConfigError("unknown config keys: " + list);
  }
  bool tau3_given = false;
  for (const auto& [section, body] : tree) {
    for (const auto& [key, node] : body) {
      table.at(section).at(key)(base, section + "." + key, node.data());
      tau3_given |= section == "schedule" && key == "tau3";
    }
  }
  const auto sched = tree.get_child_optional("schedule");
  if (!tau3_given && sched && sched->get_child_optional("tau1")) base.tau3 = base.tau1;
  base.validate();
  return base;
}

ExperimentConfig parse_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

}  // namespace qotto::expcli
