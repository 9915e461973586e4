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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qotto/engine.hpp"
#include "qotto/table.hpp"

namespace qotto::expcli {

inline constexpr std::string_view kVersion = "0.1.0";

struct DisorderSpec {
  double sigma = 0.1;  // std. dev. of the final couplings, zero mean
  int instances = 10;
  std::uint64_t seed = 1;

  void validate() const;  // ConfigError
};

enum class SweepVariable { tau, N, sigma };

struct SweepSpec {
  SweepVariable variable = SweepVariable::tau;
  std::vector<double> grid;  // strictly increasing, nonempty
  std::vector<engine::Protocol> protocols{engine::Protocol::bare, engine::Protocol::local_sta};

  void validate() const;  // ConfigError
};

// Per-site endpoint fields; one entry broadcasts to every site.
struct SiteFields {
  std::vector<double> h_i{0.5}, b_i{0.0}, J_i{0.0};
  std::vector<double> h_f{0.0}, b_f{1.0}, J_f{0.0};  // J_f: mean of the disordered couplings
};

struct ExperimentConfig {
  int num_sites = 4;
  SiteFields fields;
  double tau1 = 1.0;
  double tau3 = 1.0;
  // Cycle parameters; its schedule is rebuilt for every sweep point.
  engine::CycleConfig cycle;
  DisorderSpec disorder;
  SweepSpec sweep;
  int gauge_instances = 50;

  void validate() const;  // ConfigError

  // Canonical INI text of every effective setting; hashed into output headers.
  [[nodiscard]] std::string canonical() const;
};

// Four-site ring defaults: N=4, Tc=0.22, Th=22, h_i=0.5, b_i=0, h_f=0, b_f=1, J_i=0, sigma=0.1.
[[nodiscard]] ExperimentConfig chain_preset();
// Single-spin Landau-Zener engine: Tc=0.02, Th=2, h_i=0.1, b_i=0, h_f=0, b_f=0.5.
[[nodiscard]] ExperimentConfig lz_preset();
// ConfigError for unknown names.
[[nodiscard]] ExperimentConfig preset(std::string_view name);

/// Reads an INI file with sections [cycle], [schedule], [disorder], [sweep]
/// and [propagation] on top of `base`. Unknown sections or keys, malformed
/// values and violated invariants raise ConfigError naming the key.
[[nodiscard]] ExperimentConfig parse_config(const std::filesystem::path& path,
                                            ExperimentConfig base = chain_preset());
[[nodiscard]] ExperimentConfig parse_config_text(std::string_view text,
                                                 ExperimentConfig base = chain_preset());

// instances x N couplings sigma * z, z standard normal from (seed, instance, site).
[[nodiscard]] std::vector<std::vector<double>> draw_disorder(const DisorderSpec& spec, int num_sites);
[[nodiscard]] double standard_normal(std::uint64_t seed, std::uint64_t instance, std::uint64_t site);

// Cycle config for one point: N sites, stroke durations tau1 = tau3 = tau
// (or the config's own when tau <= 0), final couplings J_f + disorder.
[[nodiscard]] engine::CycleConfig make_cycle(const ExperimentConfig& cfg, int num_sites,
                                             double tau, const std::vector<double>& disorder,
                                             engine::Protocol protocol);

// One cycle at the configured N and tau1, first disorder instance.
[[nodiscard]] Dataset run_single(const ExperimentConfig& cfg);

/// Rows per (tau, instance, protocol) plus per-(tau, protocol) median, min
/// and max rows (row_type column).
[[nodiscard]] Dataset sweep_tau(const ExperimentConfig& cfg);
// Same rows over chain lengths at fixed tau1. ResourceGuardError for N > 10.
[[nodiscard]] Dataset sweep_size(const ExperimentConfig& cfg);
// Stroke-1 fidelity of the optimized local drive per (sigma, instance) at tau1.
[[nodiscard]] Dataset sweep_sigma(const ExperimentConfig& cfg);
// bare / exact_sta rows over the tau grid and an f_CD(t) profile at tau1.
[[nodiscard]] Dataset lz_report(const ExperimentConfig& cfg);
// Gauge-potential checks on seeded random instances at N = 3 and 4.
[[nodiscard]] Dataset gauge_check(const ExperimentConfig& cfg);

// Standard header block (tool, version, command, seed, config hash).
[[nodiscard]] std::vector<std::pair<std::string, std::string>> make_header(
    const ExperimentConfig& cfg, std::string_view command);

[[nodiscard]] std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace qotto::expcli
