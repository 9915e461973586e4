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

// qotto: command-line front end for the Otto-engine experiments.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qotto/errors.hpp"
#include "qotto/experiment.hpp"
#include "qotto/log.hpp"

namespace {

using namespace qotto;

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  bool full_scale = false;
  std::optional<int> steps;
  std::optional<double> tau;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset, "Base parameter set (chain, lz)");
  cmd->add_option("--seed", o.seed, "Disorder seed (overrides the config)");
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--full-scale", o.full_scale, "N=8 chains with 100 disorder instances (slow)");
  cmd->add_option("--steps", o.steps, "Fixed time slices per stroke")->check(CLI::Range(16, 1 << 30));
  cmd->add_option("--tau", o.tau, "Stroke duration tau1 = tau3")->check(CLI::PositiveNumber);
  cmd->add_flag("-v,--verbose", o.verbose, "Log progress to stderr");
}

expcli::ExperimentConfig load(const Options& o, std::string_view default_preset) {
  expcli::ExperimentConfig cfg = expcli::preset(o.preset.empty() ? default_preset : o.preset);
  if (!o.config.empty()) cfg = expcli::parse_config(o.config, std::move(cfg));
  if (o.seed) cfg.disorder.seed = *o.seed;
  if (o.steps) cfg.cycle.propagation.steps = *o.steps;
  if (o.tau) cfg.tau1 = cfg.tau3 = *o.tau;
  if (o.full_scale) {
    cfg.num_sites = 8;
    cfg.disorder.instances = 100;
    log::warning("--full-scale: N=8 with 100 disorder instances takes hours on one core");
  }
  cfg.validate();
  return cfg;
}

void emit(const Options& o, const expcli::Dataset& data) {
  const auto format = o.format == "json" ? expcli::Format::json : expcli::Format::csv;
  std::ostringstream buf;
  expcli::write(buf, data, format);
  if (o.out.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!(file << buf.str())) throw ConfigError("cannot write output file '" + o.out + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-time quantum Otto engines on Ising chains with local counter-diabatic driving"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(expcli::kVersion));

  Options o;
  std::function<expcli::Dataset(const Options&)> action;
  auto command = [&](const char* name, const char* help, std::string_view preset,
                     expcli::Dataset (*run)(const expcli::ExperimentConfig&),
                     std::function<void(expcli::ExperimentConfig&)> adjust = {}) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, o);
    cmd->callback([&action, preset, run, adjust] {
      action = [preset, run, adjust](const Options& opts) {
        expcli::ExperimentConfig cfg = load(opts, preset);
        if (adjust) adjust(cfg);
        return run(cfg);
      };
    });
  };
  command("cycle", "Run one Otto cycle", "chain", expcli::run_single);
  command("sweep-tau", "Sweep the stroke duration", "chain", expcli::sweep_tau);
  command("sweep-size", "Sweep the chain length at fixed tau", "chain", expcli::sweep_size,
          [&o](expcli::ExperimentConfig& cfg) {
            if (o.full_scale && cfg.sweep.variable != expcli::SweepVariable::N) {
              cfg.sweep.variable = expcli::SweepVariable::N;
              cfg.sweep.grid = {2, 3, 4, 5, 6, 7, 8};
            }
          });
  command("sweep-sigma", "Stroke-1 fidelity versus disorder strength", "chain",
          expcli::sweep_sigma);
  command("lz", "Single-spin Landau-Zener engine with the exact drive", "lz", expcli::lz_report);
  command("gauge-check", "Validate the local gauge potential on random instances", "chain",
          expcli::gauge_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  log::set_level(o.verbose ? log::Level::info : log::Level::warning);
  try {
    emit(o, action(o));
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return 4;
  } catch (const ContractViolation& e) {
    std::cerr << "numerical contract violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
