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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qotto/errors.hpp"
#include "qotto/experiment.hpp"

using namespace qotto;
using namespace qotto::expcli;

namespace {

bool throws_naming(const std::string& text, const std::string& key) {
  try {
    (void)parse_config_text(text);
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(key) != std::string::npos;
  }
  return false;
}

std::string render(const Dataset& d, Format f) {
  std::ostringstream os;
  write(os, d, f);
  return os.str();
}

double number(const Cell& c) { return std::get<double>(c); }

// A two-site configuration small enough to sweep inside a unit test.
ExperimentConfig tiny() {
  ExperimentConfig cfg = chain_preset();
  cfg.num_sites = 2;
  cfg.disorder.instances = 2;
  cfg.sweep.grid = {0.5, 1.0};
  return cfg;
}

}  // namespace

TEST_CASE("chain preset carries the reference parameter set") {
  const ExperimentConfig cfg = chain_preset();
  CHECK(cfg.num_sites == 4);
  CHECK(cfg.cycle.Tc == 0.22);
  CHECK(cfg.cycle.Th == 22.0);
  CHECK(cfg.cycle.tau2 == 0.1);
  CHECK(cfg.cycle.tau4 == 0.1);
  CHECK(cfg.fields.h_i == std::vector<double>{0.5});
  CHECK(cfg.fields.b_i == std::vector<double>{0.0});
  CHECK(cfg.fields.h_f == std::vector<double>{0.0});
  CHECK(cfg.fields.b_f == std::vector<double>{1.0});
  CHECK(cfg.fields.J_i == std::vector<double>{0.0});
  CHECK(cfg.disorder.sigma == 0.1);
  CHECK(cfg.disorder.instances == 10);
  CHECK(cfg.sweep.grid.size() == 25);
  CHECK(cfg.sweep.grid.front() == doctest::Approx(0.1));
  CHECK(cfg.sweep.grid.back() == doctest::Approx(100.0));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("single-spin preset") {
  const ExperimentConfig cfg = lz_preset();
  CHECK(cfg.num_sites == 1);
  CHECK(cfg.cycle.Tc == 0.02);
  CHECK(cfg.cycle.Th == 2.0);
  CHECK(cfg.fields.h_i.front() == 0.1);
  CHECK(cfg.fields.b_i.front() == 0.0);
  CHECK(cfg.fields.h_f.front() == 0.0);
  CHECK(cfg.fields.b_f.front() == 0.5);
  CHECK(preset("lz").canonical() == cfg.canonical());
  CHECK(preset("chain").canonical() == chain_preset().canonical());
  CHECK_THROWS_AS((void)preset("fig9"), ConfigError);
}

TEST_CASE("config text overrides the preset") {
  const ExperimentConfig cfg = parse_config_text(R"(
# comment line
[cycle]
Tc = 0.5
Th = 5
protocol = exact_sta
theta0 = 0.25

[schedule]
N = 3
tau1 = 2.5
h_i = 0.4, 0.5, 0.6

[disorder]
sigma = 0.3
instances = 4
seed = 99

[sweep]
variable = sigma
grid = 0, 0.5, 1

[propagation]
steps = 64
integrator = midpoint
)");
  CHECK(cfg.cycle.Tc == 0.5);
  CHECK(cfg.cycle.Th == 5.0);
  CHECK(cfg.cycle.protocol == engine::Protocol::exact_sta);
  CHECK(*cfg.cycle.theta0 == 0.25);
  CHECK(cfg.num_sites == 3);
  CHECK(cfg.tau1 == 2.5);
  CHECK(cfg.tau3 == 2.5);
  CHECK(cfg.fields.h_i == std::vector<double>{0.4, 0.5, 0.6});
  CHECK(cfg.disorder.sigma == 0.3);
  CHECK(cfg.disorder.instances == 4);
  CHECK(cfg.disorder.seed == 99);
  CHECK(cfg.sweep.variable == SweepVariable::sigma);
  CHECK(cfg.sweep.grid == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(cfg.cycle.propagation.steps == 64);
  CHECK(cfg.cycle.propagation.integrator == dynamics::Integrator::midpoint);

  const ExperimentConfig opt = parse_config_text("[cycle]\ntheta0 = optimize\n[sweep]\nlog_grid = 1, 100, 3\n");
  CHECK_FALSE(opt.cycle.theta0.has_value());
  REQUIRE(opt.sweep.grid.size() == 3);
  CHECK(opt.sweep.grid[1] == doctest::Approx(10.0));
}

TEST_CASE("config errors name the offending key") {
  CHECK(throws_naming("[cycle]\nTcold = 1\n", "Tcold"));
  CHECK(throws_naming("[thermostat]\nT = 1\n", "thermostat"));
  CHECK(throws_naming("[sweep]\ngrid =\n", "sweep.grid"));
  CHECK(throws_naming("[sweep]\ngrid = 1, 0.5\n", "sweep.grid"));
  CHECK(throws_naming("[cycle]\nTc = cold\n", "cycle.Tc"));
  CHECK(throws_naming("[cycle]\nTc = 30\n", "Tc"));
  CHECK(throws_naming("[cycle]\nprotocol = warp\n", "cycle.protocol"));
  CHECK(throws_naming("[disorder]\ninstances = 0\n", "disorder.instances"));
  CHECK(throws_naming("[schedule]\nN = 3\nh_i = 1, 2\n", "schedule.h_i"));
  CHECK(throws_naming("[propagation]\nsteps = 4\n", "propagation.steps"));
  CHECK_THROWS_AS((void)parse_config_text("[schedule]\nN = 11\n"), ResourceGuardError);
  CHECK_THROWS_AS((void)parse_config("/nonexistent/qotto.ini"), ConfigError);
}

TEST_CASE("config files round-trip through the parser") {
  const auto path = std::filesystem::temp_directory_path() / "qotto_test_config.ini";
  {
    std::ofstream f(path);
    f << "[schedule]\nN = 2\n[disorder]\nseed = 7\n";
  }
  const ExperimentConfig cfg = parse_config(path);
  std::filesystem::remove(path);
  CHECK(cfg.num_sites == 2);
  CHECK(cfg.disorder.seed == 7);
  // The canonical form reparses to the same settings.
  CHECK(parse_config_text(cfg.canonical()).canonical() == cfg.canonical());
}

TEST_CASE("disorder draws") {
  DisorderSpec spec{0.0, 3, 5};
  for (const auto& row : draw_disorder(spec, 4)) {
    for (double j : row) CHECK(j == 0.0);
  }
  spec.sigma = 0.1;
  const auto a = draw_disorder(spec, 4);
  const auto b = draw_disorder(spec, 4);
  CHECK(a == b);
  CHECK(a.size() == 3);
  CHECK(a[0].size() == 4);
  spec.seed = 6;
  CHECK(draw_disorder(spec, 4) != a);
  // Instance k does not depend on how many instances are drawn.
  spec.seed = 5;
  spec.instances = 1;
  CHECK(draw_disorder(spec, 4)[0] == a[0]);
}

TEST_CASE("disorder statistics over 1e5 draws") {
  const DisorderSpec spec{0.1, 25000, 12345};
  double sum = 0.0, sq = 0.0;
  int n = 0;
  for (const auto& row : draw_disorder(spec, 4)) {
    for (double j : row) {
      sum += j;
      sq += j * j;
      ++n;
    }
  }
  REQUIRE(n == 100000);
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean) < 3 * 0.1 / std::sqrt(double(n)));
  CHECK(std::abs(sd - 0.1) < 0.002);
  CHECK(std::isfinite(standard_normal(0, 0, 0)));
}

TEST_CASE("log_grid") {
  const std::vector<double> g = log_grid(0.1, 100.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(0.1));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(g[3] == doctest::Approx(100.0));
}

TEST_CASE("table formats") {
  Dataset d;
  d.header = {{"tool", "qotto"}, {"seed", "1"}};
  Table t{"demo", {"name", "value", "count", "blank"}, {}};
  t.add_row({std::string("a,b"), 0.1, std::int64_t{3}, std::monostate{}});
  t.add_row({std::string("say \"hi\""), std::numeric_limits<double>::quiet_NaN(), std::int64_t{-1},
             1.0 / 3.0});
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  d.tables.push_back(t);
  d.tables.push_back(Table{"second", {"x"}, {{2.5}}});

  const std::string csv = render(d, Format::csv);
  CHECK(csv ==
        "# tool: qotto\n# seed: 1\n# table: demo\nname,value,count,blank\n"
        "\"a,b\",0.1,3,\n\"say \"\"hi\"\"\",nan,-1,0.333333333333333\n"
        "\n# table: second\nx\n2.5\n");

  const nlohmann::json j = nlohmann::json::parse(render(d, Format::json));
  CHECK(j["header"]["tool"] == "qotto");
  CHECK(j["tables"]["demo"][0]["name"] == "a,b");
  CHECK(j["tables"]["demo"][0]["blank"].is_null());
  CHECK(j["tables"]["demo"][1]["value"].is_null());
  CHECK(j["tables"]["demo"][1]["count"] == -1);
  CHECK(j["tables"]["second"][0]["x"] == 2.5);

  CHECK(format_double(0.1 + 0.2) == "0.3");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(d.table("second").column("x") == 0);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(hash_hex(fnv1a("")) == "cbf29ce484222325");
  CHECK(hash_hex(fnv1a("a")) == "af63dc4c8601ec8c");
  CHECK(hash_hex(fnv1a("foobar")) == "85944171f73967e8");
}

TEST_CASE("output headers identify the configuration") {
  const ExperimentConfig cfg = chain_preset();
  const auto header = make_header(cfg, "cycle");
  const auto find = [&](const std::string& key) {
    for (const auto& [k, v] : header) {
      if (k == key) return v;
    }
    return std::string();
  };
  CHECK(find("tool") == "qotto");
  CHECK(find("version") == std::string(kVersion));
  CHECK(find("command") == "cycle");
  CHECK(find("seed") == "1");
  CHECK(find("config_hash") == hash_hex(fnv1a(cfg.canonical())));
  ExperimentConfig other = cfg;
  other.cycle.Th = 21.0;
  CHECK(make_header(other, "cycle") != header);
}

TEST_CASE("identical inputs give byte-identical output") {
  ExperimentConfig cfg = tiny();
  cfg.tau1 = cfg.tau3 = 0.5;
  const std::string a = render(run_single(cfg), Format::csv);
  const std::string b = render(run_single(cfg), Format::csv);
  CHECK(a == b);
  CHECK(render(run_single(cfg), Format::json) == render(run_single(cfg), Format::json));
}

TEST_CASE("tau sweep layout and aggregates") {
  const Dataset d = sweep_tau(tiny());
  const Table& t = d.table("cycles");
  // 2 tau points x 2 protocols x (2 instances + median, min, max).
  CHECK(t.rows.size() == 20);
  const std::vector<std::string> expected{
      "row_type", "N",    "tau",  "sigma", "instance", "seed",  "protocol", "theta0_star",
      "W0_13",    "WCD_13", "WSTA_13", "W0_1", "W0_3", "WCD_1", "WCD_3", "Qh",
      "Qc",       "P",    "eta",  "regime", "F1",     "F3"};
  CHECK(t.columns == expected);
  const std::size_t type = t.column("row_type"), p = t.column("P");
  for (std::size_t r = 0; r + 4 < t.rows.size(); r += 5) {
    CHECK(std::get<std::string>(t.rows[r + 2][type]) == "median");
    CHECK(std::get<std::string>(t.rows[r + 3][type]) == "min");
    CHECK(std::get<std::string>(t.rows[r + 4][type]) == "max");
    const double a = number(t.rows[r][p]), b = number(t.rows[r + 1][p]);
    CHECK(number(t.rows[r + 2][p]) == doctest::Approx(0.5 * (a + b)));
    CHECK(number(t.rows[r + 3][p]) == std::min(a, b));
    CHECK(number(t.rows[r + 4][p]) == std::max(a, b));
  }
  // Bare rows carry no counter-diabatic work.
  const std::size_t proto = t.column("protocol"), wcd = t.column("WCD_13");
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[proto]) == "bare") CHECK(number(row[wcd]) == 0.0);
  }
}

TEST_CASE("size sweep guard and fit table") {
  ExperimentConfig cfg = tiny();
  cfg.sweep.variable = SweepVariable::N;
  cfg.sweep.grid = {1, 2, 3};
  cfg.sweep.protocols = {engine::Protocol::local_sta};
  cfg.disorder.instances = 1;
  const Dataset d = sweep_size(cfg);
  const Table& fit = d.table("power_fit");
  REQUIRE(fit.rows.size() == 1);
  CHECK(std::get<std::int64_t>(fit.rows[0][fit.column("points")]) == 3);

  cfg.sweep.grid = {2, 11};
  CHECK_THROWS_AS((void)sweep_size(cfg), ResourceGuardError);
}

TEST_CASE("uncoupled chains are extensive") {
  ExperimentConfig cfg = chain_preset();
  cfg.disorder.sigma = 0.0;
  const std::vector<double> none2(2, 0.0), none4(4, 0.0);
  const engine::CycleReport two =
      engine::run_cycle(make_cycle(cfg, 2, 1.0, none2, engine::Protocol::local_sta));
  const engine::CycleReport four =
      engine::run_cycle(make_cycle(cfg, 4, 1.0, none4, engine::Protocol::local_sta));
  CHECK(four.P / two.P == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("sigma sweep is deterministic") {
  ExperimentConfig cfg = tiny();
  cfg.sweep.variable = SweepVariable::sigma;
  cfg.sweep.grid = {0.0, 1.0};
  cfg.tau1 = cfg.tau3 = 0.1;
  const std::string a = render(sweep_sigma(cfg), Format::csv);
  CHECK(a == render(sweep_sigma(cfg), Format::csv));
  CHECK(a.find("# table: fidelity") != std::string::npos);
}

TEST_CASE("single-spin report") {
  ExperimentConfig cfg = lz_preset();
  cfg.sweep.grid = {0.5, 5.0};
  const Dataset d = lz_report(cfg);
  const Table& t = d.table("cycles");
  CHECK(t.rows.size() == 4);
  const std::size_t proto = t.column("protocol");
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[proto]) != "exact_sta") continue;
    CHECK(std::abs(number(row[t.column("WCD_13")])) < 1e-6);
    CHECK(number(row[t.column("eta")]) == doctest::Approx(0.8).epsilon(1e-6));
  }
  const Table& f = d.table("fcd_profile");
  REQUIRE(f.rows.size() == 101);
  CHECK(number(f.rows.front()[1]) == 0.0);
  CHECK(number(f.rows.back()[1]) == 0.0);

  ExperimentConfig wrong = chain_preset();
  CHECK_THROWS_AS((void)lz_report(wrong), ConfigError);
}

TEST_CASE("gauge check passes on seeded instances") {
  ExperimentConfig cfg = chain_preset();
  cfg.gauge_instances = 5;
  const Dataset d = gauge_check(cfg);
  CHECK(d.table("instances").rows.size() == 10);
  const Table& s = d.table("summary");
  REQUIRE(s.rows.size() == 3);
  for (const auto& row : s.rows) CHECK(std::get<std::string>(row[s.column("status")]) == "PASS");
}

TEST_CASE("shipped configuration files parse") {
  const std::filesystem::path dir = QOTTO_CONFIG_DIR;
  CHECK(parse_config(dir / "chain.ini").canonical() == chain_preset().canonical());
  CHECK(parse_config(dir / "lz.ini", lz_preset()).canonical() == lz_preset().canonical());
  CHECK(parse_config(dir / "sigma.ini").sweep.variable == SweepVariable::sigma);
  CHECK(parse_config(dir / "size.ini").sweep.variable == SweepVariable::N);
}
