#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qvhedge/experiment.hpp"

using namespace qvhedge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qvhedge_test_" + name);
  fs::remove_all(dir);
  return dir;
}

void expect_config_error(const std::string& doc, const std::string& field) {
  try {
    parse_config(doc);
    ADD_FAILURE() << "accepted: " << doc;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
  }
}

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.sim.n_paths = 64;
  cfg.sim.dt = 1.0 / 100.0;
  cfg.sweep_points = 9;
  cfg.density_points = 41;
  cfg.outputs.dir = scratch(name);
  return cfg;
}

}  // namespace

TEST(Config, DefaultsReproduceReferenceSetup) {
  const ExperimentConfig cfg = parse_config(R"({"schema_version": 1})");
  EXPECT_EQ(cfg.model.y0, 0.04);
  EXPECT_EQ(cfg.model.kappa, 1.15);
  EXPECT_EQ(cfg.model.theta, 0.04);
  EXPECT_EQ(cfg.model.delta, 0.2);
  EXPECT_EQ(cfg.model.t_final, 1.0);
  EXPECT_EQ(cfg.sim.dt, 1.0 / 1000.0);
  EXPECT_EQ(cfg.sim.n_paths, 10000u);
  EXPECT_EQ(cfg.rho_grid, (std::vector<double>{-0.99, -0.66, 0.0, 0.66, 0.99}));
  EXPECT_EQ(cfg.sweep_points, 81);
  EXPECT_EQ(cfg.hist_bins, 50);
  EXPECT_EQ(cfg.payoff.label, "exp_pos");
}

TEST(Config, ParsesAllBlocks) {
  const ExperimentConfig cfg = parse_config(R"({
    "schema_version": 1,
    "model": {"kappa": 2.0, "t_final": 0.5},
    "sim": {"dt": 0.005, "n_paths": 500, "seed": 18446744073709551615, "workers": 2},
    "payoff": {"preset": "put", "strike": 0.05, "n": 10},
    "rho_grid": [-0.5, 0.5],
    "paths": {"path_id": 7, "stride": 4},
    "hist": {"bins": 20},
    "outputs": {"dir": "elsewhere", "svg": false}
  })");
  EXPECT_EQ(cfg.model.kappa, 2.0);
  EXPECT_EQ(cfg.sim.seed, 18446744073709551615ull);
  EXPECT_EQ(cfg.sim.parallel_workers, 2u);
  EXPECT_EQ(cfg.payoff.label, "put");
  EXPECT_EQ(cfg.payoff.terms.size(), 11u);
  EXPECT_NEAR(eval_payoff(cfg.payoff, 0.0).real(), 0.05, 1e-12);
  EXPECT_EQ(cfg.path_id, 7u);
  EXPECT_FALSE(cfg.outputs.svg);

  const ExperimentConfig custom = parse_config(R"({"schema_version": 1,
    "payoff": {"label": "mine", "terms": [{"a_re": 1, "a_im": 0, "s_re": 0, "s_im": 2}]}})");
  EXPECT_EQ(custom.payoff_name, "custom");
  EXPECT_EQ(custom.payoff.terms[0].s, Complex(0, 2));
}

TEST(Config, ErrorsNameTheField) {
  expect_config_error("{}", "schema_version");
  expect_config_error(R"({"schema_version": 2})", "schema_version");
  expect_config_error("{not json", "invalid JSON");
  expect_config_error(R"({"schema_version": 1, "model": {"kappa": -1}})", "model.kappa");
  expect_config_error(R"({"schema_version": 1, "model": {"rho": 0.5}})", "model.rho");
  expect_config_error(R"({"schema_version": 1, "sim": {"n_paths": "many"}})", "sim.n_paths");
  expect_config_error(R"({"schema_version": 1, "sim": {"dt": 0.3}})", "sim.dt");
  expect_config_error(R"({"schema_version": 1, "rho_grid": [0, 1.5]})", "rho_grid[1]");
  expect_config_error(R"({"schema_version": 1, "payoff": "straddle"})", "payoff");
  expect_config_error(R"({"schema_version": 1, "payoff": {"terms": []}})", "payoff.terms");
  expect_config_error(R"({"schema_version": 1, "sim": {"n_paths": 10}, "paths": {"path_id": 10}})",
                      "paths.path_id");
  expect_config_error(R"({"schema_version": 1, "colour": "blue"})", "colour");
}

TEST(Config, QuickScale) {
  ExperimentConfig cfg;
  apply_quick(cfg);
  EXPECT_EQ(cfg.sim.dt, 1.0 / 250.0);
  EXPECT_EQ(cfg.sim.n_paths, 2000u);
}

TEST(Commands, SweepColumns) {
  ExperimentConfig cfg = small_config("sweep");
  cfg.sweep_points = 81;
  const auto rows = sweep_rho(cfg);
  ASSERT_EQ(rows.size(), 81u);
  EXPECT_EQ(rows.front().rho, -1.0);
  EXPECT_EQ(rows.back().rho, 1.0);
  const auto& mid = rows[40];
  EXPECT_EQ(mid.rho, 0.0);
  const double v = mid.values.v_true.real();
  for (Complex c : {mid.values.pi_plus, mid.values.pi_minus, mid.values.pi_immunized}) {
    EXPECT_LE(std::abs(c.real() - v), 1e-10 * v);
  }

  cfg.payoff = exp_neg_payoff();
  for (const auto& r : sweep_rho(cfg)) {
    EXPECT_EQ(r.values.v_true.imag(), 0.0);
    EXPECT_NEAR(r.values.pi_plus.imag(), -r.values.pi_minus.imag(), 1e-15);
  }
  cfg.payoff = constant_payoff();
  for (const auto& r : sweep_rho(cfg)) {
    for (Complex c : {r.values.pi_plus, r.values.pi_minus, r.values.pi_immunized, r.values.v_true}) {
      EXPECT_NEAR(c.real(), 1.0, 1e-15);
      EXPECT_NEAR(c.imag(), 0.0, 1e-15);
    }
  }
}

TEST(Commands, OutputsAreDeterministicAcrossWorkers) {
  ExperimentConfig a = small_config("det_a");
  a.sim.parallel_workers = 1;
  ExperimentConfig b = small_config("det_b");
  b.sim.parallel_workers = 6;
  for (auto cmd : {cmd_table, cmd_hist, cmd_paths, cmd_sweep_rho}) {
    const auto ra = cmd(a);
    const auto rb = cmd(b);
    ASSERT_EQ(ra.files.size(), rb.files.size());
    for (std::size_t k = 0; k < ra.files.size(); ++k) {
      EXPECT_EQ(ra.files[k].filename(), rb.files[k].filename());
      EXPECT_EQ(slurp(ra.files[k]), slurp(rb.files[k])) << ra.files[k];
    }
  }
}

TEST(Commands, PathsRespectsRangeAndConstantClaim) {
  ExperimentConfig cfg = small_config("paths");
  cfg.payoff = constant_payoff();
  cfg.payoff_name = "constant";
  for (const auto& d : sample_paths(cfg)) {
    for (std::size_t j = 0; j < d.path.size(); ++j) {
      ASSERT_NEAR(d.track.pi_plus[j].real(), 1.0, 1e-12);
      ASSERT_NEAR(d.track.pi_minus[j].real(), 1.0, 1e-12);
      ASSERT_NEAR(d.track.pi_imm[j].real(), 1.0, 1e-12);
    }
  }
  cfg.path_id = cfg.sim.n_paths;
  EXPECT_THROW(sample_paths(cfg), ConfigError);
}

TEST(Commands, TableOfConstantClaimIsZero) {
  ExperimentConfig cfg = small_config("const_table");
  cfg.payoff = constant_payoff();
  cfg.payoff_name = "constant";
  const auto table = error_table(cfg, run_rho_experiments(cfg));
  for (const auto& s : table.summaries) {
    for (const StrategyStats* st : {&s.plus, &s.minus, &s.immunized}) {
      EXPECT_LT(std::abs(st->mean), 1e-12);
      EXPECT_LT(st->std, 1e-12);
    }
  }
}

TEST(Commands, PayoffPlotDatasets) {
  ExperimentConfig cfg = small_config("plot");
  EXPECT_THROW(payoff_plot(cfg), ConfigError);  // exp_pos is not plottable

  set_payoff(cfg, "put");
  cfg.density_points = 201;
  const auto put = payoff_plot(cfg);
  EXPECT_NEAR(put.front().approx, 0.04, 1e-12);
  EXPECT_EQ(put.front().target, 0.04);
  EXPECT_EQ(put.back().qv, 0.2);

  set_payoff(cfg, "volswap");
  for (const auto& r : payoff_plot(cfg)) {
    if (r.qv >= 0.02 && r.qv <= 0.08) {
      EXPECT_LE(std::abs(r.approx - r.target), 0.02) << r.qv;
    }
  }

  cfg.density_qv_max = 1.0;
  cfg.density_points = 1001;
  const auto rows = qv_density_dataset(cfg);
  double mass = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    mass += 0.5 * (rows[k].qv - rows[k - 1].qv) * (rows[k].density + rows[k - 1].density);
  }
  EXPECT_NEAR(mass, 1.0, 0.01);
}

TEST(Commands, WritesCsvAndSvg) {
  ExperimentConfig cfg = small_config("files");
  set_payoff(cfg, "put");
  const auto result = cmd_payoff_plot(cfg);
  ASSERT_EQ(result.files.size(), 2u);
  const std::string csv = slurp(result.files[0]);
  EXPECT_EQ(csv.rfind("qv,target,approx,density\r\n", 0), 0u);
  const std::string svg = slurp(result.files[1]);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);

  cfg.outputs.svg = false;
  EXPECT_EQ(cmd_density(cfg).files.size(), 2u);  // csv + json
}
