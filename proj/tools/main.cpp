// qvhedge: experiment driver. Every subcommand writes CSV (and optionally SVG/JSON)
// under --out and prints a short report.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qvhedge/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quick = false;
  std::string payoff;
  std::vector<double> rho;
  std::optional<std::size_t> path_id;
  std::optional<unsigned> workers;
  std::optional<std::size_t> n_paths;
  bool no_svg = false;
};

qvhedge::ExperimentConfig build_config(const GlobalOptions& g) {
  qvhedge::ExperimentConfig cfg =
      g.config_file.empty() ? qvhedge::ExperimentConfig{} : qvhedge::load_config(g.config_file);
  if (g.quick) qvhedge::apply_quick(cfg);
  if (g.seed) cfg.sim.seed = *g.seed;
  if (!g.out_dir.empty()) cfg.outputs.dir = g.out_dir;
  if (!g.payoff.empty()) qvhedge::set_payoff(cfg, g.payoff);
  if (!g.rho.empty()) cfg.rho_grid = g.rho;
  if (g.path_id) cfg.path_id = *g.path_id;
  if (g.workers) cfg.sim.parallel_workers = *g.workers;
  if (g.n_paths) cfg.sim.n_paths = *g.n_paths;
  if (g.no_svg) cfg.outputs.svg = false;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volatility derivative hedging experiments under Heston dynamics"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_file, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_flag("--quick", g.quick, "CI scale: dt = 1/250, 2000 paths");
  app.add_option("--payoff", g.payoff, "Preset (exp_pos, exp_neg, put, volswap, constant) or payoff JSON file");
  app.add_option("--rho", g.rho, "Correlation grid, comma separated")->delimiter(',');
  app.add_option("--path-id", g.path_id, "Path exported by the paths command");
  app.add_option("--workers", g.workers, "Worker threads (0: all cores)");
  app.add_option("--paths", g.n_paths, "Number of simulated paths");
  app.add_flag("--no-svg", g.no_svg, "Skip SVG output");

  using Command = qvhedge::CommandResult (*)(const qvhedge::ExperimentConfig&);
  struct Entry {
    const char* name;
    const char* help;
    Command run;
  };
  const Entry entries[] = {
      {"sweep-rho", "Initial values of the portfolios and the claim over a correlation sweep",
       qvhedge::cmd_sweep_rho},
      {"paths", "Portfolio and true value tracks along one simulated path", qvhedge::cmd_paths},
      {"table", "Hedging error means and standard deviations over the correlation grid",
       qvhedge::cmd_table},
      {"hist", "Histograms of hedging errors with shared bins", qvhedge::cmd_hist},
      {"payoff-plot", "Target payoff, its exponential approximation and the QV density",
       qvhedge::cmd_payoff_plot},
      {"density", "Density of the quadratic variation at maturity", qvhedge::cmd_density},
  };
  Command selected = nullptr;
  for (const auto& e : entries) {
    app.add_subcommand(e.name, e.help)->fallthrough()->callback([&selected, run = e.run] {
      selected = run;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const qvhedge::ExperimentConfig cfg = build_config(g);
    const qvhedge::CommandResult result = selected(cfg);
    std::cout << result.report;
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    return 0;
  } catch (const qvhedge::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qvhedge::DegenerateTransformError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qvhedge::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
