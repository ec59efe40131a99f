#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qvhedge/replication.hpp"
#include "qvhedge/heston_model.hpp"
#include "qvhedge/mc_engine.hpp"
#include "qvhedge/payoffs.hpp"
#include "qvhedge/stats.hpp"

namespace qvhedge {

inline constexpr int kConfigSchemaVersion = 1;

struct OutputOptions {
  std::filesystem::path dir = "out";
  bool svg = true;
  bool json = true;
};

/// Everything a command needs. Defaults reproduce the reference setup:
/// X0 = 0, Y0 = 0.04, kappa = 1.15, theta = 0.04, delta = 0.2, T = 1,
/// dt = 1/1000, 10^4 paths, rho in {-0.99, -0.66, 0, 0.66, 0.99}.
struct ExperimentConfig {
  HestonParams model;
  SimConfig sim;
  std::string payoff_name = "exp_pos";  // preset name, or "custom" for an inline spec
  PresetParams preset;
  PayoffSpec payoff = exp_pos_payoff();
  std::vector<double> rho_grid{-0.99, -0.66, 0.0, 0.66, 0.99};
  int sweep_points = 81;
  std::size_t path_id = 0;
  std::size_t export_stride = 1;
  int hist_bins = 50;
  double density_qv_max = 0.2;
  int density_points = 201;
  OutputOptions outputs;

  /// Throws ConfigError with the dotted path of the offending field.
  void validate() const;
};

/// Parses a JSON config document; missing fields keep their defaults.
ExperimentConfig parse_config(std::string_view document);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Re-derives `payoff` from `payoff_name` and `preset` (no-op for custom payoffs).
void resolve_payoff(ExperimentConfig& cfg);

/// Selects a preset by name or loads a PayoffSpec JSON file.
void set_payoff(ExperimentConfig& cfg, const std::string& preset_or_file);

/// CI scale: dt = 1/250, 2000 paths.
void apply_quick(ExperimentConfig& cfg);

// ---- datasets -------------------------------------------------------------

struct SweepRow {
  double rho;
  PriceComparison values;
};

/// Initial values Pi0+, Pi0-, Pi0 and V0 over sweep_points correlations in [-1, 1].
std::vector<SweepRow> sweep_rho(const ExperimentConfig& cfg);

struct PathsDataset {
  double rho;
  PathRecord path;
  PortfolioTrack track;
};

/// Path `path_id` and its portfolio tracks at each rho of the grid.
std::vector<PathsDataset> sample_paths(const ExperimentConfig& cfg);

/// Hedging experiments at every rho of the grid, run concurrently.
std::vector<HedgeRun> run_rho_experiments(const ExperimentConfig& cfg);

ErrorTable error_table(const ExperimentConfig& cfg, const std::vector<HedgeRun>& runs);

struct HistDataset {
  double rho;
  std::vector<HistogramBin> plus;
  std::vector<HistogramBin> minus;
  std::vector<HistogramBin> immunized;
};

/// Shared-bin histograms of Re eps+, Re eps-, Re eps per rho.
std::vector<HistDataset> error_histograms(const ExperimentConfig& cfg,
                                          const std::vector<HedgeRun>& runs);

struct PayoffPlotRow {
  double qv;
  double target;
  double approx;
  double density;
};

/// Exact target, its exponential-sum approximation, and the density of <X>_T on
/// [0, density_qv_max]. Only for the put and volswap presets.
std::vector<PayoffPlotRow> payoff_plot(const ExperimentConfig& cfg);

struct DensityRow {
  double qv;
  double density;
};

std::vector<DensityRow> qv_density_dataset(const ExperimentConfig& cfg);

// ---- commands: datasets written under outputs.dir -------------------------

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::string report;  // human readable summary for stdout
};

CommandResult cmd_sweep_rho(const ExperimentConfig& cfg);
CommandResult cmd_paths(const ExperimentConfig& cfg);
CommandResult cmd_table(const ExperimentConfig& cfg);
CommandResult cmd_hist(const ExperimentConfig& cfg);
CommandResult cmd_payoff_plot(const ExperimentConfig& cfg);
CommandResult cmd_density(const ExperimentConfig& cfg);

}  // namespace qvhedge
