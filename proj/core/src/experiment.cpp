#include "qvhedge/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "qvhedge/csv.hpp"
#include "qvhedge/svg.hpp"

namespace qvhedge {

using nlohmann::json;

namespace {

// ---- config parsing -------------------------------------------------------

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path + ": expected an object");
}

void reject_unknown(const json& node, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : node.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(path, key) + ": unknown field");
    }
  }
}

void read_number(const json& node, const std::string& path, const char* key, double& out) {
  if (!node.contains(key)) return;
  const json& v = node.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(join(path, key) + ": must be finite");
}

template <class Int>
void read_count(const json& node, const std::string& path, const char* key, Int& out) {
  if (!node.contains(key)) return;
  const json& v = node.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  if (v.is_number_unsigned()) {
    out = static_cast<Int>(v.get<std::uint64_t>());
    return;
  }
  const auto raw = v.get<std::int64_t>();
  if (raw < 0) throw ConfigError(join(path, key) + ": must be nonnegative");
  out = static_cast<Int>(raw);
}

void read_bool(const json& node, const std::string& path, const char* key, bool& out) {
  if (!node.contains(key)) return;
  const json& v = node.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
  out = v.get<bool>();
}

void parse_model(const json& node, HestonParams& m) {
  require_object(node, "model");
  reject_unknown(node, "model", {"x0", "y0", "kappa", "theta", "delta", "t_final"});
  read_number(node, "model", "x0", m.x0);
  read_number(node, "model", "y0", m.y0);
  read_number(node, "model", "kappa", m.kappa);
  read_number(node, "model", "theta", m.theta);
  read_number(node, "model", "delta", m.delta);
  read_number(node, "model", "t_final", m.t_final);
}

void parse_sim(const json& node, SimConfig& s) {
  require_object(node, "sim");
  reject_unknown(node, "sim", {"dt", "n_paths", "seed", "workers"});
  read_number(node, "sim", "dt", s.dt);
  read_count(node, "sim", "n_paths", s.n_paths);
  read_count(node, "sim", "seed", s.seed);
  read_count(node, "sim", "workers", s.parallel_workers);
}

void parse_payoff(const json& node, ExperimentConfig& cfg) {
  if (node.is_string()) {
    cfg.payoff_name = node.get<std::string>();
    return;
  }
  require_object(node, "payoff");
  if (node.contains("terms")) {
    reject_unknown(node, "payoff", {"label", "terms"});
    cfg.payoff_name = "custom";
    cfg.payoff = payoff_from_json(node.dump());
    return;
  }
  reject_unknown(node, "payoff", {"preset", "strike", "c", "n", "v_cap"});
  if (!node.contains("preset") || !node.at("preset").is_string()) {
    throw ConfigError("payoff.preset: expected a preset name");
  }
  cfg.payoff_name = node.at("preset").get<std::string>();
  read_number(node, "payoff", "strike", cfg.preset.strike);
  read_number(node, "payoff", "c", cfg.preset.c);
  read_count(node, "payoff", "n", cfg.preset.n);
  read_number(node, "payoff", "v_cap", cfg.preset.v_cap);
}

void parse_rho_grid(const json& node, std::vector<double>& grid) {
  if (!node.is_array()) throw ConfigError("rho_grid: expected an array of numbers");
  grid.clear();
  for (std::size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_number()) {
      throw ConfigError("rho_grid[" + std::to_string(k) + "]: expected a number");
    }
    grid.push_back(node[k].get<double>());
  }
}

// ---- output helpers -------------------------------------------------------

std::string file_stem(const std::string& label) {
  std::string out;
  for (char ch : label) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
    out += keep ? ch : '_';
  }
  return out.empty() ? "payoff" : out;
}

std::string rho_tag(double rho) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "rho%+.2f", rho);
  return buffer;
}

std::string rho_title(double rho) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "rho = %g", rho);
  return buffer;
}

std::filesystem::path write_file(const ExperimentConfig& cfg, const std::string& name,
                                  const std::string& content) {
  std::filesystem::create_directories(cfg.outputs.dir);
  const auto path = cfg.outputs.dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("outputs.dir: cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("outputs.dir: failed writing " + path.string());
  return path;
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
  }
  if (points > 1) grid.back() = hi;
  return grid;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) sum += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  return sum;
}

json stats_json(const StrategyStats& s) {
  return {{"mean_re", s.mean.real()}, {"mean_im", s.mean.imag()}, {"std", s.std}};
}

const char* kPlusColor = "#d62728";
const char* kMinusColor = "#1f77b4";
const char* kImmColor = "#2ca02c";
const char* kTrueColor = "#000000";

}  // namespace

// ---- config ---------------------------------------------------------------

void ExperimentConfig::validate() const {
  try {
    model.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model.") + e.what());
  }
  sim.validate(model);
  if (payoff_name != "custom" && !is_payoff_preset(payoff_name)) {
    throw ConfigError("payoff: unknown preset '" + payoff_name + "'");
  }
  payoff.validate();
  if (rho_grid.empty()) throw ConfigError("rho_grid: needs at least one value");
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    if (!(std::abs(rho_grid[k]) <= 1.0)) {
      throw ConfigError("rho_grid[" + std::to_string(k) + "]: must lie in [-1, 1]");
    }
  }
  if (sweep_points < 2) throw ConfigError("sweep.points: must be at least 2");
  if (path_id >= sim.n_paths) {
    throw ConfigError("paths.path_id: " + std::to_string(path_id) + " is not below sim.n_paths = " +
                      std::to_string(sim.n_paths));
  }
  if (export_stride < 1) throw ConfigError("paths.stride: must be at least 1");
  if (hist_bins < 1) throw ConfigError("hist.bins: must be at least 1");
  if (!(density_qv_max > 0.0)) throw ConfigError("density.qv_max: must be positive");
  if (density_points < 2) throw ConfigError("density.points: must be at least 2");
}

ExperimentConfig parse_config(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  require_object(doc, "config");
  reject_unknown(doc, "", {"schema_version", "model", "sim", "payoff", "rho_grid", "sweep",
                           "paths", "hist", "density", "outputs"});
  if (!doc.contains("schema_version")) throw ConfigError("schema_version: required");
  if (!doc.at("schema_version").is_number_integer() ||
      doc.at("schema_version").get<int>() != kConfigSchemaVersion) {
    throw ConfigError("schema_version: unsupported, expected " +
                      std::to_string(kConfigSchemaVersion));
  }

  ExperimentConfig cfg;
  if (doc.contains("model")) parse_model(doc.at("model"), cfg.model);
  if (doc.contains("sim")) parse_sim(doc.at("sim"), cfg.sim);
  if (doc.contains("payoff")) parse_payoff(doc.at("payoff"), cfg);
  if (doc.contains("rho_grid")) parse_rho_grid(doc.at("rho_grid"), cfg.rho_grid);
  if (doc.contains("sweep")) {
    const json& n = doc.at("sweep");
    require_object(n, "sweep");
    reject_unknown(n, "sweep", {"points"});
    read_count(n, "sweep", "points", cfg.sweep_points);
  }
  if (doc.contains("paths")) {
    const json& n = doc.at("paths");
    require_object(n, "paths");
    reject_unknown(n, "paths", {"path_id", "stride"});
    read_count(n, "paths", "path_id", cfg.path_id);
    read_count(n, "paths", "stride", cfg.export_stride);
  }
  if (doc.contains("hist")) {
    const json& n = doc.at("hist");
    require_object(n, "hist");
    reject_unknown(n, "hist", {"bins"});
    read_count(n, "hist", "bins", cfg.hist_bins);
  }
  if (doc.contains("density")) {
    const json& n = doc.at("density");
    require_object(n, "density");
    reject_unknown(n, "density", {"qv_max", "points"});
    read_number(n, "density", "qv_max", cfg.density_qv_max);
    read_count(n, "density", "points", cfg.density_points);
  }
  if (doc.contains("outputs")) {
    const json& n = doc.at("outputs");
    require_object(n, "outputs");
    reject_unknown(n, "outputs", {"dir", "svg", "json"});
    if (n.contains("dir")) {
      if (!n.at("dir").is_string()) throw ConfigError("outputs.dir: expected a string");
      cfg.outputs.dir = n.at("dir").get<std::string>();
    }
    read_bool(n, "outputs", "svg", cfg.outputs.svg);
    read_bool(n, "outputs", "json", cfg.outputs.json);
  }
  resolve_payoff(cfg);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void resolve_payoff(ExperimentConfig& cfg) {
  if (cfg.payoff_name == "custom") return;
  cfg.payoff = payoff_preset(cfg.payoff_name, cfg.preset);
}

void set_payoff(ExperimentConfig& cfg, const std::string& preset_or_file) {
  if (is_payoff_preset(preset_or_file)) {
    cfg.payoff_name = preset_or_file;
    resolve_payoff(cfg);
    return;
  }
  std::ifstream in(preset_or_file, std::ios::binary);
  if (!in) {
    throw ConfigError("payoff: '" + preset_or_file + "' is neither a preset nor a readable file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  cfg.payoff = payoff_from_json(buffer.str());
  cfg.payoff_name = "custom";
}

void apply_quick(ExperimentConfig& cfg) {
  cfg.sim.dt = 1.0 / 250.0;
  cfg.sim.n_paths = 2000;
  if (cfg.path_id >= cfg.sim.n_paths) cfg.path_id = 0;
}

// ---- datasets -------------------------------------------------------------

std::vector<SweepRow> sweep_rho(const ExperimentConfig& cfg) {
  std::vector<SweepRow> rows;
  for (double rho : linspace(-1.0, 1.0, cfg.sweep_points)) {
    const HestonParams p = cfg.model.with_rho(rho);
    rows.push_back({rho, compare_prices(p, MarketState::initial(p), cfg.payoff)});
  }
  return rows;
}

std::vector<PathsDataset> sample_paths(const ExperimentConfig& cfg) {
  cfg.validate();
  SimConfig sim = cfg.sim;
  sim.rho_override.reset();
  std::vector<PathsDataset> out;
  for (double rho : cfg.rho_grid) {
    const HestonParams p = cfg.model.with_rho(rho);
    PathRecord path = simulate_path(p, sim, cfg.path_id);
    PortfolioTrack track = evolve_portfolios(path, p, cfg.payoff, sim.dt);
    out.push_back({rho, std::move(path), std::move(track)});
  }
  return out;
}

std::vector<HedgeRun> run_rho_experiments(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.rho_grid.size();
  const unsigned workers = cfg.sim.resolved_workers();
  const auto concurrent = static_cast<unsigned>(std::min<std::size_t>(n, workers));
  SimConfig sim = cfg.sim;
  sim.rho_override.reset();
  sim.parallel_workers = std::max(1u, workers / concurrent);

  std::vector<HedgeRun> runs(n);
  parallel_chunks(n, concurrent, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      runs[k] = hedge_experiment(cfg.model.with_rho(cfg.rho_grid[k]), cfg.payoff, sim);
    }
  });
  return runs;
}

ErrorTable error_table(const ExperimentConfig& cfg, const std::vector<HedgeRun>& runs) {
  ErrorTable table;
  table.label = cfg.payoff.label;
  table.rhos = cfg.rho_grid;
  const ErrorConvention convention = default_convention(cfg.payoff);
  for (const auto& run : runs) table.summaries.push_back(summarize(run.errors, convention));
  return table;
}

std::vector<HistDataset> error_histograms(const ExperimentConfig& cfg,
                                          const std::vector<HedgeRun>& runs) {
  std::vector<HistDataset> out;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::vector<std::vector<double>> sets(3);
    for (const auto& e : runs[k].errors) {
      sets[0].push_back(e.plus.real());
      sets[1].push_back(e.minus.real());
      sets[2].push_back(e.immunized.real());
    }
    const HistogramRange range = pooled_range(sets);
    out.push_back({cfg.rho_grid[k], histogram(sets[0], cfg.hist_bins, range),
                   histogram(sets[1], cfg.hist_bins, range),
                   histogram(sets[2], cfg.hist_bins, range)});
  }
  return out;
}

std::vector<PayoffPlotRow> payoff_plot(const ExperimentConfig& cfg) {
  const bool put = cfg.payoff_name == "put";
  if (!put && cfg.payoff_name != "volswap") {
    throw ConfigError("payoff: payoff-plot needs the put or volswap preset, got '" +
                      cfg.payoff_name + "'");
  }
  const std::vector<double> grid = linspace(0.0, cfg.density_qv_max, cfg.density_points);
  const std::vector<double> density = qv_density(cfg.model, grid);
  std::vector<PayoffPlotRow> rows;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = grid[k];
    const double target = put ? std::max(cfg.preset.strike - v, 0.0) : std::sqrt(v);
    rows.push_back({v, target, eval_payoff(cfg.payoff, v).real(), density[k]});
  }
  return rows;
}

std::vector<DensityRow> qv_density_dataset(const ExperimentConfig& cfg) {
  const std::vector<double> grid = linspace(0.0, cfg.density_qv_max, cfg.density_points);
  const std::vector<double> density = qv_density(cfg.model, grid);
  std::vector<DensityRow> rows;
  for (std::size_t k = 0; k < grid.size(); ++k) rows.push_back({grid[k], density[k]});
  return rows;
}

// ---- commands -------------------------------------------------------------

CommandResult cmd_sweep_rho(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto rows = sweep_rho(cfg);
  const std::string stem = "sweep_rho_" + file_stem(cfg.payoff.label);

  std::ostringstream os;
  CsvWriter csv(os);
  csv.row({"rho", "pi_plus_re", "pi_plus_im", "pi_minus_re", "pi_minus_im", "pi_imm_re",
           "pi_imm_im", "v_true_re", "v_true_im"});
  for (const auto& r : rows) {
    csv.begin_row();
    csv.field(r.rho);
    csv.field(r.values.pi_plus);
    csv.field(r.values.pi_minus);
    csv.field(r.values.pi_immunized);
    csv.field(r.values.v_true);
    csv.end_row();
  }

  CommandResult result;
  result.files.push_back(write_file(cfg, stem + ".csv", os.str()));

  if (cfg.outputs.svg) {
    std::array<PlotPanel, 2> panels;
    panels[0] = {"Real part, " + cfg.payoff.label, "rho", "Re value", "", {}};
    panels[1] = {"Imaginary part, " + cfg.payoff.label, "rho", "Im value", "", {}};
    struct Column {
      const char* name;
      Complex PriceComparison::*member;
      const char* color;
    };
    const Column columns[] = {{"Pi0+", &PriceComparison::pi_plus, kPlusColor},
                              {"Pi0-", &PriceComparison::pi_minus, kMinusColor},
                              {"Pi0", &PriceComparison::pi_immunized, kImmColor},
                              {"V0", &PriceComparison::v_true, kTrueColor}};
    for (const auto& col : columns) {
      PlotSeries re{col.name, {}, {}, col.color};
      PlotSeries im{col.name, {}, {}, col.color};
      for (const auto& r : rows) {
        const Complex v = r.values.*(col.member);
        re.x.push_back(r.rho);
        re.y.push_back(v.real());
        im.x.push_back(r.rho);
        im.y.push_back(v.imag());
      }
      panels[0].series.push_back(std::move(re));
      panels[1].series.push_back(std::move(im));
    }
    result.files.push_back(write_file(cfg, stem + ".svg", render_svg(panels, 2)));
  }

  const auto& mid = rows[rows.size() / 2];
  std::ostringstream report;
  report << "sweep over " << rows.size() << " correlations for " << cfg.payoff.label
         << "; at rho = " << mid.rho << ": Pi0+ = " << to_string(mid.values.pi_plus)
         << ", Pi0- = " << to_string(mid.values.pi_minus)
         << ", Pi0 = " << to_string(mid.values.pi_immunized)
         << ", V0 = " << to_string(mid.values.v_true) << "\n";
  result.report = report.str();
  return result;
}

CommandResult cmd_paths(const ExperimentConfig& cfg) {
  const auto datasets = sample_paths(cfg);
  const std::string stem = "paths_" + file_stem(cfg.payoff.label);
  CommandResult result;
  std::vector<PlotPanel> panels;
  std::ostringstream report;
  report << "path " << cfg.path_id << ", payoff " << cfg.payoff.label << "\n";

  for (const auto& d : datasets) {
    std::ostringstream os;
    write_track_csv(os, d.path, d.track, cfg.export_stride, true);
    result.files.push_back(write_file(cfg, stem + "_" + rho_tag(d.rho) + ".csv", os.str()));

    PlotPanel panel{rho_title(d.rho), "t", "Re value", "", {}};
    auto add = [&](const char* name, const std::vector<Complex>& values, const char* color) {
      PlotSeries s{name, {}, {}, color};
      for (std::size_t j = 0; j < values.size(); j += cfg.export_stride) {
        s.x.push_back(d.path.times[j]);
        s.y.push_back(values[j].real());
      }
      if ((values.size() - 1) % cfg.export_stride != 0) {
        s.x.push_back(d.path.times.back());
        s.y.push_back(values.back().real());
      }
      panel.series.push_back(std::move(s));
    };
    add("Pi+", d.track.pi_plus, kPlusColor);
    add("Pi-", d.track.pi_minus, kMinusColor);
    add("Pi", d.track.pi_imm, kImmColor);
    add("V", d.track.v_true, kTrueColor);
    panels.push_back(std::move(panel));

    report << "  " << rho_title(d.rho) << ": Pi+_T = " << to_string(d.track.pi_plus.back())
           << ", Pi-_T = " << to_string(d.track.pi_minus.back())
           << ", Pi_T = " << to_string(d.track.pi_imm.back())
           << ", V_T = " << to_string(d.track.v_true.back()) << "\n";
  }
  if (cfg.outputs.svg) result.files.push_back(write_file(cfg, stem + ".svg", render_svg(panels, 2)));
  result.report = report.str();
  return result;
}

CommandResult cmd_table(const ExperimentConfig& cfg) {
  const auto runs = run_rho_experiments(cfg);
  const ErrorTable table = error_table(cfg, runs);
  const std::string stem = "table_" + file_stem(cfg.payoff.label);
  const std::string text = render_table_text(table);

  CommandResult result;
  result.files.push_back(write_file(cfg, stem + ".csv", render_table_csv(table)));
  result.files.push_back(write_file(cfg, stem + ".txt", text));
  if (cfg.outputs.json) {
    json doc;
    doc["payoff"] = cfg.payoff.label;
    doc["convention"] = table.summaries.front().convention == ErrorConvention::real_part
                            ? "real_part"
                            : "raw";
    doc["n_paths"] = cfg.sim.n_paths;
    doc["dt"] = cfg.sim.dt;
    doc["seed"] = cfg.sim.seed;
    doc["rows"] = json::array();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto& s = table.summaries[k];
      doc["rows"].push_back({{"rho", table.rhos[k]},
                             {"plus", stats_json(s.plus)},
                             {"minus", stats_json(s.minus)},
                             {"immunized", stats_json(s.immunized)},
                             {"max_imm_imag_ratio", runs[k].max_imm_imag_ratio},
                             {"negative_y_clamps", runs[k].negative_y_clamps},
                             {"paths_with_nonpositive_qv", runs[k].paths_with_nonpositive_qv}});
    }
    result.files.push_back(write_file(cfg, stem + ".json", doc.dump(2) + "\n"));
  }
  result.report = text;
  return result;
}

CommandResult cmd_hist(const ExperimentConfig& cfg) {
  const auto runs = run_rho_experiments(cfg);
  const auto hists = error_histograms(cfg, runs);
  const std::string stem = "hist_" + file_stem(cfg.payoff.label);

  std::ostringstream os;
  CsvWriter csv(os);
  csv.row({"rho", "bin_center", "p_plus", "p_minus", "p_imm"});
  std::vector<PlotPanel> panels;
  for (const auto& h : hists) {
    PlotPanel panel{rho_title(h.rho), "Re hedging error", "probability", "", {}};
    PlotSeries plus{"Re eps+", {}, {}, kPlusColor, SeriesStyle::bars};
    PlotSeries minus{"Re eps-", {}, {}, kMinusColor, SeriesStyle::bars};
    PlotSeries imm{"Re eps", {}, {}, kImmColor, SeriesStyle::bars};
    for (std::size_t b = 0; b < h.plus.size(); ++b) {
      csv.begin_row();
      csv.field(h.rho);
      csv.field(h.plus[b].center);
      csv.field(h.plus[b].probability);
      csv.field(h.minus[b].probability);
      csv.field(h.immunized[b].probability);
      csv.end_row();
      plus.x.push_back(h.plus[b].center);
      plus.y.push_back(h.plus[b].probability);
      minus.x.push_back(h.minus[b].center);
      minus.y.push_back(h.minus[b].probability);
      imm.x.push_back(h.immunized[b].center);
      imm.y.push_back(h.immunized[b].probability);
    }
    panel.series = {std::move(plus), std::move(minus), std::move(imm)};
    panels.push_back(std::move(panel));
  }

  CommandResult result;
  result.files.push_back(write_file(cfg, stem + ".csv", os.str()));
  if (cfg.outputs.svg) result.files.push_back(write_file(cfg, stem + ".svg", render_svg(panels, 2)));
  std::ostringstream report;
  report << hists.size() << " histograms with " << cfg.hist_bins << " shared bins for "
         << cfg.payoff.label << "\n";
  result.report = report.str();
  return result;
}

CommandResult cmd_payoff_plot(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto rows = payoff_plot(cfg);
  const std::string stem = "payoff_plot_" + file_stem(cfg.payoff.label);

  std::ostringstream os;
  CsvWriter csv(os);
  csv.row({"qv", "target", "approx", "density"});
  PlotSeries target{"target", {}, {}, kTrueColor};
  PlotSeries approx{"approximation", {}, {}, kPlusColor};
  PlotSeries density{"density of QV", {}, {}, "#bbbbbb", SeriesStyle::bars, true};
  double max_gap = 0.0;
  for (const auto& r : rows) {
    csv.begin_row();
    csv.field(r.qv);
    csv.field(r.target);
    csv.field(r.approx);
    csv.field(r.density);
    csv.end_row();
    target.x.push_back(r.qv);
    target.y.push_back(r.target);
    approx.x.push_back(r.qv);
    approx.y.push_back(r.approx);
    density.x.push_back(r.qv);
    density.y.push_back(r.density);
    max_gap = std::max(max_gap, std::abs(r.target - r.approx));
  }

  CommandResult result;
  result.files.push_back(write_file(cfg, stem + ".csv", os.str()));
  if (cfg.outputs.svg) {
    const std::array<PlotPanel, 1> panels{
        PlotPanel{cfg.payoff.label + " payoff", "quadratic variation", "payoff", "density",
                  {std::move(density), std::move(target), std::move(approx)}}};
    result.files.push_back(write_file(cfg, stem + ".svg", render_svg(panels, 1)));
  }
  std::ostringstream report;
  report << cfg.payoff.label << ": max |target - approximation| on [0, " << cfg.density_qv_max
         << "] = " << max_gap << "\n";
  result.report = report.str();
  return result;
}

CommandResult cmd_density(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto rows = qv_density_dataset(cfg);
  std::ostringstream os;
  CsvWriter csv(os);
  csv.row({"qv", "density"});
  std::vector<double> x, y, xy;
  for (const auto& r : rows) {
    csv.begin_row();
    csv.field(r.qv);
    csv.field(r.density);
    csv.end_row();
    x.push_back(r.qv);
    y.push_back(r.density);
    xy.push_back(r.qv * r.density);
  }
  const double mass = trapezoid(x, y);
  const double mean = trapezoid(x, xy);

  CommandResult result;
  result.files.push_back(write_file(cfg, "density.csv", os.str()));
  if (cfg.outputs.svg) {
    const std::array<PlotPanel, 1> panels{PlotPanel{
        "density of quadratic variation", "quadratic variation", "density", "",
        {PlotSeries{"density", x, y, kMinusColor}}}};
    result.files.push_back(write_file(cfg, "density.svg", render_svg(panels, 1)));
  }
  if (cfg.outputs.json) {
    const json doc = {{"qv_max", cfg.density_qv_max}, {"points", cfg.density_points},
                      {"mass", mass}, {"mean", mean}};
    result.files.push_back(write_file(cfg, "density.json", doc.dump(2) + "\n"));
  }
  std::ostringstream report;
  report << "density mass on [0, " << cfg.density_qv_max << "] = " << mass << ", mean = " << mean
         << "\n";
  result.report = report.str();
  return result;
}

}  // namespace qvhedge
