#include "qvhedge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qvhedge/csv.hpp"

namespace qvhedge {

StrategyStats sample_stats(std::span<const Complex> samples) {
  if (samples.size() < 2) throw ConfigError("summarize: need at least two samples");

  // Canonical order makes the result independent of the input permutation.
  std::vector<Complex> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });

  const double n = static_cast<double>(sorted.size());
  Complex sum{};
  for (const Complex& e : sorted) sum += e;
  const Complex mean = sum / n;

  double squares = 0.0;
  for (const Complex& e : sorted) squares += std::norm(e - mean);
  return {mean, std::sqrt(squares / (n - 1.0))};
}

ErrorSummary summarize(std::span<const ErrorTriple> errors, ErrorConvention convention) {
  std::vector<Complex> plus, minus, imm;
  plus.reserve(errors.size());
  minus.reserve(errors.size());
  imm.reserve(errors.size());
  for (const auto& e : errors) {
    if (convention == ErrorConvention::real_part) {
      plus.emplace_back(e.plus.real(), 0.0);
      minus.emplace_back(e.minus.real(), 0.0);
    } else {
      plus.push_back(e.plus);
      minus.push_back(e.minus);
    }
    imm.push_back(e.immunized);
  }
  ErrorSummary summary;
  summary.plus = sample_stats(plus);
  summary.minus = sample_stats(minus);
  summary.immunized = sample_stats(imm);
  summary.n = errors.size();
  summary.convention = convention;
  return summary;
}

ErrorConvention default_convention(const PayoffSpec& payoff) {
  return payoff.is_real_decreasing() ? ErrorConvention::real_part : ErrorConvention::raw;
}

HistogramRange pooled_range(std::span<const std::vector<double>> sample_sets) {
  HistogramRange range{std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
  for (const auto& set : sample_sets) {
    for (double v : set) {
      range.lo = std::min(range.lo, v);
      range.hi = std::max(range.hi, v);
    }
  }
  if (!(range.lo <= range.hi)) throw ConfigError("histogram: no samples");
  return range;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, int bin_count,
                                    HistogramRange range) {
  if (samples.empty()) throw ConfigError("histogram: no samples");
  if (bin_count < 1) throw ConfigError("histogram: bin_count must be at least 1");
  if (!(range.hi >= range.lo)) throw ConfigError("histogram: empty range");
  if (range.hi == range.lo) {
    range.lo -= 0.5;
    range.hi += 0.5;
  }

  const double width = (range.hi - range.lo) / bin_count;
  std::vector<std::size_t> counts(bin_count, 0);
  for (double v : samples) {
    const double pos = std::floor((v - range.lo) / width);
    const int idx = static_cast<int>(std::clamp(pos, 0.0, static_cast<double>(bin_count - 1)));
    ++counts[idx];
  }

  std::vector<HistogramBin> bins(bin_count);
  const double n = static_cast<double>(samples.size());
  for (int b = 0; b < bin_count; ++b) {
    bins[b].center = range.lo + (b + 0.5) * width;
    bins[b].probability = static_cast<double>(counts[b]) / n;
  }
  return bins;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, int bin_count) {
  if (samples.empty()) throw ConfigError("histogram: no samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return histogram(samples, bin_count, HistogramRange{*lo, *hi});
}

std::string format_sci3(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2E", value);
  return buffer;
}

namespace {

struct TableRow {
  std::string name;
  double (*pick)(const ErrorSummary&);
};

std::vector<TableRow> table_rows(ErrorConvention convention) {
  const bool re = convention == ErrorConvention::real_part;
  return {
      {re ? "Re mean-" : "mean-", [](const ErrorSummary& s) { return s.minus.mean.real(); }},
      {"mean", [](const ErrorSummary& s) { return s.immunized.mean.real(); }},
      {re ? "Re mean+" : "mean+", [](const ErrorSummary& s) { return s.plus.mean.real(); }},
      {re ? "Re std-" : "std-", [](const ErrorSummary& s) { return s.minus.std; }},
      {"std", [](const ErrorSummary& s) { return s.immunized.std; }},
      {re ? "Re std+" : "std+", [](const ErrorSummary& s) { return s.plus.std; }},
  };
}

std::string rho_heading(double rho) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "rho=%g", rho);
  return buffer;
}

}  // namespace

std::string render_table_text(const ErrorTable& table) {
  const ErrorConvention convention =
      table.summaries.empty() ? ErrorConvention::raw : table.summaries.front().convention;
  std::ostringstream os;
  char cell[64];
  os << table.label << "\n";
  std::snprintf(cell, sizeof cell, "%-10s", "");
  os << cell;
  for (double rho : table.rhos) {
    std::snprintf(cell, sizeof cell, " %12s", rho_heading(rho).c_str());
    os << cell;
  }
  os << "\n";
  const auto rows = table_rows(convention);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 3) os << std::string(10 + 13 * table.rhos.size(), '-') << "\n";
    std::snprintf(cell, sizeof cell, "%-10s", rows[r].name.c_str());
    os << cell;
    for (const auto& s : table.summaries) {
      std::snprintf(cell, sizeof cell, " %12s", format_sci3(rows[r].pick(s)).c_str());
      os << cell;
    }
    os << "\n";
  }
  return os.str();
}

std::string render_table_csv(const ErrorTable& table) {
  const ErrorConvention convention =
      table.summaries.empty() ? ErrorConvention::raw : table.summaries.front().convention;
  std::ostringstream os;
  CsvWriter csv(os);
  csv.begin_row();
  csv.field(std::string_view("statistic"));
  for (double rho : table.rhos) csv.field(rho_heading(rho));
  csv.end_row();
  for (const auto& row : table_rows(convention)) {
    csv.begin_row();
    csv.field(row.name);
    for (const auto& s : table.summaries) csv.field(format_sci3(row.pick(s)));
    csv.end_row();
  }
  return os.str();
}

}  // namespace qvhedge
