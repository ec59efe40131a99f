#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qvhedge/mc_engine.hpp"
#include "qvhedge/types.hpp"

namespace qvhedge {

/// raw: statistics of the complex errors as they are.
/// real_part: Re is applied to the basic-strategy errors before aggregating
/// (the convention for real payoffs built from decreasing exponentials).
enum class ErrorConvention { raw, real_part };

struct StrategyStats {
  Complex mean;
  double std = 0.0;  // sqrt(sum |e - mean|^2 / (n - 1))
};

struct ErrorSummary {
  StrategyStats plus;
  StrategyStats minus;
  StrategyStats immunized;
  std::size_t n = 0;
  ErrorConvention convention = ErrorConvention::raw;
};

/// Two-pass sample mean and unbiased standard deviation. Throws ConfigError for n < 2.
StrategyStats sample_stats(std::span<const Complex> samples);

ErrorSummary summarize(std::span<const ErrorTriple> errors, ErrorConvention convention);

/// real_part for real payoffs made of decreasing exponentials, raw otherwise.
ErrorConvention default_convention(const PayoffSpec& payoff);

struct HistogramBin {
  double center;
  double probability;
};

struct HistogramRange {
  double lo;
  double hi;
};

/// [min, max] over all the sample sets together.
HistogramRange pooled_range(std::span<const std::vector<double>> sample_sets);

/// Probability histogram on bin_count equal bins over range. Values outside the
/// range are clamped into the end bins. A degenerate range puts all mass in one bin.
std::vector<HistogramBin> histogram(std::span<const double> samples, int bin_count,
                                    HistogramRange range);

/// Histogram over the samples' own [min, max].
std::vector<HistogramBin> histogram(std::span<const double> samples, int bin_count);

/// Table over a rho grid, rows: mean-, mean, mean+, std-, std, std+.
struct ErrorTable {
  std::string label;
  std::vector<double> rhos;
  std::vector<ErrorSummary> summaries;  // one per rho
};

/// Three significant digits in scientific notation, e.g. "3.10E-04".
std::string format_sci3(double value);

std::string render_table_text(const ErrorTable& table);
std::string render_table_csv(const ErrorTable& table);

}  // namespace qvhedge
