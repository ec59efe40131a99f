#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qvhedge/stats.hpp"

using namespace qvhedge;

TEST(SampleStats, KnownValues) {
  const std::vector<Complex> v{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  const auto s = sample_stats(v);
  EXPECT_DOUBLE_EQ(s.mean.real(), 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(5.0 / 3.0));

  const std::vector<Complex> c{{0, 1}, {0, -1}};
  const auto sc = sample_stats(c);
  EXPECT_EQ(sc.mean, Complex{});
  EXPECT_DOUBLE_EQ(sc.std, std::sqrt(2.0));

  const std::vector<Complex> single{{1, 0}};
  EXPECT_THROW(sample_stats(single), ConfigError);
}

TEST(SampleStats, PermutationInvariantBitForBit) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z(1e-3, 2e-4);
  std::vector<ErrorTriple> errors(5000);
  for (auto& e : errors) e = {{z(gen), z(gen)}, {z(gen), 0.0}, {z(gen), z(gen) * 1e-9}};
  const auto ref = summarize(errors, ErrorConvention::raw);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(errors.begin(), errors.end(), gen);
    const auto s = summarize(errors, ErrorConvention::raw);
    EXPECT_EQ(s.plus.mean, ref.plus.mean);
    EXPECT_EQ(s.plus.std, ref.plus.std);
    EXPECT_EQ(s.immunized.mean, ref.immunized.mean);
    EXPECT_EQ(s.immunized.std, ref.immunized.std);
  }
}

TEST(Summarize, RealPartConventionDropsImaginaryParts) {
  const std::vector<ErrorTriple> errors{{{1, 5}, {1, -5}, {0.5, 0}}, {{3, -5}, {3, 5}, {0.7, 0}}};
  const auto s = summarize(errors, ErrorConvention::real_part);
  EXPECT_EQ(s.plus.mean, Complex(2.0, 0.0));
  EXPECT_DOUBLE_EQ(s.plus.std, std::sqrt(2.0));
  EXPECT_EQ(s.n, 2u);
  const auto raw = summarize(errors, ErrorConvention::raw);
  EXPECT_GT(raw.plus.std, s.plus.std);
  EXPECT_EQ(default_convention(put_payoff_spec(0.04, 10, 5)), ErrorConvention::real_part);
  EXPECT_EQ(default_convention(exp_pos_payoff()), ErrorConvention::raw);
}

TEST(Histogram, MassAndSharedBins) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> sets(3);
  for (int k = 0; k < 4000; ++k) {
    sets[0].push_back(z(gen));
    sets[1].push_back(0.5 * z(gen) + 1.0);
    sets[2].push_back(0.1 * z(gen));
  }
  const auto range = pooled_range(sets);
  for (const auto& s : sets) {
    EXPECT_GE(*std::min_element(s.begin(), s.end()), range.lo);
    EXPECT_LE(*std::max_element(s.begin(), s.end()), range.hi);
  }
  std::vector<double> first_centers;
  for (const auto& s : sets) {
    const auto bins = histogram(s, 50, range);
    ASSERT_EQ(bins.size(), 50u);
    double mass = 0.0;
    for (const auto& b : bins) mass += b.probability;
    EXPECT_NEAR(mass, 1.0, 1e-12);
    std::vector<double> centers;
    for (const auto& b : bins) centers.push_back(b.center);
    if (first_centers.empty()) first_centers = centers;
    EXPECT_EQ(centers, first_centers);
  }
}

TEST(Histogram, EdgeCases) {
  const std::vector<double> same{2.0, 2.0, 2.0};
  const auto bins = histogram(same, 4);
  double mass = 0.0;
  for (const auto& b : bins) mass += b.probability;
  EXPECT_NEAR(mass, 1.0, 1e-15);
  const std::vector<double> empty;
  EXPECT_THROW(histogram(empty, 10), ConfigError);
  EXPECT_THROW(histogram(same, 0), ConfigError);
  // The maximum lands in the last bin, not past it.
  const std::vector<double> two{0.0, 1.0};
  const auto b2 = histogram(two, 2);
  EXPECT_DOUBLE_EQ(b2[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(b2[1].probability, 0.5);
}

TEST(TableFormatting, ThreeSignificantDigits) {
  EXPECT_EQ(format_sci3(3.1e-4), "3.10E-04");
  EXPECT_EQ(format_sci3(-5.234e-3), "-5.23E-03");
  EXPECT_EQ(format_sci3(0.0), "0.00E+00");

  ErrorTable table;
  table.label = "demo";
  table.rhos = {-0.5, 0.5};
  ErrorSummary s;
  s.plus = {{1e-3, 0}, 2e-4};
  s.minus = {{-1e-3, 0}, 3e-4};
  s.immunized = {{5e-5, 0}, 1e-5};
  s.convention = ErrorConvention::real_part;
  table.summaries = {s, s};
  const std::string csv = render_table_csv(table);
  EXPECT_NE(csv.find("statistic,rho=-0.5,rho=0.5\r\n"), std::string::npos);
  EXPECT_NE(csv.find("Re mean-,-1.00E-03,-1.00E-03\r\n"), std::string::npos);
  EXPECT_NE(csv.find("mean,5.00E-05,5.00E-05\r\n"), std::string::npos);
  EXPECT_NE(csv.find("Re std+,2.00E-04,2.00E-04\r\n"), std::string::npos);
  const std::string text = render_table_text(table);
  EXPECT_NE(text.find("demo"), std::string::npos);
  EXPECT_NE(text.find("1.00E-05"), std::string::npos);
}
