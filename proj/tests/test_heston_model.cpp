#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qvhedge/heston_model.hpp"

using namespace qvhedge;

namespace {

constexpr Complex I{0.0, 1.0};

// Classical RK4 on the Riccati system behind each transform, integrated in tau from
// zero. Knows nothing about the closed forms.
//   D' = d^2/2 D^2 + (i u rho delta - kappa) D - (u^2 + i u)/2,   C' = kappa theta D
//   B' = d^2/2 B^2 - kappa B + i s,                               A' = kappa theta B
struct Riccati {
  Complex lin;  // coefficient of the linear term
  Complex src;  // constant term
};

std::pair<Complex, Complex> integrate(const HestonParams& p, Riccati r, double tau, int steps) {
  auto f = [&](Complex d) { return 0.5 * p.delta * p.delta * d * d + r.lin * d + r.src; };
  Complex c{}, d{};
  const double h = tau / steps;
  for (int k = 0; k < steps; ++k) {
    const Complex k1 = f(d);
    const Complex k2 = f(d + 0.5 * h * k1);
    const Complex k3 = f(d + 0.5 * h * k2);
    const Complex k4 = f(d + h * k3);
    // C picks up kappa theta * integral of D, Simpson-consistent with the stages.
    c += p.kappa * p.theta * h / 6.0 *
         (d + 2.0 * (d + 0.5 * h * k1) + 2.0 * (d + 0.5 * h * k2) + (d + h * k3));
    d += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {c, d};
}

LogpriceExponent rk4_logprice(const HestonParams& p, double tau, Complex u) {
  const auto [c, d] = integrate(p, {I * u * p.rho * p.delta - p.kappa, -0.5 * (u * u + I * u)},
                                tau, 4000);
  return {c, d};
}

QvExponent rk4_qv(const HestonParams& p, double tau, Complex s) {
  const auto [a, b] = integrate(p, {-p.kappa, I * s}, tau, 4000);
  return {a, b};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(LogpriceCf, TrivialPoints) {
  const HestonParams p = HestonParams{}.with_rho(-0.66);
  const MarketState s0 = MarketState::initial(p);
  EXPECT_EQ(logprice_cf(p, s0, Complex{}), Complex(1.0, 0.0));
  // Martingale: E exp(X_T) = exp(x0) = 1.
  EXPECT_NEAR(std::abs(logprice_cf(p, s0, -I) - 1.0), 0.0, 1e-14);
  const MarketState shifted{0.3, 0.25, 0.05, 0.01};
  EXPECT_NEAR(std::abs(logprice_cf(p, shifted, -I) - std::exp(0.25)), 0.0, 1e-13);
}

TEST(LogpriceCf, ZeroTauIsIdentity) {
  const HestonParams p = HestonParams{}.with_rho(0.5);
  const auto e = logprice_exponent(p, 0.0, Complex{1.3, -0.2});
  EXPECT_EQ(e.c, Complex{});
  EXPECT_EQ(e.d, Complex{});
}

TEST(LogpriceCf, MatchesRiccatiSolution) {
  for (double rho : {-0.99, -0.66, 0.0, 0.66, 0.99}) {
    const HestonParams p = HestonParams{}.with_rho(rho);
    for (Complex u : {Complex{0.5, 0}, Complex{2, 0}, Complex{-7, 0}, Complex{0, -1},
                      Complex{0, -2}, Complex{0, 1}, Complex{1, -0.5}, Complex{25, 0}}) {
      for (double tau : {0.1, 0.5, 1.0}) {
        const auto closed = logprice_exponent(p, tau, u);
        const auto ode = rk4_logprice(p, tau, u);
        EXPECT_LT(rel(closed.c, ode.c), 1e-9) << "rho=" << rho << " u=" << u << " tau=" << tau;
        EXPECT_LT(rel(closed.d, ode.d), 1e-9) << "rho=" << rho << " u=" << u << " tau=" << tau;
      }
    }
  }
}

TEST(LogpriceCf, AgreesWithGammaArrangementAwayFromItsSingularities) {
  // Direct transcription of the gamma = (b + d) / (b - d) arrangement.
  auto gamma_form = [](const HestonParams& p, double tau, Complex u) {
    const Complex b = p.kappa - I * p.rho * p.delta * u;
    const Complex d = std::sqrt(p.delta * p.delta * (u * u + I * u) + b * b);
    const Complex g = (b + d) / (b - d);
    const Complex e = std::exp(d * tau);
    const double k2 = p.delta * p.delta;
    const Complex c = p.kappa * p.theta / k2 * ((b + d) * tau - 2.0 * std::log((1.0 - g * e) / (1.0 - g)));
    const Complex dd = (b + d) / k2 * (1.0 - e) / (1.0 - g * e);
    return LogpriceExponent{c, dd};
  };
  const HestonParams p = HestonParams{}.with_rho(-0.5);
  for (Complex u : {Complex{0.7, 0}, Complex{3, 0}, Complex{0.2, -0.4}}) {
    const auto a = logprice_exponent(p, 0.8, u);
    const auto b = gamma_form(p, 0.8, u);
    EXPECT_LT(rel(a.c, b.c), 1e-11);
    EXPECT_LT(rel(a.d, b.d), 1e-11);
  }
}

TEST(LogpriceCf, ContinuousAndBoundedOnRealLine) {
  const HestonParams p = HestonParams{}.with_rho(-0.66);
  const MarketState s0 = MarketState::initial(p);
  Complex prev = logprice_cf(p, s0, Complex{-50.0, 0.0});
  for (double u = -50.0 + 0.01; u <= 50.0; u += 0.01) {
    const Complex cur = logprice_cf(p, s0, Complex{u, 0.0});
    ASSERT_LE(std::abs(cur), 1.0 + 1e-12) << "u=" << u;
    ASSERT_LT(std::abs(cur - prev), 0.02) << "jump near u=" << u;
    prev = cur;
  }
}

TEST(QvCf, TrivialAndIndependentOfRhoAndX) {
  const HestonParams p;
  const MarketState s0 = MarketState::initial(p);
  EXPECT_EQ(qv_cf(p, s0, Complex{}), Complex(1.0, 0.0));
  const Complex s{0.0, 3.0};
  const Complex ref = qv_cf(p, s0, s);
  for (double rho : {-0.99, -0.3, 0.7}) {
    const MarketState moved{0.0, 1.7, p.y0, 0.0};
    EXPECT_EQ(qv_cf(p.with_rho(rho), moved, s), ref);
  }
}

TEST(QvCf, MatchesRiccatiSolution) {
  const HestonParams p;
  for (Complex s : {Complex{1, 0}, Complex{-4, 0}, Complex{0, 1}, Complex{0, 10}, Complex{0, -1},
                    Complex{0, 200}, Complex{3, 2}}) {
    for (double tau : {0.05, 0.5, 1.0}) {
      const auto closed = qv_exponent(p, tau, s);
      const auto ode = rk4_qv(p, tau, s);
      EXPECT_LT(rel(closed.a, ode.a), 1e-9) << "s=" << s << " tau=" << tau;
      EXPECT_LT(rel(closed.b, ode.b), 1e-9) << "s=" << s << " tau=" << tau;
    }
  }
}

TEST(QvCf, AgreesWithGroupedExponentialArrangement) {
  // A, B with the (xi + kappa) e^{xi tau} grouping in the denominator.
  const HestonParams p;
  for (Complex s : {Complex{2, 0}, Complex{0, 5}, Complex{0, -1}}) {
    const double tau = 0.7;
    const Complex xi = std::sqrt(p.kappa * p.kappa - 2.0 * p.delta * p.delta * I * s);
    const Complex den = xi - p.kappa + (xi + p.kappa) * std::exp(tau * xi);
    const Complex b = 2.0 * I * s * (std::exp(tau * xi) - 1.0) / den;
    const Complex a = 2.0 * p.kappa * p.theta / (p.delta * p.delta) *
                      std::log(2.0 * xi * std::exp(0.5 * tau * (xi + p.kappa)) / den);
    const auto e = qv_exponent(p, tau, s);
    EXPECT_LT(rel(e.a, a), 1e-12);
    EXPECT_LT(rel(e.b, b), 1e-12);
  }
}

TEST(QvCf, FirstMomentIsCirMean) {
  // E <X>_T = theta T + (y0 - theta)(1 - e^{-kappa T}) / kappa.
  HestonParams p;
  p.y0 = 0.06;
  const double expected = p.theta + (p.y0 - p.theta) * (1.0 - std::exp(-p.kappa)) / p.kappa;
  const double h = 1e-5;
  const MarketState s0 = MarketState::initial(p);
  const Complex deriv = (qv_cf(p, s0, Complex{h, 0}) - qv_cf(p, s0, Complex{-h, 0})) / (2.0 * h);
  EXPECT_NEAR((deriv / I).real(), expected, 1e-8);
  EXPECT_NEAR((deriv / I).imag(), 0.0, 1e-8);
  const HestonParams q;
  EXPECT_NEAR((qv_cf(q, MarketState::initial(q), Complex{h, 0}) - 1.0).imag() / h, 0.04, 1e-6);
}

TEST(QvCf, ModulusAtMostOneForRealS) {
  const HestonParams p;
  const MarketState s0 = MarketState::initial(p);
  for (double s = -500.0; s <= 500.0; s += 0.5) {
    ASSERT_LE(std::abs(qv_cf(p, s0, Complex{s, 0})), 1.0 + 1e-12) << s;
  }
}

TEST(TrueValue, LinearInTerms) {
  const HestonParams p;
  const MarketState s0 = MarketState::initial(p);
  const PayoffSpec spec{"mix", {{Complex{2, 0}, Complex{0, 1}}, {Complex{-0.5, 0}, Complex{0, -1}}}};
  const Complex expected = 2.0 * qv_cf(p, s0, Complex{0, 1}) - 0.5 * qv_cf(p, s0, Complex{0, -1});
  EXPECT_LT(std::abs(true_value(p, spec, s0) - expected), 1e-15);
}

TEST(Tables, MatchPointwiseExponents) {
  const HestonParams p = HestonParams{}.with_rho(0.3);
  const Complex u{0.0, -2.0};
  const LogpriceTable t(p, u, 0.01, 100);
  const QvTable q(p, Complex{0, 4}, 0.01, 100);
  ASSERT_EQ(t.size(), 101u);
  for (std::size_t j : {0u, 1u, 37u, 100u}) {
    const double tau = (100.0 - j) * 0.01;
    EXPECT_EQ(t.c(j), logprice_exponent(p, tau, u).c);
    EXPECT_EQ(t.d(j), logprice_exponent(p, tau, u).d);
    EXPECT_EQ(q.a(j), qv_exponent(p, tau, Complex{0, 4}).a);
  }
}

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

double trapz(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) s += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  return s;
}

}  // namespace

TEST(QvDensity, NormalizedWithCirMeanAndMode) {
  const HestonParams p;
  const auto x = grid(0.0, 1.0, 2001);
  const auto f = qv_density(p, x);
  for (double v : f) ASSERT_GE(v, 0.0);
  EXPECT_NEAR(trapz(x, f), 1.0, 0.01);

  std::vector<double> xf(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) xf[k] = x[k] * f[k];
  EXPECT_NEAR(trapz(x, xf), 0.04, 0.001);

  const auto peak = std::max_element(f.begin(), f.end()) - f.begin();
  EXPECT_GE(x[peak], 0.03);
  EXPECT_LE(x[peak], 0.045);

  const auto narrow = grid(0.0, 0.2, 401);
  EXPECT_NEAR(trapz(narrow, qv_density(p, narrow)), 1.0, 0.01);
}

TEST(QvDensity, RejectsBadGrid) {
  const HestonParams p;
  const std::vector<double> unsorted{0.01, 0.03, 0.02};
  const std::vector<double> negative{-0.01, 0.02};
  EXPECT_THROW(qv_density(p, unsorted), ConfigError);
  EXPECT_THROW(qv_density(p, negative), ConfigError);
}

TEST(HestonParams, ValidationNamesField) {
  HestonParams p;
  p.kappa = -1.0;
  try {
    p.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa"), std::string::npos);
  }
  EXPECT_THROW(HestonParams{}.with_rho(1.2).validate(), ConfigError);
}
