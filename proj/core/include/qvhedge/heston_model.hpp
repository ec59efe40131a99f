#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qvhedge/payoffs.hpp"
#include "qvhedge/types.hpp"

namespace qvhedge {

// Risk-neutral Heston dynamics for the log-price X with zero rates:
//   dX = -Y/2 dt + sqrt(Y) (rho_bar dW1 + rho dW2)
//   dY = kappa (theta - Y) dt + delta sqrt(Y) dW2
struct HestonParams {
  double x0 = 0.0;
  double y0 = 0.04;
  double kappa = 1.15;
  double theta = 0.04;
  double delta = 0.2;
  double rho = 0.0;
  double t_final = 1.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  [[nodiscard]] HestonParams with_rho(double r) const {
    HestonParams p = *this;
    p.rho = r;
    return p;
  }
};

struct MarketState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double qv = 0.0;

  static MarketState initial(const HestonParams& p) { return {0.0, p.x0, p.y0, 0.0}; }
};

/// Exponent pieces of E_t exp(iu X_T) = exp(iu x + c + y d), functions of (tau, u) only.
struct LogpriceExponent {
  Complex c;
  Complex d;
};

/// Exponent pieces of E_t exp(is <X>_T) = exp(is qv + a + y b), functions of (tau, s) only.
struct QvExponent {
  Complex a;
  Complex b;
};

/// C(tau, u) and D(tau, u).
///
/// Evaluated in the e^{-d tau} arrangement with g = (b - d) / (b + d), which is
/// algebraically the same closed form as the gamma = 1/g arrangement but stays
/// finite at u = 0 and u = -i, where gamma has a zero denominator, and does not
/// overflow for large Re d. Principal branches throughout.
LogpriceExponent logprice_exponent(const HestonParams& p, double tau, Complex u);

/// A(tau, s) and B(tau, s) for the integrated CIR variance.
QvExponent qv_exponent(const HestonParams& p, double tau, Complex s);

/// E_t exp(iu X_T) given the state at t.
Complex logprice_cf(const HestonParams& p, const MarketState& state, Complex u);

/// E_t exp(is <X>_T) given the state at t. Independent of rho and x.
Complex qv_cf(const HestonParams& p, const MarketState& state, Complex s);

/// V_t = E_t phi(<X>_T) for phi = sum_k a_k exp(is_k <X>_T).
Complex true_value(const HestonParams& p, const PayoffSpec& payoff, const MarketState& state);

struct DensityOptions {
  double step = 0.25;              // frequency step of the trapezoid rule
  double tail_ratio = 1e-8;        // stop once |cf| falls below this fraction of its peak
  double max_frequency = 1e7;      // give up past this frequency
};

/// Density of <X>_T at t = 0 on the given grid, by Fourier inversion of qv_cf.
/// grid must be nonnegative and strictly increasing. Tiny negative ripples from
/// the quadrature are clamped to zero.
std::vector<double> qv_density(const HestonParams& p, std::span<const double> grid,
                               const DensityOptions& options = {});

/// C/D values on a time grid t_j = j * dt, j = 0..steps, for one fixed u.
/// Immutable after construction.
class LogpriceTable {
public:
  LogpriceTable(const HestonParams& p, Complex u, double dt, std::size_t steps);

  [[nodiscard]] Complex u() const { return u_; }
  [[nodiscard]] std::size_t size() const { return c_.size(); }
  [[nodiscard]] Complex c(std::size_t j) const { return c_[j]; }
  [[nodiscard]] Complex d(std::size_t j) const { return d_[j]; }

private:
  Complex u_;
  std::vector<Complex> c_;
  std::vector<Complex> d_;
};

/// A/B values on the same kind of grid for one fixed s.
class QvTable {
public:
  QvTable(const HestonParams& p, Complex s, double dt, std::size_t steps);

  [[nodiscard]] Complex s() const { return s_; }
  [[nodiscard]] Complex a(std::size_t j) const { return a_[j]; }
  [[nodiscard]] Complex b(std::size_t j) const { return b_[j]; }

private:
  Complex s_;
  std::vector<Complex> a_;
  std::vector<Complex> b_;
};

}  // namespace qvhedge
