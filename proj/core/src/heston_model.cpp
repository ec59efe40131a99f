#include "qvhedge/heston_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qvhedge {

std::string to_string(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

[[noreturn]] void overflow(const char* what, const char* arg_name, Complex arg, double tau) {
  std::ostringstream os;
  os << what << ": non-finite value at " << arg_name << "=" << to_string(arg) << ", tau=" << tau;
  throw NumericalError(os.str());
}

void require_state(const HestonParams& p, const MarketState& state) {
  if (!(state.t <= p.t_final) || state.t < 0.0) {
    throw ConfigError("market state time " + std::to_string(state.t) + " outside [0, t_final]");
  }
}

}  // namespace

void HestonParams::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(std::isfinite(x0), "x0: must be finite");
  require(y0 > 0.0 && std::isfinite(y0), "y0: must be positive");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa: must be positive");
  require(theta > 0.0 && std::isfinite(theta), "theta: must be positive");
  require(delta > 0.0 && std::isfinite(delta), "delta: must be positive");
  require(std::abs(rho) <= 1.0, "rho: must lie in [-1, 1]");
  require(t_final > 0.0 && std::isfinite(t_final), "t_final: must be positive");
}

LogpriceExponent logprice_exponent(const HestonParams& p, double tau, Complex u) {
  if (tau == 0.0) return {};
  const double d2 = p.delta * p.delta;
  const Complex b = p.kappa - kI * p.rho * p.delta * u;
  const Complex d = std::sqrt(d2 * (u * u + kI * u) + b * b);
  const Complex g = (b - d) / (b + d);
  const Complex e = std::exp(-d * tau);
  const Complex one_minus_ge = 1.0 - g * e;

  LogpriceExponent out;
  out.c = p.kappa * p.theta / d2 * ((b - d) * tau - 2.0 * std::log(one_minus_ge / (1.0 - g)));
  out.d = (b - d) / d2 * (1.0 - e) / one_minus_ge;
  if (!finite(out.c) || !finite(out.d)) overflow("logprice_cf", "u", u, tau);
  return out;
}

QvExponent qv_exponent(const HestonParams& p, double tau, Complex s) {
  if (tau == 0.0) return {};
  const double d2 = p.delta * p.delta;
  const Complex is = kI * s;
  const Complex xi = std::sqrt(p.kappa * p.kappa - 2.0 * d2 * is);
  const Complex e = std::exp(-xi * tau);
  // (xi + kappa) e^{xi tau} + xi - kappa, divided through by e^{xi tau}.
  const Complex den = (xi + p.kappa) + (xi - p.kappa) * e;

  QvExponent out;
  out.a = 2.0 * p.kappa * p.theta / d2 * (std::log(2.0 * xi / den) + 0.5 * (p.kappa - xi) * tau);
  out.b = 2.0 * is * (1.0 - e) / den;
  if (!finite(out.a) || !finite(out.b)) overflow("qv_cf", "s", s, tau);
  return out;
}

Complex logprice_cf(const HestonParams& p, const MarketState& state, Complex u) {
  require_state(p, state);
  const double tau = p.t_final - state.t;
  const auto [c, d] = logprice_exponent(p, tau, u);
  const Complex value = std::exp(kI * u * state.x + c + state.y * d);
  if (!finite(value)) overflow("logprice_cf", "u", u, tau);
  return value;
}

Complex qv_cf(const HestonParams& p, const MarketState& state, Complex s) {
  require_state(p, state);
  const double tau = p.t_final - state.t;
  const auto [a, b] = qv_exponent(p, tau, s);
  const Complex value = std::exp(kI * s * state.qv + a + state.y * b);
  if (!finite(value)) overflow("qv_cf", "s", s, tau);
  return value;
}

Complex true_value(const HestonParams& p, const PayoffSpec& payoff, const MarketState& state) {
  if (payoff.terms.empty()) throw ConfigError("payoff: needs at least one term");
  Complex sum{};
  for (const auto& term : payoff.terms) sum += term.a * qv_cf(p, state, term.s);
  return sum;
}

std::vector<double> qv_density(const HestonParams& p, std::span<const double> grid,
                               const DensityOptions& options) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ConfigError("qv_density: grid must be nonnegative and strictly increasing");
    }
  }
  const MarketState start = MarketState::initial(p);

  // cf samples at s_m = m h until the tail stays below tail_ratio * peak.
  constexpr std::size_t kQuietRun = 16;
  std::vector<Complex> cf{Complex{1.0, 0.0}};
  double peak = 1.0;
  std::size_t quiet = 0;
  while (quiet < kQuietRun) {
    const double freq = options.step * static_cast<double>(cf.size());
    if (freq > options.max_frequency) {
      std::ostringstream os;
      os << "qv_density: characteristic function tail did not decay below "
         << options.tail_ratio << " of peak by frequency " << options.max_frequency
         << " (last |cf|=" << std::abs(cf.back()) << ", peak=" << peak << ")";
      throw NumericalError(os.str());
    }
    const Complex value = qv_cf(p, start, Complex{freq, 0.0});
    peak = std::max(peak, std::abs(value));
    quiet = std::abs(value) < options.tail_ratio * peak ? quiet + 1 : 0;
    cf.push_back(value);
  }

  // f(v) = (1/pi) int_0^inf Re[e^{-isv} cf(s)] ds, trapezoid rule.
  std::vector<double> density(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid[i];
    double sum = 0.5 * cf[0].real();
    for (std::size_t m = 1; m < cf.size(); ++m) {
      const double phase = -options.step * static_cast<double>(m) * v;
      sum += cf[m].real() * std::cos(phase) - cf[m].imag() * std::sin(phase);
    }
    density[i] = std::max(0.0, sum * options.step / std::numbers::pi);
  }
  return density;
}

LogpriceTable::LogpriceTable(const HestonParams& p, Complex u, double dt, std::size_t steps)
    : u_(u), c_(steps + 1), d_(steps + 1) {
  for (std::size_t j = 0; j <= steps; ++j) {
    const auto [c, d] = logprice_exponent(p, static_cast<double>(steps - j) * dt, u);
    c_[j] = c;
    d_[j] = d;
  }
}

QvTable::QvTable(const HestonParams& p, Complex s, double dt, std::size_t steps)
    : s_(s), a_(steps + 1), b_(steps + 1) {
  for (std::size_t j = 0; j <= steps; ++j) {
    const auto [a, b] = qv_exponent(p, static_cast<double>(steps - j) * dt, s);
    a_[j] = a;
    b_[j] = b;
  }
}

}  // namespace qvhedge
