#include "qvhedge/replication.hpp"

#include <cmath>

namespace qvhedge {

const char* to_string(Sign sign) { return sign == Sign::plus ? "plus" : "minus"; }

ExponentPair exponents(Complex s) {
  const Complex root = std::sqrt(0.25 + 2.0 * kI * s);
  return {kI * (-0.5 + root), kI * (-0.5 - root), s};
}

ImmunizationWeights immunization_weights(Complex s) {
  const ExponentPair u = exponents(s);
  const Complex gap = u.u_plus - u.u_minus;
  if (gap == Complex{}) {
    throw DegenerateTransformError("immunization weights undefined at s=" + to_string(s) +
                                   " (u+ == u-)");
  }
  const Complex alpha_plus = -u.u_minus / gap;
  return {alpha_plus, 1.0 - alpha_plus};
}

Complex multiplier_n(const MarketState& state, Complex s, Sign sign) {
  const Complex u = exponents(s).u(sign);
  const Complex value = std::exp(-kI * u * state.x + kI * s * state.qv);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw NumericalError("multiplier_n: overflow at s=" + to_string(s) +
                         ", x=" + std::to_string(state.x));
  }
  return value;
}

Complex european_leg(const HestonParams& p, const MarketState& state, Complex s, Sign sign) {
  return logprice_cf(p, state, exponents(s).u(sign));
}

Complex exp_claim_price(const HestonParams& p, const MarketState& state, Complex s, Sign sign) {
  // N Q = exp(-iu x + is qv) exp(iu x + C + y D); the x terms cancel.
  const Complex u = exponents(s).u(sign);
  const auto [c, d] = logprice_exponent(p, p.t_final - state.t, u);
  const Complex value = std::exp(kI * s * state.qv + c + state.y * d);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw NumericalError("exp_claim_price: overflow at s=" + to_string(s));
  }
  return value;
}

Complex share_holding(Complex s, Sign sign, Complex n_value, Complex q_value, double spot) {
  if (!(spot > 0.0)) throw ConfigError("share_holding: spot must be positive");
  const Complex u = exponents(s).u(sign);
  return -kI * u * n_value * q_value / spot;
}

HedgeState hedge_state(const HestonParams& p, const MarketState& state, Complex s, Sign sign) {
  HedgeState h;
  h.sign = sign;
  h.n_value = multiplier_n(state, s, sign);
  h.q_value = european_leg(p, state, s, sign);
  h.share_count = share_holding(s, sign, h.n_value, h.q_value, std::exp(state.x));
  return h;
}

Complex basic_value(const HestonParams& p, const MarketState& state, const PayoffSpec& payoff,
                    Sign sign) {
  Complex sum{};
  for (const auto& term : payoff.terms) sum += term.a * exp_claim_price(p, state, term.s, sign);
  return sum;
}

Complex immunized_value(const HestonParams& p, const MarketState& state,
                        const PayoffSpec& payoff) {
  Complex sum{};
  for (const auto& term : payoff.terms) {
    const ImmunizationWeights w = immunization_weights(term.s);
    sum += term.a * (w.alpha_plus * exp_claim_price(p, state, term.s, Sign::plus) +
                     w.alpha_minus * exp_claim_price(p, state, term.s, Sign::minus));
  }
  return sum;
}

PriceComparison compare_prices(const HestonParams& p, const MarketState& state,
                               const PayoffSpec& payoff) {
  return {basic_value(p, state, payoff, Sign::plus), basic_value(p, state, payoff, Sign::minus),
          immunized_value(p, state, payoff), true_value(p, payoff, state)};
}

}  // namespace qvhedge
