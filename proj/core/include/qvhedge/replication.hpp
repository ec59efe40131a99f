#pragma once

#include "qvhedge/heston_model.hpp"
#include "qvhedge/payoffs.hpp"
#include "qvhedge/types.hpp"

namespace qvhedge {

enum class Sign { plus, minus };

const char* to_string(Sign sign);

/// u+(s), u-(s) = i(-1/2 +- sqrt(1/4 + 2is)), principal branch.
struct ExponentPair {
  Complex u_plus;
  Complex u_minus;
  Complex s;

  [[nodiscard]] Complex u(Sign sign) const { return sign == Sign::plus ? u_plus : u_minus; }
};

/// alpha+ + alpha- = 1 and alpha+ u+ + alpha- u- = 0.
struct ImmunizationWeights {
  Complex alpha_plus;
  Complex alpha_minus;

  [[nodiscard]] Complex alpha(Sign sign) const {
    return sign == Sign::plus ? alpha_plus : alpha_minus;
  }
};

/// Holdings of the basic replicating strategy for one exponential claim at time t.
struct HedgeState {
  Complex n_value;      // N_t = exp(-iu x + is qv)
  Complex q_value;      // Q_t = E_t exp(iu X_T)
  Complex share_count;  // units of S held
  Sign sign;
};

ExponentPair exponents(Complex s);

/// Throws DegenerateTransformError at s = i/8.
ImmunizationWeights immunization_weights(Complex s);

Complex multiplier_n(const MarketState& state, Complex s, Sign sign);

/// Q_t: the European leg, marked to the Heston closed form with the model's rho.
Complex european_leg(const HestonParams& p, const MarketState& state, Complex s, Sign sign);

/// Pi_t(s) = N_t Q_t. Equals qv_cf(s) exactly when rho = 0.
/// Evaluated as a single exponential so large |x Im u| does not overflow N or Q alone.
Complex exp_claim_price(const HestonParams& p, const MarketState& state, Complex s, Sign sign);

/// -iu N Q / S: shares held by the self-financing strategy.
Complex share_holding(Complex s, Sign sign, Complex n_value, Complex q_value, double spot);

HedgeState hedge_state(const HestonParams& p, const MarketState& state, Complex s, Sign sign);

/// sum_k a_k Pi_t(s_k) for one sign.
Complex basic_value(const HestonParams& p, const MarketState& state, const PayoffSpec& payoff,
                    Sign sign);

/// sum_k a_k (alpha+(s_k) Pi+_t(s_k) + alpha-(s_k) Pi-_t(s_k)).
Complex immunized_value(const HestonParams& p, const MarketState& state, const PayoffSpec& payoff);

/// Initial value of the correlation-immunized portfolio.
inline Complex immunized_initial_value(const HestonParams& p, const PayoffSpec& payoff) {
  return immunized_value(p, MarketState::initial(p), payoff);
}

struct PriceComparison {
  Complex pi_plus;
  Complex pi_minus;
  Complex pi_immunized;
  Complex v_true;
};

/// All four values side by side at the given state.
PriceComparison compare_prices(const HestonParams& p, const MarketState& state,
                               const PayoffSpec& payoff);

}  // namespace qvhedge
