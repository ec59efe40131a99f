#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qvhedge/types.hpp"

namespace qvhedge {

/// One exponential claim a * exp(i s <X>_T).
struct PayoffTerm {
  Complex a;
  Complex s;
};

/// phi(v) = sum_k a_k exp(i s_k v): a finite combination of exponential claims.
struct PayoffSpec {
  std::string label;
  std::vector<PayoffTerm> terms;

  /// At least one term, finite entries, and no term at the degenerate point s = i/8.
  void validate() const;

  /// True when every a_k is real and every s_k is purely imaginary, so phi is real.
  [[nodiscard]] bool is_real() const;

  /// True when additionally every exponential is nonincreasing in v (Im s_k >= 0).
  [[nodiscard]] bool is_real_decreasing() const;
};

/// The transform argument where the two exponents coincide.
inline constexpr Complex kDegenerateTransform{0.0, 0.125};

Complex eval_payoff(const PayoffSpec& spec, double qv);

/// Monomial coefficients b_0..b_n of the n-th Bernstein polynomial of hstar on [0, 1].
/// The alternating inner sums run in 50-digit arithmetic on exact binomial products;
/// only the final coefficient is rounded to double.
std::vector<double> bernstein_coefficients(const std::function<double(double)>& hstar, int n);

/// Evaluates sum_k b_k x^k by Horner's rule.
double bernstein_polynomial(const std::vector<double>& coefficients, double x);

/// Builds phi(v) = B_n(exp(-c v)) where B_n approximates h*(x) = h(-log(x) / c),
/// h*(0) = h_at_infinity. Terms are (b_k, i c k).
PayoffSpec bernstein_payoff_spec(const std::function<double(double)>& h, double h_at_infinity,
                                 double c, int n, std::string label);

/// Approximate put (K - v)^+.
PayoffSpec put_payoff_spec(double strike, double c, int n);

/// Approximate sqrt(min(v, v_cap)), the capped volatility swap floating leg.
PayoffSpec sqrt_payoff_spec(double c, int n, double v_cap);

PayoffSpec exp_pos_payoff();       // exp(<X>_T)
PayoffSpec exp_neg_payoff();       // exp(-<X>_T)
PayoffSpec constant_payoff(double value = 1.0);

struct PresetParams {
  double strike = 0.04;
  double c = 10.0;
  int n = 20;
  double v_cap = 1.0;
};

/// "exp_pos", "exp_neg", "put", "volswap", "constant". Throws ConfigError otherwise.
PayoffSpec payoff_preset(std::string_view name, const PresetParams& params = {});

bool is_payoff_preset(std::string_view name);

/// {"label": ..., "terms": [{"a_re":..,"a_im":..,"s_re":..,"s_im":..}, ...]}
std::string payoff_to_json(const PayoffSpec& spec);
PayoffSpec payoff_from_json(std::string_view document);

}  // namespace qvhedge
