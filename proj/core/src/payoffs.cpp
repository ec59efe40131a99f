#include "qvhedge/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace qvhedge {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void PayoffSpec::validate() const {
  if (terms.empty()) throw ConfigError("payoff.terms: needs at least one term");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    const std::string where = "payoff.terms[" + std::to_string(k) + "]";
    if (!finite(t.a) || !finite(t.s)) throw ConfigError(where + ": non-finite entry");
    if (t.s == kDegenerateTransform) {
      throw ConfigError(where + ": s = i/8 is the degenerate transform point");
    }
  }
}

bool PayoffSpec::is_real() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const PayoffTerm& t) { return t.a.imag() == 0.0 && t.s.real() == 0.0; });
}

bool PayoffSpec::is_real_decreasing() const {
  return is_real() && std::all_of(terms.begin(), terms.end(),
                                  [](const PayoffTerm& t) { return t.s.imag() >= 0.0; });
}

Complex eval_payoff(const PayoffSpec& spec, double qv) {
  Complex sum{};
  for (const auto& t : spec.terms) sum += t.a * std::exp(kI * t.s * qv);
  return sum;
}

std::vector<double> bernstein_coefficients(const std::function<double(double)>& hstar, int n) {
  using boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::cpp_int;
  if (n < 1) throw ConfigError("bernstein: n must be at least 1");

  std::vector<double> samples(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double x = static_cast<double>(j) / n;
    samples[j] = hstar(x);
    if (!std::isfinite(samples[j])) {
      std::ostringstream os;
      os << "bernstein: h* is not finite at x=" << x << " (j=" << j << ")";
      throw ConfigError(os.str());
    }
  }

  // binom[k][j] = C(k, j), exact.
  std::vector<std::vector<cpp_int>> binom(n + 1);
  for (int k = 0; k <= n; ++k) {
    binom[k].assign(k + 1, cpp_int(1));
    for (int j = 1; j < k; ++j) binom[k][j] = binom[k - 1][j - 1] + binom[k - 1][j];
  }

  std::vector<double> coefficients(n + 1);
  for (int k = 0; k <= n; ++k) {
    cpp_bin_float_50 sum = 0;
    for (int j = 0; j <= k; ++j) {
      const cpp_int weight = binom[n][k] * binom[k][j];
      const cpp_bin_float_50 term = cpp_bin_float_50(weight) * samples[j];
      if ((k - j) % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    coefficients[k] = static_cast<double>(sum);
  }
  return coefficients;
}

double bernstein_polynomial(const std::vector<double>& coefficients, double x) {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PayoffSpec bernstein_payoff_spec(const std::function<double(double)>& h, double h_at_infinity,
                                 double c, int n, std::string label) {
  if (!(c > 0.0)) throw ConfigError("bernstein: c must be positive");
  auto hstar = [&](double x) { return x == 0.0 ? h_at_infinity : h(-std::log(x) / c); };
  const std::vector<double> b = bernstein_coefficients(hstar, n);

  PayoffSpec spec;
  spec.label = std::move(label);
  spec.terms.reserve(b.size());
  for (int k = 0; k <= n; ++k) spec.terms.push_back({Complex{b[k], 0.0}, Complex{0.0, c * k}});
  return spec;
}

PayoffSpec put_payoff_spec(double strike, double c, int n) {
  if (!(strike > 0.0)) throw ConfigError("put: strike must be positive");
  return bernstein_payoff_spec([strike](double v) { return std::max(strike - v, 0.0); }, 0.0, c,
                               n, "put");
}

PayoffSpec sqrt_payoff_spec(double c, int n, double v_cap) {
  if (!(v_cap > 0.0)) throw ConfigError("volswap: v_cap must be positive");
  return bernstein_payoff_spec([v_cap](double v) { return std::sqrt(std::min(v, v_cap)); },
                               std::sqrt(v_cap), c, n, "volswap");
}

PayoffSpec exp_pos_payoff() { return {"exp_pos", {{Complex{1.0, 0.0}, Complex{0.0, -1.0}}}}; }

PayoffSpec exp_neg_payoff() { return {"exp_neg", {{Complex{1.0, 0.0}, Complex{0.0, 1.0}}}}; }

PayoffSpec constant_payoff(double value) {
  return {"constant", {{Complex{value, 0.0}, Complex{}}}};
}

bool is_payoff_preset(std::string_view name) {
  return name == "exp_pos" || name == "exp_neg" || name == "put" || name == "volswap" ||
         name == "constant";
}

PayoffSpec payoff_preset(std::string_view name, const PresetParams& params) {
  if (name == "exp_pos") return exp_pos_payoff();
  if (name == "exp_neg") return exp_neg_payoff();
  if (name == "put") return put_payoff_spec(params.strike, params.c, params.n);
  if (name == "volswap") return sqrt_payoff_spec(params.c, params.n, params.v_cap);
  if (name == "constant") return constant_payoff();
  throw ConfigError("payoff: unknown preset '" + std::string(name) + "'");
}

std::string payoff_to_json(const PayoffSpec& spec) {
  nlohmann::json doc;
  doc["label"] = spec.label;
  doc["terms"] = nlohmann::json::array();
  for (const auto& t : spec.terms) {
    doc["terms"].push_back({{"a_re", t.a.real()},
                            {"a_im", t.a.imag()},
                            {"s_re", t.s.real()},
                            {"s_im", t.s.imag()}});
  }
  return doc.dump(2);
}

PayoffSpec payoff_from_json(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("payoff: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("payoff: expected an object");
  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    throw ConfigError("payoff.terms: missing or not an array");
  }

  PayoffSpec spec;
  spec.label = doc.value("label", std::string("custom"));
  const auto& terms = doc["terms"];
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    auto field = [&](const char* name) {
      if (!t.contains(name)) return 0.0;
      if (!t[name].is_number()) {
        throw ConfigError("payoff.terms[" + std::to_string(k) + "]." + name + ": not a number");
      }
      return t[name].get<double>();
    };
    spec.terms.push_back({Complex{field("a_re"), field("a_im")},
                          Complex{field("s_re"), field("s_im")}});
  }
  spec.validate();
  return spec;
}

}  // namespace qvhedge
