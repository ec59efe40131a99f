#include "qvhedge/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "qvhedge/csv.hpp"
#include "qvhedge/rng.hpp"

namespace qvhedge {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void SimConfig::validate(const HestonParams& p) const {
  p.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt: must be positive");
  if (n_paths < 1) throw ConfigError("sim.n_paths: must be at least 1");
  if (rho_override && !(std::abs(*rho_override) <= 1.0)) {
    throw ConfigError("sim.rho_override: must lie in [-1, 1]");
  }
  const double ratio = p.t_final / dt;
  const double nearest = std::round(ratio);
  if (nearest < 1.0 ||
      std::abs(ratio - nearest) > 4.0 * std::numeric_limits<double>::epsilon() * nearest) {
    throw ConfigError("sim.dt: t_final / dt must be a whole number of steps");
  }
}

std::size_t SimConfig::steps(const HestonParams& p) const {
  return static_cast<std::size_t>(std::llround(p.t_final / dt));
}

unsigned SimConfig::resolved_workers() const {
  if (parallel_workers > 0) return parallel_workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

HestonParams effective_params(const HestonParams& p, const SimConfig& cfg) {
  return cfg.rho_override ? p.with_rho(*cfg.rho_override) : p;
}

void simulate_path_into(const HestonParams& p, const SimConfig& cfg, std::size_t path_id,
                        PathRecord& out) {
  const std::size_t steps = cfg.steps(p);
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double rho = p.rho;
  const double rho_bar = std::sqrt(1.0 - rho * rho);

  out.path_id = path_id;
  out.negative_y_clamps = 0;
  out.times.resize(steps + 1);
  out.x.resize(steps + 1);
  out.y.resize(steps + 1);
  out.qv.resize(steps + 1);

  out.times[0] = 0.0;
  out.x[0] = p.x0;
  out.y[0] = p.y0;
  out.qv[0] = 0.0;

  const PathStream stream(cfg.seed, path_id);
  for (std::size_t j = 0; j < steps; ++j) {
    const auto [z1, z2] = stream.normals(j);
    const double dw1 = sqrt_dt * z1;
    const double dw2 = sqrt_dt * z2;

    const double y = out.y[j];
    if (y < 0.0) ++out.negative_y_clamps;
    const double var = std::max(y, 0.0);
    const double vol = std::sqrt(var);

    out.x[j + 1] = out.x[j] - 0.5 * var * dt + vol * (rho_bar * dw1 + rho * dw2);
    out.y[j + 1] = y + p.kappa * (p.theta - y) * dt + p.delta * vol * dw2;
    const double dx = out.x[j + 1] - out.x[j];
    out.qv[j + 1] = out.qv[j] + dx * dx;
    out.times[j + 1] = static_cast<double>(j + 1) * dt;
  }
  out.times[steps] = p.t_final;
}

PathRecord simulate_path(const HestonParams& p, const SimConfig& cfg, std::size_t path_id) {
  cfg.validate(p);
  PathRecord path;
  simulate_path_into(p, cfg, path_id, path);
  return path;
}

void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(workers) * 8));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) break;
      try {
        body(begin, std::min(n, begin + chunk));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

void simulate_paths(const HestonParams& p, const SimConfig& cfg,
                    const std::function<void(const PathRecord&)>& visit) {
  const HestonParams params = effective_params(p, cfg);
  cfg.validate(params);
  parallel_chunks(cfg.n_paths, cfg.resolved_workers(), [&](std::size_t begin, std::size_t end) {
    PathRecord path;
    for (std::size_t i = begin; i < end; ++i) {
      simulate_path_into(params, cfg, i, path);
      visit(path);
    }
  });
}

HedgeEngine::HedgeEngine(const HestonParams& p, const PayoffSpec& payoff, double dt,
                         std::size_t steps)
    : payoff_(payoff), dt_(dt), steps_(steps) {
  p.validate();
  payoff_.validate();
  terms_.reserve(payoff_.terms.size());
  for (const auto& t : payoff_.terms) {
    const ExponentPair u = exponents(t.s);
    terms_.push_back(Term{
        t.a,
        t.s,
        kI * t.s,
        immunization_weights(t.s),
        Leg{u.u_plus, -kI * u.u_plus, LogpriceTable(p, u.u_plus, dt, steps)},
        Leg{u.u_minus, -kI * u.u_minus, LogpriceTable(p, u.u_minus, dt, steps)},
        QvTable(p, t.s, dt, steps),
    });
  }
}

template <class OnStep>
void HedgeEngine::run(const PathRecord& path, OnStep&& on_step) const {
  if (path.size() != steps_ + 1) {
    throw ConfigError("hedge engine: path has " + std::to_string(path.size()) +
                      " points, engine grid has " + std::to_string(steps_ + 1));
  }
  std::vector<TermState> states(terms_.size());

  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term& term = terms_[k];
    const Complex base = term.is * path.qv[0];
    states[k].price_plus =
        std::exp(base + term.plus.table.c(0) + path.y[0] * term.plus.table.d(0));
    states[k].price_minus =
        std::exp(base + term.minus.table.c(0) + path.y[0] * term.minus.table.d(0));
    states[k].pi_plus = states[k].price_plus;
    states[k].pi_minus = states[k].price_minus;
  }
  on_step(std::size_t{0}, states);

  for (std::size_t j = 0; j < steps_; ++j) {
    const double dx = path.x[j + 1] - path.x[j];
    const double growth = std::expm1(dx);  // S_{j+1} / S_j - 1
    const double qv_now = path.qv[j];
    const double qv_next = path.qv[j + 1];
    const double y_next = path.y[j + 1];

    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const Term& term = terms_[k];
      TermState& st = states[k];
      auto advance = [&](const Leg& leg, Complex& pi, Complex& price) {
        const Complex tail = leg.table.c(j + 1) + y_next * leg.table.d(j + 1);
        // N_j Q_{j+1}: exp(-iu x_j + is qv_j) exp(iu x_{j+1} + C + y D).
        const Complex carried = std::exp(-leg.minus_iu * dx + term.is * qv_now + tail);
        const Complex next_price = std::exp(term.is * qv_next + tail);
        pi += (carried - price) + leg.minus_iu * price * growth;
        price = next_price;
      };
      advance(term.plus, st.pi_plus, st.price_plus);
      advance(term.minus, st.pi_minus, st.price_minus);
    }
    on_step(j + 1, states);
  }
}

PortfolioTrack HedgeEngine::evolve(const PathRecord& path) const {
  PortfolioTrack track;
  const std::size_t n = steps_ + 1;
  track.pi_plus.resize(n);
  track.pi_minus.resize(n);
  track.pi_imm.resize(n);
  track.v_true.resize(n);

  run(path, [&](std::size_t j, const std::vector<TermState>& states) {
    Complex plus{}, minus{}, imm{}, v{};
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const Term& term = terms_[k];
      const TermState& st = states[k];
      plus += term.a * st.pi_plus;
      minus += term.a * st.pi_minus;
      imm += term.a * (term.weights.alpha_plus * st.pi_plus +
                       term.weights.alpha_minus * st.pi_minus);
      v += term.a * std::exp(term.is * path.qv[j] + term.qv.a(j) + path.y[j] * term.qv.b(j));
    }
    track.pi_plus[j] = plus;
    track.pi_minus[j] = minus;
    track.pi_imm[j] = imm;
    track.v_true[j] = v;
  });
  return track;
}

PathOutcome HedgeEngine::terminal(const PathRecord& path) const {
  PathOutcome outcome;
  outcome.negative_y_clamps = path.negative_y_clamps;
  Complex plus{}, minus{}, imm{};

  run(path, [&](std::size_t j, const std::vector<TermState>& states) {
    imm = Complex{};
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const Term& term = terms_[k];
      const TermState& st = states[k];
      imm += term.a * (term.weights.alpha_plus * st.pi_plus +
                       term.weights.alpha_minus * st.pi_minus);
    }
    outcome.max_imm_imag_ratio = std::max(outcome.max_imm_imag_ratio,
                                          std::abs(imm.imag()) / (1.0 + std::abs(imm.real())));
    if (j == steps_) {
      for (std::size_t k = 0; k < terms_.size(); ++k) {
        plus += terms_[k].a * states[k].pi_plus;
        minus += terms_[k].a * states[k].pi_minus;
      }
    }
  });

  const Complex target = eval_payoff(payoff_, path.qv[steps_]);
  outcome.errors = {plus - target, minus - target, imm - target};
  return outcome;
}

PortfolioTrack evolve_portfolios(const PathRecord& path, const HestonParams& p,
                                 const PayoffSpec& payoff, double dt) {
  if (path.size() < 2) throw ConfigError("evolve_portfolios: path needs at least two points");
  PortfolioTrack track = HedgeEngine(p, payoff, dt, path.size() - 1).evolve(path);
  const std::size_t last = path.size() - 1;
  if (!finite(track.pi_plus[last]) || !finite(track.pi_minus[last]) ||
      !finite(track.pi_imm[last]) || !finite(track.v_true[last])) {
    std::ostringstream os;
    os << "evolve_portfolios: non-finite portfolio value on path " << path.path_id
       << " for payoff '" << payoff.label << "' at rho=" << p.rho;
    throw NumericalError(os.str());
  }
  return track;
}

HedgeRun hedge_experiment(const HestonParams& p, const PayoffSpec& payoff,
                          const SimConfig& cfg) {
  const HestonParams params = effective_params(p, cfg);
  cfg.validate(params);
  const HedgeEngine engine(params, payoff, cfg.dt, cfg.steps(params));

  struct Result {
    PathOutcome outcome;
    double terminal_qv = 0.0;
  };
  const std::vector<Result> results = map_paths(params, cfg, [&](const PathRecord& path) {
    return Result{engine.terminal(path), path.qv.back()};
  });

  HedgeRun run;
  run.errors.reserve(results.size());
  std::size_t non_finite = 0;
  std::size_t first_bad = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const ErrorTriple& e = r.outcome.errors;
    if (!finite(e.plus) || !finite(e.minus) || !finite(e.immunized)) {
      if (non_finite++ == 0) first_bad = i;
    }
    run.errors.push_back(e);
    run.max_imm_imag_ratio = std::max(run.max_imm_imag_ratio, r.outcome.max_imm_imag_ratio);
    run.negative_y_clamps += r.outcome.negative_y_clamps;
    if (!(r.terminal_qv > 0.0)) ++run.paths_with_nonpositive_qv;
  }
  if (non_finite > 0) {
    std::ostringstream os;
    os << "hedge_experiment: " << non_finite << " of " << results.size()
       << " paths gave non-finite hedging errors (first: path " << first_bad
       << ") for payoff '" << payoff.label << "' at rho=" << params.rho;
    throw NumericalError(os.str());
  }
  return run;
}

void write_track_csv(std::ostream& out, const PathRecord& path, const PortfolioTrack& track,
                     std::size_t stride, bool with_header) {
  if (stride == 0) stride = 1;
  CsvWriter csv(out);
  if (with_header) {
    csv.row({"path_id", "t", "x", "y", "qv", "pi_plus_re", "pi_plus_im", "pi_minus_re",
             "pi_minus_im", "pi_imm_re", "pi_imm_im", "v_true_re", "v_true_im"});
  }
  const std::size_t last = path.size() - 1;
  for (std::size_t j = 0; j <= last; ++j) {
    if (j % stride != 0 && j != last) continue;
    csv.begin_row();
    csv.field(static_cast<std::uint64_t>(path.path_id));
    csv.field(path.times[j]);
    csv.field(path.x[j]);
    csv.field(path.y[j]);
    csv.field(path.qv[j]);
    csv.field(track.pi_plus[j]);
    csv.field(track.pi_minus[j]);
    csv.field(track.pi_imm[j]);
    csv.field(track.v_true[j]);
    csv.end_row();
  }
}

}  // namespace qvhedge
