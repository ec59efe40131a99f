#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <type_traits>
#include <vector>

#include "qvhedge/replication.hpp"
#include "qvhedge/heston_model.hpp"
#include "qvhedge/payoffs.hpp"

namespace qvhedge {

struct SimConfig {
  double dt = 1.0 / 1000.0;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 20200513;
  std::optional<double> rho_override;
  unsigned parallel_workers = 0;  // 0: one per hardware thread

  /// Throws ConfigError. Requires t_final / dt to be an integer up to rounding.
  void validate(const HestonParams& p) const;

  [[nodiscard]] std::size_t steps(const HestonParams& p) const;
  [[nodiscard]] unsigned resolved_workers() const;
};

/// Model parameters with the config's rho override applied.
HestonParams effective_params(const HestonParams& p, const SimConfig& cfg);

/// One Euler trajectory on t_j = j dt, j = 0..steps.
struct PathRecord {
  std::size_t path_id = 0;
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> qv;
  std::size_t negative_y_clamps = 0;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] MarketState state(std::size_t j) const { return {times[j], x[j], y[j], qv[j]}; }
};

/// Simulates path `path_id` into `out`, reusing its storage. Negative variance is
/// floored at zero inside square roots and counted.
void simulate_path_into(const HestonParams& p, const SimConfig& cfg, std::size_t path_id,
                        PathRecord& out);

PathRecord simulate_path(const HestonParams& p, const SimConfig& cfg, std::size_t path_id);

/// Runs body(begin, end) over [0, n) split into contiguous chunks across `workers`
/// threads. Chunks never overlap; body must only write to per-index storage.
void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// Streams every path of the configuration through `visit`. Calls may come from
/// several threads at once; path contents never depend on the worker count.
void simulate_paths(const HestonParams& p, const SimConfig& cfg,
                    const std::function<void(const PathRecord&)>& visit);

/// Applies fn to every simulated path and returns the results in path order.
template <class Fn>
auto map_paths(const HestonParams& p, const SimConfig& cfg, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, const PathRecord&>> {
  using Result = std::invoke_result_t<Fn&, const PathRecord&>;
  cfg.validate(p);
  std::vector<Result> results(cfg.n_paths);
  parallel_chunks(cfg.n_paths, cfg.resolved_workers(), [&](std::size_t begin, std::size_t end) {
    PathRecord path;
    for (std::size_t i = begin; i < end; ++i) {
      simulate_path_into(p, cfg, i, path);
      results[i] = fn(path);
    }
  });
  return results;
}

struct PortfolioTrack {
  std::vector<Complex> pi_plus;
  std::vector<Complex> pi_minus;
  std::vector<Complex> pi_imm;
  std::vector<Complex> v_true;
};

/// Terminal hedging errors Pi_T - phi(<X>_T) for the three strategies.
struct ErrorTriple {
  Complex plus;
  Complex minus;
  Complex immunized;
};

struct PathOutcome {
  ErrorTriple errors;
  /// max_j |Im Pi_imm(t_j)| / (1 + |Re Pi_imm(t_j)|) along the path.
  double max_imm_imag_ratio = 0.0;
  std::size_t negative_y_clamps = 0;
};

/// Discrete self-financing evolution of the basic (Pi+, Pi-) and immunized (Pi)
/// portfolios for one payoff. Holds the per-term C/D tables for the time grid, so
/// one engine serves every path of an experiment; evolve() is const and thread-safe.
///
/// Per term k and sign, with P_j = N_j Q_j:
///   Pi_{j+1} = Pi_j + N_j (Q_{j+1} - Q_j) - iu P_j (S_{j+1} / S_j - 1)
/// N and Q are both read at the left end of the step. Tracks for the payoff combine
/// per-term unit tracks: Pi = sum_k a_k (alpha+_k Pi+_k + alpha-_k Pi-_k).
class HedgeEngine {
public:
  HedgeEngine(const HestonParams& p, const PayoffSpec& payoff, double dt, std::size_t steps);

  /// Full time series. v_true is the diagnostic closed-form value along the path.
  [[nodiscard]] PortfolioTrack evolve(const PathRecord& path) const;

  /// Terminal errors only; skips storing the series and v_true.
  [[nodiscard]] PathOutcome terminal(const PathRecord& path) const;

  [[nodiscard]] const PayoffSpec& payoff() const { return payoff_; }
  [[nodiscard]] std::size_t steps() const { return steps_; }

private:
  struct Leg {
    Complex u;
    Complex minus_iu;
    LogpriceTable table;
  };
  struct Term {
    Complex a;
    Complex s;
    Complex is;
    ImmunizationWeights weights;
    Leg plus;
    Leg minus;
    QvTable qv;
  };
  struct TermState {
    Complex pi_plus;
    Complex pi_minus;
    Complex price_plus;   // N_j Q_j for the plus leg
    Complex price_minus;
  };

  template <class OnStep>
  void run(const PathRecord& path, OnStep&& on_step) const;

  PayoffSpec payoff_;
  std::vector<Term> terms_;
  double dt_;
  std::size_t steps_;
};

/// Builds an engine for a single path; prefer HedgeEngine when running many.
PortfolioTrack evolve_portfolios(const PathRecord& path, const HestonParams& p,
                                 const PayoffSpec& payoff, double dt);

struct HedgeRun {
  std::vector<ErrorTriple> errors;  // path order
  double max_imm_imag_ratio = 0.0;
  std::size_t negative_y_clamps = 0;
  std::size_t paths_with_nonpositive_qv = 0;
};

/// One error triple per simulated path, against phi at the path's own terminal <X>_T.
HedgeRun hedge_experiment(const HestonParams& p, const PayoffSpec& payoff, const SimConfig& cfg);

/// CSV rows path_id,t,x,y,qv,pi_plus_re,pi_plus_im,pi_minus_re,pi_minus_im,
/// pi_imm_re,pi_imm_im,v_true_re,v_true_im every `stride` steps (and the last step).
void write_track_csv(std::ostream& out, const PathRecord& path, const PortfolioTrack& track,
                     std::size_t stride, bool with_header);

}  // namespace qvhedge
