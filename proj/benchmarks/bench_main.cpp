#include <benchmark/benchmark.h>

#include "qvhedge/replication.hpp"
#include "qvhedge/heston_model.hpp"
#include "qvhedge/mc_engine.hpp"
#include "qvhedge/payoffs.hpp"
#include "qvhedge/rng.hpp"

namespace {

using namespace qvhedge;

void BM_LogpriceExponent(benchmark::State& state) {
  const HestonParams p = HestonParams{}.with_rho(-0.66);
  const Complex u = exponents(Complex{0.0, 1.0}).u_plus;
  double tau = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(logprice_exponent(p, tau, u));
    tau = tau < 0.9 ? tau + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_LogpriceExponent);

void BM_QvExponent(benchmark::State& state) {
  const HestonParams p;
  double tau = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qv_exponent(p, tau, Complex{0.0, 3.0}));
    tau = tau < 0.9 ? tau + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_QvExponent);

void BM_PhiloxNormals(benchmark::State& state) {
  PathStream stream(20200513, 7);
  std::uint64_t step = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stream.normals(step++));
}
BENCHMARK(BM_PhiloxNormals);

void BM_SimulatePath(benchmark::State& state) {
  const HestonParams p = HestonParams{}.with_rho(0.66);
  SimConfig cfg;
  cfg.dt = 1.0 / static_cast<double>(state.range(0));
  PathRecord path;
  std::size_t id = 0;
  for (auto _ : state) {
    simulate_path_into(p, cfg, id++, path);
    benchmark::DoNotOptimize(path.qv.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePath)->Arg(250)->Arg(1000);

void BM_HedgePath(benchmark::State& state, PayoffSpec payoff) {
  const HestonParams p = HestonParams{}.with_rho(-0.66);
  SimConfig cfg;
  const HedgeEngine engine(p, payoff, cfg.dt, cfg.steps(p));
  PathRecord path;
  std::size_t id = 0;
  for (auto _ : state) {
    simulate_path_into(p, cfg, id++, path);
    benchmark::DoNotOptimize(engine.terminal(path));
  }
  state.SetLabel(std::to_string(payoff.terms.size()) + " terms");
}
BENCHMARK_CAPTURE(BM_HedgePath, exp_pos, exp_pos_payoff())->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_HedgePath, put, put_payoff_spec(0.04, 10.0, 20))
    ->Unit(benchmark::kMillisecond);

void BM_BernsteinCoefficients(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(put_payoff_spec(0.04, 10.0, n));
  }
}
BENCHMARK(BM_BernsteinCoefficients)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
