#include <benchmark/benchmark.h>

#include <cmath>

#include "ratchet/analysis.hpp"
#include "ratchet/ips.hpp"
#include "ratchet/pde.hpp"

using namespace ratchet;

namespace {

InitialProfile fig1_profile(const ModelParams& p) {
  return InitialProfile::scaled_by_alpha({{Shape::indicator(-10, 10, 1)}}, 0.975,
                                         alpha_sequence(p, p.class_cap));
}

}  // namespace

static void BM_ReactionKernel(benchmark::State& st) {
  const ModelParams p = fig1_params();
  const ReactionKernel kernel(p, p.class_cap);
  std::vector<double> u(p.class_cap + 2, 0.01), out(u.size());
  for (auto _ : st) {
    kernel.apply(u, 0.34, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ReactionKernel);

static void BM_Laplacian(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<double> u(n), out(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(0.01 * static_cast<double>(i));
  for (auto _ : st) {
    laplacian_row(u, 0.25, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}
BENCHMARK(BM_Laplacian)->Arg(1601)->Arg(16001);

static void BM_Rk4Step(benchmark::State& st) {
  ModelParams p = fig1_params();
  p.class_cap = static_cast<std::size_t>(st.range(0));
  const auto grid = Grid1D::with_spacing(-50, 350, 0.25);
  const auto init = sample_profile(fig1_profile(p), grid, p.class_cap);
  SolverConfig cfg;
  cfg.dt = 0.01;
  for (auto _ : st) {
    auto sol = solve(p, init, cfg, 0.01);
    benchmark::DoNotOptimize(sol.u.back().data().data());
  }
}
BENCHMARK(BM_Rk4Step)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_IpsStep(benchmark::State& st) {
  ModelParams p = fig1_params();
  p.class_cap = 8;
  p.scaling = {st.range(0), 0.01};
  const LatticeWindow w{32, 8, 0};
  const auto init = init_from_profile(InitialProfile({{{Shape::constant(0.2)}}}), p, w);
  auto s = init;
  SimClock clock(1);
  for (auto _ : st) {
    if (s.total_rate() <= 0.0) s = init;
    benchmark::DoNotOptimize(step(s, clock));
  }
}
BENCHMARK(BM_IpsStep)->Arg(100)->Arg(1000);
BENCHMARK_MAIN();
