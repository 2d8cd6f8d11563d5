#include <benchmark/benchmark.h>

#include "pfc3d/driver.hpp"
#include "pfc3d/energy.hpp"
#include "pfc3d/multigrid.hpp"

using namespace pfc3d;

namespace {

SchemeState make_state(int m) {
  const GridSpec g(m, 3.2);
  const CellField phi = init_smooth(g);
  return SchemeState(phi, phi, 1e-3, {0.025});
}

void BM_Laplacian(benchmark::State& st) {
  const CellField f = init_random(GridSpec(static_cast<int>(st.range(0)), 3.2), 1);
  for (auto _ : st) benchmark::DoNotOptimize(laplacian(f));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_Laplacian)->Arg(16)->Arg(32)->Arg(64);

void BM_Energy(benchmark::State& st) {
  const CellField f = init_random(GridSpec(static_cast<int>(st.range(0)), 3.2), 1);
  for (auto _ : st) benchmark::DoNotOptimize(discrete_energy(f, {0.025}));
}
BENCHMARK(BM_Energy)->Arg(32)->Arg(64);

void BM_SmootherSweep(benchmark::State& st) {
  const SchemeState s = make_state(static_cast<int>(st.range(0)));
  const MobilityFaces faces = mobility_faces(s);
  const StageVector src = assemble_source(s);
  StageVector u = default_initial_guess(s);
  const auto order = st.range(1) ? SmootherOrder::red_black : SmootherOrder::lexicographic;
  for (auto _ : st) smooth(u, s, faces, src, 1, order);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.spec().cells()));
}
BENCHMARK(BM_SmootherSweep)->Args({16, 0})->Args({32, 0})->Args({32, 1})->Args({64, 0});

void BM_VCycle(benchmark::State& st) {
  const SchemeState s = make_state(static_cast<int>(st.range(0)));
  const MGConfig cfg;
  const MGHierarchy h(s, cfg);
  const StageVector src = assemble_source(s);
  StageVector u = default_initial_guess(s);
  for (auto _ : st) vcycle(h, 0, u, src, cfg);
}
BENCHMARK(BM_VCycle)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
