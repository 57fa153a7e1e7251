// Serial kernels against the OpenMP engines on the same inputs.
//
//   bench_kernels --benchmark_filter=Engine

#include <benchmark/benchmark.h>
#include <omp.h>

#include "vscreen/docking.hpp"
#include "vscreen/engines.hpp"
#include "vscreen/io.hpp"

namespace vscreen {
namespace {

struct Inputs {
  Pocket pocket = synthetic_pocket(42);
  InteractionTable table = InteractionTable::standard();
};

const Inputs& inputs() {
  static const Inputs in;
  return in;
}

Pose placed(const Ligand& l) { return generate_starting_pose(l, inputs().pocket, 0, 42); }

void BM_GridScore(benchmark::State& state) {
  const Ligand l = generate_ligand({static_cast<int>(state.range(0)), 1}, 1, 0, "g");
  const Pose p = placed(l);
  for (auto _ : state) benchmark::DoNotOptimize(grid_score(p.coordinates, inputs().pocket));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l.atom_count()));
}
BENCHMARK(BM_GridScore)->Arg(20)->Arg(50);

void BM_AlignSweep(benchmark::State& state) {
  const Ligand l = generate_ligand({static_cast<int>(state.range(0)), 1}, 1, 0, "a");
  const Pose p = placed(l);
  const DockConfig cfg;
  for (auto _ : state) {
    Counters k;
    benchmark::DoNotOptimize(align(p, inputs().pocket, cfg, k));
  }
  state.SetItemsProcessed(state.iterations() * 900);
}
BENCHMARK(BM_AlignSweep)->Arg(20)->Arg(50);

void BM_BumpCheck(benchmark::State& state) {
  const Ligand l = generate_ligand({50, 16}, 3, 0, "b");
  const Pose p = placed(l);
  const bool early = state.range(0) != 0;
  for (auto _ : state) {
    Counters k;
    for (const auto& f : l.fragments) {
      benchmark::DoNotOptimize(bump_check(p.coordinates, f, 0.8, early, k));
    }
  }
}
BENCHMARK(BM_BumpCheck)->Arg(0)->Arg(1);

void BM_Rescore(benchmark::State& state) {
  const Ligand l = generate_ligand({static_cast<int>(state.range(0)), 1}, 1, 0, "r");
  const Pose p = placed(l);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rescore(p.coordinates, l, inputs().pocket, inputs().table, 8.0));
  }
}
BENCHMARK(BM_Rescore)->Arg(20)->Arg(50);

// Whole screening runs: range(0) = engine, range(1) = workers.
void BM_Engine(benchmark::State& state) {
  static const auto ligands = generate_mixture(
      std::vector<LigandShape>{{20, 1}, {20, 8}, {30, 4}, {40, 8}, {50, 12}}, 64, 7);
  const auto kind = static_cast<EngineKind>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  DockConfig cfg;
  cfg.restarts_n = 4;
  cfg.rescore_top_k = 2;
  const ScreeningJob job{ligands, inputs().pocket, inputs().table, cfg, 42};
  for (auto _ : state) benchmark::DoNotOptimize(run_engine(kind, workers, {}, job));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ligands.size()));
  state.SetLabel(std::string(engine_name(kind)) + "/" + std::to_string(workers));
}

void engine_args(benchmark::internal::Benchmark* b) {
  const int procs = omp_get_num_procs();
  b->Args({static_cast<int>(EngineKind::kSequential), 1});
  for (int kind : {static_cast<int>(EngineKind::kLatency), static_cast<int>(EngineKind::kBatched)}) {
    b->Args({kind, 1});
    if (procs > 1) b->Args({kind, procs});
  }
}
BENCHMARK(BM_Engine)->Apply(engine_args)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace vscreen

BENCHMARK_MAIN();
