#include <benchmark/benchmark.h>

#include "credence/engine.hpp"
#include "credence/fit.hpp"
#include "credence/io.hpp"
#include "credence/sensitivity.hpp"

namespace {

using namespace credence;

void BM_CanonicalRun(benchmark::State& state) {
  const AssessmentMatrix m = canonical_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(m));
  }
}
BENCHMARK(BM_CanonicalRun);

void BM_BatchPosterior(benchmark::State& state) {
  const AssessmentMatrix m = canonical_dataset();
  for (auto _ : state) {
    for (const Sort& sort : m.sorts) {
      benchmark::DoNotOptimize(batch_posterior(m, sort.id));
    }
  }
}
BENCHMARK(BM_BatchPosterior);

void BM_PerturbMetric(benchmark::State& state) {
  const AssessmentMatrix m = canonical_dataset();
  const PerturbationSpec spec{0.02, static_cast<int>(state.range(0)), 42};
  for (auto _ : state) {
    benchmark::DoNotOptimize(perturb_metric(m, spec));
  }
}
BENCHMARK(BM_PerturbMetric)->Arg(100)->Arg(1000);

void BM_Tornado(benchmark::State& state) {
  const AssessmentMatrix m = canonical_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(tornado(m));
  }
}
BENCHMARK(BM_Tornado);

void BM_FitTable(benchmark::State& state) {
  // Recover ratios and audit the canonical run rendered at full precision.
  const PosteriorTable table = run(canonical_dataset());
  DisplayedTable displayed;
  for (const Trajectory& t : table.trajectories) {
    displayed.sort_ids.push_back(t.sort_id);
  }
  displayed.evidence_ids = table.evidence_ids;
  displayed.cells.resize(table.evidence_ids.size());
  for (std::size_t e = 0; e < table.evidence_ids.size(); ++e) {
    for (const Trajectory& t : table.trajectories) {
      char buffer[64];
      std::snprintf(buffer, sizeof(buffer), "%.12f",
                    t.posteriors[e].value());
      displayed.cells[e].push_back(buffer);
    }
  }
  const LevelSchedule schedule = canonical_schedule();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_table(displayed, schedule));
  }
}
BENCHMARK(BM_FitTable);

void BM_SaveLoad(benchmark::State& state) {
  const AssessmentMatrix m = canonical_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(io::load_dataset(io::save_dataset(m)));
  }
}
BENCHMARK(BM_SaveLoad);

}  // namespace

BENCHMARK_MAIN();
