// Microbenchmarks for the hot paths: raw stream draws, quadrant traversals,
// exact row construction, the renewal series, and the event-driven embedding.

#include <benchmark/benchmark.h>

#include "shu/embed.hpp"
#include "shu/exact.hpp"
#include "shu/lattice.hpp"
#include "shu/renewal.hpp"
#include "shu/rng.hpp"

namespace {

void BM_StreamU64(benchmark::State& state) {
  auto stream = shu::rng::make_stream(1, shu::rng::Tag::test, 0);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_u64());
}
BENCHMARK(BM_StreamU64);

void BM_StreamUnit(benchmark::State& state) {
  auto stream = shu::rng::make_stream(1, shu::rng::Tag::test, 1);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_unit());
}
BENCHMARK(BM_StreamUnit);

void BM_StreamNormal(benchmark::State& state) {
  auto stream = shu::rng::make_stream(1, shu::rng::Tag::test, 2);
  for (auto _ : state) benchmark::DoNotOptimize(stream.normal());
}
BENCHMARK(BM_StreamNormal);

void BM_TraverseQuadrant(benchmark::State& state) {
  auto stream = shu::rng::make_stream(1, shu::rng::Tag::test, 3);
  const int64_t z = state.range(0);
  uint64_t steps = 0;
  for (auto _ : state) {
    const auto t = shu::lattice::traverse_quadrant(z, stream);
    steps += t.steps;
    benchmark::DoNotOptimize(t.z_next);
  }
  state.SetItemsProcessed(static_cast<int64_t>(steps));
}
BENCHMARK(BM_TraverseQuadrant)->Arg(10)->Arg(100)->Arg(1000);

void BM_NoisyExcursion(benchmark::State& state) {
  auto stream = shu::rng::make_stream(1, shu::rng::Tag::test, 4);
  const auto kappa = shu::lattice::KappaSpec::point(1);
  shu::lattice::SimOptions opts;
  opts.record_z = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shu::lattice::simulate_noisy(10, kappa, stream, opts).tau);
  }
}
BENCHMARK(BM_NoisyExcursion);

void BM_ExactRow(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shu::exact::transition_row(n, 1e-9).m_max);
  }
}
BENCHMARK(BM_ExactRow)->Arg(5)->Arg(20)->Arg(40);

void BM_RenewalExact(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shu::renewal::renewal_function_exact(t));
  }
}
BENCHMARK(BM_RenewalExact)->Arg(5)->Arg(20)->Arg(40);

void BM_FastEmbedding(benchmark::State& state) {
  auto stream = shu::rng::make_stream(1, shu::rng::Tag::test, 5);
  const int64_t n = state.range(0);
  uint64_t events = 0;
  for (auto _ : state) {
    const auto res = shu::embed::simulate_fast(n, 0, stream);
    events += res.events;
    benchmark::DoNotOptimize(res.tau_f);
  }
  state.SetItemsProcessed(static_cast<int64_t>(events));
}
BENCHMARK(BM_FastEmbedding)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
