#include <benchmark/benchmark.h>

#include <random>

#include "plcprep/dataset.hpp"
#include "plcprep/feature_select.hpp"
#include "plcprep/partition.hpp"
#include "plcprep/periodicity.hpp"
#include "plcprep/resample.hpp"
#include "plcprep/synth.hpp"

using namespace plcprep;

namespace {

const SynthDataset& two_hour_dataset() {
  static const SynthDataset data = [] {
    SynthConfig c;
    c.duration_s = 7200.0;
    return generate(c);
  }();
  return data;
}

const UniformSeries& two_hour_uniform() {
  static const UniformSeries u = prune(resample_forward_fill(two_hour_dataset().events, 20), PruneThresholds{}).series;
  return u;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unit(rng);
  return v;
}

}  // namespace

static void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FeatureColumn a{"a", random_values(n, 1)};
  const FeatureColumn b{"b", random_values(n, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(spearman(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spearman)->RangeMultiplier(8)->Range(1 << 10, 1 << 19)->Complexity();

static void BM_PruneSynthetic(benchmark::State& state) {
  const auto& events = two_hour_dataset().events;
  for (auto _ : state) benchmark::DoNotOptimize(prune(events, PruneThresholds{}));
}
BENCHMARK(BM_PruneSynthetic)->Unit(benchmark::kMillisecond);

static void BM_ResampleForwardFill(benchmark::State& state) {
  const auto& events = two_hour_dataset().events;
  for (auto _ : state) benchmark::DoNotOptimize(resample_forward_fill(events, state.range(0)));
  state.counters["rows"] = static_cast<double>(resample_forward_fill(events, state.range(0)).rows());
}
BENCHMARK(BM_ResampleForwardFill)->Arg(100)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FeatureColumn col{"x", random_values(n, 3)};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(col, 50.0));
  state.SetComplexityN(state.range(0));
}
// 360000 = two hours at 20 ms, a non power-of-two length
BENCHMARK(BM_Spectrum)->Arg(4096)->Arg(65536)->Arg(360000)->Unit(benchmark::kMillisecond);

static void BM_DetectCycle(benchmark::State& state) {
  const auto& u = two_hour_uniform();
  for (auto _ : state) benchmark::DoNotOptimize(detect_cycle(u));
}
BENCHMARK(BM_DetectCycle)->Unit(benchmark::kMillisecond);

static void BM_PartitionCycles(benchmark::State& state) {
  const auto& u = two_hour_uniform();
  for (auto _ : state) benchmark::DoNotOptimize(partition_cycles(u, "signal_00", 90.0));
}
BENCHMARK(BM_PartitionCycles)->Unit(benchmark::kMillisecond);

static void BM_ParseCsv(benchmark::State& state) {
  const auto& events = two_hour_dataset().events;
  const auto path = std::filesystem::temp_directory_path() / "plcprep_bench_events.csv";
  write_event_csv(events, path);
  for (auto _ : state) benchmark::DoNotOptimize(parse_event_csv(path));
  std::filesystem::remove(path);
}
BENCHMARK(BM_ParseCsv)->Unit(benchmark::kMillisecond);

static void BM_WriteUniformCsv(benchmark::State& state) {
  const auto& u = two_hour_uniform();
  const auto path = std::filesystem::temp_directory_path() / "plcprep_bench_uniform.csv";
  for (auto _ : state) write_uniform_csv(u, path);
  std::filesystem::remove(path);
}
BENCHMARK(BM_WriteUniformCsv)->Unit(benchmark::kMillisecond);

static void BM_Generate(benchmark::State& state) {
  SynthConfig c;
  c.duration_s = 7200.0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(c));
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
