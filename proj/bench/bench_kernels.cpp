// Parallel kernels against their serial references. Each pair runs the same
// workload; the /parallel and /serial suffixes name the variant.

#include <benchmark/benchmark.h>

#include "mplab/andlab/cutpaste.hpp"
#include "mplab/andlab/embed.hpp"
#include "mplab/cellprobe/bench.hpp"
#include "mplab/cellprobe/schemes.hpp"
#include "mplab/core/instance.hpp"
#include "mplab/nof/enumerate.hpp"
#include "mplab/nof/toy_protocols.hpp"

using namespace mplab;

namespace {

void hard_sampler(benchmark::State& state, bool parallel) {
  const std::size_t n = 1 << 14, k = 256;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto inst = parallel ? sample_hard_instance(n, k, seed++) : sample_hard_instance_serial(n, k, seed++);
    benchmark::DoNotOptimize(inst);
  }
}

void enumeration(benchmark::State& state, bool parallel) {
  const auto proto = nof::toy::forward_xor_advice(3, 3);
  const nof::EnumerationConfig cfg{3, 3, 2, 0.1, std::nullopt};
  for (auto _ : state) {
    auto o = parallel ? nof::enumerate_protocol(proto, cfg) : nof::enumerate_protocol_serial(proto, cfg);
    benchmark::DoNotOptimize(o);
  }
}

void mc_embedding(benchmark::State& state, bool parallel) {
  const auto proto = nof::toy::forward_first_bit(2, 3);
  const andlab::EmbedConfig cfg{2, 3, 2, std::nullopt};
  for (auto _ : state) {
    auto mc = parallel ? andlab::embed_and_mc(proto, cfg, 100000, 3) : andlab::embed_and_mc_serial(proto, cfg, 100000, 3);
    benchmark::DoNotOptimize(mc);
  }
}

void search(benchmark::State& state, bool parallel) {
  andlab::SearchConfig cfg;
  cfg.gamma = 1e-3;
  cfg.z_size = 8;
  cfg.restarts = 16;
  for (auto _ : state) {
    auto r = parallel ? andlab::adversarial_search(cfg) : andlab::adversarial_search_serial(cfg);
    benchmark::DoNotOptimize(r);
  }
}

void sweep(benchmark::State& state, bool parallel) {
  const andlab::SweepConfig cfg{1e-2, 400, true};
  for (auto _ : state) {
    auto r = parallel ? andlab::largediv_sweep(cfg) : andlab::largediv_sweep_serial(cfg);
    benchmark::DoNotOptimize(r);
  }
}

void multiphase(benchmark::State& state, bool parallel) {
  cellprobe::BenchConfig cfg;
  cfg.params = {4096, 64, 0};
  cfg.instances = 16;
  cfg.queries_per_instance = 32;
  const auto schemes = cellprobe::shipped_schemes(cfg.params);
  for (auto _ : state) {
    auto rows = parallel ? cellprobe::bench_multiphase(schemes, cfg) : cellprobe::bench_multiphase_serial(schemes, cfg);
    benchmark::DoNotOptimize(rows);
  }
}

}  // namespace

BENCHMARK_CAPTURE(hard_sampler, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hard_sampler, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(enumeration, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(enumeration, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mc_embedding, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mc_embedding, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(search, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(search, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(multiphase, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(multiphase, serial, false)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
