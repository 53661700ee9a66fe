#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mplab/cellprobe/schemes.hpp"

namespace mplab::cellprobe {

struct BenchConfig {
  SchemeParams params;
  std::size_t instances = 10;
  std::size_t queries_per_instance = 100;  // drawn uniformly from [k] per instance
  std::uint64_t seed = 1;
  std::optional<double> gamma;  // hard distribution when empty
  /// Plants S_0 = [n] in every instance (worst case for bitmap probing).
  bool plant_full_set = false;
};

struct BenchRow {
  std::string scheme;
  std::size_t n = 0, k = 0;
  unsigned w = 0;
  double mean_t1 = 0, mean_t2 = 0;
  std::size_t p99_tq = 0, max_tq = 0;
  double phase2_writes = 0;  // mean over instances
  std::size_t queries = 0;
  std::size_t fallback_queries = 0;
  std::size_t conformance_failures = 0;
  std::vector<std::string> soundness_failures;  // "instance <seed> query <i>: ..."
};

/// Runs every scheme over seeded instances, parallel over instances.
std::vector<BenchRow> bench_multiphase(const std::vector<DataStructureSpec>& schemes, const BenchConfig& cfg);
/// Serial reference; produces identical rows.
std::vector<BenchRow> bench_multiphase_serial(const std::vector<DataStructureSpec>& schemes,
                                              const BenchConfig& cfg);

/// Nearest-rank percentile of a sample (q in (0, 1]).
std::size_t percentile(std::vector<std::size_t> values, double q);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace mplab::cellprobe
