#include "mplab/cellprobe/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"

namespace mplab::cellprobe {

std::size_t percentile(std::vector<std::size_t> values, double q) {
  if (values.empty()) return 0;
  if (!(q > 0.0 && q <= 1.0)) throw ContractViolation("percentile needs q in (0, 1]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

namespace {

struct InstanceResult {
  std::vector<std::size_t> t1, t2;
  std::size_t phase2_writes = 0;
  std::size_t fallbacks = 0;
  std::size_t conformance_failures = 0;
  std::vector<std::string> failures;
};

InstanceResult run_one(const DataStructureSpec& ds, const BenchConfig& cfg, std::size_t idx) {
  const std::uint64_t inst_seed = splitmix64(cfg.seed + idx);
  MultiphaseInstance inst = sample_hard_instance(cfg.params.n, cfg.params.k, inst_seed, cfg.gamma);
  if (cfg.plant_full_set) {
    for (std::size_t e = 0; e < inst.n; ++e) inst.sets[0].set(e);
  }
  CounterRng pick(inst_seed, 0x51ec7ULL);
  std::vector<std::size_t> queries(cfg.queries_per_instance);
  for (auto& q : queries) q = static_cast<std::size_t>(pick.below(inst.k));
  if (cfg.plant_full_set && !queries.empty()) queries[0] = 0;

  InstanceResult r;
  MultiphaseRun run = run_multiphase(ds, inst, queries);
  r.phase2_writes = run.phase2_writes;
  for (const auto& f : run.failures) r.failures.push_back("instance seed " + std::to_string(inst_seed) + ": " + f);
  for (const auto& q : run.queries) {
    r.t1.push_back(q.log.t1);
    r.t2.push_back(q.log.t2);
    if (std::find(q.tags.begin(), q.tags.end(), "fallback") != q.tags.end()) ++r.fallbacks;
    if (!enforce_semi_adaptive(q.log, ds.budgets).pass) ++r.conformance_failures;
  }
  return r;
}

BenchRow summarise(const DataStructureSpec& ds, const std::vector<InstanceResult>& parts) {
  BenchRow row;
  row.scheme = ds.name;
  row.n = ds.n;
  row.k = ds.k;
  row.w = ds.w;
  std::vector<std::size_t> tq;
  double s1 = 0, s2 = 0, writes = 0;
  for (const auto& p : parts) {
    for (std::size_t q = 0; q < p.t1.size(); ++q) {
      s1 += static_cast<double>(p.t1[q]);
      s2 += static_cast<double>(p.t2[q]);
      tq.push_back(p.t1[q] + p.t2[q]);
    }
    writes += static_cast<double>(p.phase2_writes);
    row.fallback_queries += p.fallbacks;
    row.conformance_failures += p.conformance_failures;
    row.soundness_failures.insert(row.soundness_failures.end(), p.failures.begin(), p.failures.end());
  }
  row.queries = tq.size();
  if (!tq.empty()) {
    row.mean_t1 = s1 / static_cast<double>(tq.size());
    row.mean_t2 = s2 / static_cast<double>(tq.size());
    row.max_tq = *std::max_element(tq.begin(), tq.end());
    row.p99_tq = percentile(tq, 0.99);
  }
  if (!parts.empty()) row.phase2_writes = writes / static_cast<double>(parts.size());
  return row;
}

}  // namespace

std::vector<BenchRow> bench_multiphase(const std::vector<DataStructureSpec>& schemes, const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const auto& ds : schemes) {
    std::vector<InstanceResult> parts(cfg.instances);
    const auto count = static_cast<std::int64_t>(cfg.instances);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t idx = 0; idx < count; ++idx) {
      parts[static_cast<std::size_t>(idx)] = run_one(ds, cfg, static_cast<std::size_t>(idx));
    }
    rows.push_back(summarise(ds, parts));
  }
  return rows;
}

std::vector<BenchRow> bench_multiphase_serial(const std::vector<DataStructureSpec>& schemes,
                                              const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const auto& ds : schemes) {
    std::vector<InstanceResult> parts;
    for (std::size_t idx = 0; idx < cfg.instances; ++idx) parts.push_back(run_one(ds, cfg, idx));
    rows.push_back(summarise(ds, parts));
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "scheme,n,k,w,mean_t1,mean_t2,p99_tq,phaseII_writes\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.n << ',' << r.k << ',' << r.w << ',' << r.mean_t1 << ',' << r.mean_t2 << ','
        << r.p99_tq << ',' << r.phase2_writes << '\n';
  }
}

}  // namespace mplab::cellprobe
