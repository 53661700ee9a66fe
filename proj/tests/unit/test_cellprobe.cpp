#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mplab/cellprobe/bench.hpp"
#include "mplab/cellprobe/harness.hpp"
#include "mplab/cellprobe/memory.hpp"
#include "mplab/cellprobe/schemes.hpp"
#include "mplab/core/errors.hpp"
#include "mplab/core/instance.hpp"

using namespace mplab;
using namespace mplab::cellprobe;

namespace {

ProbeEntry probe(Layer l, Address a, Op op = Op::read) { return {Phase::III, l, op, a, Word{0}}; }

}  // namespace

TEST_CASE("memory model: updated layer answers bottom for untouched cells") {
  MemoryModel m(8, 16);
  m.write(3, 7);
  m.begin_phase(Phase::II);
  CHECK(m.read_memory(3) == 7);
  m.write(3, 9);
  m.write(5, 1);
  CHECK(m.read_memory(3) == 9);  // Phase II sees its own writes
  m.begin_phase(Phase::III);
  CHECK(m.read_memory(3) == 7);  // Phase III sees the pre-update memory
  CHECK(m.read_delta(3) == Word{9});
  CHECK(m.read_delta(5) == Word{1});
  CHECK_FALSE(m.read_delta(4).has_value());
  CHECK(m.delta_size() == 2);
  CHECK_THROWS(m.write(1, 1));
  CHECK_THROWS(m.read_memory(16));
}

TEST_CASE("semi-adaptive discipline on hand-made logs") {
  const Budgets b{1.0, 2, 2};
  ProbeLog ok;
  ok.record(probe(Layer::memory, 1));
  ok.record(probe(Layer::delta, 2));
  ok.record(probe(Layer::delta, 3));
  CHECK(enforce_semi_adaptive(ok, b).pass);
  CHECK(ok.alternations == 1);

  ProbeLog back;
  back.record(probe(Layer::delta, 2));
  back.record(probe(Layer::memory, 1));
  const auto v = enforce_semi_adaptive(back, b);
  CHECK_FALSE(v.pass);
  CHECK(v.entry == 2);

  ProbeLog over;
  for (Address a = 0; a < 3; ++a) over.record(probe(Layer::delta, a));
  CHECK_FALSE(enforce_semi_adaptive(over, b).pass);

  ProbeLog writes;
  writes.record(probe(Layer::memory, 0, Op::write));
  CHECK_FALSE(enforce_semi_adaptive(writes, b).pass);

  ProbeLog free_only;
  free_only.record({Phase::III, Layer::free_set, Op::read, 0, std::nullopt});
  CHECK(enforce_semi_adaptive(free_only, b).pass);
}

TEST_CASE("shipped schemes answer every input correctly at n = 3, k = 2") {
  for (const auto& ds : shipped_schemes({3, 2, 0})) {
    for (std::uint64_t code = 0; code < (1u << 9); ++code) {
      const auto inst = instance_from_code(3, 2, code);
      const auto run = run_multiphase(ds, inst);
      CHECK_MESSAGE(run.ok(), ds.name);
      for (const auto& q : run.queries) CHECK(enforce_semi_adaptive(q.log, ds.budgets).pass);
    }
  }
}

TEST_CASE("store_T worst case probes ceil(n / w) words") {
  const std::size_t n = 200, k = 3;
  auto ds = ds_store_T({n, k, 0});
  std::vector<BitVec> sets(k, BitVec(n));
  for (std::size_t j = 0; j < n; ++j) sets[0].set(j);
  const auto inst = make_instance(sets, BitVec(n));
  const auto run = run_multiphase(ds, inst, {0});
  const std::size_t w = ds.w;
  CHECK(run.queries[0].log.t2 == (n + w - 1) / w);
  CHECK(run.queries[0].answer);
}

TEST_CASE("precompute_answers needs one probe per query") {
  auto ds = ds_precompute_answers({64, 40, 0});
  const auto inst = sample_hard_instance(64, 40, 3, 0.05);
  const auto run = run_multiphase(ds, inst);
  CHECK(run.ok());
  for (const auto& q : run.queries) CHECK(q.log.tq() == 1);
}

TEST_CASE("a planted bad advice scheme is caught twice") {
  const auto advice = planted_bad_advice();
  std::vector<BitVec> sets{BitVec::from_indices(64, {3, 9}), BitVec::from_indices(64, {1})};
  const auto inst = make_instance(sets, BitVec::from_indices(64, {9}));
  CHECK_FALSE(audit_advice(advice, inst).empty());
  CHECK(audit_advice(explicit_t_advice(), inst).empty());
  const auto run = run_multiphase(ds_sqrt_scheme({64, 2, 0}, advice), inst);
  CHECK_FALSE(run.ok());
}

TEST_CASE("explicit advice: candidates are few and contain every witness") {
  const auto advice = explicit_t_advice();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = sample_hard_instance(256, 8, seed, 0.01);
    CHECK(audit_advice(advice, inst).empty());
  }
}

TEST_CASE("isolation: the query path depends only on returned words") {
  for (const auto& ds : shipped_schemes({40, 4, 0})) {
    const auto base = sample_hard_instance(40, 4, 5, 0.1);
    auto mutated = sample_hard_instance(40, 4, 6, 0.1);
    mutated.sets[1] = base.sets[1];
    CHECK_MESSAGE(isolation_check(ds, base, mutated, 1).pass, ds.name);
  }
}

TEST_CASE("bench: parallel rows equal the serial reference") {
  BenchConfig cfg;
  cfg.params = {512, 16, 0};
  cfg.instances = 4;
  cfg.queries_per_instance = 20;
  cfg.seed = 3;
  const auto schemes = shipped_schemes(cfg.params);
  const auto a = bench_multiphase(schemes, cfg);
  const auto b = bench_multiphase_serial(schemes, cfg);
  std::ostringstream sa, sb;
  write_bench_csv(sa, a);
  write_bench_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(a.size() == 3);
}

TEST_CASE("sqrt scheme: mean query cost grows like sqrt n") {
  auto mean_tq = [](std::size_t n) {
    BenchConfig cfg;
    cfg.params = {n, 16, 0};
    cfg.instances = 20;
    cfg.queries_per_instance = 16;
    cfg.seed = 9;
    const auto rows = bench_multiphase({ds_sqrt_scheme(cfg.params)}, cfg);
    return rows[0].mean_t1 + rows[0].mean_t2;
  };
  const double small = mean_tq(1024), large = mean_tq(4096);
  CHECK(large <= 2.5 * small);
}

TEST_CASE("percentile uses the nearest rank") {
  CHECK(percentile({5, 1, 4, 2, 3}, 0.5) == 3);
  CHECK(percentile({5, 1, 4, 2, 3}, 1.0) == 5);
  std::vector<std::size_t> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = i + 1;
  CHECK(percentile(v, 0.99) == 99);
}

TEST_CASE("probe log export") {
  ProbeLog log;
  log.record(probe(Layer::memory, 10));
  log.record({Phase::III, Layer::delta, Op::read, 4, std::nullopt});
  std::ostringstream out;
  export_probe_log(out, log);
  CHECK(out.str().find("bot") != std::string::npos);
  CHECK(log.probe_addresses() == std::vector<Address>{10, 4});
}
