#include "mplab/circuits/static_ds.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"

namespace mplab::circuits {

bool StaticProblem::answer(std::size_t i, const BitVec& x) const {
  if (i >= rows.size()) throw ContractViolation("query index out of range");
  return f(rows[i], x);
}

StaticProblem static_disj_problem(const std::vector<BitVec>& a) {
  if (a.empty()) throw ContractViolation("static problem needs at least one row");
  StaticProblem p;
  p.name = "disj";
  p.n = a[0].size();
  for (const auto& row : a) {
    if (row.size() != p.n) throw ContractViolation("matrix rows must have equal length");
  }
  p.rows = a;
  p.f = [](const BitVec& row, const BitVec& x) { return disj(row, x); };
  return p;
}

StaticRun run_static(const StaticDS& sds, const std::vector<Word>& memory, std::size_t i) {
  if (i >= sds.k) throw ContractViolation("query index " + std::to_string(i) + " out of range");
  if (memory.size() != sds.s) throw ContractViolation("memory image does not have s cells");
  StaticRun run;
  auto probe = [&](Address a) -> Word {
    if (a >= sds.s) {
      throw HarnessError("probe to cell " + std::to_string(a) + " outside the " + std::to_string(sds.s) +
                         " allocated cells");
    }
    run.log.record({cellprobe::Phase::III, cellprobe::Layer::memory, cellprobe::Op::read, a, memory[a]});
    return memory[a];
  };
  run.answer = sds.query(i, probe);
  return run;
}

StaticRun run_static(const StaticDS& sds, const BitVec& x, std::size_t i) {
  if (i >= sds.k) throw ContractViolation("query index " + std::to_string(i) + " out of range");
  return run_static(sds, sds.preprocess(x), i);
}

AdaptivityVerdict audit_non_adaptive(const StaticDS& sds, const BitVec& x, std::size_t i,
                                     std::size_t perturbations, std::uint64_t seed) {
  const auto reference = run_static(sds, x, i).log.probe_addresses();
  CounterRng rng(seed, 0xada7ULL);
  for (std::size_t t = 0; t < perturbations; ++t) {
    BitVec y(x.size());
    for (std::size_t j = 0; j < y.size(); ++j) y.set(j, rng.next() & 1u);
    const auto got = run_static(sds, y, i).log.probe_addresses();
    const std::size_t common = std::min(got.size(), reference.size());
    for (std::size_t p = 0; p < common; ++p) {
      if (got[p] != reference[p]) return {false, t + 1, p + 1};
    }
    if (got.size() != reference.size()) return {false, t + 1, common + 1};
  }
  return {};
}

StaticDS answer_table_ds(const StaticProblem& problem, unsigned w) {
  if (w == 0 || w > 63) throw ContractViolation("word size must be in [1, 63]");
  StaticDS ds;
  ds.name = "answer_table";
  ds.n = problem.n;
  ds.k = problem.k();
  ds.w = w;
  ds.s = (ds.k + w - 1) / w;
  ds.preprocess = [problem, w, s = ds.s](const BitVec& x) {
    std::vector<Word> cells(s, 0);
    for (std::size_t i = 0; i < problem.k(); ++i) {
      if (problem.answer(i, x)) cells[i / w] |= Word{1} << (i % w);
    }
    return cells;
  };
  ds.query = [w](std::size_t i, const std::function<Word(Address)>& probe) {
    return static_cast<bool>((probe(i / w) >> (i % w)) & 1u);
  };
  return ds;
}

ViolaDS viola_translate(const Circuit& c, std::size_t r) {
  if (r < 1) throw ContractViolation("viola_translate needs r >= 1");
  const std::size_t n = c.n_inputs();
  const std::size_t wires = c.wires();
  ViolaDS out;
  out.r = r;
  // Strict inequality: fan-in exactly wires / r stays outside the stored set.
  std::vector<std::int64_t> cell_of(c.num_nodes(), -1);
  for (NodeId id = n; id < c.num_nodes(); ++id) {
    if (c.fan_in(id) * r > wires) {
      cell_of[id] = static_cast<std::int64_t>(n + out.stored.size());
      out.stored.push_back(id);
    }
  }
  if (out.stored.size() >= r) {
    throw ContractViolation("stored gate count " + std::to_string(out.stored.size()) + " is not below r = " +
                            std::to_string(r));
  }
  for (NodeId j = 0; j < n; ++j) cell_of[j] = static_cast<std::int64_t>(j);

  const unsigned w = std::max(ceil_log2(std::max<std::size_t>(n, 1)), ceil_log2(r)) + 1;
  StaticDS& ds = out.ds;
  ds.name = "viola[r=" + std::to_string(r) + "]";
  ds.n = n;
  ds.k = c.outputs().size();
  ds.s = n + r;
  ds.w = w;
  const std::vector<NodeId> stored = out.stored;
  auto shared = std::make_shared<const Circuit>(c);
  ds.preprocess = [shared, stored, n, s = ds.s](const BitVec& x) {
    auto values = shared->eval_all(x);
    std::vector<Word> cells(s, 0);
    for (std::size_t j = 0; j < n; ++j) cells[j] = values[j];
    for (std::size_t g = 0; g < stored.size(); ++g) cells[n + g] = values[stored[g]];
    return cells;
  };
  ds.query = [shared, cell_of](std::size_t i, const std::function<Word(Address)>& probe) {
    const Circuit& c = *shared;
    std::vector<std::uint8_t> values(c.num_nodes(), 0);
    std::vector<std::uint8_t> known(c.num_nodes(), 0);
    // Children are resolved left to right; no short-circuiting, so the probe
    // sequence never depends on the values read.
    auto resolve = [&](auto&& self, NodeId id) -> void {
      if (known[id]) return;
      if (cell_of[id] >= 0) {
        values[id] = static_cast<std::uint8_t>(probe(static_cast<Address>(cell_of[id])) & 1u);
      } else {
        const Gate& g = c.gate(id);
        for (NodeId child : g.inputs) self(self, child);
        values[id] = c.eval_gate(g, values);
      }
      known[id] = 1;
    };
    const NodeId o = c.outputs().at(i);
    resolve(resolve, o);
    return values[o] != 0;
  };

  const std::vector<Word> zeros(ds.s, 0);
  for (std::size_t i = 0; i < ds.k; ++i) {
    out.plans.push_back(run_static(ds, zeros, i).log.probe_addresses());
    out.max_probes = std::max(out.max_probes, out.plans.back().size());
  }
  out.bound = std::pow(static_cast<double>(wires) / static_cast<double>(r), static_cast<double>(c.depth()));
  return out;
}

}  // namespace mplab::circuits
