#include "mplab/cellprobe/harness.hpp"

#include <numeric>

#include "mplab/core/errors.hpp"

namespace mplab::cellprobe {

Word MemoryUpdateContext::read(Address a) {
  Word v = mem_.read_memory(a);
  Layer layer = (mem_.phase() == Phase::II && mem_.updated(a)) ? Layer::delta : Layer::memory;
  log_.record({mem_.phase(), layer, Op::read, a, v});
  return v;
}

void MemoryUpdateContext::write(Address a, Word value) {
  mem_.write(a, value);
  log_.record({mem_.phase(), mem_.phase() == Phase::I ? Layer::memory : Layer::delta, Op::write, a, value});
}

Word MemoryQueryContext::read_memory(Address a) {
  Word v = mem_.read_memory(a);
  log_.record({Phase::III, Layer::memory, Op::read, a, v});
  return v;
}

CellRead MemoryQueryContext::read_delta(Address a) {
  CellRead v = mem_.read_delta(a);
  log_.record({Phase::III, Layer::delta, Op::read, a, v});
  return v;
}

namespace {

void check_shape(const DataStructureSpec& ds, const MultiphaseInstance& inst) {
  if (ds.n != inst.n || ds.k != inst.k) {
    throw ContractViolation("data structure " + ds.name + " was built for n=" + std::to_string(ds.n) +
                            ", k=" + std::to_string(ds.k));
  }
  if (!ds.preprocess || !ds.update || !ds.query) throw ContractViolation("data structure has missing phases");
}

}  // namespace

MultiphaseRun run_multiphase(const DataStructureSpec& ds, const MultiphaseInstance& inst,
                             const std::vector<std::size_t>& queries) {
  check_shape(ds, inst);
  MemoryModel mem(ds.w, ds.address_space);
  MultiphaseRun run;

  ProbeLog update_log;
  {
    MemoryUpdateContext ctx(mem, update_log);
    ds.preprocess(inst.sets, ctx);
  }
  for (const auto& e : update_log.entries) {
    if (e.op == Op::write) ++run.phase1_writes;
  }
  const std::size_t phase1_entries = update_log.entries.size();

  mem.begin_phase(Phase::II);
  {
    MemoryUpdateContext ctx(mem, update_log);
    ds.update(inst.t, ctx);
  }
  for (std::size_t e = phase1_entries; e < update_log.entries.size(); ++e) {
    const auto& entry = update_log.entries[e];
    if (entry.op == Op::read && entry.layer == Layer::memory) {
      ++run.phase2_memory_reads;
      run.phase2_memory_words.push_back(*entry.word);
    }
  }
  run.phase2_writes = mem.delta_size();
  const double write_budget = ds.budgets.t_u * static_cast<double>(inst.n);
  if (static_cast<double>(run.phase2_writes) > write_budget + 1e-9) {
    run.failures.push_back(ds.name + ": update wrote " + std::to_string(run.phase2_writes) +
                           " cells, budget n*t_u = " + std::to_string(write_budget));
  }

  mem.begin_phase(Phase::III);
  run.queries.reserve(queries.size());
  for (std::size_t i : queries) {
    if (i >= inst.k) throw ContractViolation("query index " + std::to_string(i) + " out of range");
    QueryRecord rec;
    rec.index = i;
    rec.log.record({Phase::III, Layer::free_set, Op::read, static_cast<Address>(i), std::nullopt});
    MemoryQueryContext ctx(i, inst.sets[i], mem, rec.log);
    rec.answer = ds.query(ctx);
    rec.expected = inst.answer(i);
    rec.tags = ctx.tags();
    if (rec.answer != rec.expected) {
      run.failures.push_back(ds.name + ": query " + std::to_string(i) + " answered " +
                             std::to_string(rec.answer) + ", disjointness is " + std::to_string(rec.expected));
    }
    if (rec.log.t1 > ds.budgets.t1 || rec.log.t2 > ds.budgets.t2) {
      run.failures.push_back(ds.name + ": query " + std::to_string(i) + " exceeded its probe budget");
    }
    run.queries.push_back(std::move(rec));
  }
  return run;
}

MultiphaseRun run_multiphase(const DataStructureSpec& ds, const MultiphaseInstance& inst) {
  std::vector<std::size_t> all(inst.k);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return run_multiphase(ds, inst, all);
}

Verdict enforce_semi_adaptive(const ProbeLog& log, const Budgets& budgets) {
  std::size_t t1 = 0, t2 = 0, pos = 0;
  bool seen_delta = false;
  for (const auto& e : log.entries) {
    if (e.phase != Phase::III || e.layer == Layer::free_set) continue;
    ++pos;
    if (e.op == Op::write) return {false, "query wrote memory", pos};
    if (e.layer == Layer::memory) {
      if (seen_delta) return {false, "memory probe after an updated-cell probe (alternation 2)", pos};
      if (++t1 > budgets.t1) {
        return {false, "t1 = " + std::to_string(t1) + " exceeds budget " + std::to_string(budgets.t1), pos};
      }
    } else {
      seen_delta = true;
      if (++t2 > budgets.t2) {
        return {false, "t2 = " + std::to_string(t2) + " exceeds budget " + std::to_string(budgets.t2), pos};
      }
    }
  }
  return {};
}

Verdict isolation_check(const DataStructureSpec& ds, const MultiphaseInstance& base,
                        const MultiphaseInstance& mutated, std::size_t i) {
  if (!(base.sets.at(i) == mutated.sets.at(i))) throw ContractViolation("isolation check needs the same S_i");
  auto a = run_multiphase(ds, base, {i});
  auto b = run_multiphase(ds, mutated, {i});
  std::vector<const ProbeEntry*> pa, pb;
  for (const auto& e : a.queries[0].log.entries) {
    if (e.layer != Layer::free_set) pa.push_back(&e);
  }
  for (const auto& e : b.queries[0].log.entries) {
    if (e.layer != Layer::free_set) pb.push_back(&e);
  }
  for (std::size_t p = 0; p < std::max(pa.size(), pb.size()); ++p) {
    if (p >= pa.size() || p >= pb.size()) {
      return {false, "probe sequences differ in length before any returned word differed", p + 1};
    }
    if (pa[p]->address != pb[p]->address || pa[p]->layer != pb[p]->layer) {
      return {false, "probe address changed although every returned word so far was identical", p + 1};
    }
    if (pa[p]->word != pb[p]->word) return {};
  }
  if (a.queries[0].answer != b.queries[0].answer) {
    return {false, "answer changed although every probe returned the same word", 0};
  }
  return {};
}

}  // namespace mplab::cellprobe
