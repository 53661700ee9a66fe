#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mplab/cellprobe/memory.hpp"
#include "mplab/core/bitvec.hpp"
#include "mplab/core/instance.hpp"

namespace mplab::cellprobe {

struct Budgets {
  double t_u = 0.0;  // Phase-II writes allowed per universe element
  std::size_t t1 = 0;
  std::size_t t2 = 0;
};

/// Handed to preprocess and update. The harness implementation logs every
/// access; other implementations replay an update from a transcript.
class UpdateContext {
 public:
  virtual ~UpdateContext() = default;
  virtual unsigned w() const = 0;
  virtual Word read(Address a) = 0;
  virtual void write(Address a, Word value) = 0;
};

class MemoryUpdateContext final : public UpdateContext {
 public:
  MemoryUpdateContext(MemoryModel& mem, ProbeLog& log) : mem_(mem), log_(log) {}
  unsigned w() const override { return mem_.w(); }
  Word read(Address a) override;
  void write(Address a, Word value) override;

 private:
  MemoryModel& mem_;
  ProbeLog& log_;
};

/// What a query sees: its index, a free copy of S_i, and the two probe oracles.
/// T and the other sets are never reachable from here.
class QueryContext {
 public:
  QueryContext(std::size_t index, const BitVec& set, unsigned w) : index_(index), set_(set), w_(w) {}
  virtual ~QueryContext() = default;

  std::size_t index() const { return index_; }
  const BitVec& set() const { return set_; }
  unsigned w() const { return w_; }
  virtual Word read_memory(Address a) = 0;
  virtual CellRead read_delta(Address a) = 0;

  void tag(std::string t) { tags_.push_back(std::move(t)); }
  const std::vector<std::string>& tags() const { return tags_; }

 private:
  std::size_t index_;
  const BitVec& set_;
  unsigned w_;
  std::vector<std::string> tags_;
};

class MemoryQueryContext final : public QueryContext {
 public:
  MemoryQueryContext(std::size_t index, const BitVec& set, const MemoryModel& mem, ProbeLog& log)
      : QueryContext(index, set, mem.w()), mem_(mem), log_(log) {}
  Word read_memory(Address a) override;
  CellRead read_delta(Address a) override;

 private:
  const MemoryModel& mem_;
  ProbeLog& log_;
};

struct DataStructureSpec {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned w = 0;
  Address address_space = 0;
  Budgets budgets;
  bool semi_adaptive = true;
  std::function<void(const std::vector<BitVec>& sets, UpdateContext& ctx)> preprocess;
  std::function<void(const BitVec& t, UpdateContext& ctx)> update;
  std::function<bool(QueryContext& ctx)> query;
};

struct QueryRecord {
  std::size_t index = 0;
  bool answer = false;
  bool expected = false;
  ProbeLog log;
  std::vector<std::string> tags;
};

struct MultiphaseRun {
  std::vector<QueryRecord> queries;
  std::size_t phase1_writes = 0;
  std::size_t phase2_writes = 0;       // distinct updated cells
  std::size_t phase2_memory_reads = 0;  // Phase-II reads served by pre-update M
  std::vector<Word> phase2_memory_words;  // their contents, in order
  std::vector<std::string> failures;   // wrong answers and budget overruns
  bool ok() const { return failures.empty(); }
};

/// Runs Phase I on inst.sets, Phase II on inst.t, then every query in `queries`
/// against the same memory. Wrong answers become failure entries, never silent.
/// Throws HarnessError on illegal accesses.
MultiphaseRun run_multiphase(const DataStructureSpec& ds, const MultiphaseInstance& inst,
                             const std::vector<std::size_t>& queries);

/// All k queries.
MultiphaseRun run_multiphase(const DataStructureSpec& ds, const MultiphaseInstance& inst);

struct Verdict {
  bool pass = true;
  std::string reason;
  std::size_t entry = 0;  // 1-based position among the Phase-III probes; 0 if none
};

/// PASS iff Phase-III probes visit M before the updated layer (at most one
/// alternation), t1 and t2 stay within budget, and Phase III never writes.
Verdict enforce_semi_adaptive(const ProbeLog& log, const Budgets& budgets);

/// Runs query i on `base` and on `mutated` (same S_i, anything else may differ)
/// and checks that the probe addresses agree up to and including the first
/// probe whose returned word differs. If no returned word differs, the answers
/// must agree too.
Verdict isolation_check(const DataStructureSpec& ds, const MultiphaseInstance& base,
                        const MultiphaseInstance& mutated, std::size_t i);

}  // namespace mplab::cellprobe
