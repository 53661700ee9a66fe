#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mplab/cellprobe/harness.hpp"
#include "mplab/circuits/circuit.hpp"

namespace mplab::circuits {

using cellprobe::Address;
using cellprobe::Word;

/// Static problem: preprocess x in {0,1}^n, answer f(A_i, x) for query i.
struct StaticProblem {
  std::string name;
  std::size_t n = 0;
  std::vector<BitVec> rows;  // A, one row per query
  std::function<bool(const BitVec& row, const BitVec& x)> f;

  std::size_t k() const { return rows.size(); }
  bool answer(std::size_t i, const BitVec& x) const;
};

/// f = disj: query i asks whether A_i and x are disjoint.
StaticProblem static_disj_problem(const std::vector<BitVec>& a);

/// Static data structure with s cells of w bits. The query receives a probe
/// oracle and must touch memory only through it.
struct StaticDS {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  unsigned w = 0;
  std::function<std::vector<Word>(const BitVec& x)> preprocess;
  std::function<bool(std::size_t i, const std::function<Word(Address)>& probe)> query;
};

struct StaticRun {
  bool answer = false;
  cellprobe::ProbeLog log;
};

/// Runs query i against a memory image. Throws HarnessError for probes outside
/// [0, s) and ContractViolation for i out of range.
StaticRun run_static(const StaticDS& sds, const std::vector<Word>& memory, std::size_t i);
/// Preprocesses x, then runs query i.
StaticRun run_static(const StaticDS& sds, const BitVec& x, std::size_t i);

struct AdaptivityVerdict {
  bool pass = true;
  std::size_t trial = 0;  // perturbation that exposed a change, 1-based
  std::size_t probe = 0;  // first differing probe, 1-based
};

/// Replays query i on `perturbations` random inputs and requires the probe
/// address sequence to match the one on x.
AdaptivityVerdict audit_non_adaptive(const StaticDS& sds, const BitVec& x, std::size_t i,
                                     std::size_t perturbations, std::uint64_t seed);

/// Stores every answer, packed w per cell: s = ceil(k / w), one probe per query.
StaticDS answer_table_ds(const StaticProblem& problem, unsigned w);

/// Translation of a circuit into a non-adaptive static data structure.
struct ViolaDS {
  StaticDS ds;
  std::size_t r = 0;
  std::vector<NodeId> stored;                 // G: gates with fan-in > wires / r
  std::vector<std::vector<Address>> plans;    // probe addresses per output
  std::size_t max_probes = 0;
  double bound = 0.0;                          // (wires / r)^depth
};

/// Cells 0..n-1 hold the input bits, cells n..n+|G|-1 the stored gate values,
/// s = n + r. A query resolves its output gate recursively: inputs and stored
/// gates cost one probe each, other gates recurse into their children; repeated
/// cells are probed once. Word size max(ceil log2 n, ceil log2 r) + 1.
/// Throws ContractViolation if |G| >= r.
ViolaDS viola_translate(const Circuit& c, std::size_t r);

}  // namespace mplab::circuits
