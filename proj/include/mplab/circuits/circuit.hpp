#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mplab/core/bitvec.hpp"

namespace mplab::circuits {

/// Nodes 0..n-1 are the inputs; gates follow in creation order, so every gate
/// only references smaller ids and the graph is acyclic by construction.
using NodeId = std::size_t;

enum class GateKind { table, or_gate, and_gate, threshold };

const char* to_string(GateKind k);

struct Gate {
  GateKind kind = GateKind::or_gate;
  std::vector<NodeId> inputs;
  /// Truth table for kind == table: bit b is the output on the assignment where
  /// input j carries bit j of b.
  BitVec table;
  std::size_t threshold = 0;  // output 1 iff at least `threshold` inputs are 1
  bool negate = false;
};

class Circuit {
 public:
  static constexpr std::size_t kMaxTableFanIn = 20;

  explicit Circuit(std::size_t n_inputs);

  NodeId add_gate(Gate g);  // throws ContractViolation on bad references or table size
  void set_outputs(std::vector<NodeId> outputs);

  std::size_t n_inputs() const noexcept { return n_; }
  std::size_t num_nodes() const noexcept { return n_ + gates_.size(); }
  std::size_t num_gates() const noexcept { return gates_.size(); }
  bool is_input(NodeId id) const noexcept { return id < n_; }
  const Gate& gate(NodeId id) const;
  const std::vector<NodeId>& outputs() const noexcept { return outputs_; }
  std::size_t fan_in(NodeId id) const;
  std::size_t level(NodeId id) const;  // 0 for inputs, 1 + max child level for gates
  std::size_t depth() const;           // max level over the outputs
  std::size_t wires() const noexcept { return wires_; }

  bool eval_gate(const Gate& g, const std::vector<std::uint8_t>& values) const;
  /// Topological evaluation of every output.
  BitVec eval(const BitVec& x) const;
  /// Values of every node.
  std::vector<std::uint8_t> eval_all(const BitVec& x) const;

  /// Recomputes levels and wire count from scratch and compares with the cache.
  bool self_check() const;

 private:
  std::size_t n_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> levels_;  // gates only
  std::vector<NodeId> outputs_;
  std::size_t wires_ = 0;
};

/// Depth-1 OR circuit computing Ax over the boolean semiring; rows of A are the
/// k outputs. Empty rows give constant-0 gates.
Circuit linear_operator_circuit(const std::vector<BitVec>& a);

/// Depth-1 NOR circuit: output i is disj(A_i, x).
Circuit disj_circuit(const std::vector<BitVec>& a);

/// n one-input OR gates copying the inputs.
Circuit identity_circuit(std::size_t n);

struct RandomCircuitParams {
  std::size_t n_inputs = 8;
  std::size_t depth = 2;
  std::size_t gates_per_level = 8;
  std::size_t max_fan_in = 8;
  std::size_t outputs = 4;  // taken from the top level first
};

/// Layered random circuit with exactly the requested depth. Gates with fan-in
/// <= 6 are random truth tables, wider ones are OR/AND/threshold.
Circuit random_circuit(const RandomCircuitParams& p, std::uint64_t seed);

/// Text interchange format:
///   circuit v1
///   inputs <n>
///   gate <id> level <L> in <ids...> kind <or|and|threshold|table> [<t>|<hex>] [neg]
///   outputs <ids...>
void write_circuit(std::ostream& out, const Circuit& c);
/// Throws ParseError with line and column.
Circuit read_circuit(std::istream& in);

}  // namespace mplab::circuits
