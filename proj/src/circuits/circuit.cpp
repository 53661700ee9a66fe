#include "mplab/circuits/circuit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "mplab/core/errors.hpp"

namespace mplab::circuits {

const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::table:
      return "table";
    case GateKind::or_gate:
      return "or";
    case GateKind::and_gate:
      return "and";
    case GateKind::threshold:
      return "threshold";
  }
  return "?";
}

Circuit::Circuit(std::size_t n_inputs) : n_(n_inputs) {}

NodeId Circuit::add_gate(Gate g) {
  const NodeId id = num_nodes();
  std::size_t lvl = 0;
  for (NodeId c : g.inputs) {
    if (c >= id) throw ContractViolation("gate " + std::to_string(id) + " references node " + std::to_string(c) +
                                         " that does not precede it");
    lvl = std::max(lvl, level(c));
  }
  if (g.kind == GateKind::table) {
    if (g.inputs.size() > kMaxTableFanIn) {
      throw ContractViolation("truth-table gates are limited to fan-in 20; use or/and/threshold for wide gates");
    }
    if (g.table.size() != (std::size_t{1} << g.inputs.size())) {
      throw ContractViolation("truth table needs 2^fan-in entries");
    }
  }
  wires_ += g.inputs.size();
  gates_.push_back(std::move(g));
  levels_.push_back(lvl + 1);
  return id;
}

void Circuit::set_outputs(std::vector<NodeId> outputs) {
  for (NodeId o : outputs) {
    if (o >= num_nodes()) throw ContractViolation("output references unknown node " + std::to_string(o));
  }
  outputs_ = std::move(outputs);
}

const Gate& Circuit::gate(NodeId id) const {
  if (id < n_ || id >= num_nodes()) throw ContractViolation("node " + std::to_string(id) + " is not a gate");
  return gates_[id - n_];
}

std::size_t Circuit::fan_in(NodeId id) const { return is_input(id) ? 0 : gate(id).inputs.size(); }

std::size_t Circuit::level(NodeId id) const {
  if (id >= num_nodes()) throw ContractViolation("unknown node " + std::to_string(id));
  return is_input(id) ? 0 : levels_[id - n_];
}

std::size_t Circuit::depth() const {
  std::size_t d = 0;
  for (NodeId o : outputs_) d = std::max(d, level(o));
  return d;
}

bool Circuit::eval_gate(const Gate& g, const std::vector<std::uint8_t>& values) const {
  bool out = false;
  switch (g.kind) {
    case GateKind::table: {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < g.inputs.size(); ++j) {
        if (values[g.inputs[j]]) idx |= std::size_t{1} << j;
      }
      out = g.table.test(idx);
      break;
    }
    case GateKind::or_gate:
      out = std::any_of(g.inputs.begin(), g.inputs.end(), [&](NodeId c) { return values[c] != 0; });
      break;
    case GateKind::and_gate:
      out = std::all_of(g.inputs.begin(), g.inputs.end(), [&](NodeId c) { return values[c] != 0; });
      break;
    case GateKind::threshold: {
      std::size_t ones = 0;
      for (NodeId c : g.inputs) ones += values[c] != 0;
      out = ones >= g.threshold;
      break;
    }
  }
  return out != g.negate;
}

std::vector<std::uint8_t> Circuit::eval_all(const BitVec& x) const {
  if (x.size() != n_) throw ContractViolation("input has " + std::to_string(x.size()) + " bits, circuit expects " +
                                              std::to_string(n_));
  std::vector<std::uint8_t> values(num_nodes(), 0);
  for (std::size_t j = 0; j < n_; ++j) values[j] = x.test(j);
  for (std::size_t g = 0; g < gates_.size(); ++g) values[n_ + g] = eval_gate(gates_[g], values);
  return values;
}

BitVec Circuit::eval(const BitVec& x) const {
  auto values = eval_all(x);
  BitVec out(outputs_.size());
  for (std::size_t i = 0; i < outputs_.size(); ++i) out.set(i, values[outputs_[i]] != 0);
  return out;
}

bool Circuit::self_check() const {
  std::size_t wires = 0;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    std::size_t lvl = 0;
    for (NodeId c : gates_[g].inputs) {
      if (c >= n_ + g) return false;
      lvl = std::max(lvl, c < n_ ? std::size_t{0} : levels_[c - n_]);
    }
    if (levels_[g] != lvl + 1) return false;
    wires += gates_[g].inputs.size();
  }
  return wires == wires_;
}

namespace {

Circuit row_circuit(const std::vector<BitVec>& a, bool negate) {
  if (a.empty()) throw ContractViolation("matrix needs at least one row");
  const std::size_t n = a[0].size();
  Circuit c(n);
  std::vector<NodeId> outs;
  for (const auto& row : a) {
    if (row.size() != n) throw ContractViolation("matrix rows must have equal length");
    Gate g;
    g.kind = GateKind::or_gate;
    g.negate = negate;
    g.inputs = row.ones();
    outs.push_back(c.add_gate(std::move(g)));
  }
  c.set_outputs(std::move(outs));
  return c;
}

}  // namespace

Circuit linear_operator_circuit(const std::vector<BitVec>& a) { return row_circuit(a, false); }

Circuit disj_circuit(const std::vector<BitVec>& a) { return row_circuit(a, true); }

Circuit identity_circuit(std::size_t n) {
  Circuit c(n);
  std::vector<NodeId> outs;
  for (std::size_t j = 0; j < n; ++j) {
    Gate g;
    g.kind = GateKind::or_gate;
    g.inputs = {j};
    outs.push_back(c.add_gate(std::move(g)));
  }
  c.set_outputs(std::move(outs));
  return c;
}

Circuit random_circuit(const RandomCircuitParams& p, std::uint64_t seed) {
  if (p.n_inputs == 0 || p.depth == 0 || p.gates_per_level == 0 || p.max_fan_in == 0) {
    throw ContractViolation("random_circuit needs positive sizes");
  }
  std::mt19937_64 rng(seed);
  Circuit c(p.n_inputs);
  std::vector<std::vector<NodeId>> by_level(p.depth + 1);
  for (NodeId j = 0; j < p.n_inputs; ++j) by_level[0].push_back(j);
  std::vector<NodeId> below = by_level[0];
  for (std::size_t lvl = 1; lvl <= p.depth; ++lvl) {
    for (std::size_t g = 0; g < p.gates_per_level; ++g) {
      const auto& prev = by_level[lvl - 1];
      std::size_t cap = std::min(p.max_fan_in, below.size());
      std::size_t fan = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
      std::vector<NodeId> pool = below;
      Gate gate;
      // One child from the level just below pins the gate's level.
      NodeId anchor = prev[std::uniform_int_distribution<std::size_t>(0, prev.size() - 1)(rng)];
      gate.inputs.push_back(anchor);
      pool.erase(std::find(pool.begin(), pool.end(), anchor));
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t f = 1; f < fan; ++f) gate.inputs.push_back(pool[f - 1]);
      if (fan <= 6) {
        gate.kind = GateKind::table;
        gate.table = BitVec(std::size_t{1} << fan);
        for (std::size_t b = 0; b < gate.table.size(); ++b) gate.table.set(b, rng() & 1u);
      } else {
        switch (rng() % 3) {
          case 0:
            gate.kind = GateKind::or_gate;
            break;
          case 1:
            gate.kind = GateKind::and_gate;
            break;
          default:
            gate.kind = GateKind::threshold;
            gate.threshold = std::uniform_int_distribution<std::size_t>(1, fan)(rng);
        }
        gate.negate = rng() & 1u;
      }
      by_level[lvl].push_back(c.add_gate(std::move(gate)));
    }
    below.insert(below.end(), by_level[lvl].begin(), by_level[lvl].end());
  }
  std::vector<NodeId> outs;
  for (std::size_t lvl = p.depth; lvl >= 1 && outs.size() < p.outputs; --lvl) {
    for (NodeId id : by_level[lvl]) {
      if (outs.size() >= p.outputs) break;
      outs.push_back(id);
    }
  }
  c.set_outputs(std::move(outs));
  return c;
}

void write_circuit(std::ostream& out, const Circuit& c) {
  out << "circuit v1\n";
  out << "inputs " << c.n_inputs() << "\n";
  for (NodeId id = c.n_inputs(); id < c.num_nodes(); ++id) {
    const Gate& g = c.gate(id);
    out << "gate " << id << " level " << c.level(id) << " in";
    for (NodeId x : g.inputs) out << ' ' << x;
    out << " kind " << to_string(g.kind);
    if (g.kind == GateKind::table) out << ' ' << g.table.to_hex();
    if (g.kind == GateKind::threshold) out << ' ' << g.threshold;
    if (g.negate) out << " neg";
    out << "\n";
  }
  out << "outputs";
  for (NodeId o : c.outputs()) out << ' ' << o;
  out << "\n";
}

namespace {

struct Tokens {
  std::vector<std::string> words;
  std::vector<std::size_t> columns;  // 1-based
};

Tokens tokenize(const std::string& line) {
  Tokens t;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    t.words.push_back(line.substr(start, i - start));
    t.columns.push_back(start + 1);
  }
  return t;
}

std::size_t to_index(const Tokens& t, std::size_t w, std::size_t line) {
  if (w >= t.words.size()) {
    throw ParseError(line, t.columns.empty() ? 1 : t.columns.back() + t.words.back().size(), "unexpected end of line");
  }
  const std::string& s = t.words[w];
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    throw ParseError(line, t.columns[w], "expected a non-negative integer, found '" + s + "'");
  }
  return static_cast<std::size_t>(std::stoull(s));
}

void expect(const Tokens& t, std::size_t w, const char* word, std::size_t line) {
  if (w >= t.words.size() || t.words[w] != word) {
    std::size_t col = w < t.words.size() ? t.columns[w] : (t.columns.empty() ? 1 : t.columns.back() + t.words.back().size());
    throw ParseError(line, col, std::string("expected '") + word + "'");
  }
}

}  // namespace

Circuit read_circuit(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Tokens> lines;
  std::vector<std::size_t> numbers;
  while (std::getline(in, line)) {
    ++lineno;
    Tokens t = tokenize(line);
    if (t.words.empty() || t.words[0][0] == '#') continue;
    lines.push_back(std::move(t));
    numbers.push_back(lineno);
  }
  if (lines.empty()) throw ParseError(1, 1, "empty circuit file");
  if (lines[0].words.size() != 2 || lines[0].words[0] != "circuit" || lines[0].words[1] != "v1") {
    throw ParseError(numbers[0], 1, "expected header 'circuit v1'");
  }
  if (lines.size() < 2) throw ParseError(numbers[0] + 1, 1, "missing 'inputs' line");
  expect(lines[1], 0, "inputs", numbers[1]);
  Circuit c(to_index(lines[1], 1, numbers[1]));
  bool have_outputs = false;
  for (std::size_t l = 2; l < lines.size(); ++l) {
    const Tokens& t = lines[l];
    const std::size_t ln = numbers[l];
    if (have_outputs) throw ParseError(ln, 1, "content after 'outputs'");
    if (t.words[0] == "outputs") {
      std::vector<NodeId> outs;
      for (std::size_t w = 1; w < t.words.size(); ++w) {
        NodeId o = to_index(t, w, ln);
        if (o >= c.num_nodes()) throw ParseError(ln, t.columns[w], "output references unknown node");
        outs.push_back(o);
      }
      c.set_outputs(std::move(outs));
      have_outputs = true;
      continue;
    }
    expect(t, 0, "gate", ln);
    NodeId id = to_index(t, 1, ln);
    if (id != c.num_nodes()) {
      throw ParseError(ln, t.columns[1], "gate ids must be consecutive from n (expected " +
                                            std::to_string(c.num_nodes()) + ")");
    }
    expect(t, 2, "level", ln);
    std::size_t declared_level = to_index(t, 3, ln);
    expect(t, 4, "in", ln);
    std::size_t w = 5;
    Gate g;
    while (w < t.words.size() && t.words[w] != "kind") {
      NodeId child = to_index(t, w, ln);
      if (child >= id) throw ParseError(ln, t.columns[w], "edge to node " + std::to_string(child) + " breaks acyclicity");
      g.inputs.push_back(child);
      ++w;
    }
    expect(t, w, "kind", ln);
    ++w;
    if (w >= t.words.size()) throw ParseError(ln, t.columns.back() + t.words.back().size(), "missing gate kind");
    const std::string kind = t.words[w];
    const std::size_t kind_col = t.columns[w];
    ++w;
    if (kind == "or") {
      g.kind = GateKind::or_gate;
    } else if (kind == "and") {
      g.kind = GateKind::and_gate;
    } else if (kind == "threshold") {
      g.kind = GateKind::threshold;
      g.threshold = to_index(t, w, ln);
      ++w;
    } else if (kind == "table") {
      g.kind = GateKind::table;
      if (g.inputs.size() > Circuit::kMaxTableFanIn) throw ParseError(ln, kind_col, "table gate fan-in above 20");
      if (w >= t.words.size()) throw ParseError(ln, kind_col, "missing truth table");
      try {
        g.table = BitVec::from_hex(t.words[w], std::size_t{1} << g.inputs.size());
      } catch (const ContractViolation& e) {
        throw ParseError(ln, t.columns[w], e.what());
      }
      ++w;
    } else {
      throw ParseError(ln, kind_col, "unknown gate kind '" + kind + "'");
    }
    if (w < t.words.size() && t.words[w] == "neg") {
      g.negate = true;
      ++w;
    }
    if (w < t.words.size()) throw ParseError(ln, t.columns[w], "unexpected token '" + t.words[w] + "'");
    NodeId added = c.add_gate(std::move(g));
    if (c.level(added) != declared_level) {
      throw ParseError(ln, t.columns[3], "declared level " + std::to_string(declared_level) + " but the edges give " +
                                             std::to_string(c.level(added)));
    }
  }
  if (!have_outputs) throw ParseError(lineno + 1, 1, "missing 'outputs' line");
  return c;
}

}  // namespace mplab::circuits
