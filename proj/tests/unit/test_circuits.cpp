#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "mplab/circuits/circuit.hpp"
#include "mplab/circuits/static_ds.hpp"
#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"

using namespace mplab;
using namespace mplab::circuits;

namespace {

// Recursive evaluation straight from the gate definitions, no topological pass.
bool oracle_value(const Circuit& c, NodeId id, const BitVec& x) {
  if (c.is_input(id)) return x.test(id);
  const Gate& g = c.gate(id);
  std::size_t ones = 0, assignment = 0;
  for (std::size_t j = 0; j < g.inputs.size(); ++j) {
    const bool v = oracle_value(c, g.inputs[j], x);
    ones += v;
    if (v) assignment |= std::size_t{1} << j;
  }
  bool out = false;
  switch (g.kind) {
    case GateKind::table: out = g.table.test(assignment); break;
    case GateKind::or_gate: out = ones > 0; break;
    case GateKind::and_gate: out = ones == g.inputs.size(); break;
    case GateKind::threshold: out = ones >= g.threshold; break;
  }
  return out != g.negate;
}

std::string data_path(const char* name) {
  const char* dir = std::getenv("MPLAB_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

}  // namespace

TEST_CASE("evaluation matches the recursive oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = random_circuit({9, 3, 6, 7, 3}, seed);
    CHECK(c.self_check());
    CHECK(c.depth() == 3);
    CounterRng rng(seed, 0);
    for (int t = 0; t < 30; ++t) {
      const auto x = BitVec::from_uint(rng.below(512), 9);
      const auto out = c.eval(x);
      for (std::size_t o = 0; o < c.outputs().size(); ++o) CHECK(out.test(o) == oracle_value(c, c.outputs()[o], x));
    }
  }
}

TEST_CASE("named circuits") {
  const std::vector<BitVec> a{BitVec::from_string("1010"), BitVec::from_string("0000"), BitVec::from_string("0110")};
  const auto lin = linear_operator_circuit(a);
  const auto nor = disj_circuit(a);
  const auto id = identity_circuit(4);
  for (std::uint64_t v = 0; v < 16; ++v) {
    const auto x = BitVec::from_uint(v, 4);
    CHECK(id.eval(x) == x);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(nor.eval(x).test(i) == disj(a[i], x));
      CHECK(lin.eval(x).test(i) == !disj(a[i], x));
    }
  }
  CHECK(nor.depth() == 1);
}

TEST_CASE("bad gates are rejected") {
  Circuit c(3);
  CHECK_THROWS_AS(c.add_gate({GateKind::or_gate, {3}, {}, 0, false}), ContractViolation);
  CHECK_THROWS_AS(c.add_gate({GateKind::table, {0, 1}, BitVec(3), 0, false}), ContractViolation);
  CHECK(c.add_gate({GateKind::and_gate, {0, 1, 2}, {}, 0, false}) == 3);
}

TEST_CASE("text format round trips and reports positions") {
  const auto c = random_circuit({8, 2, 6, 6, 3}, 7);
  std::stringstream io;
  write_circuit(io, c);
  const auto back = read_circuit(io);
  for (std::uint64_t v = 0; v < 256; ++v) CHECK(back.eval(BitVec::from_uint(v, 8)) == c.eval(BitVec::from_uint(v, 8)));

  std::ifstream good(data_path("depth2.circuit"));
  REQUIRE(good);
  CHECK(read_circuit(good).depth() == 2);

  std::ifstream bad(data_path("corrupted.circuit"));
  REQUIRE(bad);
  try {
    read_circuit(bad);
    FAIL("corrupted circuit parsed");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 10") != std::string::npos);
    CHECK(what.find("acyclicity") != std::string::npos);
  }
}

TEST_CASE("translation: equivalence, probe bound and stored gate count") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto c = random_circuit({8, 1 + seed % 3, 6, 6, 3}, seed);
    for (std::size_t r : {1u, 2u, 4u, 8u, 16u}) {
      const auto v = viola_translate(c, r);
      CHECK(v.stored.size() < r);
      CHECK(v.ds.s == 8 + r);
      const double bound = std::pow(static_cast<double>(c.wires()) / static_cast<double>(r), double(c.depth()));
      CHECK(v.bound == doctest::Approx(bound));
      CHECK(static_cast<double>(v.max_probes) <= std::max(bound, 1.0));
      for (std::uint64_t x = 0; x < 256; x += 3) {
        const auto in = BitVec::from_uint(x, 8);
        const auto out = c.eval(in);
        for (std::size_t o = 0; o < c.outputs().size(); ++o) {
          const auto run = run_static(v.ds, in, o);
          CHECK(run.answer == out.test(o));
          CHECK(run.log.probe_addresses() == v.plans[o]);
        }
      }
    }
  }
}

TEST_CASE("translated structures are non-adaptive, adaptive ones are caught") {
  const auto c = random_circuit({10, 2, 8, 5, 4}, 3);
  const auto v = viola_translate(c, 6);
  for (std::size_t o = 0; o < 4; ++o) CHECK(audit_non_adaptive(v.ds, BitVec(10), o, 32, 9).pass);

  auto adaptive = v.ds;
  adaptive.query = [](std::size_t, const std::function<Word(Address)>& probe) {
    return probe(probe(0) ? 1 : 2) != 0;
  };
  const auto verdict = audit_non_adaptive(adaptive, BitVec(10), 0, 64, 9);
  CHECK_FALSE(verdict.pass);
  CHECK(verdict.probe == 2);
}

TEST_CASE("answer table structure") {
  const std::vector<BitVec> rows{BitVec::from_string("110"), BitVec::from_string("001"), BitVec::from_string("000")};
  const auto problem = static_disj_problem(rows);
  const auto sds = answer_table_ds(problem, 2);
  CHECK(sds.s == 2);
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::size_t i = 0; i < 3; ++i) {
      const auto run = run_static(sds, BitVec::from_uint(x, 3), i);
      CHECK(run.answer == problem.answer(i, BitVec::from_uint(x, 3)));
      CHECK(run.log.probe_addresses().size() == 1);
    }
  CHECK_THROWS(run_static(sds, BitVec(3), 3));
}
