#include <doctest.h>

#include <set>
#include <sstream>

#include "mplab/core/bitvec.hpp"
#include "mplab/core/errors.hpp"
#include "mplab/core/instance.hpp"
#include "mplab/core/rng.hpp"
#include "mplab/core/selection.hpp"

using namespace mplab;

TEST_CASE("bitvec string, hex and integer forms round trip") {
  const auto v = BitVec::from_string("1011000010000000011");
  CHECK(v.size() == 19);
  CHECK(v.count() == 6);
  CHECK(BitVec::from_string(v.to_string()) == v);
  CHECK(BitVec::from_hex(v.to_hex(), v.size()) == v);
  CHECK(BitVec::from_uint(0b1101, 4).to_string() == "1011");
  CHECK(BitVec::from_uint(0b1101, 4).to_uint() == 0b1101);

  BitVec m;
  m.append_uint(5, 3);
  m.append_uint(1023, 10);
  m.push_back(true);
  CHECK(m.size() == 14);
  CHECK(m.read_uint(0, 3) == 5);
  CHECK(m.read_uint(3, 10) == 1023);
  CHECK(m.slice(3, 10).to_uint() == 1023);
}

TEST_CASE("bitvec across word boundaries") {
  BitVec v(200);
  for (std::size_t j : {0u, 63u, 64u, 127u, 199u}) v.set(j);
  CHECK(v.ones() == std::vector<std::size_t>{0, 63, 64, 127, 199});
  CHECK(v.slice(60, 10).to_string() == "0001100000");
  CHECK_THROWS_AS(v.test(200), ContractViolation);
}

TEST_CASE("disj against a direct loop") {
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(150);
    BitVec s(n), t(n);
    bool meet = false;
    for (std::size_t j = 0; j < n; ++j) {
      const bool a = rng.bernoulli(0.05), b = rng.bernoulli(0.05);
      s.set(j, a);
      t.set(j, b);
      meet = meet || (a && b);
    }
    CHECK(disj(s, t) == !meet);
  }
  CHECK(disj(BitVec(0), BitVec(0)));
}

TEST_CASE("integer helpers") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(1024) == 10);
  CHECK(bits_for(0) == 1);
  CHECK(bits_for(1) == 1);
  CHECK(bits_for(8) == 4);
  CHECK(default_word_size(4096, 256) == 13);
  CHECK(default_word_size(1, 1) == 2);
}

TEST_CASE("counter rng is addressable and seed dependent") {
  CounterRng a(7, 1), b(7, 1), c(8, 1);
  std::vector<std::uint64_t> seq;
  for (int i = 0; i < 10; ++i) seq.push_back(a.next());
  for (int i = 0; i < 10; ++i) CHECK(b.at(static_cast<std::uint64_t>(i)) == seq[static_cast<std::size_t>(i)]);
  CHECK(c.next() != seq[0]);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.next_open01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("hard instances: parallel sampler matches the serial one") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto a = sample_hard_instance(300, 17, seed);
    const auto b = sample_hard_instance_serial(300, 17, seed);
    CHECK(a == b);
    CHECK(a.tag == kHardTag);
    CHECK(a.gamma == doctest::Approx(hard_gamma(300)));
  }
}

TEST_CASE("hard instance density follows gamma") {
  const auto inst = sample_hard_instance(4096, 64, 5, 0.1);
  std::size_t ones = inst.t.count();
  for (const auto& s : inst.sets) ones += s.count();
  const double bits = 4096.0 * 65.0;
  // Binomial standard deviation is about 150 here.
  CHECK(std::abs(static_cast<double>(ones) - 0.1 * bits) < 1000.0);
}

TEST_CASE("instance codes enumerate the input space") {
  std::set<std::string> seen;
  for (std::uint64_t code = 0; code < 64; ++code) {
    const auto inst = instance_from_code(2, 2, code);
    std::string key;
    for (const auto& s : inst.sets) key += s.to_string();
    key += inst.t.to_string();
    seen.insert(key);
    CHECK(inst.t.to_uint() == (code >> 4));
    CHECK(inst.sets[0].to_uint() == (code & 3));
  }
  CHECK(seen.size() == 64);
}

TEST_CASE("instance text format round trips and reports positions") {
  const auto inst = sample_hard_instance(70, 3, 11, 0.3);
  std::stringstream io;
  write_instance(io, inst);
  CHECK(read_instance(io) == inst);

  std::istringstream bad("multiphase v1\nn 4\nk 1\nfoo bar\n");
  CHECK_THROWS_AS(read_instance(bad), ParseError);
}

TEST_CASE("ordered tuples count and order") {
  CHECK(ordered_tuples(4, 2).size() == 12);
  CHECK(ordered_tuples(5, 3).size() == 60);
  const auto t = ordered_tuples(3, 2);
  CHECK(t.front() == std::vector<std::size_t>{0, 1});
  CHECK(t.back() == std::vector<std::size_t>{2, 1});
}

TEST_CASE("sampled selections are valid and cover every tuple") {
  CounterRng rng(5, 0);
  std::set<std::vector<std::size_t>> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto sel = sample_selection(4, 2, 10, rng);
    CHECK_NOTHROW(sel.validate(4, 10));
    seen.insert(sel.indices);
  }
  CHECK(seen.size() == 12);
}
