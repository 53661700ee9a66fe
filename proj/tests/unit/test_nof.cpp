#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mplab/cellprobe/schemes.hpp"
#include "mplab/circuits/static_ds.hpp"
#include "mplab/core/errors.hpp"
#include "mplab/core/instance.hpp"
#include "mplab/info/measures.hpp"
#include "mplab/nof/enumerate.hpp"
#include "mplab/nof/protocol.hpp"
#include "mplab/nof/reductions.hpp"
#include "mplab/nof/toy_protocols.hpp"

using namespace mplab;
using namespace mplab::nof;

namespace {

// Alice peeks at T, which her view does not include.
ProtocolSpec cheating_alice(std::size_t n, std::size_t k) {
  ProtocolSpec p = toy::two_party(n, k);
  p.name = "cheating_alice";
  p.alice = [](const PartyView& v) {
    RoundMessage m;
    m.bits.push_back(disj(v.own_set(), *v.t));
    m.halt = true;
    return m;
  };
  return p;
}

// Megan broadcasts T, which she must not see.
ProtocolSpec megan_leaks_t(std::size_t n, std::size_t k) {
  ProtocolSpec p = toy::megan_broadcasts_set(n, k);
  p.name = "megan_leaks_t";
  p.megan = [](const PartyView& v) { return *v.t; };
  p.bob = [](const PartyView& v) {
    RoundMessage m;
    m.bits.push_back(disj(v.own_set(), *v.t));
    m.halt = true;
    return m;
  };
  p.alice = [](const PartyView&) { return RoundMessage{}; };
  return p;
}

}  // namespace

TEST_CASE("toy protocols are correct on every small input") {
  for (const auto& suite : {toy::four_party_suite(2, 2), toy::one_five_suite(2, 2)}) {
    for (const auto& p : suite) {
      for (std::uint64_t code = 0; code < 64; ++code) {
        const auto inst = instance_from_code(2, 2, code);
        for (std::size_t i = 0; i < 2; ++i) CHECK_MESSAGE(run_protocol(p, inst, i).answer == inst.answer(i), p.name);
      }
    }
  }
}

TEST_CASE("constant_one errs exactly when the sets meet") {
  const auto p = toy::constant_one(2, 1);
  const auto inst = make_instance({BitVec::from_string("10")}, BitVec::from_string("11"));
  CHECK(run_protocol(p, inst, 0).answer == true);
  CHECK(inst.answer(0) == false);
}

TEST_CASE("transcript sizes") {
  const auto inst = make_instance({BitVec::from_string("101"), BitVec::from_string("010")}, BitVec::from_string("001"));
  const auto tr = run_protocol(toy::megan_broadcasts_set(3, 2), inst, 0);
  CHECK(tr.megan.size() == 3);
  CHECK(tr.pi_bits() == 4);  // n bits from Megan, one answer bit
  CHECK_FALSE(tr.answer);
  std::ostringstream out;
  write_transcript(out, tr);
  CHECK(out.str().find("answer\t0") != std::string::npos);
}

TEST_CASE("budgets are enforced") {
  auto p = toy::two_party(4, 2);
  p.budgets.round = 3;
  const auto inst = sample_hard_instance(4, 2, 1, 0.5);
  CHECK_THROWS_AS(run_protocol(p, inst, 0), ProtocolCostError);
  auto q = toy::two_party(4, 2);
  q.bob = [](const PartyView&) { return RoundMessage{}; };
  q.alice = [](const PartyView&) { return RoundMessage{}; };
  CHECK_THROWS_AS(run_protocol(q, inst, 0), ProtocolCostError);
}

TEST_CASE("visibility audit: clean protocols pass, peeking players are named") {
  const auto inst = sample_hard_instance(3, 3, 4, 0.5);
  for (const auto& p : toy::four_party_suite(3, 3)) CHECK_MESSAGE(visibility_audit(p, inst, 1, 64, 7).pass(), p.name);
  for (const auto& p : toy::one_five_suite(3, 3)) CHECK_MESSAGE(visibility_audit(p, inst, 1, 64, 7).pass(), p.name);

  const auto rep = visibility_audit(cheating_alice(3, 3), inst, 1, 64, 7);
  REQUIRE_FALSE(rep.pass());
  bool named = false;
  for (const auto& v : rep.violations) named = named || (v.player == "alice" && v.hidden == "T");
  CHECK(named);

  const auto megan = visibility_audit(megan_leaks_t(3, 3), inst, 1, 64, 7);
  REQUIRE_FALSE(megan.pass());
  CHECK(megan.violations.front().player == "megan");
}

TEST_CASE("enumeration: parallel equals serial, mass sums to one") {
  const auto p = toy::forward_xor_advice(2, 2);
  EnumerationConfig cfg{2, 2, 2, 0.3, std::nullopt};
  const auto a = enumerate_protocol(p, cfg);
  const auto b = enumerate_protocol_serial(p, cfg);
  CHECK(a.probs == b.probs);
  CHECK(a.codes == b.codes);
  CHECK(a.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.zero_error);
  CHECK(a.probs.size() == 64u * 2u * 2u);
  CHECK_THROWS_AS(enumerate_protocol(p, {5, 4, 1, std::nullopt, std::nullopt}), RefusedError);
}

TEST_CASE("sparse entropies agree with the dense table") {
  const auto p = toy::forward_first_bit(2, 3);
  const auto o = enumerate_protocol(p, {2, 3, 2, 0.4, std::nullopt});
  const auto j = o.table({{"S"}, {"T"}, {"Pi", "SPrev", "PiMPrev", "Sel"}}, {"S", "T", "Z"});
  CHECK(o.mutual_information({"S"}, {"T"}, {"Pi", "SPrev", "PiMPrev", "Sel"}) ==
        doctest::Approx(info::mutual_information(j, {"S"}, {"T"}, {"Z"})).epsilon(1e-12));
  CHECK(o.entropy({"T"}) == doctest::Approx(2.0 * info::binary_entropy(0.4)));
}

TEST_CASE("low-correlation bounds: hand calculation for the xor-advice protocol") {
  // n = 1, k = 2, p = 1, uniform bits. Index 0 announces the answer itself, so
  // Z reveals S xor T only through U; index 1 reveals S_1 and Bob answers.
  const auto p = toy::forward_xor_advice(1, 2);
  const auto o = enumerate_protocol(p, {1, 2, 1, 0.5, std::nullopt});
  const auto r = verify_goodq_bounds(p, o);
  CHECK(r.all_hold());
  CHECK(r.checks[3].lhs == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.smallcorr == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("low-correlation bounds hold for the suite, including U = T") {
  for (const auto& p : toy::four_party_suite(2, 3)) {
    for (double g : {0.5, 0.1}) {
      const auto r = verify_goodq_bounds(p, {2, 3, 2, g, std::nullopt});
      CHECK_MESSAGE(r.all_hold(), p.name);
      CHECK(std::abs(r.megan_t) < 1e-9);
    }
  }
}

TEST_CASE("Megan's broadcast is independent of T only when she cannot see it") {
  const auto p = megan_leaks_t(2, 2);
  CHECK_THROWS_AS(verify_goodq_bounds(p, {2, 2, 1, 0.5, std::nullopt}), RefusedError);
  const auto o = enumerate_protocol(p, {2, 2, 1, 0.5, std::nullopt});
  CHECK(verify_goodq_bounds(p, o).megan_t > 0.5);
}

TEST_CASE("round elimination: each round is a function of its speaker's view") {
  for (const auto& p : toy::four_party_suite(2, 2)) {
    const auto o = enumerate_protocol(p, {2, 2, 1, 0.3, std::nullopt});
    const auto r = round_elimination_check(o);
    CHECK(r.max_alice < 1e-9);
    CHECK(r.max_bob < 1e-9);
  }
  const auto o = enumerate_protocol(cheating_alice(2, 2), {2, 2, 1, 0.3, std::nullopt});
  CHECK(round_elimination_check(o).max_alice > 1e-3);
}

TEST_CASE("data structure to four-party protocol") {
  for (const auto& ds : cellprobe::shipped_schemes({4, 3, 0})) {
    const auto proto = ds_to_4party(ds);
    for (std::uint64_t code = 0; code < (1u << 16); code += 37) {
      const auto inst = instance_from_code(4, 3, code);
      for (std::size_t i = 0; i < 3; ++i) {
        const auto run = check_reduction_run(ds, proto, inst, i);
        CHECK_MESSAGE(run.ok(), ds.name);
      }
    }
  }
}

TEST_CASE("non semi-adaptive structures are refused") {
  auto ds = cellprobe::ds_store_T({8, 2, 0});
  ds.semi_adaptive = false;
  CHECK_THROWS_AS(ds_to_4party(ds), RefusedError);

  // Reads the updated layer, then memory.
  auto back = cellprobe::ds_count_then_store_T({8, 2, 0});
  const auto inner = back.query;
  back.query = [inner](cellprobe::QueryContext& ctx) {
    (void)ctx.read_delta(0);
    (void)ctx.read_memory(0);
    return inner(ctx);
  };
  CHECK_THROWS_AS(ds_to_4party(back), RefusedError);
}

TEST_CASE("static structure to three-round protocol") {
  std::vector<BitVec> rows{BitVec::from_string("1100"), BitVec::from_string("0011"), BitVec::from_string("0110")};
  const auto problem = circuits::static_disj_problem(rows);
  const auto sds = circuits::answer_table_ds(problem, 4);
  const auto proto = static_ds_to_3round(sds);
  for (std::uint64_t x = 0; x < 16; ++x) {
    const auto inst = make_instance(rows, BitVec::from_uint(x, 4));
    for (std::size_t i = 0; i < 3; ++i) {
      const auto tr = run_protocol(proto, inst, i);
      CHECK(tr.answer == inst.answer(i));
      CHECK(tr.pi_bits() <= static_protocol_bound(sds, 1));
    }
  }

  auto adaptive = sds;
  adaptive.s = 2;
  adaptive.preprocess = [](const BitVec& x) { return std::vector<cellprobe::Word>{x.test(0) ? 1u : 0u, 0}; };
  adaptive.query = [](std::size_t, const std::function<cellprobe::Word(cellprobe::Address)>& probe) {
    return probe(probe(0)) == 0;
  };
  CHECK_THROWS_AS(static_ds_to_3round(adaptive), RefusedError);
}

TEST_CASE("1.5-round protocols wrapped as modified four-party") {
  for (const auto& p : toy::one_five_suite(3, 2)) {
    const auto w = wrap_one_point_five(p);
    CHECK(w.model == Model::four_party_modified);
    for (std::uint64_t code = 0; code < (1u << 9); ++code) {
      const auto inst = instance_from_code(3, 2, code);
      for (std::size_t i = 0; i < 2; ++i) CHECK_MESSAGE(check_simulation(p, w, inst, i).ok(), p.name);
    }
    CHECK(visibility_audit(w, sample_hard_instance(3, 2, 2, 0.5), 0, 32, 3).pass());
  }
}
