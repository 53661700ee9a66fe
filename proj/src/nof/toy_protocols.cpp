#include "mplab/nof/toy_protocols.hpp"

#include "mplab/cellprobe/schemes.hpp"
#include "mplab/core/errors.hpp"

namespace mplab::nof::toy {

namespace {

ProtocolSpec base(const char* name, Model m, std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw ContractViolation("toy protocols need n, k >= 1");
  ProtocolSpec p;
  p.name = name;
  p.model = m;
  p.n = n;
  p.k = k;
  return p;
}

RoundMessage answer(bool bit) {
  RoundMessage m;
  m.bits.push_back(bit);
  m.halt = true;
  return m;
}

RoundMessage say(BitVec bits) { return {std::move(bits), false}; }

}  // namespace

ProtocolSpec megan_broadcasts_set(std::size_t n, std::size_t k) {
  auto p = base("megan_broadcasts_set", Model::four_party, n, k);
  p.megan = [](const PartyView& v) { return v.own_set(); };
  p.alice = [](const PartyView&) { return RoundMessage{}; };
  p.bob = [](const PartyView& v) { return answer(disj(*v.megan, *v.t)); };
  return p;
}

ProtocolSpec two_party(std::size_t n, std::size_t k) {
  auto p = base("two_party", Model::four_party, n, k);
  p.alice = [](const PartyView& v) { return say(v.own_set()); };
  p.bob = [](const PartyView& v) { return answer(disj(v.prefix->at(0), *v.t)); };
  return p;
}

ProtocolSpec advice_equals_t(std::size_t n, std::size_t k) {
  auto p = base("advice_equals_t", Model::four_party, n, k);
  p.charlie = [](const PartyView& v) { return *v.t; };
  p.alice = [](const PartyView& v) { return say(v.own_set()); };
  p.bob = [](const PartyView& v) { return answer(disj(v.prefix->at(0), *v.u)); };
  return p;
}

ProtocolSpec constant_one(std::size_t n, std::size_t k) {
  auto p = base("constant_one", Model::four_party, n, k);
  p.alice = [](const PartyView&) { return RoundMessage{}; };
  p.bob = [](const PartyView&) { return answer(true); };
  return p;
}

ProtocolSpec forward_first_bit(std::size_t n, std::size_t k) {
  auto p = base("forward_first_bit", Model::four_party, n, k);
  p.charlie = [](const PartyView& v) { return v.t->slice(0, 1); };
  p.alice = [](const PartyView& v) {
    if (v.prefix->empty()) return RoundMessage{};
    return say(v.own_set());
  };
  p.bob = [](const PartyView& v) {
    if (v.prefix->size() == 1) return say(*v.u);
    return answer(disj(v.prefix->at(2), *v.t));
  };
  return p;
}

ProtocolSpec forward_xor_advice(std::size_t n, std::size_t k) {
  auto p = base("forward_xor_advice", Model::four_party, n, k);
  p.charlie = [](const PartyView& v) {
    BitVec u = v.set(0);
    for (std::size_t j = 0; j < u.size(); ++j) u.set(j, u.test(j) != v.t->test(j));
    return u;
  };
  p.alice = [](const PartyView& v) {
    if (v.prefix->empty()) return RoundMessage{};
    if (v.index == 0) {
      // S_1 xor U recovers T.
      const BitVec& u = v.prefix->at(1);
      BitVec t = v.own_set();
      for (std::size_t j = 0; j < t.size(); ++j) t.set(j, t.test(j) != u.test(j));
      return answer(disj(v.own_set(), t));
    }
    return say(v.own_set());
  };
  p.bob = [](const PartyView& v) {
    if (v.prefix->size() == 1) return say(*v.u);
    return answer(disj(v.prefix->at(2), *v.t));
  };
  return p;
}

std::vector<ProtocolSpec> four_party_suite(std::size_t n, std::size_t k) {
  return {megan_broadcasts_set(n, k), two_party(n, k), advice_equals_t(n, k), forward_first_bit(n, k),
          forward_xor_advice(n, k)};
}

ProtocolSpec one_five_forward_all(std::size_t n, std::size_t k) {
  auto p = base("forward_all", Model::one_point_five_round, n, k);
  p.charlie = [](const PartyView& v) { return *v.t; };
  p.bob_forward = [](const PartyView& v) { return *v.u; };
  p.alice_reply = [](const PartyView& v) {
    BitVec r;
    r.push_back(disj(v.own_set(), *v.u_prime));
    return r;
  };
  p.bob = [](const PartyView& v) { return answer(v.prefix->at(0).test(0)); };
  return p;
}

ProtocolSpec one_five_forward_none(std::size_t n, std::size_t k) {
  auto p = base("forward_none", Model::one_point_five_round, n, k);
  p.charlie = [](const PartyView& v) { return *v.t; };
  p.bob_forward = [](const PartyView&) { return BitVec(); };
  p.alice_reply = [](const PartyView& v) { return v.own_set(); };
  p.bob = [](const PartyView& v) { return answer(disj(v.prefix->at(0), *v.u)); };
  return p;
}

ProtocolSpec one_five_forward_prefix(std::size_t n, std::size_t k) {
  auto p = base("forward_prefix", Model::one_point_five_round, n, k);
  const std::size_t half = n / 2;
  p.charlie = [](const PartyView& v) { return *v.t; };
  p.bob_forward = [half](const PartyView& v) { return v.u->slice(0, half); };
  p.alice_reply = [half, n](const PartyView& v) {
    BitVec r;
    r.push_back(disj(v.own_set().slice(0, half), *v.u_prime));
    r.append(v.own_set().slice(half, n - half));
    return r;
  };
  p.bob = [half, n](const PartyView& v) {
    const BitVec& r = v.prefix->at(0);
    return answer(r.test(0) && disj(r.slice(1, n - half), v.t->slice(half, n - half)));
  };
  return p;
}

ProtocolSpec one_five_sqrt_style(std::size_t n, std::size_t k) {
  auto p = base("sqrt_style", Model::one_point_five_round, n, k);
  const auto advice = cellprobe::explicit_t_advice();
  const unsigned pw = std::max(1u, ceil_log2(n));
  p.charlie = [advice](const PartyView& v) { return advice.encode(*v.t); };
  p.bob_forward = [advice, n](const PartyView& v) {
    const BitVec header = v.u->slice(0, advice.header_bits(n));
    return v.u->slice(0, advice.total_bits(header, n));
  };
  // Reply layout: [tag:2] then the answer bit (tag 0), candidate positions
  // (tag 1), or S_i itself (tag 2).
  p.alice_reply = [advice, pw](const PartyView& v) {
    const auto d = advice.decode(*v.u_prime, v.index, v.own_set());
    BitVec r;
    if (d.answer) {
      r.append_uint(0, 2);
      r.push_back(*d.answer);
    } else if (!d.fallback) {
      r.append_uint(1, 2);
      for (std::size_t c : d.candidates) r.append_uint(c, pw);
    } else {
      r.append_uint(2, 2);
      r.append(v.own_set());
    }
    return r;
  };
  p.bob = [pw, n](const PartyView& v) {
    const BitVec& r = v.prefix->at(0);
    switch (r.read_uint(0, 2)) {
      case 0: return answer(r.test(2));
      case 1: {
        for (std::size_t pos = 2; pos + pw <= r.size(); pos += pw) {
          if (v.t->test(r.read_uint(pos, pw))) return answer(false);
        }
        return answer(true);
      }
      default: return answer(disj(r.slice(2, n), *v.t));
    }
  };
  return p;
}

std::vector<ProtocolSpec> one_five_suite(std::size_t n, std::size_t k) {
  return {one_five_forward_all(n, k), one_five_forward_none(n, k), one_five_forward_prefix(n, k),
          one_five_sqrt_style(n, k)};
}

}  // namespace mplab::nof::toy
