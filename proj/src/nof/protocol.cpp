#include "mplab/nof/protocol.hpp"

#include <algorithm>
#include <ostream>

#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"

namespace mplab::nof {

const char* to_string(Model m) {
  switch (m) {
    case Model::three_party_restricted: return "three-party-restricted";
    case Model::four_party: return "four-party";
    case Model::four_party_modified: return "four-party-modified";
    case Model::one_point_five_round: return "one-point-five-round";
  }
  return "?";
}

std::size_t Transcript::round_bits() const {
  std::size_t total = 0;
  for (const auto& r : rounds) total += r.size();
  return total;
}

std::size_t Transcript::pi_bits() const {
  std::size_t total = megan.size() + round_bits();
  if (model == Model::one_point_five_round || model == Model::four_party_modified) total += u_prime.size();
  return total;
}

BitVec Transcript::effective_megan() const {
  if (model == Model::three_party_restricted) return rounds.empty() ? BitVec() : rounds.front();
  return megan;
}

std::vector<BitVec> Transcript::effective_rounds() const {
  if (model == Model::three_party_restricted) {
    return rounds.empty() ? std::vector<BitVec>{} : std::vector<BitVec>(rounds.begin() + 1, rounds.end());
  }
  if (model == Model::one_point_five_round) {
    std::vector<BitVec> out{u_prime};
    out.insert(out.end(), rounds.begin(), rounds.end());
    return out;
  }
  return rounds;
}

bool Transcript::alice_speaks(std::size_t r) const {
  if (model == Model::three_party_restricted || model == Model::one_point_five_round) return r % 2 == 1;
  return r % 2 == 0;
}

namespace {

BitVec call(const MessageFn& f, const PartyView& v) { return f ? f(v) : BitVec(); }

void check_budget(const std::string& what, std::size_t bits, std::size_t budget) {
  if (bits > budget) {
    throw ProtocolCostError(what + " has " + std::to_string(bits) + " bits, budget " + std::to_string(budget));
  }
}

}  // namespace

Transcript run_protocol(const ProtocolSpec& proto, const MultiphaseInstance& inst, std::size_t i) {
  if (proto.n != inst.n || proto.k != inst.k) {
    throw ContractViolation("protocol " + proto.name + " is for n=" + std::to_string(proto.n) +
                            ", k=" + std::to_string(proto.k));
  }
  if (i >= inst.k) throw ContractViolation("index " + std::to_string(i) + " out of range");
  const MessageBudgets& b = proto.budgets;

  Transcript tr;
  tr.model = proto.model;
  tr.index = i;
  PartyView view;
  view.n = inst.n;
  view.k = inst.k;
  view.sets = &inst.sets;
  view.t = &inst.t;
  view.index = i;
  view.u = &tr.u;
  view.u_prime = &tr.u_prime;
  view.megan = &tr.megan;
  view.prefix = &tr.rounds;

  tr.u = call(proto.charlie, view);
  check_budget("U", tr.u.size(), b.u);

  if (proto.model == Model::one_point_five_round) {
    tr.u_prime = call(proto.bob_forward, view);
    check_budget("U'", tr.u_prime.size(), b.u_prime);
    tr.rounds.push_back(call(proto.alice_reply, view));
    check_budget("Alice's reply", tr.rounds.back().size(), b.round);
    if (!proto.bob) throw ContractViolation("1.5-round protocol needs a bob function");
    RoundMessage m = proto.bob(view);
    if (!m.halt || m.bits.empty()) throw ProtocolCostError("Bob must answer in the final round");
    check_budget("Bob's answer", m.bits.size(), b.round);
    tr.answer = m.bits.test(m.bits.size() - 1);
    tr.rounds.push_back(std::move(m.bits));
    check_budget("Pi", tr.pi_bits(), b.total);
    return tr;
  }

  if (proto.model == Model::four_party_modified) {
    tr.u_prime = call(proto.charlie_to_megan, view);
    check_budget("U'", tr.u_prime.size(), b.u_prime);
  }
  if (proto.model != Model::three_party_restricted) {
    tr.megan = call(proto.megan, view);
    check_budget("Pi^M", tr.megan.size(), b.megan);
  }

  for (std::size_t r = 0; r < b.rounds; ++r) {
    const RoundFn& f = (r % 2 == 0) ? proto.alice : proto.bob;
    RoundMessage m = f ? f(view) : RoundMessage{};
    const std::string who = std::string(r % 2 == 0 ? "Alice" : "Bob") + " round " + std::to_string(r + 1);
    check_budget(who, m.bits.size(), b.round);
    const bool halt = m.halt;
    if (halt && m.bits.empty()) throw ProtocolCostError(who + " halted without an answer bit");
    if (halt) tr.answer = m.bits.test(m.bits.size() - 1);
    tr.rounds.push_back(std::move(m.bits));
    check_budget("Pi", tr.pi_bits(), b.total);
    if (halt) return tr;
  }
  throw ProtocolCostError("protocol " + proto.name + " did not halt within " + std::to_string(b.rounds) + " rounds");
}

void write_transcript(std::ostream& out, const Transcript& tr) {
  auto line = [&](const std::string& name, const BitVec& v) {
    out << name << '\t' << v.size() << '\t' << (v.empty() ? "-" : v.to_hex()) << '\n';
  };
  out << "model\t" << to_string(tr.model) << "\nindex\t" << tr.index << '\n';
  line("U", tr.u);
  if (tr.model == Model::four_party_modified || tr.model == Model::one_point_five_round) line("U'", tr.u_prime);
  if (tr.model != Model::three_party_restricted && tr.model != Model::one_point_five_round) line("Pi^M", tr.megan);
  for (std::size_t r = 0; r < tr.rounds.size(); ++r) {
    line("round " + std::to_string(r + 1), tr.rounds[r]);
  }
  out << "answer\t" << (tr.answer ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Visibility audit

namespace {

enum class Hidden { index, sets_all, sets_other, t, u, u_prime };

const char* hidden_name(Hidden h) {
  switch (h) {
    case Hidden::index: return "index";
    case Hidden::sets_all: return "S";
    case Hidden::sets_other: return "S_other";
    case Hidden::t: return "T";
    case Hidden::u: return "U";
    case Hidden::u_prime: return "U_prime";
  }
  return "?";
}

struct Constraint {
  std::string player;
  std::size_t round = 0;
  std::size_t player_round = 0;
  Hidden hidden;
  std::function<RoundMessage(const PartyView&)> message;
};

BitVec random_bits(std::size_t len, CounterRng& rng) {
  BitVec v(len);
  for (std::size_t j = 0; j < len; ++j) v.set(j, rng.next() & 1u);
  return v;
}

std::size_t first_difference(const RoundMessage& a, const RoundMessage& b) {
  const std::size_t common = std::min(a.bits.size(), b.bits.size());
  for (std::size_t j = 0; j < common; ++j) {
    if (a.bits.test(j) != b.bits.test(j)) return j;
  }
  return common;
}

bool same(const RoundMessage& a, const RoundMessage& b) { return a.halt == b.halt && a.bits == b.bits; }

RoundMessage one_shot(const MessageFn& f, const PartyView& v) { return {call(f, v), false}; }

}  // namespace

AuditReport visibility_audit(const ProtocolSpec& proto, const MultiphaseInstance& inst, std::size_t i,
                             std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ContractViolation("visibility audit needs at least one trial");
  const Transcript tr = run_protocol(proto, inst, i);

  std::vector<Constraint> cons;
  auto add = [&](std::string player, std::size_t round, std::size_t player_round, std::vector<Hidden> hidden,
                 std::function<RoundMessage(const PartyView&)> f) {
    for (Hidden h : hidden) cons.push_back({player, round, player_round, h, f});
  };
  const Model m = proto.model;
  if (proto.charlie) add("charlie", 0, 0, {Hidden::index}, [&](const PartyView& v) { return one_shot(proto.charlie, v); });
  if (m == Model::four_party_modified && proto.charlie_to_megan) {
    add("charlie_to_megan", 0, 0, {Hidden::index},
        [&](const PartyView& v) { return one_shot(proto.charlie_to_megan, v); });
  }
  if ((m == Model::four_party || m == Model::four_party_modified) && proto.megan) {
    add("megan", 0, 0, {Hidden::t, Hidden::u}, [&](const PartyView& v) { return one_shot(proto.megan, v); });
  }
  if (m == Model::one_point_five_round) {
    if (proto.bob_forward) {
      add("bob_forward", 0, 0, {Hidden::index, Hidden::sets_all, Hidden::t},
          [&](const PartyView& v) { return one_shot(proto.bob_forward, v); });
    }
    if (proto.alice_reply) {
      add("alice_reply", 1, 1, {Hidden::t, Hidden::u}, [&](const PartyView& v) { return one_shot(proto.alice_reply, v); });
    }
    add("bob", 2, 1, {Hidden::sets_all}, [&](const PartyView& v) { return proto.bob(v); });
  } else {
    for (std::size_t r = 0; r < tr.rounds.size(); ++r) {
      const bool alice = r % 2 == 0;
      const RoundFn& f = alice ? proto.alice : proto.bob;
      if (!f) continue;
      std::vector<Hidden> hidden;
      if (alice) {
        if (m == Model::three_party_restricted && r == 0) {
          hidden = {Hidden::t, Hidden::u};
        } else {
          hidden = {Hidden::sets_other, Hidden::t, Hidden::u};
          if (m == Model::four_party_modified) hidden.push_back(Hidden::u_prime);
        }
      } else {
        hidden = {Hidden::sets_all};
        if (m == Model::four_party_modified) hidden.push_back(Hidden::u_prime);
      }
      add(alice ? "alice" : "bob", r + 1, r / 2 + 1, hidden, [&f](const PartyView& v) { return f(v); });
    }
  }

  AuditReport report;
  report.protocol = proto.name;
  report.constraints = cons.size();
  report.trials = trials;

  for (std::size_t c = 0; c < cons.size(); ++c) {
    const Constraint& con = cons[c];
    // The declared inputs as they stood when the message was sent.
    std::vector<BitVec> prefix;
    if (con.round > 0) {
      const std::size_t upto = std::min(con.round - 1, tr.rounds.size());
      prefix.assign(tr.rounds.begin(), tr.rounds.begin() + static_cast<std::ptrdiff_t>(upto));
    }
    PartyView base;
    base.n = inst.n;
    base.k = inst.k;
    base.sets = &inst.sets;
    base.t = &inst.t;
    base.index = i;
    base.u = &tr.u;
    base.u_prime = &tr.u_prime;
    base.megan = &tr.megan;
    base.prefix = &prefix;
    const RoundMessage reference = con.message(base);

    for (std::size_t trial = 0; trial < trials; ++trial) {
      const std::uint64_t draw_seed = splitmix64(seed ^ splitmix64((c << 32) + trial));
      CounterRng rng(draw_seed, 0);
      std::vector<BitVec> sets = inst.sets;
      BitVec t = inst.t, u = tr.u, u_prime = tr.u_prime;
      PartyView v = base;
      switch (con.hidden) {
        case Hidden::index:
          if (inst.k < 2) continue;
          v.index = static_cast<std::size_t>(rng.below(inst.k - 1));
          if (v.index >= i) ++v.index;
          break;
        case Hidden::sets_all:
          for (auto& s : sets) s = random_bits(inst.n, rng);
          v.sets = &sets;
          break;
        case Hidden::sets_other:
          for (std::size_t j = 0; j < sets.size(); ++j) {
            if (j != i) sets[j] = random_bits(inst.n, rng);
          }
          v.sets = &sets;
          break;
        case Hidden::t:
          t = random_bits(inst.n, rng);
          v.t = &t;
          break;
        case Hidden::u:
          u = random_bits(tr.u.size(), rng);
          v.u = &u;
          break;
        case Hidden::u_prime:
          u_prime = random_bits(tr.u_prime.size(), rng);
          v.u_prime = &u_prime;
          break;
      }
      AuditViolation viol{con.player, hidden_name(con.hidden), con.round, con.player_round, trial + 1, draw_seed, 0, ""};
      try {
        const RoundMessage got = con.message(v);
        if (same(got, reference)) continue;
        viol.diff_position = first_difference(got, reference);
        viol.detail = got.halt != reference.halt && got.bits == reference.bits ? "halt flag changed" : "message changed";
      } catch (const std::exception& e) {
        viol.detail = std::string("message function failed on the counterfactual input: ") + e.what();
      }
      report.violations.push_back(std::move(viol));
      break;
    }
  }
  return report;
}

void write_audit_report(std::ostream& out, const AuditReport& report) {
  out << "audit\t" << report.protocol << "\nconstraints\t" << report.constraints << "\ntrials\t" << report.trials
      << "\nviolations\t" << report.violations.size() << '\n';
  for (const auto& v : report.violations) {
    out << "violation\tplayer=" << v.player << "\thidden=" << v.hidden << "\tround=" << v.round
        << "\tplayer_round=" << v.player_round << "\ttrial=" << v.trial << "\tseed=" << v.seed
        << "\tdiff=" << v.diff_position << "\t" << v.detail << '\n';
  }
}

}  // namespace mplab::nof
