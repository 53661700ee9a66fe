#include "mplab/nof/reductions.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <unordered_map>

#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"

namespace mplab::nof {

using cellprobe::Address;
using cellprobe::CellRead;
using cellprobe::DataStructureSpec;
using cellprobe::MemoryModel;
using cellprobe::Phase;
using cellprobe::ProbeLog;
using cellprobe::Word;

namespace {

// Thrown out of a query replay when it reaches a probe the current player
// cannot serve.
struct StopAtDelta {
  Address address;
};

void check_address(Address a, unsigned w) {
  if (w < 64 && a >= (Address{1} << w)) {
    throw HarnessError("address " + std::to_string(a) + " does not fit in a " + std::to_string(w) + "-bit word");
  }
}

class MeganContext final : public cellprobe::QueryContext {
 public:
  MeganContext(std::size_t i, const BitVec& s, const MemoryModel& mem, BitVec& out)
      : QueryContext(i, s, mem.w()), mem_(mem), out_(out) {}
  Word read_memory(Address a) override {
    check_address(a, w());
    const Word v = mem_.read_memory(a);
    out_.append_uint(a, w());
    out_.append_uint(v, w());
    return v;
  }
  CellRead read_delta(Address a) override { throw StopAtDelta{a}; }

 private:
  const MemoryModel& mem_;
  BitVec& out_;
};

class AliceContext final : public cellprobe::QueryContext {
 public:
  AliceContext(std::size_t i, const BitVec& s, unsigned w, const BitVec& megan, const std::vector<BitVec>& prefix)
      : QueryContext(i, s, w), megan_(megan), prefix_(prefix) {}
  Word read_memory(Address a) override {
    const std::size_t pos = 2 * w() * next_memory_;
    if (pos + 2 * w() > megan_.size()) throw HarnessError("query reads memory beyond Megan's broadcast");
    const Address listed = megan_.read_uint(pos, w());
    if (listed != a) throw HarnessError("query replay diverged from Megan's broadcast");
    ++next_memory_;
    return megan_.read_uint(pos + w(), w());
  }
  CellRead read_delta(Address a) override {
    // Bob's replies sit at the odd positions of the prefix.
    const std::size_t reply = 2 * next_delta_ + 1;
    if (reply >= prefix_.size()) throw StopAtDelta{a};
    ++next_delta_;
    const BitVec& r = prefix_[reply];
    if (r.size() != 1 + w()) throw HarnessError("malformed reply from Bob");
    if (!r.test(0)) return std::nullopt;
    return r.read_uint(1, w());
  }

 private:
  const BitVec& megan_;
  const std::vector<BitVec>& prefix_;
  std::size_t next_memory_ = 0;
  std::size_t next_delta_ = 0;
};

class BobUpdateContext final : public cellprobe::UpdateContext {
 public:
  BobUpdateContext(unsigned w, const BitVec& u) : w_(w), u_(u) {}
  unsigned w() const override { return w_; }
  Word read(Address a) override {
    if (auto it = delta_.find(a); it != delta_.end()) return it->second;
    const std::size_t pos = next_ * w_;
    if (pos + w_ > u_.size()) throw HarnessError("update replay needs more words than the advice holds");
    ++next_;
    return u_.read_uint(pos, w_);
  }
  void write(Address a, Word value) override { delta_[a] = value; }
  const std::unordered_map<Address, Word>& delta() const { return delta_; }

 private:
  unsigned w_;
  const BitVec& u_;
  std::size_t next_ = 0;
  std::unordered_map<Address, Word> delta_;
};

}  // namespace

ProtocolSpec ds_to_4party(const DataStructureSpec& ds, std::size_t check_instances, std::uint64_t seed) {
  if (!ds.semi_adaptive) throw RefusedError(ds.name + " is not declared semi-adaptive");
  for (std::size_t c = 0; c < check_instances; ++c) {
    const auto inst = sample_hard_instance(ds.n, ds.k, splitmix64(seed + c), 0.5);
    const auto run = cellprobe::run_multiphase(ds, inst);
    for (const auto& q : run.queries) {
      const auto verdict = cellprobe::enforce_semi_adaptive(q.log, ds.budgets);
      if (!verdict.pass) {
        throw RefusedError(ds.name + " is not semi-adaptive (query " + std::to_string(q.index) + ", probe " +
                           std::to_string(verdict.entry) + "): " + verdict.reason);
      }
    }
  }

  auto shared = std::make_shared<const DataStructureSpec>(ds);
  const unsigned w = ds.w;
  ProtocolSpec proto;
  proto.name = "ds_to_4party(" + ds.name + ")";
  proto.model = Model::four_party;
  proto.n = ds.n;
  proto.k = ds.k;
  proto.budgets.rounds = 2 * ds.budgets.t2 + 2;
  proto.budgets.round = w + 1;

  proto.charlie = [shared, w](const PartyView& v) {
    const auto inst = make_instance(*v.sets, *v.t);
    const auto run = cellprobe::run_multiphase(*shared, inst, {});
    BitVec u;
    for (Word word : run.phase2_memory_words) u.append_uint(word, w);
    return u;
  };

  proto.megan = [shared](const PartyView& v) {
    MemoryModel mem(shared->w, shared->address_space);
    ProbeLog log;
    {
      cellprobe::MemoryUpdateContext ctx(mem, log);
      shared->preprocess(*v.sets, ctx);
    }
    mem.begin_phase(Phase::II);
    mem.begin_phase(Phase::III);
    BitVec out;
    MeganContext ctx(v.index, v.own_set(), mem, out);
    try {
      shared->query(ctx);
    } catch (const StopAtDelta&) {
    }
    return out;
  };

  proto.alice = [shared, w](const PartyView& v) {
    AliceContext ctx(v.index, v.own_set(), w, *v.megan, *v.prefix);
    RoundMessage m;
    try {
      m.bits.push_back(shared->query(ctx));
      m.halt = true;
    } catch (const StopAtDelta& stop) {
      check_address(stop.address, w);
      m.bits.append_uint(stop.address, w);
    }
    return m;
  };

  proto.bob = [shared, w](const PartyView& v) {
    BobUpdateContext ctx(w, *v.u);
    shared->update(*v.t, ctx);
    const BitVec& ask = v.prefix->back();
    if (ask.size() != w) throw HarnessError("Bob expected a " + std::to_string(w) + "-bit address");
    const Address a = ask.read_uint(0, w);
    RoundMessage m;
    auto it = ctx.delta().find(a);
    m.bits.push_back(it != ctx.delta().end());
    m.bits.append_uint(it != ctx.delta().end() ? it->second : 0, w);
    return m;
  };
  return proto;
}

ReductionRun check_reduction_run(const DataStructureSpec& ds, const ProtocolSpec& proto,
                                 const MultiphaseInstance& inst, std::size_t i) {
  ReductionRun r;
  const auto run = cellprobe::run_multiphase(ds, inst, {i});
  const auto& q = run.queries.at(0);
  r.ds_answer = q.answer;
  r.tq = q.log.tq();
  r.phase2_probes = run.phase2_memory_reads + run.phase2_writes;
  r.t_u = static_cast<double>(r.phase2_probes) / static_cast<double>(inst.n);
  r.transcript = run_protocol(proto, inst, i);
  r.answers_match = r.transcript.answer == r.ds_answer;
  r.pi_bound = 4 * std::max<std::size_t>(1, r.tq) * ds.w;
  r.pi_ok = r.transcript.pi_bits() <= r.pi_bound;
  r.u_bound = r.t_u * static_cast<double>(inst.n) * ds.w;
  r.u_ok = static_cast<double>(r.transcript.u.size()) <= r.u_bound + 1e-9;
  return r;
}

// ---------------------------------------------------------------------------

std::size_t static_protocol_bound(const circuits::StaticDS& sds, std::size_t probes) {
  return 2 * probes * sds.w + 1;
}

ProtocolSpec static_ds_to_3round(const circuits::StaticDS& sds, std::size_t perturbations, std::uint64_t seed) {
  CounterRng rng(seed, 0x3a0dULL);
  for (std::size_t i = 0; i < sds.k; ++i) {
    BitVec x(sds.n);
    for (std::size_t j = 0; j < sds.n; ++j) x.set(j, rng.next() & 1u);
    const auto verdict = circuits::audit_non_adaptive(sds, x, i, perturbations, splitmix64(seed + i));
    if (!verdict.pass) {
      throw RefusedError(sds.name + " is adaptive: query " + std::to_string(i) + ", probe " +
                         std::to_string(verdict.probe) + " depends on the memory contents");
    }
  }

  auto shared = std::make_shared<const circuits::StaticDS>(sds);
  const unsigned w = sds.w;
  const unsigned aw = ceil_log2(std::max<std::size_t>(sds.s, 1));
  ProtocolSpec proto;
  proto.name = "static_ds_to_3round(" + sds.name + ")";
  proto.model = Model::three_party_restricted;
  proto.n = sds.n;
  proto.k = sds.k;
  proto.budgets.rounds = 3;

  proto.charlie = [shared, w](const PartyView& v) {
    BitVec u;
    for (Word cell : shared->preprocess(*v.t)) u.append_uint(cell, w);
    return u;
  };
  // Addresses do not depend on the contents, so running on a zero image gives the plan.
  auto plan = [shared](std::size_t i) {
    const std::vector<Word> zeros(shared->s, 0);
    return circuits::run_static(*shared, zeros, i).log.probe_addresses();
  };
  proto.alice = [shared, w, aw, plan](const PartyView& v) {
    const auto addresses = plan(v.index);
    RoundMessage m;
    if (v.prefix->empty()) {
      for (Address a : addresses) m.bits.append_uint(a, aw);
      return m;
    }
    const BitVec& contents = v.prefix->at(1);
    std::map<Address, Word> seen;
    for (std::size_t p = 0; p < addresses.size(); ++p) {
      seen[addresses[p]] = contents.read_uint(aw == 0 ? 0 : p * w, w);
    }
    auto probe = [&](Address a) -> Word {
      auto it = seen.find(a);
      if (it == seen.end()) throw HarnessError("query probed an address outside its plan");
      return it->second;
    };
    m.bits.push_back(shared->query(v.index, probe));
    m.halt = true;
    return m;
  };
  proto.bob = [w, aw](const PartyView& v) {
    const BitVec& ask = v.prefix->at(0);
    RoundMessage m;
    const std::size_t count = aw == 0 ? 0 : ask.size() / aw;
    auto emit = [&](Address a) {
      if ((a + 1) * w > v.u->size()) throw HarnessError("probe outside the memory image");
      m.bits.append_uint(v.u->read_uint(a * w, w), w);
    };
    if (aw == 0) {
      // A single cell: every probe goes to address 0; the plan length is not
      // visible to Bob, so he sends that cell once.
      emit(0);
    } else {
      for (std::size_t p = 0; p < count; ++p) emit(ask.read_uint(p * aw, aw));
    }
    return m;
  };
  return proto;
}

// ---------------------------------------------------------------------------

ProtocolSpec wrap_one_point_five(const ProtocolSpec& inner) {
  if (inner.model != Model::one_point_five_round) throw ContractViolation("wrap_one_point_five needs a 1.5-round protocol");
  auto shared = std::make_shared<const ProtocolSpec>(inner);
  ProtocolSpec proto;
  proto.name = "modified(" + inner.name + ")";
  proto.model = Model::four_party_modified;
  proto.n = inner.n;
  proto.k = inner.k;
  proto.budgets.rounds = 2;
  proto.charlie = inner.charlie;
  proto.charlie_to_megan = [shared](const PartyView& v) {
    BitVec u = shared->charlie ? shared->charlie(v) : BitVec();
    PartyView fv = v;
    fv.u = &u;
    return shared->bob_forward ? shared->bob_forward(fv) : BitVec();
  };
  proto.megan = [shared](const PartyView& v) {
    BitVec out = *v.u_prime;
    if (shared->alice_reply) out.append(shared->alice_reply(v));
    return out;
  };
  proto.alice = [](const PartyView&) { return RoundMessage{}; };
  proto.bob = [shared](const PartyView& v) {
    const BitVec forwarded = shared->bob_forward ? shared->bob_forward(v) : BitVec();
    if (forwarded.size() > v.megan->size()) throw HarnessError("Megan's broadcast is shorter than U'");
    std::vector<BitVec> prefix{v.megan->slice(forwarded.size(), v.megan->size() - forwarded.size())};
    PartyView bv = v;
    bv.u_prime = &forwarded;
    bv.prefix = &prefix;
    return shared->bob(bv);
  };
  return proto;
}

SimulationCheck check_simulation(const ProtocolSpec& direct, const ProtocolSpec& wrapped,
                                 const MultiphaseInstance& inst, std::size_t i) {
  const Transcript a = run_protocol(direct, inst, i);
  const Transcript b = run_protocol(wrapped, inst, i);
  SimulationCheck c;
  c.answers_match = a.answer == b.answer;
  c.u_prime_bits = a.u_prime.size();
  c.reply_bits = a.rounds.at(0).size();
  c.c = std::max(c.u_prime_bits, c.reply_bits) + 1;
  c.megan_bits = b.megan.size();
  c.megan_ok = c.megan_bits <= 2 * c.c;
  return c;
}

}  // namespace mplab::nof
