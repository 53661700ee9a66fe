#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "mplab/core/bitvec.hpp"
#include "mplab/core/instance.hpp"

namespace mplab::nof {

enum class Model { three_party_restricted, four_party, four_party_modified, one_point_five_round };

const char* to_string(Model m);

/// Everything a message function may be handed. Every field is filled in on
/// every call; which of them a player is allowed to depend on is fixed by the
/// model and checked by visibility_audit, not by hiding data.
struct PartyView {
  std::size_t n = 0;
  std::size_t k = 0;
  const std::vector<BitVec>* sets = nullptr;
  const BitVec* t = nullptr;
  std::size_t index = 0;
  const BitVec* u = nullptr;
  const BitVec* u_prime = nullptr;
  const BitVec* megan = nullptr;
  const std::vector<BitVec>* prefix = nullptr;  // Alice/Bob rounds spoken so far

  const BitVec& set(std::size_t j) const { return sets->at(j); }
  const BitVec& own_set() const { return sets->at(index); }
};

struct RoundMessage {
  BitVec bits;
  bool halt = false;  // the final bit of a halting round is the answer
};

using MessageFn = std::function<BitVec(const PartyView&)>;
using RoundFn = std::function<RoundMessage(const PartyView&)>;

struct MessageBudgets {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
  std::size_t u = kUnbounded;
  std::size_t u_prime = kUnbounded;
  std::size_t megan = kUnbounded;
  std::size_t round = kUnbounded;  // per Alice/Bob round
  std::size_t total = kUnbounded;  // |Pi_i|
  std::size_t rounds = 64;
};

/// Declared inputs per model:
///   charlie           S, T                      (never i)
///   charlie_to_megan  S, T                      (modified model)
///   megan             S, i  [, U']              (never T or U)
///   alice             S_i, i, Pi^M, prefix      (3-party restricted: the first
///                                                round may read all of S)
///   bob               T, i, U, Pi^M, prefix
///   bob_forward       U                         (1.5-round: independent of i)
///   alice_reply       S, i, U'                  (1.5-round)
/// Missing callables send the empty string. In the 1.5-round model the
/// conversation is U' (Bob to Alice), alice_reply, then a halting bob round.
struct ProtocolSpec {
  std::string name;
  Model model = Model::four_party;
  std::size_t n = 0;
  std::size_t k = 0;
  MessageFn charlie;
  MessageFn charlie_to_megan;
  MessageFn megan;
  RoundFn alice;
  RoundFn bob;
  MessageFn bob_forward;
  MessageFn alice_reply;
  MessageBudgets budgets;
};

struct Transcript {
  Model model = Model::four_party;
  std::size_t index = 0;
  BitVec u;
  BitVec u_prime;
  BitVec megan;
  std::vector<BitVec> rounds;  // alternating, Alice first
  bool answer = false;

  /// |Pi_i|: Megan's broadcast plus every Alice/Bob round. U' counts as well
  /// in the modified and 1.5-round models.
  std::size_t pi_bits() const;
  std::size_t round_bits() const;
  /// In the restricted 3-party model Alice's first round plays Megan's part.
  BitVec effective_megan() const;
  std::vector<BitVec> effective_rounds() const;
  /// Who speaks effective round r (0-based).
  bool alice_speaks(std::size_t r) const;

  bool operator==(const Transcript&) const = default;
};

/// Throws ProtocolCostError on a budget overflow or when nobody halts within
/// budgets.rounds rounds, ContractViolation on shape mismatches.
Transcript run_protocol(const ProtocolSpec& proto, const MultiphaseInstance& inst, std::size_t i);

/// One line per message: `<name>\t<bits>\t<hex>`, then `answer\t<0|1>`.
void write_transcript(std::ostream& out, const Transcript& tr);

struct AuditViolation {
  std::string player;        // charlie, charlie_to_megan, megan, alice, bob, bob_forward, alice_reply
  std::string hidden;        // resampled input: index, S, S_other, T, U, U_prime
  std::size_t round = 0;     // 1-based position in the Alice/Bob sequence, 0 for one-shot messages
  std::size_t player_round = 0;  // 1-based count of this player's own rounds
  std::size_t trial = 0;     // 1-based
  std::uint64_t seed = 0;    // seed of the counterfactual draw
  std::size_t diff_position = 0;  // first differing bit
  std::string detail;
};

struct AuditReport {
  std::string protocol;
  std::size_t constraints = 0;
  std::size_t trials = 0;
  std::vector<AuditViolation> violations;  // at most one per constraint
  bool pass() const { return violations.empty(); }
};

/// Replays each message with one hidden input redrawn uniformly at random and
/// every declared input held fixed; any change in the message is a violation.
AuditReport visibility_audit(const ProtocolSpec& proto, const MultiphaseInstance& inst, std::size_t i,
                             std::size_t trials, std::uint64_t seed);

void write_audit_report(std::ostream& out, const AuditReport& report);

}  // namespace mplab::nof
