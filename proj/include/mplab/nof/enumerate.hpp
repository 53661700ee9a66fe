#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mplab/info/joint_table.hpp"
#include "mplab/nof/protocol.hpp"

namespace mplab::nof {

inline constexpr std::size_t kMaxEnumerationBits = 20;  // n * (k + 1)
inline constexpr std::size_t kMaxOutcomeRecords = std::size_t{1} << 24;

struct EnumerationConfig {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t p = 1;
  std::optional<double> gamma;     // defaults to 1 / (1000 sqrt n)
  std::optional<std::size_t> ell;  // fix ell (0-based) instead of averaging over [p]
};

/// Exact outcome list of one protocol under the product distribution, one
/// record per (input, ordered tuple P, ell) with its probability.
///
/// Components (each value interned per component):
///   S       S_{I_ell}              T      T
///   U       Charlie's advice       Idx    I_ell
///   Sel     (P, ell)               Pi     full transcript of index I_ell
///   PiM     Megan's broadcast for I_ell (Alice's first round in the restricted model)
///   SPrev   S_{I_<ell}             PiMPrev  broadcasts for I_<ell
///   SP      S_P                    PiMP   broadcasts for every index in P
///   Ans     answer bit             R1..Rm Alice/Bob rounds of I_ell ("-" when absent)
class ProtocolOutcomes {
 public:
  std::vector<std::string> components;
  std::vector<double> probs;
  std::vector<std::vector<std::uint32_t>> codes;       // codes[record][component]
  std::vector<std::vector<std::string>> dictionaries;  // dictionaries[component][code]
  std::size_t max_pi_bits = 0;    // C
  std::size_t max_u_bits = 0;     // |U|
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t p = 0;
  std::size_t rounds = 0;         // m, the number of round components
  bool alice_first = true;        // speaker of R1
  Model model = Model::four_party;
  double gamma = 0.0;
  bool zero_error = true;

  std::size_t component(const std::string& name) const;
  double total_mass() const;
  /// Entropy in bits of a group of components, from the sparse outcome list.
  double entropy(const std::vector<std::string>& group) const;
  double entropy(const std::vector<std::string>& group, const std::vector<std::string>& given) const;
  double mutual_information(const std::vector<std::string>& a, const std::vector<std::string>& b,
                            const std::vector<std::string>& given = {}) const;
  /// Dense table with one variable per group (named by `names`), each value the
  /// interned tuple of its components. Refused beyond 2^24 cells.
  info::JointTable table(const std::vector<std::vector<std::string>>& groups,
                         const std::vector<std::string>& names) const;
};

/// Throws RefusedError (with the input count) when n(k+1) exceeds the bound.
ProtocolOutcomes enumerate_protocol(const ProtocolSpec& proto, const EnumerationConfig& cfg);
/// Serial reference for the parallel transcript computation.
ProtocolOutcomes enumerate_protocol_serial(const ProtocolSpec& proto, const EnumerationConfig& cfg);

/// Joint table over S, T, U, Z (= Pi, SPrev, PiMPrev, Sel).
info::JointTable protocol_joint_distribution(const ProtocolSpec& proto, const EnumerationConfig& cfg);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool near = false;  // lhs within 10% of rhs
};

struct GoodqReport {
  std::string protocol;
  std::size_t n = 0, k = 0, p = 0;
  double gamma = 0.0;
  std::size_t c = 0;        // max |Pi_i| over all inputs
  std::size_t u_bits = 0;   // max |U|
  std::size_t t_bits = 0;   // n
  double path_without_t = 0.0;  // I(S; SPrev PiMPrev Sel), T left out
  double smallcorr = 0.0;        // I(S PiM; U T | SPrev PiMPrev Sel)
  double megan_t = 0.0;          // I(T; S_P PiM_P Sel)
  std::vector<BoundCheck> checks;  // (a) path sampling, (b) info on T, (c) info on S, (d) correlation, (d') chain sum
  bool all_hold() const;
};

/// The four low-correlation bounds, evaluated exactly. Audits the
/// protocol first on `audit_instances` sampled inputs and refuses on failure.
GoodqReport verify_goodq_bounds(const ProtocolSpec& proto, const EnumerationConfig& cfg,
                                std::size_t audit_instances = 4, std::size_t audit_trials = 32);
GoodqReport verify_goodq_bounds(const ProtocolSpec& proto, const ProtocolOutcomes& outcomes);

void write_goodq_report(std::ostream& out, const GoodqReport& r);

/// Largest conditional entropy of an Alice round given (S, PiM, Idx, earlier
/// rounds) and of a Bob round given (U, T, PiM, Idx, earlier rounds). Both are
/// zero for any protocol that respects its visibility rules.
struct RoundEliminationReport {
  double max_alice = 0.0;
  double max_bob = 0.0;
  std::size_t rounds = 0;
};

RoundEliminationReport round_elimination_check(const ProtocolOutcomes& outcomes);

}  // namespace mplab::nof
