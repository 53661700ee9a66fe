#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mplab/info/joint_table.hpp"

namespace mplab::info {

inline constexpr double kIdentityTolerance = 1e-9;

enum class FactStatus { satisfied, violated, not_applicable };
const char* to_string(FactStatus s);

struct FactResult {
  std::string id;
  FactStatus status = FactStatus::not_applicable;
  double residual = 0.0;  // amount by which the inequality/identity misses (<= 0 is fine)
  std::string detail;
};

struct FactReport {
  std::vector<FactResult> results;
  bool all_hold() const;  // nothing violated
  std::size_t count(FactStatus s) const;
  const FactResult* first_violation() const;
};

/// Single-variable roles; c may be empty (unconditioned forms).
struct Roles {
  std::string a, b, d;
  std::optional<std::string> c;
};

namespace fact_id {
inline constexpr const char* conditioning_reduces_entropy = "conditioning-reduces-entropy";
inline constexpr const char* kl_mi_identity = "kl-mi-identity";
inline constexpr const char* chain_rule = "chain-rule";
inline constexpr const char* extra_conditioning_increases = "extra-conditioning-increases";
inline constexpr const char* extra_conditioning_decreases = "extra-conditioning-decreases";
inline constexpr const char* bernoulli_divergence_bound = "bernoulli-divergence-bound";
}  // namespace fact_id

/// Checks with fixed roles. Identity facts compare two computation routes.
/// The two conditional-independence inequalities are only checked when their
/// hypothesis holds within kIdentityTolerance, otherwise not-applicable.
FactReport verify_facts(const JointTable& j, const Roles& roles);

/// Default roles: a = var0, b = var1, d = last var (needs >= 3 vars),
/// c = var2 when there are >= 4 vars. With 2 variables only the entropy
/// and divergence-identity facts apply.
FactReport verify_facts(const JointTable& j);

/// Every assignment of distinct single variables to (a, b, d) with c empty or a
/// fourth variable; results are merged (first violation kept).
FactReport verify_facts_all_roles(const JointTable& j);

/// Numeric form of the Bernoulli divergence bound at p:
/// kl(B_{1.01p}, B_p) and kl(B_{0.99p}, B_p) both >= 5e-5 p, and kl is monotone in
/// |q - p| on each side over a `grid`-point grid.
FactResult verify_bernoulli_bound(double p, int grid = 100);

/// Seeded corpus: a third unstructured, a third with b and d independent given c,
/// a third with b and d independent given (a, c). 3-4 variables, alphabets 2..4.
std::vector<JointTable> random_table_corpus(std::size_t count, std::uint64_t seed);

}  // namespace mplab::info
