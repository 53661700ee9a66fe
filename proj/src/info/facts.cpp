#include "mplab/info/facts.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "mplab/core/errors.hpp"
#include "mplab/info/measures.hpp"

namespace mplab::info {

const char* to_string(FactStatus s) {
  switch (s) {
    case FactStatus::satisfied:
      return "satisfied";
    case FactStatus::violated:
      return "violated";
    case FactStatus::not_applicable:
      return "not-applicable";
  }
  return "?";
}

bool FactReport::all_hold() const { return count(FactStatus::violated) == 0; }

std::size_t FactReport::count(FactStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [s](const FactResult& r) { return r.status == s; }));
}

const FactResult* FactReport::first_violation() const {
  for (const auto& r : results) {
    if (r.status == FactStatus::violated) return &r;
  }
  return nullptr;
}

namespace {

FactResult judge(const char* id, double residual, const std::string& detail) {
  FactResult r;
  r.id = id;
  r.residual = residual;
  r.status = residual <= kIdentityTolerance ? FactStatus::satisfied : FactStatus::violated;
  r.detail = detail;
  return r;
}

FactResult skipped(const char* id, const std::string& detail) {
  FactResult r;
  r.id = id;
  r.status = FactStatus::not_applicable;
  r.detail = detail;
  return r;
}

std::string describe(const Roles& roles) {
  std::ostringstream s;
  s << "a=" << roles.a << " b=" << roles.b;
  if (!roles.d.empty()) s << " d=" << roles.d;
  if (roles.c) s << " c=" << *roles.c;
  return s.str();
}

}  // namespace

FactReport verify_facts(const JointTable& j, const Roles& roles) {
  if (j.variables().size() < 2) throw ContractViolation("verify_facts needs at least 2 variables");
  const NameSet a{roles.a}, b{roles.b};
  const NameSet c = roles.c ? NameSet{*roles.c} : NameSet{};
  const std::string who = describe(roles);
  FactReport rep;

  double drop = entropy(j, a) - entropy(j, a, b);
  rep.results.push_back(judge(fact_id::conditioning_reduces_entropy, -drop, who));

  rep.results.push_back(judge(fact_id::kl_mi_identity, kl_mi_identity_residual(j, a, b, c), who));

  if (roles.d.empty()) {
    rep.results.push_back(skipped(fact_id::chain_rule, "needs a third variable"));
    rep.results.push_back(skipped(fact_id::extra_conditioning_increases, "needs a third variable"));
    rep.results.push_back(skipped(fact_id::extra_conditioning_decreases, "needs a third variable"));
    return rep;
  }
  const NameSet d{roles.d};
  NameSet ad = a;
  ad.push_back(roles.d);
  NameSet cd = c;
  cd.push_back(roles.d);
  NameSet ac = a;
  if (roles.c) ac.push_back(*roles.c);

  // Left side through entropies, right side through expected divergences.
  double lhs = mutual_information(j, ad, b, c);
  double rhs = mutual_information_by_divergence(j, d, b, c) + mutual_information_by_divergence(j, a, b, cd);
  rep.results.push_back(judge(fact_id::chain_rule, std::abs(lhs - rhs), who));

  double i_abc = mutual_information(j, a, b, c);
  double i_abcd = mutual_information(j, a, b, cd);

  double gate_inc = mutual_information(j, b, d, c);
  if (gate_inc <= kIdentityTolerance) {
    rep.results.push_back(judge(fact_id::extra_conditioning_increases, i_abc - i_abcd, who));
  } else {
    rep.results.push_back(skipped(fact_id::extra_conditioning_increases, "I(b;d|c) > 0"));
  }

  double gate_dec = mutual_information(j, b, d, ac);
  if (gate_dec <= kIdentityTolerance) {
    rep.results.push_back(judge(fact_id::extra_conditioning_decreases, i_abcd - i_abc, who));
  } else {
    rep.results.push_back(skipped(fact_id::extra_conditioning_decreases, "I(b;d|ac) > 0"));
  }
  return rep;
}

FactReport verify_facts(const JointTable& j) {
  const auto& v = j.variables();
  if (v.size() < 2) throw ContractViolation("verify_facts needs at least 2 variables");
  Roles r;
  r.a = v[0].name;
  r.b = v[1].name;
  if (v.size() >= 3) r.d = v.back().name;
  if (v.size() >= 4) r.c = v[2].name;
  return verify_facts(j, r);
}

FactReport verify_facts_all_roles(const JointTable& j) {
  const auto& v = j.variables();
  if (v.size() < 2) throw ContractViolation("verify_facts needs at least 2 variables");
  std::vector<std::string> ids;
  std::map<std::string, FactResult> merged;
  auto absorb = [&](const FactReport& rep) {
    for (const auto& r : rep.results) {
      auto it = merged.find(r.id);
      if (it == merged.end()) {
        ids.push_back(r.id);
        merged.emplace(r.id, r);
        continue;
      }
      FactResult& m = it->second;
      if (m.status == FactStatus::violated) continue;
      if (r.status == FactStatus::violated || m.status == FactStatus::not_applicable) {
        m = r;
      } else if (r.status == FactStatus::satisfied && r.residual > m.residual) {
        m.residual = r.residual;
        m.detail = r.detail;
      }
    }
  };
  const std::size_t m = v.size();
  for (std::size_t ia = 0; ia < m; ++ia) {
    for (std::size_t ib = 0; ib < m; ++ib) {
      if (ib == ia) continue;
      if (m == 2) {
        absorb(verify_facts(j, Roles{v[ia].name, v[ib].name, "", std::nullopt}));
        continue;
      }
      for (std::size_t id = 0; id < m; ++id) {
        if (id == ia || id == ib) continue;
        absorb(verify_facts(j, Roles{v[ia].name, v[ib].name, v[id].name, std::nullopt}));
        for (std::size_t ic = 0; ic < m; ++ic) {
          if (ic == ia || ic == ib || ic == id) continue;
          absorb(verify_facts(j, Roles{v[ia].name, v[ib].name, v[id].name, v[ic].name}));
        }
      }
    }
  }
  FactReport out;
  for (const auto& id : ids) out.results.push_back(merged.at(id));
  return out;
}

FactResult verify_bernoulli_bound(double p, int grid) {
  if (!(p > 0.0 && p < 0.5)) throw ContractViolation("bernoulli bound check needs p in (0, 1/2)");
  if (grid < 2) throw ContractViolation("grid needs at least 2 points");
  const double threshold = 5e-5 * p;
  const double up = bernoulli_kl(1.01 * p, p);
  const double down = bernoulli_kl(0.99 * p, p);
  std::ostringstream detail;
  detail.precision(6);
  detail << "p=" << p << " kl(1.01p)=" << up << " kl(0.99p)=" << down << " threshold=" << threshold;
  double residual = std::max(threshold - up, threshold - down);

  // Monotone in |q - p| on each side, checked outward from p.
  double prev_right = 0.0;
  double prev_left = 0.0;
  for (int g = 1; g <= grid; ++g) {
    double s = static_cast<double>(g) / grid;
    double q_right = p + (1.0 - p) * s * s * s;
    double q_left = p * (1.0 - s);
    double kr = bernoulli_kl(q_right, p);
    double kl_left = bernoulli_kl(q_left, p);
    residual = std::max(residual, prev_right - kr);
    residual = std::max(residual, prev_left - kl_left);
    prev_right = kr;
    prev_left = kl_left;
  }
  FactResult r;
  r.id = fact_id::bernoulli_divergence_bound;
  r.status = residual > 0.0 ? FactStatus::violated : FactStatus::satisfied;
  r.residual = residual;
  r.detail = detail.str();
  return r;
}

namespace {

std::vector<double> random_simplex(std::size_t size, std::mt19937_64& rng, double zero_prob) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(size);
  double total = 0.0;
  for (auto& x : w) {
    x = u(rng) < zero_prob ? 0.0 : ex(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

std::vector<JointTable> random_table_corpus(std::size_t count, std::uint64_t seed) {
  std::vector<JointTable> out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> card_dist(2, 4);
  std::uniform_int_distribution<int> nvars_dist(3, 4);
  for (std::size_t t = 0; t < count; ++t) {
    const int nv = nvars_dist(rng);
    std::vector<Variable> vars;
    // Variable order matches the default roles: a, b, (c,) d.
    std::vector<std::string> order = nv == 4 ? std::vector<std::string>{"A", "B", "C", "D"}
                                             : std::vector<std::string>{"A", "B", "D"};
    for (const auto& nm : order) vars.push_back({nm, card_dist(rng)});
    const std::size_t ca = vars[0].card, cb = vars[1].card, cd = vars.back().card;
    const std::size_t cc = nv == 4 ? vars[2].card : 1;
    const int family = static_cast<int>(t % 3);

    std::vector<double> probs;
    if (family == 0) {
      std::size_t total = ca * cb * cc * cd;
      probs = random_simplex(total, rng, 0.1);
      out.emplace_back(vars, probs);
      continue;
    }
    auto idx = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
      return nv == 4 ? ((a * cb + b) * cc + c) * cd + d : (a * cb + b) * cd + d;
    };
    probs.assign(ca * cb * cc * cd, 0.0);
    if (family == 1) {
      // p(c) p(b|c) p(d|c) p(a|b,c,d): b and d independent given c.
      auto pc = random_simplex(cc, rng, 0.0);
      std::vector<std::vector<double>> pb(cc), pd(cc);
      for (std::size_t c = 0; c < cc; ++c) {
        pb[c] = random_simplex(cb, rng, 0.1);
        pd[c] = random_simplex(cd, rng, 0.1);
      }
      for (std::size_t b = 0; b < cb; ++b) {
        for (std::size_t c = 0; c < cc; ++c) {
          for (std::size_t d = 0; d < cd; ++d) {
            auto pa = random_simplex(ca, rng, 0.1);
            for (std::size_t a = 0; a < ca; ++a) probs[idx(a, b, c, d)] = pc[c] * pb[c][b] * pd[c][d] * pa[a];
          }
        }
      }
    } else {
      // p(a,c) p(b|a,c) p(d|a,c): b and d independent given (a, c).
      auto pac = random_simplex(ca * cc, rng, 0.1);
      for (std::size_t a = 0; a < ca; ++a) {
        for (std::size_t c = 0; c < cc; ++c) {
          auto pb = random_simplex(cb, rng, 0.1);
          auto pd = random_simplex(cd, rng, 0.1);
          for (std::size_t b = 0; b < cb; ++b) {
            for (std::size_t d = 0; d < cd; ++d) probs[idx(a, b, c, d)] = pac[a * cc + c] * pb[b] * pd[d];
          }
        }
      }
    }
    out.emplace_back(vars, probs);
  }
  return out;
}

}  // namespace mplab::info
