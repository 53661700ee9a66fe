#include "mplab/info/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "mplab/core/errors.hpp"

namespace mplab::info {

namespace {

double raw_entropy(const std::vector<double>& masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

NameSet join(const NameSet& a, const NameSet& b) {
  NameSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(const NameSet& a, const NameSet& b, const char* what) {
  std::set<std::string> sa(a.begin(), a.end());
  for (const auto& x : b) {
    if (sa.count(x)) throw ContractViolation(std::string(what) + ": variable '" + x + "' appears in two sets");
  }
}

void require_known(const JointTable& j, const NameSet& names) {
  for (const auto& n : names) (void)j.index_of(n);
}

}  // namespace

double entropy(const JointTable& j, const NameSet& vars, const NameSet& given) {
  require_known(j, vars);
  require_known(j, given);
  require_disjoint(vars, given, "entropy");
  return raw_entropy(marginal_masses(j, join(vars, given))) - raw_entropy(marginal_masses(j, given));
}

double mutual_information(const JointTable& j, const NameSet& a, const NameSet& b, const NameSet& c) {
  require_known(j, join(join(a, b), c));
  require_disjoint(a, b, "mutual_information");
  require_disjoint(a, c, "mutual_information");
  require_disjoint(b, c, "mutual_information");
  return entropy(j, a, c) - entropy(j, a, join(b, c));
}

double mutual_information_by_divergence(const JointTable& j, const NameSet& a, const NameSet& b,
                                        const NameSet& c) {
  require_known(j, join(join(a, b), c));
  require_disjoint(a, b, "mutual_information_by_divergence");
  require_disjoint(a, c, "mutual_information_by_divergence");
  require_disjoint(b, c, "mutual_information_by_divergence");

  const auto& vars = j.variables();
  // Role of each table variable: 0 = summed out, 1 = a, 2 = b, 3 = c.
  std::vector<int> role(vars.size(), 0);
  for (const auto& x : a) role[j.index_of(x)] = 1;
  for (const auto& x : b) role[j.index_of(x)] = 2;
  for (const auto& x : c) role[j.index_of(x)] = 3;
  std::size_t na = 1, nb = 1, nc = 1;
  for (std::size_t p = 0; p < vars.size(); ++p) {
    if (role[p] == 1) na *= vars[p].card;
    if (role[p] == 2) nb *= vars[p].card;
    if (role[p] == 3) nc *= vars[p].card;
  }
  std::vector<double> p_abc(na * nb * nc, 0.0), p_bc(nb * nc, 0.0), p_ac(na * nc, 0.0), p_c(nc, 0.0);
  double total = 0.0;
  for (std::size_t idx = 0; idx < j.size(); ++idx) {
    double m = j.probs()[idx];
    if (m == 0.0) continue;
    auto digits = j.assignment_of(idx);
    std::size_t ia = 0, ib = 0, ic = 0;
    for (std::size_t p = 0; p < vars.size(); ++p) {
      if (role[p] == 1) ia = ia * vars[p].card + digits[p];
      if (role[p] == 2) ib = ib * vars[p].card + digits[p];
      if (role[p] == 3) ic = ic * vars[p].card + digits[p];
    }
    p_abc[(ia * nb + ib) * nc + ic] += m;
    p_bc[ib * nc + ic] += m;
    p_ac[ia * nc + ic] += m;
    p_c[ic] += m;
    total += m;
  }
  if (!(total > 0.0)) return 0.0;
  double sum = 0.0;
  for (std::size_t ib = 0; ib < nb; ++ib) {
    for (std::size_t ic = 0; ic < nc; ++ic) {
      double w = p_bc[ib * nc + ic];
      if (w <= 0.0) continue;
      double d = 0.0;
      for (std::size_t ia = 0; ia < na; ++ia) {
        double joint = p_abc[(ia * nb + ib) * nc + ic];
        if (joint <= 0.0) continue;
        double post = joint / w;
        double prior = p_ac[ia * nc + ic] / p_c[ic];
        d += post * std::log2(post / prior);
      }
      sum += (w / total) * d;
    }
  }
  return sum;
}

double kl_mi_identity_residual(const JointTable& j, const NameSet& a, const NameSet& b, const NameSet& c) {
  return std::abs(mutual_information(j, a, b, c) - mutual_information_by_divergence(j, a, b, c));
}

double kl(const std::vector<double>& mu, const std::vector<double>& nu) {
  if (mu.size() != nu.size()) throw ContractViolation("kl needs equal-length distributions");
  double d = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] <= 0.0) continue;
    if (nu[x] <= 0.0) return std::numeric_limits<double>::infinity();
    d += mu[x] * std::log2(mu[x] / nu[x]);
  }
  return d;
}

double kl(const JointTable& mu, const JointTable& nu) {
  if (mu.variables() != nu.variables()) throw ContractViolation("kl needs identical variable signatures");
  return kl(mu.probs(), nu.probs());
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw ContractViolation("binary_entropy needs p in [0, 1]");
  return raw_entropy({p, 1.0 - p});
}

double bernoulli_kl(double q, double p) {
  if (q < 0.0 || q > 1.0 || p < 0.0 || p > 1.0) throw ContractViolation("bernoulli_kl needs q, p in [0, 1]");
  // log1p forms keep precision when q and p are both tiny.
  double d = 0.0;
  if (q > 0.0) {
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    d += q * std::log2(q / p);
  }
  if (q < 1.0) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    d += (1.0 - q) * (std::log1p(-q) - std::log1p(-p)) / std::log(2.0);
  }
  return d;
}

JointTable bernoulli_table(double p, const std::string& name) {
  if (p < 0.0 || p > 1.0) throw ContractViolation("bernoulli_table needs p in [0, 1]");
  return JointTable({{name, 2}}, {1.0 - p, p});
}

namespace {

namespace bmp = boost::multiprecision;
using Rational = bmp::cpp_rational;
using Float50 = bmp::cpp_bin_float_50;

std::vector<Rational> exact_marginal(const JointTable& j, const NameSet& names) {
  const auto& vars = j.variables();
  std::vector<bool> keep(vars.size(), false);
  for (const auto& n : names) keep[j.index_of(n)] = true;
  std::size_t out_size = 1;
  for (std::size_t p = 0; p < vars.size(); ++p) {
    if (keep[p]) out_size *= vars[p].card;
  }
  std::vector<Rational> out(out_size, Rational(0));
  for (std::size_t idx = 0; idx < j.size(); ++idx) {
    double m = j.probs()[idx];
    if (m == 0.0) continue;
    auto digits = j.assignment_of(idx);
    std::size_t sub = 0;
    for (std::size_t p = 0; p < vars.size(); ++p) {
      if (keep[p]) sub = sub * vars[p].card + digits[p];
    }
    out[sub] += Rational(m);
  }
  return out;
}

Float50 exact_entropy_of(const std::vector<Rational>& masses, const Rational& total) {
  Float50 h = 0;
  for (const auto& m : masses) {
    if (m == 0) continue;
    Float50 p = Float50(m / total);
    h -= p * bmp::log(p);
  }
  return h / bmp::log(Float50(2));
}

void referee_guard(const JointTable& j) {
  if (j.size() > (std::size_t{1} << 16)) throw RefusedError("exact referee supports at most 2^16 entries");
}

}  // namespace

double referee_entropy(const JointTable& j, const NameSet& vars, const NameSet& given) {
  referee_guard(j);
  require_disjoint(vars, given, "referee_entropy");
  Rational total(0);
  for (double m : j.probs()) total += Rational(m);
  if (total == 0) throw ZeroMassError("table has zero total mass");
  Float50 h = exact_entropy_of(exact_marginal(j, join(vars, given)), total) -
              exact_entropy_of(exact_marginal(j, given), total);
  return static_cast<double>(h);
}

double referee_mutual_information(const JointTable& j, const NameSet& a, const NameSet& b, const NameSet& c) {
  referee_guard(j);
  require_disjoint(a, b, "referee_mutual_information");
  require_disjoint(a, c, "referee_mutual_information");
  require_disjoint(b, c, "referee_mutual_information");
  Rational total(0);
  for (double m : j.probs()) total += Rational(m);
  if (total == 0) throw ZeroMassError("table has zero total mass");
  auto h = [&](const NameSet& s) { return exact_entropy_of(exact_marginal(j, s), total); };
  Float50 i = h(join(a, c)) + h(join(b, c)) - h(join(join(a, b), c)) - h(c);
  return static_cast<double>(i);
}

}  // namespace mplab::info
