#include "mplab/nof/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <ostream>
#include <unordered_map>

#include "mplab/core/errors.hpp"
#include "mplab/core/selection.hpp"
#include "mplab/info/measures.hpp"

namespace mplab::nof {

std::size_t ProtocolOutcomes::component(const std::string& name) const {
  auto it = std::find(components.begin(), components.end(), name);
  if (it == components.end()) throw ContractViolation("unknown outcome component " + name);
  return static_cast<std::size_t>(it - components.begin());
}

double ProtocolOutcomes::total_mass() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

namespace {

std::vector<std::size_t> resolve(const ProtocolOutcomes& o, const std::vector<std::string>& names) {
  std::vector<std::size_t> ids;
  for (const auto& n : names) {
    const std::size_t c = o.component(n);
    if (std::find(ids.begin(), ids.end(), c) == ids.end()) ids.push_back(c);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

double entropy_of(const ProtocolOutcomes& o, const std::vector<std::size_t>& ids) {
  if (ids.empty()) return 0.0;
  // Mixed-radix key when it fits in 64 bits, otherwise an ordered map on the code tuple.
  double radix_product = 1.0;
  for (std::size_t c : ids) radix_product *= static_cast<double>(std::max<std::size_t>(o.dictionaries[c].size(), 1));
  std::vector<double> masses;
  if (radix_product < 9.0e18) {
    std::unordered_map<std::uint64_t, double> acc;
    for (std::size_t r = 0; r < o.probs.size(); ++r) {
      std::uint64_t key = 0;
      for (std::size_t c : ids) key = key * o.dictionaries[c].size() + o.codes[r][c];
      acc[key] += o.probs[r];
    }
    for (const auto& kv : acc) masses.push_back(kv.second);
  } else {
    std::map<std::vector<std::uint32_t>, double> acc;
    for (std::size_t r = 0; r < o.probs.size(); ++r) {
      std::vector<std::uint32_t> key;
      for (std::size_t c : ids) key.push_back(o.codes[r][c]);
      acc[key] += o.probs[r];
    }
    for (const auto& kv : acc) masses.push_back(kv.second);
  }
  std::sort(masses.begin(), masses.end());
  const double total = o.total_mass();
  double h = 0.0;
  for (double m : masses) {
    if (m > 0.0) h -= m * std::log2(m / total);
  }
  return h / total;
}

}  // namespace

double ProtocolOutcomes::entropy(const std::vector<std::string>& group) const {
  return entropy_of(*this, resolve(*this, group));
}

double ProtocolOutcomes::entropy(const std::vector<std::string>& group, const std::vector<std::string>& given) const {
  std::vector<std::string> all = group;
  all.insert(all.end(), given.begin(), given.end());
  return entropy(all) - entropy(given);
}

double ProtocolOutcomes::mutual_information(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                            const std::vector<std::string>& given) const {
  std::vector<std::string> ac = a, bc = b, abc = a;
  ac.insert(ac.end(), given.begin(), given.end());
  bc.insert(bc.end(), given.begin(), given.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), given.begin(), given.end());
  return entropy(ac) + entropy(bc) - entropy(abc) - entropy(given);
}

info::JointTable ProtocolOutcomes::table(const std::vector<std::vector<std::string>>& groups,
                                         const std::vector<std::string>& names) const {
  if (groups.size() != names.size()) throw ContractViolation("one name per group");
  std::vector<std::vector<std::size_t>> ids;
  for (const auto& g : groups) ids.push_back(resolve(*this, g));
  std::vector<std::map<std::vector<std::uint32_t>, std::size_t>> intern(groups.size());
  std::vector<std::vector<std::size_t>> value(probs.size(), std::vector<std::size_t>(groups.size()));
  for (std::size_t r = 0; r < probs.size(); ++r) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<std::uint32_t> key;
      for (std::size_t c : ids[g]) key.push_back(codes[r][c]);
      auto [it, fresh] = intern[g].emplace(key, intern[g].size());
      value[r][g] = it->second;
    }
  }
  std::vector<info::Variable> vars;
  double cells = 1.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    vars.push_back({names[g], std::max<std::size_t>(intern[g].size(), 1)});
    cells *= static_cast<double>(vars.back().card);
  }
  if (cells > static_cast<double>(info::JointTable::kMaxEntries)) {
    throw RefusedError("dense table would have " + std::to_string(static_cast<long double>(cells)) + " cells");
  }
  std::vector<double> dense(static_cast<std::size_t>(cells), 0.0);
  for (std::size_t r = 0; r < probs.size(); ++r) {
    std::size_t flat = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) flat = flat * vars[g].card + value[r][g];
    dense[flat] += probs[r];
  }
  return info::JointTable(std::move(vars), std::move(dense));
}

// ---------------------------------------------------------------------------

namespace {

std::string bits(const BitVec& v) { return "b" + v.to_string(); }

std::vector<std::vector<Transcript>> all_transcripts(const ProtocolSpec& proto, std::size_t n, std::size_t k,
                                                     bool parallel) {
  const std::size_t inputs = std::size_t{1} << (n * (k + 1));
  std::vector<std::vector<Transcript>> out(inputs);
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(inputs);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::int64_t code = 0; code < count; ++code) {
    try {
      const auto inst = instance_from_code(n, k, static_cast<std::uint64_t>(code));
      auto& row = out[static_cast<std::size_t>(code)];
      row.reserve(k);
      for (std::size_t i = 0; i < k; ++i) row.push_back(run_protocol(proto, inst, i));
    } catch (...) {
#pragma omp critical(mplab_enumerate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

ProtocolOutcomes build(const ProtocolSpec& proto, const EnumerationConfig& cfg, bool parallel) {
  const std::size_t n = cfg.n, k = cfg.k, p = cfg.p;
  if (n == 0 || k == 0) throw ContractViolation("enumeration needs n, k >= 1");
  if (p < 1 || p > k) throw ContractViolation("enumeration needs 1 <= p <= k");
  if (cfg.ell && *cfg.ell >= p) throw ContractViolation("fixed ell must lie in [0, p)");
  if (n * (k + 1) > kMaxEnumerationBits) {
    throw RefusedError("enumeration over 2^" + std::to_string(n * (k + 1)) + " inputs exceeds the 2^" +
                       std::to_string(kMaxEnumerationBits) + " bound");
  }
  const auto tuples = ordered_tuples(k, p);
  const std::size_t ells = cfg.ell ? 1 : p;
  const std::size_t inputs = std::size_t{1} << (n * (k + 1));
  const double records = static_cast<double>(inputs) * static_cast<double>(tuples.size()) * static_cast<double>(ells);
  if (records > static_cast<double>(kMaxOutcomeRecords)) {
    throw RefusedError("enumeration would produce " + std::to_string(static_cast<long double>(records)) +
                       " outcome records");
  }
  const double gamma = cfg.gamma.value_or(hard_gamma(n));
  if (!(gamma > 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in (0, 1)");

  const auto trs = all_transcripts(proto, n, k, parallel);

  ProtocolOutcomes o;
  o.n = n;
  o.k = k;
  o.p = p;
  o.gamma = gamma;
  o.model = proto.model;
  o.components = {"S", "T", "U", "Idx", "Sel", "Pi", "PiM", "SPrev", "PiMPrev", "SP", "PiMP", "Ans"};
  const std::size_t fixed = o.components.size();
  for (const auto& row : trs) {
    for (const auto& tr : row) {
      o.rounds = std::max(o.rounds, tr.effective_rounds().size());
      o.max_pi_bits = std::max(o.max_pi_bits, tr.pi_bits());
      o.max_u_bits = std::max(o.max_u_bits, tr.u.size());
    }
  }
  Transcript probe;
  probe.model = proto.model;
  o.alice_first = probe.alice_speaks(0);
  for (std::size_t r = 0; r < o.rounds; ++r) o.components.push_back("R" + std::to_string(r + 1));
  o.dictionaries.assign(o.components.size(), {});
  std::vector<std::unordered_map<std::string, std::uint32_t>> intern(o.components.size());
  auto code_of = [&](std::size_t c, const std::string& s) {
    auto [it, fresh] = intern[c].emplace(s, static_cast<std::uint32_t>(o.dictionaries[c].size()));
    if (fresh) o.dictionaries[c].push_back(s);
    return it->second;
  };

  const double sel_weight = 1.0 / (static_cast<double>(tuples.size()) * static_cast<double>(ells));
  o.probs.reserve(static_cast<std::size_t>(records));
  o.codes.reserve(static_cast<std::size_t>(records));
  for (std::size_t code = 0; code < inputs; ++code) {
    const auto inst = instance_from_code(n, k, code);
    std::size_t ones = 0;
    for (const auto& s : inst.sets) ones += s.count();
    ones += inst.t.count();
    const std::size_t total_bits = n * (k + 1);
    const double px = std::pow(gamma, static_cast<double>(ones)) *
                      std::pow(1.0 - gamma, static_cast<double>(total_bits - ones));
    const auto& row = trs[code];
    std::vector<std::string> pi(k), pim(k);
    for (std::size_t i = 0; i < k; ++i) {
      const Transcript& tr = row[i];
      if (tr.answer != inst.answer(i)) o.zero_error = false;
      std::string s = "m" + tr.megan.to_string() + "|u" + tr.u_prime.to_string();
      for (const auto& r : tr.rounds) s += "|r" + r.to_string();
      pi[i] = s;
      pim[i] = bits(tr.effective_megan());
    }
    for (const auto& tup : tuples) {
      for (std::size_t e = 0; e < ells; ++e) {
        const std::size_t ell = cfg.ell ? *cfg.ell : e;
        const std::size_t idx = tup[ell];
        const Transcript& tr = row[idx];
        std::vector<std::uint32_t> c(o.components.size());
        std::string sel, sprev, pimprev, sp, pimp;
        for (std::size_t r = 0; r < p; ++r) {
          sel += std::to_string(tup[r]) + ",";
          sp += bits(inst.sets[tup[r]]) + ",";
          pimp += pim[tup[r]] + ",";
          if (r < ell) {
            sprev += bits(inst.sets[tup[r]]) + ",";
            pimprev += pim[tup[r]] + ",";
          }
        }
        sel += ";" + std::to_string(ell);
        c[0] = code_of(0, bits(inst.sets[idx]));
        c[1] = code_of(1, bits(inst.t));
        c[2] = code_of(2, bits(tr.u));
        c[3] = code_of(3, std::to_string(idx));
        c[4] = code_of(4, sel);
        c[5] = code_of(5, pi[idx]);
        c[6] = code_of(6, pim[idx]);
        c[7] = code_of(7, sprev);
        c[8] = code_of(8, pimprev);
        c[9] = code_of(9, sp);
        c[10] = code_of(10, pimp);
        c[11] = code_of(11, tr.answer ? "1" : "0");
        const auto eff = tr.effective_rounds();
        for (std::size_t r = 0; r < o.rounds; ++r) {
          c[fixed + r] = code_of(fixed + r, r < eff.size() ? bits(eff[r]) : std::string("-"));
        }
        o.probs.push_back(px * sel_weight);
        o.codes.push_back(std::move(c));
      }
    }
  }
  return o;
}

}  // namespace

ProtocolOutcomes enumerate_protocol(const ProtocolSpec& proto, const EnumerationConfig& cfg) {
  return build(proto, cfg, true);
}

ProtocolOutcomes enumerate_protocol_serial(const ProtocolSpec& proto, const EnumerationConfig& cfg) {
  return build(proto, cfg, false);
}

info::JointTable protocol_joint_distribution(const ProtocolSpec& proto, const EnumerationConfig& cfg) {
  const auto o = enumerate_protocol(proto, cfg);
  return o.table({{"S"}, {"T"}, {"U"}, {"Pi", "SPrev", "PiMPrev", "Sel"}}, {"S", "T", "U", "Z"});
}

// ---------------------------------------------------------------------------

bool GoodqReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
}

namespace {

BoundCheck check(std::string name, double lhs, double rhs) {
  BoundCheck b;
  b.name = std::move(name);
  b.lhs = lhs;
  b.rhs = rhs;
  b.holds = lhs <= rhs + 1e-9;
  b.near = rhs > 1e-9 && lhs >= 0.9 * rhs;
  return b;
}

}  // namespace

GoodqReport verify_goodq_bounds(const ProtocolSpec& proto, const EnumerationConfig& cfg, std::size_t audit_instances,
                                std::size_t audit_trials) {
  for (std::size_t a = 0; a < audit_instances; ++a) {
    const auto inst = sample_hard_instance(cfg.n, cfg.k, 0xa0d17ULL + a, 0.5);
    for (std::size_t i = 0; i < cfg.k; ++i) {
      const auto report = visibility_audit(proto, inst, i, audit_trials, 0x5eedULL + a * cfg.k + i);
      if (!report.pass()) {
        const auto& v = report.violations.front();
        throw RefusedError(proto.name + " fails the visibility audit: " + v.player + " depends on " + v.hidden);
      }
    }
  }
  return verify_goodq_bounds(proto, enumerate_protocol(proto, cfg));
}

GoodqReport verify_goodq_bounds(const ProtocolSpec& proto, const ProtocolOutcomes& o) {
  GoodqReport r;
  r.protocol = proto.name;
  r.n = o.n;
  r.k = o.k;
  r.p = o.p;
  r.gamma = o.gamma;
  r.c = o.max_pi_bits;
  r.u_bits = o.max_u_bits;
  r.t_bits = o.n;
  const double c = static_cast<double>(r.c);
  const double path_rhs = o.p < o.k ? static_cast<double>(o.p) * c / static_cast<double>(o.k - o.p)
                                    : std::numeric_limits<double>::infinity();
  const std::vector<std::string> z = {"Pi", "SPrev", "PiMPrev", "Sel"};

  const double path_with_t = o.mutual_information({"S"}, {"SPrev", "PiMPrev", "T", "Sel"});
  r.path_without_t = o.mutual_information({"S"}, {"SPrev", "PiMPrev", "Sel"});
  const double info_t = o.mutual_information(z, {"T"});
  std::vector<std::string> zt = z;
  zt.push_back("T");
  const double info_s = o.mutual_information(zt, {"S"});
  const double corr = o.mutual_information({"S"}, {"T"}, z);
  r.smallcorr = o.mutual_information({"S", "PiM"}, {"U", "T"}, {"SPrev", "PiMPrev", "Sel"});
  r.megan_t = o.mutual_information({"T"}, {"SP", "PiMP", "Sel"});

  const double t_rhs = proto.model == Model::four_party_modified ? 2.0 * c : c;
  const double ut = static_cast<double>(r.u_bits + r.t_bits) / static_cast<double>(o.p);
  r.checks.push_back(check("(a) I(S; S_prev PiM_prev T, P, ell) <= pC/(k-p)", path_with_t, path_rhs));
  r.checks.push_back(check("(b) I(Z; T) <= C", info_t, t_rhs));
  r.checks.push_back(check("(c) I(Z T; S) <= C + pC/(k-p)", info_s, c + path_rhs));
  r.checks.push_back(check("(d) I(S; T | Z) <= chain sum", corr, r.smallcorr));
  r.checks.push_back(check("(d') chain sum <= |UT|/p", r.smallcorr, ut));
  return r;
}

void write_goodq_report(std::ostream& out, const GoodqReport& r) {
  out << "protocol\t" << r.protocol << "\nn\t" << r.n << "\nk\t" << r.k << "\np\t" << r.p << "\ngamma\t" << r.gamma
      << "\nC\t" << r.c << "\n|U|\t" << r.u_bits << "\n|T|\t" << r.t_bits
      << "\npath_sampling_without_T\t" << r.path_without_t << "\nI(T; S_P PiM_P)\t" << r.megan_t << '\n';
  for (const auto& c : r.checks) {
    out << (c.holds ? "PASS" : "FAIL") << '\t' << c.name << "\tlhs=" << c.lhs << "\trhs=" << c.rhs;
    if (c.near) out << "\t(within 10% of the bound)";
    out << '\n';
  }
}

RoundEliminationReport round_elimination_check(const ProtocolOutcomes& o) {
  RoundEliminationReport rep;
  rep.rounds = o.rounds;
  std::vector<std::string> earlier;
  for (std::size_t r = 0; r < o.rounds; ++r) {
    const std::string name = "R" + std::to_string(r + 1);
    const bool alice = (r % 2 == 0) == o.alice_first;
    std::vector<std::string> given = alice ? std::vector<std::string>{"S", "PiM", "Idx"}
                                           : std::vector<std::string>{"U", "T", "PiM", "Idx"};
    given.insert(given.end(), earlier.begin(), earlier.end());
    const double h = o.entropy({name}, given);
    (alice ? rep.max_alice : rep.max_bob) = std::max(alice ? rep.max_alice : rep.max_bob, h);
    earlier.push_back(name);
  }
  return rep;
}

}  // namespace mplab::nof
