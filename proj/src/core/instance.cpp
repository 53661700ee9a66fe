#include "mplab/core/instance.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>

#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"

namespace mplab {

double hard_gamma(std::size_t n) {
  if (n == 0) throw ContractViolation("n must be positive");
  return 1.0 / (1000.0 * std::sqrt(static_cast<double>(n)));
}

bool MultiphaseInstance::answer(std::size_t i) const {
  if (i >= k) throw ContractViolation("query index out of range");
  return disj(sets[i], t);
}

void MultiphaseInstance::validate() const {
  if (n == 0 || k == 0) throw ContractViolation("instance needs n >= 1 and k >= 1");
  if (sets.size() != k) throw ContractViolation("instance must carry exactly k sets");
  for (const auto& s : sets) {
    if (s.size() != n) throw ContractViolation("set length differs from n");
  }
  if (t.size() != n) throw ContractViolation("T length differs from n");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in (0, 1)");
  if (tag == kHardTag && gamma != hard_gamma(n)) {
    throw ContractViolation("hard-distribution tag requires gamma = 1/(1000 sqrt n)");
  }
}

MultiphaseInstance make_instance(std::vector<BitVec> sets, BitVec t, double gamma) {
  MultiphaseInstance inst;
  inst.n = t.size();
  inst.k = sets.size();
  inst.sets = std::move(sets);
  inst.t = std::move(t);
  inst.gamma = gamma;
  inst.validate();
  return inst;
}

namespace {

// Geometric skipping: the gap to the next 1 is floor(log(u) / log(1 - gamma)).
BitVec sample_row(std::size_t n, double gamma, std::uint64_t seed, std::uint64_t row) {
  BitVec v(n);
  CounterRng rng(seed, row);
  const double denom = std::log1p(-gamma);
  std::size_t pos = 0;
  while (true) {
    double gap = std::floor(std::log(rng.next_open01()) / denom);
    if (gap >= static_cast<double>(n - pos)) break;
    pos += static_cast<std::size_t>(gap);
    v.set(pos);
    ++pos;
    if (pos >= n) break;
  }
  return v;
}

MultiphaseInstance blank(std::size_t n, std::size_t k, std::uint64_t seed,
                         std::optional<double> gamma_override) {
  if (n == 0 || k == 0) throw ContractViolation("sample_hard_instance needs n >= 1 and k >= 1");
  MultiphaseInstance inst;
  inst.n = n;
  inst.k = k;
  inst.seed = seed;
  inst.generator = std::string(kGeneratorId);
  if (gamma_override) {
    if (!(*gamma_override > 0.0 && *gamma_override < 1.0)) {
      throw ContractViolation("gamma override must lie in (0, 1)");
    }
    inst.gamma = *gamma_override;
  } else {
    inst.gamma = hard_gamma(n);
    inst.tag = std::string(kHardTag);
  }
  inst.sets.resize(k);
  return inst;
}

}  // namespace

MultiphaseInstance sample_hard_instance(std::size_t n, std::size_t k, std::uint64_t seed,
                                        std::optional<double> gamma_override) {
  MultiphaseInstance inst = blank(n, k, seed, gamma_override);
  std::vector<BitVec> rows(k + 1);
  const auto rows_n = static_cast<std::int64_t>(k + 1);
#pragma omp parallel for schedule(static) if (n * (k + 1) > (1u << 16))
  for (std::int64_t r = 0; r < rows_n; ++r) {
    rows[static_cast<std::size_t>(r)] = sample_row(n, inst.gamma, seed, static_cast<std::uint64_t>(r));
  }
  for (std::size_t r = 0; r < k; ++r) inst.sets[r] = std::move(rows[r]);
  inst.t = std::move(rows[k]);
  return inst;
}

MultiphaseInstance sample_hard_instance_serial(std::size_t n, std::size_t k, std::uint64_t seed,
                                               std::optional<double> gamma_override) {
  MultiphaseInstance inst = blank(n, k, seed, gamma_override);
  for (std::size_t r = 0; r < k; ++r) inst.sets[r] = sample_row(n, inst.gamma, seed, r);
  inst.t = sample_row(n, inst.gamma, seed, k);
  return inst;
}

MultiphaseInstance instance_from_code(std::size_t n, std::size_t k, std::uint64_t code) {
  if (n * (k + 1) > 63) throw ContractViolation("input code space exceeds 63 bits");
  MultiphaseInstance inst;
  inst.n = n;
  inst.k = k;
  inst.gamma = 0.5;
  inst.sets.reserve(k);
  for (std::size_t r = 0; r <= k; ++r) {
    BitVec row = BitVec::from_uint((code >> (r * n)) & ((std::uint64_t{1} << n) - 1), n);
    if (r < k) {
      inst.sets.push_back(std::move(row));
    } else {
      inst.t = std::move(row);
    }
  }
  return inst;
}

void write_instance(std::ostream& out, const MultiphaseInstance& inst) {
  inst.validate();
  char gamma_buf[64];
  std::snprintf(gamma_buf, sizeof gamma_buf, "%a", inst.gamma);
  out << "format = mplab-instance-v1\n";
  out << "generator = " << (inst.generator.empty() ? "-" : inst.generator) << "\n";
  out << "n = " << inst.n << "\n";
  out << "k = " << inst.k << "\n";
  out << "gamma = " << gamma_buf << "\n";
  out << "seed = " << inst.seed << "\n";
  out << "tag = " << (inst.tag.empty() ? "-" : inst.tag) << "\n";
  for (std::size_t i = 0; i < inst.k; ++i) out << "set " << i << " = " << inst.sets[i].to_hex() << "\n";
  out << "T = " << inst.t.to_hex() << "\n";
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& v, std::size_t line, std::size_t col) {
  if (v.empty()) throw ParseError(line, col, "expected an unsigned integer");
  char* end = nullptr;
  errno = 0;
  unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || *end != '\0' || v[0] == '-') throw ParseError(line, col, "invalid unsigned integer '" + v + "'");
  return x;
}

}  // namespace

MultiphaseInstance read_instance(std::istream& in) {
  std::map<std::string, std::pair<std::string, std::pair<std::size_t, std::size_t>>> kv;
  std::map<std::size_t, std::pair<std::string, std::pair<std::size_t, std::size_t>>> set_lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, 1, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::size_t vcol = line.find_first_not_of(" \t", eq + 1);
    vcol = (vcol == std::string::npos ? line.size() : vcol) + 1;
    if (key.rfind("set ", 0) == 0) {
      std::size_t idx = parse_u64(trim(key.substr(4)), lineno, 5);
      if (set_lines.count(idx)) throw ParseError(lineno, 1, "duplicate set " + std::to_string(idx));
      set_lines[idx] = {value, {lineno, vcol}};
      continue;
    }
    if (kv.count(key)) throw ParseError(lineno, 1, "duplicate key '" + key + "'");
    kv[key] = {value, {lineno, vcol}};
  }
  auto need = [&](const std::string& key) -> const auto& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(lineno + 1, 1, "missing key '" + key + "'");
    return it->second;
  };
  const auto& fmt = need("format");
  if (fmt.first != "mplab-instance-v1") {
    throw ParseError(fmt.second.first, fmt.second.second, "unknown format '" + fmt.first + "'");
  }
  MultiphaseInstance inst;
  const auto& nv = need("n");
  inst.n = parse_u64(nv.first, nv.second.first, nv.second.second);
  const auto& kv_k = need("k");
  inst.k = parse_u64(kv_k.first, kv_k.second.first, kv_k.second.second);
  const auto& gv = need("gamma");
  {
    char* end = nullptr;
    inst.gamma = std::strtod(gv.first.c_str(), &end);
    if (gv.first.empty() || *end != '\0') throw ParseError(gv.second.first, gv.second.second, "invalid gamma");
  }
  const auto& sv = need("seed");
  inst.seed = parse_u64(sv.first, sv.second.first, sv.second.second);
  inst.generator = need("generator").first;
  if (inst.generator == "-") inst.generator.clear();
  inst.tag = need("tag").first;
  if (inst.tag == "-") inst.tag.clear();
  if (set_lines.size() != inst.k) throw ParseError(lineno + 1, 1, "expected " + std::to_string(inst.k) + " set lines");
  for (auto& [idx, payload] : set_lines) {
    if (idx >= inst.k) throw ParseError(payload.second.first, 1, "set index out of range");
    try {
      inst.sets.push_back(BitVec::from_hex(payload.first, inst.n));
    } catch (const ContractViolation& e) {
      throw ParseError(payload.second.first, payload.second.second, e.what());
    }
  }
  const auto& tv = need("T");
  try {
    inst.t = BitVec::from_hex(tv.first, inst.n);
  } catch (const ContractViolation& e) {
    throw ParseError(tv.second.first, tv.second.second, e.what());
  }
  try {
    inst.validate();
  } catch (const ContractViolation& e) {
    throw ParseError(lineno, 1, e.what());
  }
  return inst;
}

}  // namespace mplab
