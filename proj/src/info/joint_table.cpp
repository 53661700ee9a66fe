#include "mplab/info/joint_table.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "mplab/core/errors.hpp"

namespace mplab::info {

void JointTable::check_layout(const std::vector<Variable>& vars, std::size_t n_probs) {
  std::set<std::string> names;
  std::size_t entries = 1;
  for (const auto& v : vars) {
    if (v.name.empty()) throw ContractViolation("variable names must be non-empty");
    if (!names.insert(v.name).second) throw ContractViolation("duplicate variable name '" + v.name + "'");
    if (v.card == 0) throw ContractViolation("variable '" + v.name + "' has an empty alphabet");
    if (entries > kMaxEntries / v.card) {
      throw ContractViolation("table would exceed 2^24 entries");
    }
    entries *= v.card;
  }
  if (entries != n_probs) {
    throw ContractViolation("table has " + std::to_string(n_probs) + " masses, signature needs " +
                            std::to_string(entries));
  }
}

JointTable::JointTable(std::vector<Variable> vars, std::vector<double> probs) {
  check_layout(vars, probs.size());
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ContractViolation("masses must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw ContractViolation("total mass " + std::to_string(total) + " is not within 1e-9 of 1");
  }
  vars_ = std::move(vars);
  probs_ = std::move(probs);
}

JointTable JointTable::unchecked(std::vector<Variable> vars, std::vector<double> probs) {
  check_layout(vars, probs.size());
  JointTable j;
  j.vars_ = std::move(vars);
  j.probs_ = std::move(probs);
  return j;
}

JointTable JointTable::from_function(std::vector<Variable> vars,
                                     const std::function<double(const std::vector<std::size_t>&)>& f) {
  std::size_t entries = 1;
  for (const auto& v : vars) entries *= v.card;
  std::vector<double> probs(entries);
  std::vector<std::size_t> digits(vars.size(), 0);
  for (std::size_t idx = 0; idx < entries; ++idx) {
    probs[idx] = f(digits);
    for (std::size_t d = vars.size(); d-- > 0;) {
      if (++digits[d] < vars[d].card) break;
      digits[d] = 0;
    }
  }
  return JointTable(std::move(vars), std::move(probs));
}

double JointTable::total_mass() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

std::size_t JointTable::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw ContractViolation("unknown variable '" + name + "'");
}

bool JointTable::has(const std::string& name) const {
  for (const auto& v : vars_) {
    if (v.name == name) return true;
  }
  return false;
}

double JointTable::at(const std::vector<std::size_t>& assignment) const {
  if (assignment.size() != vars_.size()) throw ContractViolation("assignment has wrong arity");
  std::size_t idx = 0;
  for (std::size_t d = 0; d < vars_.size(); ++d) {
    if (assignment[d] >= vars_[d].card) throw ContractViolation("assignment value out of range");
    idx = idx * vars_[d].card + assignment[d];
  }
  return probs_[idx];
}

std::vector<std::size_t> JointTable::assignment_of(std::size_t flat) const {
  std::vector<std::size_t> a(vars_.size());
  for (std::size_t d = vars_.size(); d-- > 0;) {
    a[d] = flat % vars_[d].card;
    flat /= vars_[d].card;
  }
  return a;
}

namespace {

// For each variable of `j`, the stride it contributes to the flat index of the
// sub-table made of `positions` (0 when the variable is summed out).
std::vector<std::size_t> sub_strides(const JointTable& j, const std::vector<std::size_t>& positions) {
  const auto& vars = j.variables();
  std::vector<std::size_t> strides(vars.size(), 0);
  std::size_t s = 1;
  for (std::size_t q = positions.size(); q-- > 0;) {
    strides[positions[q]] = s;
    s *= vars[positions[q]].card;
  }
  return strides;
}

std::vector<std::size_t> positions_in_order(const JointTable& j, const NameSet& names) {
  std::vector<bool> chosen(j.variables().size(), false);
  for (const auto& n : names) {
    std::size_t p = j.index_of(n);
    if (chosen[p]) throw ContractViolation("variable '" + n + "' listed twice");
    chosen[p] = true;
  }
  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p < chosen.size(); ++p) {
    if (chosen[p]) positions.push_back(p);
  }
  return positions;
}

}  // namespace

std::vector<double> marginal_masses(const JointTable& j, const NameSet& names) {
  auto positions = positions_in_order(j, names);
  auto strides = sub_strides(j, positions);
  std::size_t out_size = 1;
  for (auto p : positions) out_size *= j.variables()[p].card;
  std::vector<double> out(out_size, 0.0);
  const auto& vars = j.variables();
  const auto& probs = j.probs();
  std::vector<std::size_t> digits(vars.size(), 0);
  std::size_t sub = 0;
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    out[sub] += probs[idx];
    for (std::size_t d = vars.size(); d-- > 0;) {
      if (++digits[d] < vars[d].card) {
        sub += strides[d];
        break;
      }
      sub -= strides[d] * (vars[d].card - 1);
      digits[d] = 0;
    }
  }
  return out;
}

JointTable JointTable::marginalize(const NameSet& keep) const {
  auto positions = positions_in_order(*this, keep);
  std::vector<Variable> vars;
  for (auto p : positions) vars.push_back(vars_[p]);
  return unchecked(std::move(vars), marginal_masses(*this, keep));
}

JointTable JointTable::condition(const std::map<std::string, std::size_t>& assignment) const {
  std::vector<long> fixed(vars_.size(), -1);
  for (const auto& [name, value] : assignment) {
    std::size_t p = index_of(name);
    if (value >= vars_[p].card) throw ContractViolation("conditioning value out of range for '" + name + "'");
    fixed[p] = static_cast<long>(value);
  }
  NameSet rest;
  std::vector<Variable> rest_vars;
  for (std::size_t p = 0; p < vars_.size(); ++p) {
    if (fixed[p] < 0) {
      rest.push_back(vars_[p].name);
      rest_vars.push_back(vars_[p]);
    }
  }
  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p < vars_.size(); ++p) {
    if (fixed[p] < 0) positions.push_back(p);
  }
  auto strides = sub_strides(*this, positions);
  std::size_t out_size = 1;
  for (const auto& v : rest_vars) out_size *= v.card;
  std::vector<double> out(out_size, 0.0);
  double mass = 0.0;
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    auto a = assignment_of(idx);
    bool match = true;
    std::size_t sub = 0;
    for (std::size_t p = 0; p < vars_.size(); ++p) {
      if (fixed[p] >= 0) {
        if (a[p] != static_cast<std::size_t>(fixed[p])) {
          match = false;
          break;
        }
      } else {
        sub += strides[p] * a[p];
      }
    }
    if (!match) continue;
    out[sub] += probs_[idx];
    mass += probs_[idx];
  }
  if (!(mass > 0.0)) throw ZeroMassError("conditioning event has zero mass");
  for (auto& x : out) x /= mass;
  return unchecked(std::move(rest_vars), std::move(out));
}

void write_table(std::ostream& out, const JointTable& j) {
  out << "variables =";
  for (const auto& v : j.variables()) out << ' ' << v.name << ':' << v.card;
  out << '\n';
  char buf[40];
  for (std::size_t idx = 0; idx < j.size(); ++idx) {
    auto a = j.assignment_of(idx);
    for (std::size_t d = 0; d < a.size(); ++d) out << (d ? " " : "") << a[d];
    std::snprintf(buf, sizeof buf, "%.17g", j.probs()[idx]);
    out << '\t' << buf << '\n';
  }
}

JointTable read_table(std::istream& in, bool checked) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Variable> vars;
  bool have_header = false;
  std::vector<double> probs;
  std::size_t expected_idx = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      const std::string prefix = "variables =";
      if (line.rfind(prefix, 0) != 0) throw ParseError(lineno, 1, "expected 'variables =' header");
      std::istringstream ss(line.substr(prefix.size()));
      std::string tok;
      while (ss >> tok) {
        auto colon = tok.rfind(':');
        if (colon == std::string::npos || colon == 0) throw ParseError(lineno, 1, "bad variable '" + tok + "'");
        try {
          vars.push_back({tok.substr(0, colon), static_cast<std::size_t>(std::stoul(tok.substr(colon + 1)))});
        } catch (const std::exception&) {
          throw ParseError(lineno, 1, "bad alphabet size in '" + tok + "'");
        }
      }
      have_header = true;
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, 1, "expected '<assignment>\\t<mass>'");
    std::istringstream ss(line.substr(0, tab));
    std::size_t idx = 0;
    std::size_t d = 0;
    std::size_t value = 0;
    while (ss >> value) {
      if (d >= vars.size() || value >= vars[d].card) throw ParseError(lineno, 1, "assignment out of range");
      idx = idx * vars[d].card + value;
      ++d;
    }
    if (d != vars.size()) throw ParseError(lineno, 1, "assignment has wrong arity");
    if (idx != expected_idx) throw ParseError(lineno, 1, "rows must be listed in row-major order");
    char* end = nullptr;
    double mass = std::strtod(line.c_str() + tab + 1, &end);
    if (end == line.c_str() + tab + 1) throw ParseError(lineno, tab + 2, "bad mass");
    probs.push_back(mass);
    ++expected_idx;
  }
  if (!have_header) throw ParseError(lineno + 1, 1, "missing header");
  try {
    return checked ? JointTable(std::move(vars), std::move(probs))
                   : JointTable::unchecked(std::move(vars), std::move(probs));
  } catch (const ContractViolation& e) {
    throw ParseError(lineno, 1, e.what());
  }
}

}  // namespace mplab::info
