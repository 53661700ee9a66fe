#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mplab::info {

using NameSet = std::vector<std::string>;

struct Variable {
  std::string name;
  std::size_t card = 0;
  bool operator==(const Variable&) const = default;
};

/// Dense probability table, row-major with the first variable most significant.
class JointTable {
 public:
  static constexpr std::size_t kMaxEntries = std::size_t{1} << 24;
  static constexpr double kMassTolerance = 1e-9;

  JointTable() = default;
  /// Validates names, entry count, non-negativity and total mass.
  JointTable(std::vector<Variable> vars, std::vector<double> probs);

  /// Same layout checks but no mass checks; used to plant corrupted tables.
  static JointTable unchecked(std::vector<Variable> vars, std::vector<double> probs);

  /// Fills every assignment with f(assignment).
  static JointTable from_function(std::vector<Variable> vars,
                                  const std::function<double(const std::vector<std::size_t>&)>& f);

  const std::vector<Variable>& variables() const noexcept { return vars_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double total_mass() const;

  std::size_t index_of(const std::string& name) const;  // throws ContractViolation
  bool has(const std::string& name) const;

  double at(const std::vector<std::size_t>& assignment) const;
  std::vector<std::size_t> assignment_of(std::size_t flat) const;

  /// Marginal over `keep` (listed in the table's own variable order).
  JointTable marginalize(const NameSet& keep) const;
  /// Conditional table on the remaining variables; throws ZeroMassError if the
  /// event has zero mass.
  JointTable condition(const std::map<std::string, std::size_t>& assignment) const;

 private:
  static void check_layout(const std::vector<Variable>& vars, std::size_t n_probs);

  std::vector<Variable> vars_;
  std::vector<double> probs_;
};

/// Raw marginal masses over `vars` (in table order), not renormalised.
std::vector<double> marginal_masses(const JointTable& j, const NameSet& vars);

void write_table(std::ostream& out, const JointTable& j);
/// Reads the text form; mass checks are skipped when `checked` is false.
JointTable read_table(std::istream& in, bool checked = true);

}  // namespace mplab::info
