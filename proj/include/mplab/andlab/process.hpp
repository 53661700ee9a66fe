#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mplab/info/joint_table.hpp"

namespace mplab::andlab {

/// Z as a channel from (X, Y). Row r = 2x + y, so kernel[r * z_size + z] is
/// p(z | x, y). X and Y are independent B_gamma a priori.
struct RandomProcess {
  double gamma = 0.0;
  std::size_t z_size = 0;
  std::vector<double> kernel;
  std::vector<int> ans;             // z_ans per z value
  std::vector<std::string> labels;  // optional, one per z value

  double at(int x, int y, std::size_t z) const { return kernel[static_cast<std::size_t>(2 * x + y) * z_size + z]; }
  double prior(int x, int y) const;  // Pr[X = x] Pr[Y = y]
  /// Throws ContractViolation unless every row is a distribution within 1e-9
  /// and gamma lies in (0, 1).
  void validate() const;
  info::JointTable joint() const;  // variables X, Y, Z
};

struct CostProfile {
  double i_zx = 0.0;
  double i_zy = 0.0;
  double i_xy_given_z = 0.0;
  double err_and1 = 0.0;  // Pr[Z_ans = 1 | X = Y = 1]
  double err_and0 = 0.0;  // Pr[Z_ans = 0 | AND = 0]
  double p_ans1 = 0.0;    // Pr[Z_ans = 1]
};

inline constexpr double kErrAnd0Limit = 0.001;

/// Exact profile through the info engine's joint table.
CostProfile and_costs(const RandomProcess& z);
/// Same quantities from closed-form sums on the kernel, with no validation and
/// no allocation beyond the marginals. Used inside the search loop.
CostProfile and_costs_fast(double gamma, std::size_t z_size, const double* kernel, const int* ans);

struct ContractVerdict {
  bool and1_ok = false;
  bool and0_ok = false;
  bool ans1_ok = false;
  bool pass() const { return and1_ok && and0_ok && ans1_ok; }
  std::string reason() const;
};

ContractVerdict check_and_contract(const RandomProcess& z);
ContractVerdict check_and_contract(const CostProfile& c);

/// Text form: header line, then one line per z: label, ans, four masses.
void write_process(std::ostream& out, const RandomProcess& z);
void write_profile(std::ostream& out, const CostProfile& c, const std::string& prefix = "");

// A few processes with known behaviour.
RandomProcess constant_process(double gamma);
RandomProcess copy_x_process(double gamma);
RandomProcess or_process(double gamma);
RandomProcess ideal_and_process(double gamma);

}  // namespace mplab::andlab
