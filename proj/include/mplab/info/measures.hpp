#pragma once

#include <string>
#include <vector>

#include "mplab/info/joint_table.hpp"

namespace mplab::info {

/// H(vars | given) in bits, with 0 log 0 = 0.
double entropy(const JointTable& j, const NameSet& vars, const NameSet& given = {});

/// I(a; b | c) = H(a|c) - H(a|bc).
double mutual_information(const JointTable& j, const NameSet& a, const NameSet& b,
                          const NameSet& c = {});

/// Second route: E_{b,c}[ D( a | b,c  ||  a | c ) ]. Weights are normalised by the
/// table's total mass, so on a valid table both routes agree.
double mutual_information_by_divergence(const JointTable& j, const NameSet& a, const NameSet& b,
                                        const NameSet& c = {});

double kl_mi_identity_residual(const JointTable& j, const NameSet& a, const NameSet& b,
                               const NameSet& c = {});

/// D(mu || nu) in bits; +infinity when mu has mass outside nu's support.
double kl(const JointTable& mu, const JointTable& nu);
double kl(const std::vector<double>& mu, const std::vector<double>& nu);

double binary_entropy(double p);
/// D(B_q || B_p).
double bernoulli_kl(double q, double p);

JointTable bernoulli_table(double p, const std::string& name = "X");

/// Exact referee: masses are converted to rationals (every double is one) and
/// normalised exactly, logs are evaluated with 50 decimal digits. Tables up to
/// 2^16 entries.
double referee_mutual_information(const JointTable& j, const NameSet& a, const NameSet& b,
                                  const NameSet& c = {});
double referee_entropy(const JointTable& j, const NameSet& vars, const NameSet& given = {});

}  // namespace mplab::info
