#include "mplab/andlab/process.hpp"

#include <cmath>
#include <ostream>

#include "mplab/core/errors.hpp"
#include "mplab/info/measures.hpp"

namespace mplab::andlab {

double RandomProcess::prior(int x, int y) const {
  return (x ? gamma : 1.0 - gamma) * (y ? gamma : 1.0 - gamma);
}

void RandomProcess::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ContractViolation("process gamma must lie in (0, 1)");
  if (z_size == 0) throw ContractViolation("process needs a non-empty Z alphabet");
  if (kernel.size() != 4 * z_size) throw ContractViolation("kernel must hold 4 rows of |Z| masses");
  if (ans.size() != z_size) throw ContractViolation("ans must assign a bit to every z");
  if (!labels.empty() && labels.size() != z_size) throw ContractViolation("labels must cover every z");
  for (std::size_t r = 0; r < 4; ++r) {
    double s = 0.0;
    for (std::size_t z = 0; z < z_size; ++z) {
      const double m = kernel[r * z_size + z];
      if (!(m >= 0.0)) throw ContractViolation("kernel row " + std::to_string(r) + " has a negative mass");
      s += m;
    }
    if (std::abs(s - 1.0) > 1e-9) {
      throw ContractViolation("kernel row " + std::to_string(r) + " sums to " + std::to_string(s));
    }
  }
  for (int a : ans) {
    if (a != 0 && a != 1) throw ContractViolation("ans values must be 0 or 1");
  }
}

info::JointTable RandomProcess::joint() const {
  validate();
  std::vector<double> probs(4 * z_size);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (std::size_t z = 0; z < z_size; ++z) {
        probs[static_cast<std::size_t>(2 * x + y) * z_size + z] = prior(x, y) * at(x, y, z);
      }
    }
  }
  return info::JointTable({{"X", 2}, {"Y", 2}, {"Z", z_size}}, std::move(probs));
}

CostProfile and_costs(const RandomProcess& z) {
  const auto j = z.joint();
  CostProfile c;
  c.i_zx = info::mutual_information(j, {"Z"}, {"X"});
  c.i_zy = info::mutual_information(j, {"Z"}, {"Y"});
  c.i_xy_given_z = info::mutual_information(j, {"X"}, {"Y"}, {"Z"});
  double and0_mass = 0.0, and0_wrong = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (std::size_t v = 0; v < z.z_size; ++v) {
        const double m = z.prior(x, y) * z.at(x, y, v);
        if (z.ans[v] == 1) c.p_ans1 += m;
        if (x && y) {
          if (z.ans[v] == 1) c.err_and1 += z.at(x, y, v);
        } else {
          and0_mass += m;
          if (z.ans[v] == 0) and0_wrong += m;
        }
      }
    }
  }
  c.err_and0 = and0_wrong / and0_mass;
  return c;
}

CostProfile and_costs_fast(double gamma, std::size_t z_size, const double* kernel, const int* ans) {
  const double px[2] = {1.0 - gamma, gamma};
  double pr[4];
  for (int r = 0; r < 4; ++r) pr[r] = px[r >> 1] * px[r & 1];
  CostProfile c;
  double wrong0 = 0.0;
  for (std::size_t z = 0; z < z_size; ++z) {
    double q[4];
    for (int r = 0; r < 4; ++r) q[r] = pr[r] * kernel[static_cast<std::size_t>(r) * z_size + z];
    const double qz = q[0] + q[1] + q[2] + q[3];
    if (ans[z]) {
      c.p_ans1 += qz;
      c.err_and1 += kernel[3 * z_size + z];
    } else {
      wrong0 += q[0] + q[1] + q[2];
    }
    if (qz <= 0.0) continue;
    const double qx[2] = {q[0] + q[1], q[2] + q[3]};
    const double qy[2] = {q[0] + q[2], q[1] + q[3]};
    for (int v = 0; v < 2; ++v) {
      if (qx[v] > 0.0) c.i_zx += qx[v] * std::log2(qx[v] / (px[v] * qz));
      if (qy[v] > 0.0) c.i_zy += qy[v] * std::log2(qy[v] / (px[v] * qz));
    }
    for (int r = 0; r < 4; ++r) {
      if (q[r] > 0.0) c.i_xy_given_z += q[r] * std::log2(q[r] * qz / (qx[r >> 1] * qy[r & 1]));
    }
  }
  c.err_and0 = wrong0 / (1.0 - pr[3]);
  return c;
}

std::string ContractVerdict::reason() const {
  if (pass()) return "pass";
  std::string r;
  if (!and1_ok) r += "err_and1 > 0; ";
  if (!and0_ok) r += "err_and0 > 0.001; ";
  if (!ans1_ok) r += "Pr[Z_ans = 1] < 1/2; ";
  r.resize(r.size() - 2);
  return r;
}

ContractVerdict check_and_contract(const CostProfile& c) {
  ContractVerdict v;
  v.and1_ok = c.err_and1 == 0.0;
  // The boundary 0.001 itself passes; the slack only absorbs summation rounding.
  v.and0_ok = c.err_and0 <= kErrAnd0Limit + 1e-12;
  v.ans1_ok = c.p_ans1 >= 0.5;
  return v;
}

ContractVerdict check_and_contract(const RandomProcess& z) { return check_and_contract(and_costs(z)); }

void write_process(std::ostream& out, const RandomProcess& z) {
  out << "# gamma " << z.gamma << " |Z| " << z.z_size << "\n# z\tans\tp(z|00)\tp(z|01)\tp(z|10)\tp(z|11)\n";
  out.precision(17);
  for (std::size_t v = 0; v < z.z_size; ++v) {
    out << (z.labels.empty() ? std::to_string(v) : z.labels[v]) << '\t' << z.ans[v];
    for (std::size_t r = 0; r < 4; ++r) out << '\t' << z.kernel[r * z.z_size + v];
    out << '\n';
  }
}

void write_profile(std::ostream& out, const CostProfile& c, const std::string& prefix) {
  out << prefix << "i_zx\t" << c.i_zx << '\n'
      << prefix << "i_zy\t" << c.i_zy << '\n'
      << prefix << "i_xy_given_z\t" << c.i_xy_given_z << '\n'
      << prefix << "err_and1\t" << c.err_and1 << '\n'
      << prefix << "err_and0\t" << c.err_and0 << '\n'
      << prefix << "p_ans1\t" << c.p_ans1 << '\n';
}

namespace {

RandomProcess deterministic(double gamma, std::size_t z_size, const int (&zmap)[4], std::vector<int> ans) {
  RandomProcess p;
  p.gamma = gamma;
  p.z_size = z_size;
  p.kernel.assign(4 * z_size, 0.0);
  for (std::size_t r = 0; r < 4; ++r) p.kernel[r * z_size + static_cast<std::size_t>(zmap[r])] = 1.0;
  p.ans = std::move(ans);
  p.validate();
  return p;
}

}  // namespace

RandomProcess constant_process(double gamma) { return deterministic(gamma, 1, {0, 0, 0, 0}, {1}); }

RandomProcess copy_x_process(double gamma) { return deterministic(gamma, 2, {0, 0, 1, 1}, {1, 1}); }

RandomProcess or_process(double gamma) { return deterministic(gamma, 2, {0, 1, 1, 1}, {1, 1}); }

RandomProcess ideal_and_process(double gamma) { return deterministic(gamma, 2, {1, 1, 1, 0}, {0, 1}); }

}  // namespace mplab::andlab
