#include "mplab/andlab/cutpaste.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"
#include "mplab/info/measures.hpp"

namespace mplab::andlab {

bool search_feasible(const CostProfile& c, double gamma, double eps) {
  return check_and_contract(c).pass() && c.i_zx <= eps * gamma && c.i_xy_given_z <= eps * gamma * gamma;
}

namespace {

double violation(const CostProfile& c, double gamma, double eps) {
  double v = 0.0;
  if (c.err_and1 > 0.0) v += 1.0 + c.err_and1;
  v += std::max(0.0, c.err_and0 - kErrAnd0Limit) / kErrAnd0Limit;
  v += std::max(0.0, c.i_zx - eps * gamma) / (eps * gamma);
  v += std::max(0.0, c.i_xy_given_z - eps * gamma * gamma) / (eps * gamma * gamma);
  v += 2.0 * std::max(0.0, 0.5 - c.p_ans1);
  return v;
}

struct RestartOutcome {
  bool feasible = false;
  std::vector<double> kernel;  // best feasible, else least violating
  CostProfile profile;
  double violation = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

class Walker {
 public:
  Walker(const SearchConfig& cfg, std::size_t restart)
      : cfg_(cfg), m_(cfg.z_size), zeros_(std::max<std::size_t>(1, cfg.z_size / 4)),
        gen_(splitmix64(cfg.seed ^ splitmix64(0x5ea7c4ULL + restart))), restart_(restart) {
    ans_.assign(m_, 1);
    for (std::size_t z = 0; z < zeros_; ++z) ans_[z] = 0;
  }

  RestartOutcome run() {
    init();
    RestartOutcome out;
    observe(out);
    static constexpr double kSchedule[] = {1e4, 1e3, 1e2, 1e1, 1.0};
    const std::size_t per_stage = std::max<std::size_t>(1, cfg_.iterations / std::size(kSchedule));
    for (double mu : kSchedule) {
      double f = objective(cost_, mu);
      for (std::size_t it = 0; it < per_stage; ++it) {
        std::vector<double> saved = kernel_;
        if (!propose()) continue;
        const CostProfile c = evaluate();
        const double g = objective(c, mu);
        if (g <= f) {
          f = g;
          cost_ = c;
          observe(out);
        } else {
          kernel_.swap(saved);
        }
      }
    }
    out.evaluations = evaluations_;
    return out;
  }

  const std::vector<int>& ans() const { return ans_; }

 private:
  double objective(const CostProfile& c, double mu) const {
    return c.i_zy / cfg_.gamma + mu * violation(c, cfg_.gamma, cfg_.eps);
  }

  CostProfile evaluate() {
    ++evaluations_;
    return and_costs_fast(cfg_.gamma, m_, kernel_.data(), ans_.data());
  }

  void observe(RestartOutcome& out) const {
    const bool feas = search_feasible(cost_, cfg_.gamma, cfg_.eps);
    if (feas) {
      if (!out.feasible || cost_.i_zy < out.profile.i_zy) {
        out.feasible = true;
        out.kernel = kernel_;
        out.profile = cost_;
        out.violation = 0.0;
      }
    } else if (!out.feasible) {
      const double v = violation(cost_, cfg_.gamma, cfg_.eps);
      if (v < out.violation) {
        out.violation = v;
        out.kernel = kernel_;
        out.profile = cost_;
      }
    }
  }

  // Rows 0..2 may use every z; row 3 only the answer-0 values.
  std::size_t support_begin(std::size_t) const { return 0; }
  std::size_t support_end(std::size_t r) const { return r == 3 ? zeros_ : m_; }

  void init() {
    kernel_.assign(4 * m_, 0.0);
    const std::size_t ones = m_ - zeros_;
    auto put = [&](std::size_t r, std::size_t z, double v) { kernel_[r * m_ + z] += v; };
    for (std::size_t z = 0; z < zeros_; ++z) put(3, z, 1.0 / static_cast<double>(zeros_));
    switch (restart_ % 4) {
      case 0:  // the answer alone
        for (std::size_t r = 0; r < 3; ++r) {
          for (std::size_t z = zeros_; z < m_; ++z) put(r, z, 1.0 / static_cast<double>(ones));
        }
        break;
      case 1:  // answer plus Y
      case 2: {  // answer plus X
        const std::size_t half = std::max<std::size_t>(1, ones / 2);
        for (std::size_t r = 0; r < 3; ++r) {
          const int bit = restart_ % 4 == 1 ? static_cast<int>(r & 1) : static_cast<int>(r >> 1);
          const std::size_t lo = bit && ones > 1 ? zeros_ + half : zeros_;
          const std::size_t hi = bit || ones == 1 ? m_ : zeros_ + half;
          for (std::size_t z = lo; z < hi; ++z) put(r, z, 1.0 / static_cast<double>(hi - lo));
        }
        break;
      }
      default: {
        std::gamma_distribution<double> g(1.0, 1.0);
        for (std::size_t r = 0; r < 4; ++r) {
          std::fill(kernel_.begin() + static_cast<std::ptrdiff_t>(r * m_),
                    kernel_.begin() + static_cast<std::ptrdiff_t>((r + 1) * m_), 0.0);
          double s = 0.0;
          for (std::size_t z = support_begin(r); z < support_end(r); ++z) {
            // Answer-0 cells of the AND = 0 rows start small.
            const double w = (r < 3 && z < zeros_) ? 1e-4 : 1.0;
            const double v = w * g(gen_);
            kernel_[r * m_ + z] = v;
            s += v;
          }
          for (std::size_t z = 0; z < m_; ++z) kernel_[r * m_ + z] /= s;
        }
      }
    }
    cost_ = evaluate();
  }

  double log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(gen_));
  }

  bool propose() {
    std::uniform_int_distribution<std::size_t> pick_row(0, 3);
    const std::size_t r = pick_row(gen_);
    const std::size_t lo = support_begin(r), hi = support_end(r);
    if (hi - lo < 2) return false;
    double* row = kernel_.data() + r * m_;
    std::uniform_int_distribution<std::size_t> pick_z(lo, hi - 1);
    if (std::bernoulli_distribution(0.5)(gen_)) {
      const double alpha = log_uniform(1e-7, 1.0);
      std::gamma_distribution<double> g(0.5, 1.0);
      std::vector<double> d(hi - lo);
      double s = 0.0;
      for (auto& v : d) s += (v = g(gen_));
      if (!(s > 0.0)) return false;
      for (std::size_t z = lo; z < hi; ++z) row[z] = (1.0 - alpha) * row[z] + alpha * d[z - lo] / s;
    } else {
      const std::size_t from = pick_z(gen_), to = pick_z(gen_);
      if (from == to || row[from] <= 0.0) return false;
      const double t = row[from] * log_uniform(1e-7, 1.0);
      row[from] -= t;
      row[to] += t;
    }
    double s = 0.0;
    for (std::size_t z = 0; z < m_; ++z) s += row[z];
    for (std::size_t z = 0; z < m_; ++z) row[z] /= s;
    return true;
  }

  const SearchConfig& cfg_;
  std::size_t m_;
  std::size_t zeros_;
  std::mt19937_64 gen_;
  std::size_t restart_;
  std::vector<int> ans_;
  std::vector<double> kernel_;
  CostProfile cost_;
  std::size_t evaluations_ = 0;
};

void check_search(const SearchConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 0.1)) throw RefusedError("search needs gamma in (0, 0.1]");
  if (cfg.z_size < 2 || cfg.z_size > 16) throw RefusedError("search needs |Z| in [2, 16]");
  if (cfg.restarts == 0) throw ContractViolation("search needs at least one restart");
  if (!(cfg.eps > 0.0)) throw ContractViolation("eps must be positive");
}

SearchResult merge(const SearchConfig& cfg, const std::vector<RestartOutcome>& outs, const std::vector<int>& ans) {
  SearchResult res;
  std::size_t best = outs.size();
  for (std::size_t i = 0; i < outs.size(); ++i) {
    res.evaluations += outs[i].evaluations;
    if (outs[i].feasible) ++res.feasible_restarts;
  }
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto& o = outs[i];
    if (best == outs.size()) {
      best = i;
      continue;
    }
    const auto& b = outs[best];
    // Strict comparisons keep the lowest restart index on ties.
    if (o.feasible != b.feasible) {
      if (o.feasible) best = i;
    } else if (o.feasible ? o.profile.i_zy < b.profile.i_zy : o.violation < b.violation) {
      best = i;
    }
  }
  const auto& b = outs[best];
  res.feasible = b.feasible;
  res.best_restart = best;
  res.best_violation = b.feasible ? 0.0 : b.violation;
  res.best.gamma = cfg.gamma;
  res.best.z_size = cfg.z_size;
  res.best.kernel = b.kernel;
  res.best.ans = ans;
  res.profile = and_costs(res.best);
  return res;
}

SearchResult search(const SearchConfig& cfg, bool parallel) {
  check_search(cfg);
  std::vector<RestartOutcome> outs(cfg.restarts);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(cfg.restarts); ++r) {
    Walker w(cfg, static_cast<std::size_t>(r));
    outs[static_cast<std::size_t>(r)] = w.run();
  }
  return merge(cfg, outs, Walker(cfg, 0).ans());
}

}  // namespace

SearchResult adversarial_search(const SearchConfig& cfg) { return search(cfg, true); }

SearchResult adversarial_search_serial(const SearchConfig& cfg) { return search(cfg, false); }

double answer_information_floor(double gamma, std::size_t grid) {
  if (!(gamma > 0.0 && gamma < 1.0) || grid < 2) throw ContractViolation("floor needs gamma in (0, 1), grid >= 2");
  const double limit = kErrAnd0Limit * (1.0 - gamma * gamma);
  auto info = [gamma](double u, double v) {
    // X ~ B_gamma, Pr[ans = 0 | X = 0] = u, Pr[ans = 0 | X = 1] = v.
    const double q0 = (1.0 - gamma) * u + gamma * v;
    auto term = [](double pxy, double px_py) { return pxy > 0.0 ? pxy * std::log2(pxy / px_py) : 0.0; };
    return term((1.0 - gamma) * u, (1.0 - gamma) * q0) + term((1.0 - gamma) * (1.0 - u), (1.0 - gamma) * (1.0 - q0)) +
           term(gamma * v, gamma * q0) + term(gamma * (1.0 - v), gamma * (1.0 - q0));
  };
  double best = std::numeric_limits<double>::infinity();
  const double e10_max = std::min(1.0, limit / (gamma * (1.0 - gamma)));
  for (std::size_t a = 0; a <= grid; ++a) {
    const double e10 = e10_max * static_cast<double>(a) / static_cast<double>(grid);
    const double u_max = std::max(0.0, (limit - gamma * (1.0 - gamma) * e10) / (1.0 - gamma));
    for (std::size_t b = 0; b <= grid; ++b) {
      const double u = std::min(1.0, u_max * static_cast<double>(b) / static_cast<double>(grid));
      best = std::min(best, info(u, (1.0 - gamma) * e10 + gamma));
    }
  }
  return std::max(0.0, best);
}

void write_search_csv_header(std::ostream& out) {
  out << "gamma,z_size,eps,restarts,iterations,seed,feasible,feasible_restarts,best_restart,i_zy,i_zy_over_gamma,"
         "i_zx,i_xy_given_z,err_and1,err_and0,p_ans1,violation\n";
}

void write_search_csv_row(std::ostream& out, const SearchConfig& cfg, const SearchResult& r) {
  out << cfg.gamma << ',' << cfg.z_size << ',' << cfg.eps << ',' << cfg.restarts << ',' << cfg.iterations << ','
      << cfg.seed << ',' << (r.feasible ? 1 : 0) << ',' << r.feasible_restarts << ',' << r.best_restart << ','
      << r.profile.i_zy << ',' << r.profile.i_zy / cfg.gamma << ',' << r.profile.i_zx << ','
      << r.profile.i_xy_given_z << ',' << r.profile.err_and1 << ',' << r.profile.err_and0 << ','
      << r.profile.p_ans1 << ',' << r.best_violation << '\n';
}

// ---------------------------------------------------------------------------

double conditional_information(double b, double c) {
  const double a = 1.0 - b - c;
  double nats = 0.0;
  if (a > 0.0 && b > 0.0 && c > 0.0) nats -= a * std::log1p(b * c / a);
  if (b > 0.0) nats -= b * std::log1p(-c);
  if (c > 0.0) nats -= c * std::log1p(-b);
  return std::max(0.0, nats / std::log(2.0));
}

SweepPoint evaluate_point(double gamma, double b, double c) {
  SweepPoint p;
  p.a = std::max(0.0, 1.0 - b - c);
  p.b = b;
  p.c = c;
  p.kl_x = info::bernoulli_kl(c, gamma);
  p.kl_y = info::bernoulli_kl(b, gamma);
  p.info = conditional_information(b, c);
  return p;
}

namespace {

struct SweepAccumulator {
  std::size_t points = 0, filtered = 0, violations = 0;
  double kappa = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<SweepPoint> examples;

  void add(const SweepPoint& p, double gamma) {
    ++points;
    if (p.info > 0.0) kappa = std::max(kappa, p.b * p.c / p.info);
    if (p.kl_x <= gamma / 100.0 && p.info <= gamma * gamma / 100.0) {
      ++filtered;
      min_ratio = std::min(min_ratio, p.kl_y / (gamma / 100.0));
      if (p.kl_y < gamma / 100.0) {
        ++violations;
        if (examples.size() < 10) examples.push_back(p);
      }
    }
  }
  void merge(const SweepAccumulator& o) {
    points += o.points;
    filtered += o.filtered;
    violations += o.violations;
    kappa = std::max(kappa, o.kappa);
    min_ratio = std::min(min_ratio, o.min_ratio);
    for (const auto& e : o.examples) {
      if (examples.size() < 10) examples.push_back(e);
    }
  }
};

SweepReport sweep(const SweepConfig& cfg, bool parallel) {
  if (cfg.resolution < 100) throw RefusedError("sweep needs resolution >= 100");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 0.5)) throw ContractViolation("sweep needs gamma in (0, 1/2)");
  const std::size_t res = cfg.resolution;
  const double step = 1.0 / static_cast<double>(res);
  const double zstep = 3.0 * cfg.gamma / static_cast<double>(res);
  const std::size_t grids = cfg.zoom ? 2 : 1;
  // One accumulator per outer index, merged in order so the result does not
  // depend on scheduling.
  std::vector<SweepAccumulator> rows(grids * (res + 1));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(rows.size()); ++idx) {
    const std::size_t grid = static_cast<std::size_t>(idx) / (res + 1);
    const std::size_t i = static_cast<std::size_t>(idx) % (res + 1);
    auto& acc = rows[static_cast<std::size_t>(idx)];
    if (grid == 0) {
      for (std::size_t j = 0; i + j <= res; ++j) {
        acc.add(evaluate_point(cfg.gamma, static_cast<double>(i) * step, static_cast<double>(j) * step), cfg.gamma);
      }
    } else {
      for (std::size_t j = 0; j <= res; ++j) {
        acc.add(evaluate_point(cfg.gamma, static_cast<double>(i) * zstep, static_cast<double>(j) * zstep), cfg.gamma);
      }
    }
  }
  SweepAccumulator total;
  for (const auto& r : rows) total.merge(r);
  SweepReport rep;
  rep.gamma = cfg.gamma;
  rep.resolution = res;
  rep.points = total.points;
  rep.filtered = total.filtered;
  rep.violations = total.violations;
  rep.kappa = total.kappa;
  rep.min_kl_y_ratio = total.filtered ? total.min_ratio : 0.0;
  rep.examples = total.examples;
  return rep;
}

}  // namespace

SweepReport largediv_sweep(const SweepConfig& cfg) { return sweep(cfg, true); }

SweepReport largediv_sweep_serial(const SweepConfig& cfg) { return sweep(cfg, false); }

void write_sweep_report(std::ostream& out, const SweepReport& r) {
  out << "gamma\t" << r.gamma << "\nresolution\t" << r.resolution << "\npoints\t" << r.points << "\nfiltered\t"
      << r.filtered << "\nviolations\t" << r.violations << "\nkappa\t" << r.kappa << "\nmin_kl_y_ratio\t"
      << r.min_kl_y_ratio << '\n';
  for (const auto& p : r.examples) {
    out << "violation\ta=" << p.a << "\tb=" << p.b << "\tc=" << p.c << "\tkl_x=" << p.kl_x << "\tinfo=" << p.info
        << "\tkl_y=" << p.kl_y << '\n';
  }
}

}  // namespace mplab::andlab
