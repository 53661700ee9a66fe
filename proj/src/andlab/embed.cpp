#include "mplab/andlab/embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <map>
#include <unordered_map>

#include <omp.h>

#include "mplab/core/errors.hpp"
#include "mplab/core/instance.hpp"
#include "mplab/core/rng.hpp"
#include "mplab/core/selection.hpp"

namespace mplab::andlab {

namespace {

std::string pi_string(const nof::Transcript& tr) {
  std::string s = "m" + tr.megan.to_string() + "|u" + tr.u_prime.to_string();
  for (const auto& r : tr.rounds) s += "|r" + r.to_string();
  return s;
}

// Key of Z^AND. `trs[r]` is the transcript of index tup[r] for r <= ell.
std::string z_key(const MultiphaseInstance& inst, const std::vector<std::size_t>& tup, std::size_t ell,
                  std::size_t j, const std::vector<const nof::Transcript*>& trs) {
  std::string key = pi_string(*trs[ell]);
  key += "#";
  for (std::size_t r = 0; r < ell; ++r) {
    key += inst.sets[tup[r]].to_string() + "/" + trs[r]->effective_megan().to_string() + ",";
  }
  key += "#";
  for (std::size_t idx : tup) key += std::to_string(idx) + ",";
  key += ";" + std::to_string(ell) + "#" + inst.t.slice(0, j).to_string() + "#" + std::to_string(j);
  return key;
}

void check_config(const EmbedConfig& cfg) {
  if (cfg.n == 0 || cfg.k == 0) throw ContractViolation("embedding needs n, k >= 1");
  if (cfg.p < 1 || cfg.p > cfg.k) throw ContractViolation("embedding needs 1 <= p <= k");
  if (cfg.gamma && !(*cfg.gamma > 0.0 && *cfg.gamma < 1.0)) throw ContractViolation("gamma must lie in (0, 1)");
}

RandomProcess process_from(double gamma, const std::map<std::string, std::pair<int, std::array<double, 4>>>& rows) {
  RandomProcess z;
  z.gamma = gamma;
  z.z_size = rows.size();
  z.kernel.assign(4 * z.z_size, 0.0);
  std::size_t v = 0;
  for (const auto& [key, entry] : rows) {
    z.labels.push_back(key);
    z.ans.push_back(entry.first);
    for (std::size_t r = 0; r < 4; ++r) z.kernel[r * z.z_size + v] = entry.second[r];
    ++v;
  }
  return z;
}

}  // namespace

EmbeddedProcess embed_and_exact(const nof::ProtocolSpec& proto, const EmbedConfig& cfg) {
  check_config(cfg);
  const std::size_t n = cfg.n, k = cfg.k, p = cfg.p;
  const std::size_t bits = n * (k + 1);
  if (bits > 20) throw RefusedError("exact embedding over 2^" + std::to_string(bits) + " inputs exceeds 2^20");
  const auto tuples = ordered_tuples(k, p);
  const std::size_t inputs = std::size_t{1} << bits;
  const double records = static_cast<double>(inputs) * static_cast<double>(tuples.size() * p * n);
  if (records > static_cast<double>(std::size_t{1} << 24)) {
    throw RefusedError("exact embedding would visit " + std::to_string(static_cast<long double>(records)) +
                       " records");
  }
  const double gamma = cfg.gamma.value_or(hard_gamma(n));

  std::vector<std::vector<nof::Transcript>> trs(inputs);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t code = 0; code < static_cast<std::int64_t>(inputs); ++code) {
    try {
      const auto inst = instance_from_code(n, k, static_cast<std::uint64_t>(code));
      for (std::size_t i = 0; i < k; ++i) trs[static_cast<std::size_t>(code)].push_back(nof::run_protocol(proto, inst, i));
    } catch (...) {
#pragma omp critical(mplab_embed_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  EmbeddedProcess out;
  std::map<std::string, std::pair<int, std::array<double, 4>>> rows;
  const double weight = 1.0 / static_cast<double>(tuples.size() * p * n);
  const double px[2] = {1.0 - gamma, gamma};
  for (std::size_t code = 0; code < inputs; ++code) {
    const auto inst = instance_from_code(n, k, code);
    std::size_t ones = inst.t.count();
    for (const auto& s : inst.sets) ones += s.count();
    const double mass = std::pow(gamma, static_cast<double>(ones)) *
                        std::pow(1.0 - gamma, static_cast<double>(bits - ones));
    for (std::size_t i = 0; i < k; ++i) {
      const auto& tr = trs[code][i];
      if (tr.answer != inst.answer(i)) out.source_zero_error = false;
      out.c_bits = std::max(out.c_bits, tr.pi_bits());
      out.u_bits = std::max(out.u_bits, tr.u.size());
    }
    for (const auto& tup : tuples) {
      for (std::size_t ell = 0; ell < p; ++ell) {
        std::vector<const nof::Transcript*> view;
        for (std::size_t r = 0; r <= ell; ++r) view.push_back(&trs[code][tup[r]]);
        const bool answer = view[ell]->answer;
        for (std::size_t j = 0; j < n; ++j) {
          const int x = inst.sets[tup[ell]].test(j), y = inst.t.test(j);
          auto& entry = rows[z_key(inst, tup, ell, j, view)];
          entry.first = answer;
          entry.second[static_cast<std::size_t>(2 * x + y)] += mass / (px[x] * px[y]) * weight;
        }
      }
    }
  }
  out.process = process_from(gamma, rows);
  out.process.validate();
  out.profile = and_costs(out.process);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using CountMap = std::unordered_map<std::string, std::pair<int, std::size_t>>;

void draw(const nof::ProtocolSpec& proto, const EmbedConfig& cfg, double gamma, std::size_t row, std::size_t s,
          std::uint64_t seed, CountMap& counts) {
  const std::size_t n = cfg.n, k = cfg.k;
  CounterRng rng(seed, (static_cast<std::uint64_t>(row) << 40) | s);
  const auto sel = sample_selection(k, cfg.p, n, rng);
  std::vector<BitVec> sets(k, BitVec(n));
  BitVec t(n);
  for (auto& set : sets) {
    for (std::size_t b = 0; b < n; ++b) set.set(b, rng.bernoulli(gamma));
  }
  for (std::size_t b = 0; b < n; ++b) t.set(b, rng.bernoulli(gamma));
  sets[sel.target()].set(sel.j, (row >> 1) & 1);
  t.set(sel.j, row & 1);
  const auto inst = make_instance(std::move(sets), std::move(t), gamma);
  std::vector<nof::Transcript> trs;
  trs.reserve(sel.ell + 1);
  for (std::size_t r = 0; r <= sel.ell; ++r) trs.push_back(nof::run_protocol(proto, inst, sel.indices[r]));
  std::vector<const nof::Transcript*> view;
  for (const auto& tr : trs) view.push_back(&tr);
  auto& c = counts[z_key(inst, sel.indices, sel.ell, sel.j, view)];
  c.first = trs.back().answer;
  ++c.second;
}

// Plug-in entropy bias of one grouping: -(1 / 2 ln 2) sum_a Var(q_a) / q_a.
template <class GroupOf>
double entropy_bias(const RandomProcess& z, const double* prior, const std::size_t* per_row, GroupOf group_of,
                    std::size_t groups) {
  std::vector<double> q(groups, 0.0), var(groups, 0.0);
  // Per (row, group) conditional mass of the row.
  std::vector<double> m(4 * groups, 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t v = 0; v < z.z_size; ++v) {
      const std::size_t g = group_of(r, v);
      m[r * groups + g] += z.kernel[r * z.z_size + v];
      q[g] += prior[r] * z.kernel[r * z.z_size + v];
    }
  }
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t g = 0; g < groups; ++g) {
      const double mm = m[r * groups + g];
      var[g] += prior[r] * prior[r] * mm * (1.0 - mm) / static_cast<double>(per_row[r]);
    }
  }
  double b = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    if (q[g] > 0.0) b += var[g] / q[g];
  }
  return -b / (2.0 * std::log(2.0));
}

void attach_errors(MonteCarloEmbedding& mc, const std::size_t* per_row) {
  const RandomProcess& z = mc.process;
  const std::size_t m = z.z_size;
  double prior[4];
  for (int r = 0; r < 4; ++r) prior[r] = z.prior(r >> 1, r & 1);
  std::vector<double> qz(m, 0.0), qx(2 * m, 0.0), qy(2 * m, 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t v = 0; v < m; ++v) {
      const double q = prior[r] * z.kernel[r * m + v];
      qz[v] += q;
      qx[(r >> 1) * m + v] += q;
      qy[(r & 1) * m + v] += q;
    }
  }
  auto lg = [](double v) { return v > 0.0 ? std::log2(v) : 0.0; };
  // Gradients with respect to K_{r,z}; per-row constants drop out of the variance.
  auto variance = [&](auto grad) {
    double total = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
      double mean = 0.0, sq = 0.0;
      for (std::size_t v = 0; v < m; ++v) {
        const double k = z.kernel[r * m + v];
        if (k <= 0.0) continue;
        const double g = grad(r, v);
        mean += g * k;
        sq += g * g * k;
      }
      total += (sq - mean * mean) / static_cast<double>(per_row[r]);
    }
    return std::sqrt(std::max(total, 0.0));
  };
  mc.se.i_zx = variance([&](std::size_t r, std::size_t v) {
    return prior[r] * (lg(qx[(r >> 1) * m + v]) - lg(qz[v]));
  });
  mc.se.i_zy = variance([&](std::size_t r, std::size_t v) {
    return prior[r] * (lg(qy[(r & 1) * m + v]) - lg(qz[v]));
  });
  mc.se.i_xy_given_z = variance([&](std::size_t r, std::size_t v) {
    return prior[r] * (lg(prior[r] * z.kernel[r * m + v]) + lg(qz[v]) - lg(qx[(r >> 1) * m + v]) -
                       lg(qy[(r & 1) * m + v]));
  });
  // Rate fields are weighted sums of per-row answer frequencies. Their variance
  // uses the Jeffreys-smoothed frequency (c + 1/2) / (N + 1), so a rare answer
  // that never showed up still gets an error bar of order 1 / N.
  auto rate_se = [&](auto weight, int answer) {
    double total = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
      const double w = weight(r);
      if (w == 0.0) continue;
      double f = 0.0;
      for (std::size_t v = 0; v < m; ++v)
        if (z.ans[v] == answer) f += z.kernel[r * m + v];
      const double nr = static_cast<double>(per_row[r]);
      const double smoothed = (f * nr + 0.5) / (nr + 1.0);
      total += w * w * smoothed * (1.0 - smoothed) / nr;
    }
    return std::sqrt(total);
  };
  mc.se.err_and1 = rate_se([](std::size_t r) { return r == 3 ? 1.0 : 0.0; }, 1);
  mc.se.err_and0 = rate_se([&](std::size_t r) { return r == 3 ? 0.0 : prior[r] / (1.0 - prior[3]); }, 0);
  mc.se.p_ans1 = rate_se([&](std::size_t r) { return prior[r]; }, 1);

  const double hz = entropy_bias(z, prior, per_row, [](std::size_t, std::size_t v) { return v; }, m);
  const double hxz = entropy_bias(z, prior, per_row, [m](std::size_t r, std::size_t v) { return (r >> 1) * m + v; }, 2 * m);
  const double hyz = entropy_bias(z, prior, per_row, [m](std::size_t r, std::size_t v) { return (r & 1) * m + v; }, 2 * m);
  const double hxyz = entropy_bias(z, prior, per_row, [m](std::size_t r, std::size_t v) { return r * m + v; }, 4 * m);
  mc.bias.i_zx = hz - hxz;
  mc.bias.i_zy = hz - hyz;
  mc.bias.i_xy_given_z = hxz + hyz - hxyz - hz;
}

MonteCarloEmbedding run_mc(const nof::ProtocolSpec& proto, const EmbedConfig& cfg, std::size_t samples,
                           std::uint64_t seed, bool parallel) {
  check_config(cfg);
  if (samples < 4) throw ContractViolation("Monte Carlo embedding needs at least 4 samples");
  const double gamma = cfg.gamma.value_or(hard_gamma(cfg.n));
  std::size_t per_row[4];
  for (std::size_t r = 0; r < 4; ++r) per_row[r] = samples / 4 + (r < samples % 4 ? 1 : 0);

  std::map<std::string, std::pair<int, std::array<std::size_t, 4>>> merged;
  for (std::size_t r = 0; r < 4; ++r) {
    std::exception_ptr failure;
    // One count map per thread; the merge below is ordered by key.
    std::vector<CountMap> partial(parallel ? static_cast<std::size_t>(omp_get_max_threads()) : 1);
#pragma omp parallel if (parallel)
    {
      CountMap& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
      for (std::int64_t s = 0; s < static_cast<std::int64_t>(per_row[r]); ++s) {
        try {
          draw(proto, cfg, gamma, r, static_cast<std::size_t>(s), seed, local);
        } catch (...) {
#pragma omp critical(mplab_mc_failure)
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (const auto& local : partial) {
      for (const auto& [key, c] : local) {
        auto& e = merged[key];
        e.first = c.first;
        e.second[r] += c.second;
      }
    }
  }

  std::map<std::string, std::pair<int, std::array<double, 4>>> rows;
  for (const auto& [key, e] : merged) {
    auto& out = rows[key];
    out.first = e.first;
    for (std::size_t r = 0; r < 4; ++r) {
      out.second[r] = static_cast<double>(e.second[r]) / static_cast<double>(per_row[r]);
    }
  }
  MonteCarloEmbedding mc;
  mc.samples = samples;
  mc.seed = seed;
  mc.process = process_from(gamma, rows);
  mc.process.validate();
  mc.profile = and_costs(mc.process);
  attach_errors(mc, per_row);
  return mc;
}

}  // namespace

MonteCarloEmbedding embed_and_mc(const nof::ProtocolSpec& proto, const EmbedConfig& cfg, std::size_t samples,
                                 std::uint64_t seed) {
  return run_mc(proto, cfg, samples, seed, true);
}

MonteCarloEmbedding embed_and_mc_serial(const nof::ProtocolSpec& proto, const EmbedConfig& cfg,
                                        std::size_t samples, std::uint64_t seed) {
  return run_mc(proto, cfg, samples, seed, false);
}

std::vector<FieldAgreement> compare_profiles(const CostProfile& exact, const MonteCarloEmbedding& mc,
                                             double sigmas) {
  std::vector<FieldAgreement> out;
  auto add = [&](const char* name, double CostProfile::*f) {
    FieldAgreement a;
    a.field = name;
    a.exact = exact.*f;
    a.estimate = mc.profile.*f;
    const double b = mc.bias.*f;
    a.tolerance = sigmas * std::sqrt(mc.se.*f * (mc.se.*f) + 2.0 * b * b) + std::abs(b) + 1e-12;
    a.ok = std::abs(a.estimate - a.exact) <= a.tolerance;
    out.push_back(a);
  };
  add("i_zx", &CostProfile::i_zx);
  add("i_zy", &CostProfile::i_zy);
  add("i_xy_given_z", &CostProfile::i_xy_given_z);
  add("err_and1", &CostProfile::err_and1);
  add("err_and0", &CostProfile::err_and0);
  add("p_ans1", &CostProfile::p_ans1);
  return out;
}

}  // namespace mplab::andlab
