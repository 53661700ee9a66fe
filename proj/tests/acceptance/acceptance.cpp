// Acceptance run: one line per criterion, PASS or FAIL, with the measured
// numbers. Thresholds and budgets are the constants below.
//
// Exit status is 1 when some check found a counterexample. A criterion that
// only misses its stated scale or runtime prints FAIL with "(budget)" and
// leaves the exit status alone; see README.md.
//
// MPLAB_ACCEPT_FULL=1 makes criterion 3 enumerate every input for every
// (n, k) instead of sampling the two largest pairs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "mplab/andlab/cutpaste.hpp"
#include "mplab/andlab/embed.hpp"
#include "mplab/cellprobe/bench.hpp"
#include "mplab/cellprobe/harness.hpp"
#include "mplab/cellprobe/schemes.hpp"
#include "mplab/circuits/circuit.hpp"
#include "mplab/circuits/static_ds.hpp"
#include "mplab/core/instance.hpp"
#include "mplab/core/rng.hpp"
#include "mplab/info/facts.hpp"
#include "mplab/info/measures.hpp"
#include "mplab/nof/enumerate.hpp"
#include "mplab/nof/protocol.hpp"
#include "mplab/nof/reductions.hpp"
#include "mplab/nof/toy_protocols.hpp"

using namespace mplab;

namespace {

// Pinned thresholds.
constexpr double kC1Residual = 1e-9;
constexpr std::size_t kC1Tables = 1000;
constexpr double kC1Seconds = 10.0;
constexpr double kC2Factor = 5e-5;
constexpr double kC2Seconds = 1.0;
constexpr std::size_t kC3MaxExhaustiveBits = 24;
constexpr std::size_t kC3SampledInputs = std::size_t{1} << 20;
constexpr std::size_t kC3RandomInstances = 10000;
constexpr double kC3Seconds = 300.0;
constexpr double kC4Slack = 3.0;
constexpr double kC4MaxFallbackRate = 1e-6;
constexpr std::size_t kC4Queries = 100000;
constexpr std::size_t kC5AuditTrials = 1000;
constexpr double kC6Tolerance = 1e-9;
constexpr double kC6Seconds = 120.0;
constexpr std::size_t kC7Samples = 1000000;
constexpr double kC7Sigmas = 4.0;
constexpr double kC8Eps = 1e-2;
constexpr double kC8Floor = 1e-3;
constexpr std::size_t kC8Restarts = 200;
constexpr std::size_t kC8Resolution = 1000;
constexpr double kC8Seconds = 1800.0;
constexpr std::size_t kC9Circuits = 1000;
constexpr std::size_t kC9MaxWires = 10000;

struct Outcome {
  bool pass = true;
  bool budget_only = false;  // every check held, the stated scale or runtime did not
  std::string detail;
};

class Clock {
 public:
  Clock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome c1_identities() {
  Outcome o;
  const Clock clock;
  const auto corpus = info::random_table_corpus(kC1Tables, 2024);
  std::size_t violated = 0, checked = 0, conditional = 0;
  double worst = -1.0;
  for (const auto& t : corpus) {
    const auto rep = info::verify_facts_all_roles(t);
    for (const auto& r : rep.results) {
      if (r.status == info::FactStatus::not_applicable) continue;
      ++checked;
      worst = std::max(worst, r.residual);
      if (r.status == info::FactStatus::violated || r.residual > kC1Residual) ++violated;
      if (r.id == std::string(info::fact_id::extra_conditioning_increases) ||
          r.id == std::string(info::fact_id::extra_conditioning_decreases))
        ++conditional;
    }
  }
  const double secs = clock.seconds();
  o.pass = violated == 0 && conditional > 0 && secs < kC1Seconds;
  o.budget_only = violated == 0 && conditional > 0 && !o.pass;
  o.detail = std::to_string(corpus.size()) + " tables, " + std::to_string(checked) + " checks (" +
             std::to_string(conditional) + " conditional), " + std::to_string(violated) +
             " violated, max residual " + fmt(worst) + ", " + fmt(secs) + " s";
  return o;
}

Outcome c2_bernoulli() {
  Outcome o;
  const Clock clock;
  std::ostringstream d;
  bool ok = true;
  for (double p : {1e-2, 1e-3, 1e-4}) {
    const auto r = info::verify_bernoulli_bound(p, 100);
    // Independent long-double evaluation of both sides.
    auto kl = [](long double q, long double b) {
      return (q * std::log(q / b) + (1 - q) * std::log((1 - q) / (1 - b))) / std::log(2.0L);
    };
    const long double up = kl(1.01L * p, p), down = kl(0.99L * p, p);
    const bool here = r.status == info::FactStatus::satisfied && up >= kC2Factor * p && down >= kC2Factor * p;
    ok = ok && here;
    d << "p=" << p << " up/p=" << fmt(static_cast<double>(up / p)) << " down/p=" << fmt(static_cast<double>(down / p))
      << (here ? "" : " VIOLATED") << "; ";
  }
  const double secs = clock.seconds();
  o.pass = ok && secs < kC2Seconds;
  o.budget_only = ok && !o.pass;
  o.detail = d.str() + fmt(secs) + " s";
  return o;
}

// Every shipped scheme on one instance: answers against a direct disj, the
// discipline on every query log. Returns the number of failures.
std::size_t check_schemes(const std::vector<cellprobe::DataStructureSpec>& schemes, const MultiphaseInstance& inst) {
  std::size_t bad = 0;
  for (const auto& ds : schemes) {
    const auto run = cellprobe::run_multiphase(ds, inst);
    if (!run.ok()) ++bad;
    for (const auto& q : run.queries) {
      if (q.answer != disj(inst.sets[q.index], inst.t)) ++bad;
      if (!cellprobe::enforce_semi_adaptive(q.log, ds.budgets).pass) ++bad;
    }
  }
  return bad;
}

Outcome c3_semi_adaptive() {
  Outcome o;
  const Clock clock;
  const bool full = std::getenv("MPLAB_ACCEPT_FULL") != nullptr;
  std::size_t failures = 0, exhaustive_inputs = 0, sampled_inputs = 0;
  std::vector<std::string> sampled_pairs;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto schemes = cellprobe::shipped_schemes({n, k, 0});
      const std::size_t bits = n * (k + 1);
      const bool exhaustive = full || bits <= kC3MaxExhaustiveBits;
      const std::uint64_t total = std::uint64_t{1} << bits;
      const std::uint64_t count = exhaustive ? total : kC3SampledInputs;
      std::size_t bad = 0;
#pragma omp parallel for schedule(dynamic, 4096) reduction(+ : bad)
      for (std::uint64_t s = 0; s < count; ++s) {
        const std::uint64_t code = exhaustive ? s : (splitmix64(0xc3 + s) & (total - 1));
        bad += check_schemes(schemes, instance_from_code(n, k, code));
      }
      failures += bad;
      if (exhaustive) {
        exhaustive_inputs += count;
      } else {
        sampled_inputs += count;
        sampled_pairs.push_back("(" + std::to_string(n) + "," + std::to_string(k) + ")");
      }
    }
  }
  // Random instances at n = 2^12, cycling over three densities so that the
  // hard distribution, the fallback regime and dense sets all appear.
  const std::size_t n = 4096, k = 16;
  const auto schemes = cellprobe::shipped_schemes({n, k, 0});
  const double gammas[3] = {hard_gamma(n), 1.0 / 64.0, 1.0 / 512.0};
  std::size_t random_bad = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : random_bad)
  for (std::size_t s = 0; s < kC3RandomInstances; ++s)
    random_bad += check_schemes(schemes, sample_hard_instance(n, k, 0x3000 + s, gammas[s % 3]));
  failures += random_bad;

  const double secs = clock.seconds();
  const bool complete = sampled_pairs.empty();
  o.pass = failures == 0 && complete && secs < kC3Seconds;
  o.budget_only = failures == 0 && !o.pass;
  std::string sampled;
  for (const auto& p : sampled_pairs) sampled += p;
  o.detail = std::to_string(exhaustive_inputs) + " inputs exhaustive (n(k+1) <= " +
             std::to_string(full ? 30 : kC3MaxExhaustiveBits) + ")" +
             (complete ? "" : ", " + std::to_string(sampled_inputs) + " sampled for " + sampled) + ", " +
             std::to_string(kC3RandomInstances) + " random at n=4096, " + std::to_string(failures) + " failures, " +
             fmt(secs) + " s";
  if (!complete) o.detail += "; not exhaustive for the largest pairs (see README)";
  return o;
}

Outcome c4_sqrt_profile() {
  Outcome o;
  std::ostringstream d;
  bool ok = true;
  for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 12, std::size_t{1} << 14}) {
    cellprobe::BenchConfig cfg;
    cfg.params = {n, 64, 0};
    cfg.queries_per_instance = 100;
    cfg.instances = kC4Queries / cfg.queries_per_instance;
    cfg.seed = 0x4000 + n;
    const auto ds = cellprobe::ds_sqrt_scheme(cfg.params);
    const auto row = cellprobe::bench_multiphase({ds}, cfg).front();
    const double bound = kC4Slack * std::sqrt(double(n)) * std::log2(double(n)) / double(ds.w);
    const double rate = double(row.fallback_queries) / double(row.queries);
    const bool here = row.queries >= kC4Queries && double(row.p99_tq) <= bound && rate < kC4MaxFallbackRate &&
                      row.conformance_failures == 0 && row.soundness_failures.empty();
    ok = ok && here;
    d << "n=" << n << " p99=" << row.p99_tq << " bound=" << fmt(bound) << " fallback=" << row.fallback_queries << "/"
      << row.queries << (here ? "" : " VIOLATED") << "; ";
  }
  o.pass = ok;
  o.detail = d.str();
  return o;
}

Outcome c5_reduction() {
  Outcome o;
  std::size_t runs = 0, bad = 0, refused = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t k = 1; k <= 3; ++k) {
      for (const auto& ds : cellprobe::shipped_schemes({n, k, 0})) {
        nof::ProtocolSpec proto;
        try {
          proto = nof::ds_to_4party(ds);
        } catch (const std::exception&) {
          ++refused;
          continue;
        }
        const std::uint64_t total = std::uint64_t{1} << (n * (k + 1));
        std::size_t local = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : local)
        for (std::uint64_t code = 0; code < total; ++code) {
          const auto inst = instance_from_code(n, k, code);
          for (std::size_t i = 0; i < k; ++i) {
            const auto r = nof::check_reduction_run(ds, proto, inst, i);
            if (!r.ok() || r.transcript.answer != disj(inst.sets[i], inst.t)) ++local;
          }
        }
        bad += local;
        runs += total * k;
      }
    }
  }
  // Counterfactual audit on sampled inputs for the largest shape.
  std::size_t constraints = 0, violations = 0;
  for (const auto& ds : cellprobe::shipped_schemes({4, 3, 0})) {
    const auto proto = nof::ds_to_4party(ds);
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto inst = sample_hard_instance(4, 3, 0x5000 + s, 0.5);
      for (std::size_t i = 0; i < 3; ++i) {
        const auto rep = nof::visibility_audit(proto, inst, i, kC5AuditTrials, 0x5a + 7 * s + i);
        constraints += rep.constraints;
        violations += rep.violations.size();
      }
    }
  }
  o.pass = bad == 0 && refused == 0 && violations == 0 && constraints > 0;
  o.detail = std::to_string(runs) + " runs exhaustive (n<=4, k<=3), " + std::to_string(bad) + " bound/answer failures, " +
             std::to_string(refused) + " refused; audit " + std::to_string(constraints) + " constraints x " +
             std::to_string(kC5AuditTrials) + " trials, " + std::to_string(violations) + " violations";
  return o;
}

Outcome c6_goodq() {
  Outcome o;
  const Clock clock;
  std::size_t protocols = 0, failed = 0;
  bool adversarial = false;
  double worst_megan = 0.0;
  for (std::optional<double> gamma : {std::optional<double>{}, std::optional<double>{0.5}}) {
    for (const auto& p : nof::toy::four_party_suite(2, 3)) {
      const auto r = nof::verify_goodq_bounds(p, {2, 3, 2, gamma, std::nullopt}, 4, 64);
      ++protocols;
      adversarial = adversarial || p.name == nof::toy::advice_equals_t(2, 3).name;
      worst_megan = std::max(worst_megan, std::abs(r.megan_t));
      if (!r.all_hold() || std::abs(r.megan_t) > kC6Tolerance) ++failed;
    }
  }
  const double secs = clock.seconds();
  const bool ok = failed == 0 && adversarial && protocols >= 6;
  o.pass = ok && secs < kC6Seconds;
  o.budget_only = ok && !o.pass;
  o.detail = std::to_string(protocols) + " protocol runs (hard gamma and 1/2), " + std::to_string(failed) +
             " failed, max |I(T; S_P PiM_P Sel)| " + fmt(worst_megan) + ", " + fmt(secs) + " s";
  return o;
}

Outcome c7_embedding() {
  Outcome o;
  std::ostringstream d;
  bool ok = true;
  const andlab::EmbedConfig cfg{2, 3, 2, std::nullopt};
  for (const auto& p : nof::toy::four_party_suite(2, 3)) {
    const auto exact = andlab::embed_and_exact(p, cfg);
    const auto mc = andlab::embed_and_mc(p, cfg, kC7Samples, 0x7000);
    std::size_t disagree = 0;
    double worst = 0.0;
    for (const auto& f : andlab::compare_profiles(exact.profile, mc, kC7Sigmas)) {
      if (!f.ok) ++disagree;
      if (f.tolerance > 0.0) worst = std::max(worst, std::abs(f.estimate - f.exact) / f.tolerance);
    }
    const bool clause = !exact.source_zero_error || (exact.profile.err_and1 == 0.0 && mc.profile.err_and1 == 0.0);
    ok = ok && disagree == 0 && clause;
    d << p.name << ": " << disagree << " fields off, worst |diff|/tol " << fmt(worst)
      << (clause ? "" : ", err_and1 != 0") << "; ";
  }
  o.pass = ok;
  o.detail = d.str();
  return o;
}

Outcome c8_cutpaste() {
  Outcome o;
  const Clock clock;
  std::ostringstream d;
  bool ok = true;
  for (double gamma : {1e-2, 1e-3}) {
    const double floor = andlab::answer_information_floor(gamma);
    double best_ratio = std::numeric_limits<double>::infinity();
    std::size_t feasible = 0;
    for (std::size_t z : {2, 4, 8, 16}) {
      andlab::SearchConfig cfg;
      cfg.gamma = gamma;
      cfg.z_size = z;
      cfg.eps = kC8Eps;
      cfg.restarts = kC8Restarts;
      cfg.seed = 0x8000 + z;
      const auto r = andlab::adversarial_search(cfg);
      if (!r.feasible) continue;
      ++feasible;
      const double ratio = r.profile.i_zy / gamma;
      best_ratio = std::min(best_ratio, ratio);
      if (ratio < kC8Floor) ok = false;
    }
    const auto sweep = andlab::largediv_sweep({gamma, kC8Resolution, true});
    ok = ok && sweep.violations == 0;
    d << "gamma=" << gamma << ": feasible |Z| sizes " << feasible << "/4";
    if (feasible > 0) d << ", min I(Z;Y)/gamma " << fmt(best_ratio);
    d << ", answer-channel floor " << fmt(floor) << " vs eps*gamma " << fmt(kC8Eps * gamma) << ", sweep "
      << sweep.points << " points " << sweep.violations << " violations kappa " << fmt(sweep.kappa) << "; ";
  }
  const double secs = clock.seconds();
  o.pass = ok && secs < kC8Seconds;
  o.budget_only = ok && !o.pass;
  o.detail = d.str() + fmt(secs) + " s";
  return o;
}

Outcome c9_circuits() {
  Outcome o;
  std::size_t bound_fail = 0, equiv_fail = 0, g_fail = 0, audit_fail = 0, translations = 0, queries = 0;
  std::size_t max_wires = 0;
  double tightest = 0.0;
#pragma omp parallel for schedule(dynamic, 1) \
    reduction(+ : bound_fail, equiv_fail, g_fail, audit_fail, translations, queries) reduction(max : max_wires, tightest)
  for (std::size_t c = 0; c < kC9Circuits; ++c) {
    CounterRng rng(0x9000, c);
    circuits::RandomCircuitParams params;
    params.n_inputs = 4 + rng.below(9);
    params.depth = 1 + rng.below(3);
    params.gates_per_level = 2 + rng.below(39);
    params.max_fan_in = 2 + rng.below(15);
    params.outputs = 1 + rng.below(4);
    const auto circuit = circuits::random_circuit(params, splitmix64(c));
    const std::size_t wires = circuit.wires(), n = circuit.n_inputs();
    max_wires = std::max(max_wires, wires);
    if (wires > kC9MaxWires) continue;
    const auto& outs = circuit.outputs();
    for (std::size_t r = 1; r <= wires; r *= 2) {
      const auto v = circuits::viola_translate(circuit, r);
      ++translations;
      if (v.stored.size() >= r) ++g_fail;
      const double bound = std::pow(double(wires) / double(r), double(circuit.depth()));
      std::size_t most = 0;
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto in = BitVec::from_uint(x, n);
        const auto expect = circuit.eval(in);
        const auto memory = v.ds.preprocess(in);
        for (std::size_t q = 0; q < outs.size(); ++q) {
          const auto run = circuits::run_static(v.ds, memory, q);
          ++queries;
          most = std::max(most, run.log.probe_addresses().size());
          if (run.answer != expect.test(q)) ++equiv_fail;
        }
      }
      if (double(most) > bound) ++bound_fail;
      tightest = std::max(tightest, double(most) / bound);
      for (std::size_t q = 0; q < outs.size(); ++q)
        if (!circuits::audit_non_adaptive(v.ds, BitVec(n), q, 8, splitmix64(c * 31 + r)).pass) ++audit_fail;
    }
  }
  o.pass = bound_fail + equiv_fail + g_fail + audit_fail == 0 && max_wires <= kC9MaxWires;
  o.detail = std::to_string(kC9Circuits) + " circuits, " + std::to_string(translations) + " translations, " +
             std::to_string(queries) + " exhaustive queries; bound " + std::to_string(bound_fail) + ", equivalence " +
             std::to_string(equiv_fail) + ", |G|>=r " + std::to_string(g_fail) + ", audit " +
             std::to_string(audit_fail) + " failures; max probes/bound " + fmt(tightest) + ", max wires " +
             std::to_string(max_wires);
  return o;
}

Outcome c10_simulation() {
  Outcome o;
  std::size_t checks = 0, bad = 0, protocols = 0;
  const std::pair<std::size_t, std::size_t> shapes[] = {{3, 2}, {2, 3}, {4, 2}};
  for (const auto& [n, k] : shapes) {
    for (const auto& p : nof::toy::one_five_suite(n, k)) {
      ++protocols;
      const auto w = nof::wrap_one_point_five(p);
      const std::uint64_t total = std::uint64_t{1} << (n * (k + 1));
      for (std::uint64_t code = 0; code < total; ++code) {
        const auto inst = instance_from_code(n, k, code);
        for (std::size_t i = 0; i < k; ++i) {
          ++checks;
          if (!nof::check_simulation(p, w, inst, i).ok()) ++bad;
        }
      }
    }
  }
  o.pass = bad == 0;
  o.detail = std::to_string(protocols) + " protocol shapes, " + std::to_string(checks) + " enumerated runs, " +
             std::to_string(bad) + " mismatches or |PiM| > 2C";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"information identities on 1000 tables", c1_identities},
      {"Bernoulli divergence bound", c2_bernoulli},
      {"semi-adaptive discipline and answer equivalence", c3_semi_adaptive},
      {"sqrt n probe profile and fallback rate", c4_sqrt_profile},
      {"data structure to four-party reduction", c5_reduction},
      {"low-correlation bounds by enumeration", c6_goodq},
      {"AND embedding exact vs Monte Carlo", c7_embedding},
      {"robust cut-and-paste falsification", c8_cutpaste},
      {"circuit translation", c9_circuits},
      {"1.5-round simulation", c10_simulation},
  };
  std::ofstream file;
  if (argc > 1) file.open(argv[1]);
  int counterexamples = 0, passed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    Outcome o;
    const Clock clock;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, false, std::string("exception: ") + e.what()};
    }
    std::ostringstream line;
    line << "criterion " << (c + 1) << " " << (o.pass ? "PASS" : "FAIL") << (o.budget_only ? " (budget)" : "")
         << " | " << criteria[c].first << " | " << o.detail << " | " << fmt(clock.seconds()) << " s\n";
    std::cout << line.str() << std::flush;
    if (file) file << line.str();
    if (o.pass) ++passed;
    if (!o.pass && !o.budget_only) ++counterexamples;
  }
  std::cout << "summary: " << passed << "/" << criteria.size() << " passed, " << counterexamples
            << " with counterexamples\n";
  return counterexamples == 0 ? 0 : 1;
}
