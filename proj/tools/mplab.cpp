// Experiment runner: bench-multiphase, verify-info, cutpaste, translate-circuit.
// Exit status: 0 no violations, 1 a violated assertion, 2 usage or parse error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mplab/andlab/cutpaste.hpp"
#include "mplab/andlab/embed.hpp"
#include "mplab/cellprobe/bench.hpp"
#include "mplab/circuits/circuit.hpp"
#include "mplab/circuits/static_ds.hpp"
#include "mplab/core/errors.hpp"
#include "mplab/core/rng.hpp"
#include "mplab/info/facts.hpp"
#include "mplab/nof/enumerate.hpp"
#include "mplab/nof/toy_protocols.hpp"

namespace {

using namespace mplab;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

// Everything a report writes goes to stdout and, with --out, to DIR/<name>.
class Report {
 public:
  explicit Report(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }
  void emit(const std::string& file, const std::string& text) {
    std::cout << text;
    if (dir_.empty()) return;
    std::ofstream out(std::filesystem::path(dir_) / file, std::ios::app);
    out << text;
  }
  void reset(const std::string& file) {
    if (!dir_.empty()) std::ofstream(std::filesystem::path(dir_) / file, std::ios::trunc);
  }

 private:
  std::string dir_;
};

struct Common {
  std::uint64_t seed = 1;
  std::string out;
};

std::string resolved(const CLI::App& app) {
  std::istringstream in(app.config_to_str(true, false));
  std::string line, text = "# resolved config\n";
  while (std::getline(in, line)) text += "# " + line + "\n";
  return text;
}

// ---------------------------------------------------------------------------

struct BenchOpts {
  std::size_t n = 4096, k = 256;
  unsigned w = 0;
  std::size_t instances = 10, queries = 100;
  std::optional<double> gamma;
  bool plant = false;
};

int cmd_bench(const CLI::App& app, const Common& common, const BenchOpts& o) {
  cellprobe::BenchConfig cfg;
  cfg.params = {o.n, o.k, o.w};
  cfg.instances = o.instances;
  cfg.queries_per_instance = o.queries;
  cfg.seed = common.seed;
  cfg.gamma = o.gamma;
  cfg.plant_full_set = o.plant;
  const auto rows = cellprobe::bench_multiphase(cellprobe::shipped_schemes(cfg.params), cfg);

  Report rep(common.out);
  rep.reset("bench.csv");
  rep.reset("summary.txt");
  std::ostringstream csv;
  cellprobe::write_bench_csv(csv, rows);
  rep.emit("bench.csv", csv.str());
  std::ostringstream sum;
  sum << resolved(app);
  int status = kOk;
  for (const auto& r : rows) {
    sum << r.scheme << "\tp99_tq=" << r.p99_tq << "\tmax_tq=" << r.max_tq << "\tconformance_failures="
        << r.conformance_failures << "\tfallbacks=" << r.fallback_queries << '\n';
    if (r.conformance_failures) status = kViolation;
    for (const auto& f : r.soundness_failures) {
      sum << "SOUNDNESS FAILURE\t" << r.scheme << '\t' << f << '\n';
      status = kViolation;
    }
  }
  sum << (status == kOk ? "status\tok\n" : "status\tviolation\n");
  rep.emit("summary.txt", sum.str());
  return status;
}

// ---------------------------------------------------------------------------

struct InfoOpts {
  std::size_t tables = 1000;
  std::string table_file;
  std::size_t n = 2, k = 3, p = 2;
  std::optional<double> gamma;
  std::string mode = "exact";  // AND-embedding profiles: exact or mc
  std::size_t samples = 1000000;
};

int cmd_verify_info(const CLI::App& app, const Common& common, const InfoOpts& o) {
  Report rep(common.out);
  rep.reset("verify_info.txt");
  std::ostringstream s;
  s << resolved(app);
  int status = kOk;

  auto report_facts = [&](const std::string& what, const info::FactReport& r) {
    if (r.all_hold()) return true;
    // Name every violated fact once, with its first residual.
    std::vector<std::string> named;
    for (const auto& v : r.results) {
      if (v.status != info::FactStatus::violated) continue;
      if (std::find(named.begin(), named.end(), v.id) != named.end()) continue;
      named.push_back(v.id);
      s << "VIOLATION\t" << what << '\t' << v.id << "\tresidual=" << v.residual << '\t' << v.detail << '\n';
    }
    status = kViolation;
    return false;
  };

  if (!o.table_file.empty()) {
    std::ifstream in(o.table_file);
    if (!in) throw CLI::ValidationError("--table", "cannot open " + o.table_file);
    const auto table = info::read_table(in, false);
    if (report_facts(o.table_file, info::verify_facts_all_roles(table))) {
      s << "facts\t" << o.table_file << "\tall hold\n";
    }
  } else {
    const auto corpus = info::random_table_corpus(o.tables, common.seed);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      if (!report_facts("table " + std::to_string(t), info::verify_facts(corpus[t]))) ++bad;
    }
    s << "facts\tcorpus of " << corpus.size() << " tables\tviolations=" << bad << '\n';

    for (double p : {1e-2, 1e-3, 1e-4}) {
      const auto r = info::verify_bernoulli_bound(p);
      s << "bernoulli\tp=" << p << '\t' << info::to_string(r.status) << "\tresidual=" << r.residual << '\n';
      if (r.status == info::FactStatus::violated) status = kViolation;
    }

    nof::EnumerationConfig cfg{o.n, o.k, o.p, o.gamma, std::nullopt};
    for (const auto& proto : nof::toy::four_party_suite(o.n, o.k)) {
      const auto g = nof::verify_goodq_bounds(proto, cfg);
      std::ostringstream one;
      nof::write_goodq_report(one, g);
      s << one.str();
      if (!g.all_hold()) status = kViolation;
      if (std::abs(g.megan_t) > 1e-9) {
        s << "VIOLATION\t" << proto.name << "\tI(T; S_P PiM_P) = " << g.megan_t << '\n';
        status = kViolation;
      }
    }

    // Z^AND cost profiles. The exact profile is always computed (the suite is
    // enumerable); mc mode reports the estimate and checks it against it.
    const andlab::EmbedConfig ecfg{o.n, o.k, std::min(o.p, o.k), o.gamma};
    for (const auto& proto : nof::toy::four_party_suite(o.n, o.k)) {
      const auto exact = andlab::embed_and_exact(proto, ecfg);
      andlab::CostProfile shown = exact.profile;
      std::size_t off = 0;
      bool and1_zero = exact.profile.err_and1 == 0.0;
      if (o.mode == "mc") {
        const auto mc = andlab::embed_and_mc(proto, ecfg, o.samples, common.seed);
        shown = mc.profile;
        for (const auto& f : andlab::compare_profiles(exact.profile, mc)) off += !f.ok;
        and1_zero = and1_zero && mc.profile.err_and1 == 0.0;
      }
      std::ostringstream prefix;
      prefix << "embedding\t" << proto.name << "\tmode=" << o.mode << '\t';
      andlab::write_profile(s, shown, prefix.str());
      s << "embedding\t" << proto.name << "\tcontract=" << (andlab::check_and_contract(shown).pass() ? "pass" : "fail");
      if (o.mode == "mc") s << "\tfields_outside_4se=" << off;
      s << '\n';
      if (off > 0 || (exact.source_zero_error && !and1_zero)) {
        s << "VIOLATION\t" << proto.name << "\tembedding\n";
        status = kViolation;
      }
    }
  }
  s << (status == kOk ? "status\tok\n" : "status\tviolation\n");
  rep.emit("verify_info.txt", s.str());
  return status;
}

// ---------------------------------------------------------------------------

struct CutOpts {
  double gamma = 0.01;
  double eps = 0.01;
  std::size_t restarts = 200;
  std::size_t iterations = 6000;
  std::size_t z_max = 16;
  std::size_t resolution = 1000;
  double floor = 1e-3;  // asserted lower bound on I(Z;Y) / gamma
};

int cmd_cutpaste(const CLI::App& app, const Common& common, const CutOpts& o) {
  Report rep(common.out);
  rep.reset("search.csv");
  rep.reset("cutpaste.txt");
  std::ostringstream csv, s;
  s << resolved(app);
  int status = kOk;
  // The floor is only asserted inside the hypothesis regime eps <= 1/100.
  const bool assert_floor = o.eps <= 0.01;

  const double floor_zx = andlab::answer_information_floor(o.gamma);
  s << "answer_channel_floor\tI(Z_ans;X) >= " << floor_zx << "\teps*gamma=" << o.eps * o.gamma
    << (floor_zx > o.eps * o.gamma ? "\t(no kernel can meet the hypotheses)" : "") << '\n';
  andlab::write_search_csv_header(csv);
  for (std::size_t z = 2; z <= o.z_max; z *= 2) {
    andlab::SearchConfig cfg;
    cfg.gamma = o.gamma;
    cfg.z_size = z;
    cfg.eps = o.eps;
    cfg.restarts = o.restarts;
    cfg.iterations = o.iterations;
    cfg.seed = common.seed;
    const auto r = andlab::adversarial_search(cfg);
    andlab::write_search_csv_row(csv, cfg, r);
    s << "search\t|Z|=" << z << '\t' << (r.feasible ? "feasible" : "infeasible within budget");
    if (r.feasible) s << "\tI(Z;Y)/gamma=" << r.profile.i_zy / o.gamma;
    s << '\n';
    if (assert_floor && r.feasible && r.profile.i_zy < o.floor * o.gamma) {
      s << "VIOLATION\t|Z|=" << z << "\tfeasible kernel below the floor\n";
      status = kViolation;
    }
  }
  rep.emit("search.csv", csv.str());

  const auto sweep = andlab::largediv_sweep({o.gamma, o.resolution, true});
  std::ostringstream sw;
  andlab::write_sweep_report(sw, sweep);
  s << sw.str();
  if (sweep.violations) status = kViolation;
  s << (status == kOk ? "status\tok\n" : "status\tviolation\n");
  rep.emit("cutpaste.txt", s.str());
  return status;
}

// ---------------------------------------------------------------------------

struct CircuitOpts {
  std::string file;
  std::size_t r = 2;
  std::size_t samples = 1000;  // random inputs when n > 12
};

int cmd_translate(const CLI::App& app, const Common& common, const CircuitOpts& o) {
  std::ifstream in(o.file);
  if (!in) throw CLI::ValidationError("--circuit", "cannot open " + o.file);
  const auto c = circuits::read_circuit(in);
  const auto v = circuits::viola_translate(c, o.r);

  Report rep(common.out);
  rep.reset("translate.txt");
  std::ostringstream s;
  s << resolved(app);
  const std::size_t n = c.n_inputs();
  std::size_t mismatches = 0, checked = 0, audit_failures = 0;
  auto check_input = [&](const BitVec& x) {
    const auto values = c.eval_all(x);
    const auto memory = v.ds.preprocess(x);
    for (std::size_t i = 0; i < c.outputs().size(); ++i) {
      const auto run = circuits::run_static(v.ds, memory, i);
      if (run.answer != static_cast<bool>(values[c.outputs()[i]])) ++mismatches;
    }
    ++checked;
  };
  if (n <= 12) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) check_input(BitVec::from_uint(code, n));
  } else {
    CounterRng rng(common.seed, 0);
    for (std::size_t t = 0; t < o.samples; ++t) {
      BitVec x(n);
      for (std::size_t b = 0; b < n; ++b) x.set(b, rng.bernoulli(0.5));
      check_input(x);
    }
  }
  for (std::size_t i = 0; i < c.outputs().size(); ++i) {
    if (!circuits::audit_non_adaptive(v.ds, BitVec(n), i, 16, common.seed).pass) ++audit_failures;
  }
  const bool within = static_cast<double>(v.max_probes) <= v.bound * (1.0 + 1e-12);
  s << "wires\t" << c.wires() << "\ndepth\t" << c.depth() << "\nr\t" << o.r << "\n|G|\t" << v.stored.size()
    << "\nmax_probes\t" << v.max_probes << "\nbound\t" << v.bound << "\ninputs_checked\t" << checked
    << (n <= 12 ? " (exhaustive)" : " (sampled)") << "\nmismatches\t" << mismatches << "\nadaptivity_failures\t"
    << audit_failures << '\n';
  const bool ok = within && mismatches == 0 && audit_failures == 0 && v.stored.size() < o.r;
  s << (ok ? "status\tok\n" : "status\tviolation\n");
  rep.emit("translate.txt", s.str());
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiphase-problem lab"};
  app.set_config("--config", "", "structured text config (key = value); flags override it");
  app.fallthrough();  // global options may follow the subcommand
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "seed")->capture_default_str();
  app.add_option("--out", common.out, "directory for report files");

  BenchOpts bo;
  auto* bench = app.add_subcommand("bench-multiphase", "probe statistics of the shipped data structures");
  bench->add_option("--n", bo.n, "universe size")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--k", bo.k, "number of sets")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--w", bo.w, "word size (0 = default)")->capture_default_str();
  bench->add_option("--instances", bo.instances, "instances")->capture_default_str();
  bench->add_option("--queries", bo.queries, "queries per instance")->capture_default_str();
  bench->add_option("--gamma", bo.gamma, "Bernoulli parameter (default hard distribution)")->check(CLI::Range(0.0, 1.0));
  bench->add_flag("--plant-full", bo.plant, "plant S_0 = [n] in every instance");

  InfoOpts io;
  auto* verify = app.add_subcommand("verify-info", "information identities, Bernoulli bound, low-correlation bounds");
  verify->add_option("--tables", io.tables, "random tables in the corpus")->capture_default_str();
  verify->add_option("--table", io.table_file, "check a single table file instead");
  verify->add_option("--n", io.n, "universe size for the protocol suite")->capture_default_str();
  verify->add_option("--k", io.k, "number of sets")->capture_default_str();
  verify->add_option("--p", io.p, "tuple length")->capture_default_str();
  verify->add_option("--gamma", io.gamma, "Bernoulli parameter override")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--mode", io.mode, "AND-embedding profiles: exact or mc")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "mc"}));
  verify->add_option("--samples", io.samples, "Monte Carlo samples in mc mode")->capture_default_str();

  CutOpts co;
  auto* cut = app.add_subcommand("cutpaste", "adversarial search and divergence sweep");
  cut->add_option("--gamma", co.gamma, "Bernoulli parameter")->capture_default_str();
  cut->add_option("--eps", co.eps, "hypothesis slack")->capture_default_str();
  cut->add_option("--restarts", co.restarts, "restarts per |Z|")->capture_default_str();
  cut->add_option("--iterations", co.iterations, "proposals per restart")->capture_default_str();
  cut->add_option("--z", co.z_max, "largest |Z| (sizes 2, 4, ... up to it)")->capture_default_str();
  cut->add_option("--resolution", co.resolution, "sweep grid resolution")->capture_default_str();
  cut->add_option("--floor", co.floor, "asserted lower bound on I(Z;Y)/gamma when eps <= 0.01")
      ->capture_default_str();

  CircuitOpts ko;
  auto* tr = app.add_subcommand("translate-circuit", "translate a circuit into a static data structure");
  tr->add_option("--circuit", ko.file, "circuit file")->required();
  tr->add_option("--r", ko.r, "redundancy parameter")->capture_default_str()->check(CLI::PositiveNumber);
  tr->add_option("--samples", ko.samples, "random inputs when n > 12")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*bench) return cmd_bench(app, common, bo);
    if (*verify) return cmd_verify_info(app, common, io);
    if (*cut) return cmd_cutpaste(app, common, co);
    if (*tr) return cmd_translate(app, common, ko);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const RefusedError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
