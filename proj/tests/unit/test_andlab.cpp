#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mplab/andlab/cutpaste.hpp"
#include "mplab/andlab/embed.hpp"
#include "mplab/andlab/process.hpp"
#include "mplab/core/errors.hpp"
#include "mplab/info/measures.hpp"
#include "mplab/nof/toy_protocols.hpp"

using namespace mplab;
using namespace mplab::andlab;

namespace {

// I(X;Y) of a 2x2 table given as masses m[2x + y], from the definition.
double direct_mi(const double m[4]) {
  const double px[2] = {m[0] + m[1], m[2] + m[3]};
  const double py[2] = {m[0] + m[2], m[1] + m[3]};
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double p = m[2 * x + y];
      if (p > 0.0) s += p * std::log2(p / (px[x] * py[y]));
    }
  return s;
}

RandomProcess leaky_and(double gamma, double leak) {
  // Rows 00, 01, 10 answer 0 with probability `leak`; row 11 always answers 0.
  RandomProcess z{gamma, 2, {leak, 1 - leak, leak, 1 - leak, leak, 1 - leak, 1.0, 0.0}, {0, 1}, {}};
  z.validate();
  return z;
}

}  // namespace

TEST_CASE("processes with known costs") {
  const auto c = and_costs(constant_process(0.3));
  CHECK(c.i_zx == 0.0);
  CHECK(c.i_zy == 0.0);
  CHECK(c.i_xy_given_z == doctest::Approx(0.0).epsilon(1e-12));

  const auto x = and_costs(copy_x_process(0.5));
  CHECK(x.i_zx == doctest::Approx(1.0));
  CHECK(x.i_zy == doctest::Approx(0.0).epsilon(1e-12));

  const auto a = and_costs(ideal_and_process(0.5));
  CHECK(a.err_and1 == 0.0);
  CHECK(a.err_and0 == 0.0);
  CHECK(a.p_ans1 == doctest::Approx(0.75));
  CHECK(check_and_contract(ideal_and_process(0.01)).pass());
}

TEST_CASE("OR process leaves X and Y correlated given Z") {
  const double g = 0.01;
  const auto c = and_costs(or_process(g));
  // Z = 0 pins (0, 0); Z = 1 carries rows 01, 10, 11 with their prior masses.
  const double m[4] = {0.0, (1 - g) * g, g * (1 - g), g * g};
  const double pz1 = m[1] + m[2] + m[3];
  const double cond[4] = {0.0, m[1] / pz1, m[2] / pz1, m[3] / pz1};
  CHECK(c.i_xy_given_z > 0.0);
  CHECK(c.i_xy_given_z == doctest::Approx(pz1 * direct_mi(cond)).epsilon(1e-12));
}

TEST_CASE("AND contract boundaries") {
  CHECK(check_and_contract(leaky_and(0.01, 0.001)).pass());
  const auto over = check_and_contract(leaky_and(0.01, 0.002));
  CHECK_FALSE(over.pass());
  CHECK_FALSE(over.and0_ok);
  CHECK(over.and1_ok);
  CHECK_FALSE(over.reason().empty());

  const auto always_one = check_and_contract(constant_process(0.01));
  CHECK_FALSE(always_one.and1_ok);

  RandomProcess zeros{0.01, 1, {1, 1, 1, 1}, {0}, {}};
  const auto v = check_and_contract(zeros);
  CHECK_FALSE(v.ans1_ok);
  CHECK_FALSE(v.and0_ok);
}

TEST_CASE("fast costs agree with the table path") {
  RandomProcess z{0.07, 3, {0.2, 0.5, 0.3, 0.1, 0.1, 0.8, 0.6, 0.0, 0.4, 0.3, 0.3, 0.4}, {0, 1, 1}, {}};
  z.validate();
  const auto slow = and_costs(z);
  const auto fast = and_costs_fast(z.gamma, z.z_size, z.kernel.data(), z.ans.data());
  CHECK(fast.i_zx == doctest::Approx(slow.i_zx).epsilon(1e-10));
  CHECK(fast.i_zy == doctest::Approx(slow.i_zy).epsilon(1e-10));
  CHECK(fast.i_xy_given_z == doctest::Approx(slow.i_xy_given_z).epsilon(1e-10));
  CHECK(fast.err_and0 == doctest::Approx(slow.err_and0).epsilon(1e-12));
  CHECK(fast.err_and1 == doctest::Approx(slow.err_and1).epsilon(1e-12));
  CHECK(fast.p_ans1 == doctest::Approx(slow.p_ans1).epsilon(1e-12));

  // Product kernel: z = (a, b) with a drawn from f(x) and b from h(y) keeps X
  // and Y independent given Z.
  const double f[2] = {0.3, 0.9}, h[2] = {0.6, 0.2};
  std::vector<double> k(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int za = 0; za < 2; ++za)
        for (int zb = 0; zb < 2; ++zb)
          k[(2 * x + y) * 4 + 2 * za + zb] = (za ? f[x] : 1 - f[x]) * (zb ? h[y] : 1 - h[y]);
  RandomProcess rect{0.2, 4, k, {0, 1, 1, 1}, {}};
  CHECK(and_costs(rect).i_xy_given_z == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(and_costs(rect).i_zx > 0.0);
  RandomProcess pure{0.2, 2, {}, {0, 1}, {}};
  pure.kernel = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  CHECK(and_costs(pure).i_xy_given_z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exact embedding of a zero-error protocol meets its bounds") {
  const std::size_t n = 2, k = 2, p = 1;
  const auto proto = nof::toy::megan_broadcasts_set(n, k);
  const auto e = embed_and_exact(proto, {n, k, p, 0.2});
  CHECK(e.source_zero_error);
  CHECK_NOTHROW(e.process.validate());
  // A correct protocol answers 0 on an AND = 0 coordinate only when another
  // coordinate of S_i and T meets.
  CHECK(e.profile.err_and0 == doctest::Approx(1 - std::pow(1 - 0.04, double(n - 1))).epsilon(1e-12));
  CHECK(e.profile.err_and1 == 0.0);
  const auto hard = embed_and_exact(proto, {n, k, p, std::nullopt});
  CHECK(check_and_contract(hard.profile).pass());
  const double c = static_cast<double>(e.c_bits);
  CHECK(e.profile.i_zx <= (c + p * c / static_cast<double>(k - p)) / n + 1e-12);
  CHECK(e.profile.i_xy_given_z <= static_cast<double>(e.u_bits + n) / static_cast<double>(p * n) + 1e-12);

  const auto bad = embed_and_exact(nof::toy::constant_one(n, k), {n, k, p, 0.2});
  CHECK_FALSE(bad.source_zero_error);
  CHECK_FALSE(check_and_contract(bad.profile).pass());

  CHECK_THROWS_AS(embed_and_exact(proto, {5, 4, 1, 0.2}), RefusedError);
}

TEST_CASE("Monte Carlo embedding agrees with the exact one") {
  const auto proto = nof::toy::forward_first_bit(2, 2);
  const EmbedConfig cfg{2, 2, 1, 0.3};
  const auto exact = embed_and_exact(proto, cfg);
  const auto mc = embed_and_mc(proto, cfg, 40000, 17);
  for (const auto& f : compare_profiles(exact.profile, mc)) CHECK_MESSAGE(f.ok, f.field);

  const auto serial = embed_and_mc_serial(proto, cfg, 40000, 17);
  CHECK(serial.process.kernel == mc.process.kernel);
  CHECK(serial.process.labels == mc.process.labels);
}

TEST_CASE("adversarial search is reproducible and thread independent") {
  SearchConfig cfg;
  cfg.gamma = 1e-3;
  cfg.z_size = 4;
  cfg.restarts = 6;
  cfg.iterations = 800;
  cfg.seed = 5;
  const auto a = adversarial_search(cfg);
  const auto b = adversarial_search_serial(cfg);
  const auto c = adversarial_search(cfg);
  CHECK(a.best.kernel == b.best.kernel);
  CHECK(a.best.kernel == c.best.kernel);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.best.ans[0] == 0);
  CHECK(a.profile.err_and1 == 0.0);
  if (a.feasible) CHECK(search_feasible(a.profile, cfg.gamma, cfg.eps));

  cfg.gamma = 0.5;
  CHECK_THROWS_AS(adversarial_search(cfg), RefusedError);
  cfg.gamma = 1e-3;
  cfg.z_size = 17;
  CHECK_THROWS_AS(adversarial_search(cfg), RefusedError);
}

TEST_CASE("answer channel floor exceeds eps gamma at gamma = 1e-2") {
  const double floor = answer_information_floor(1e-2, 400);
  CHECK(floor > 1e-4);
  CHECK(answer_information_floor(1e-3, 400) < 1e-5);
}

TEST_CASE("conditional information closed form") {
  for (double b : {1e-6, 1e-3, 0.02, 0.2})
    for (double c : {1e-7, 1e-3, 0.05, 0.3}) {
      const double m[4] = {1 - b - c, b, c, 0.0};
      CHECK(conditional_information(b, c) == doctest::Approx(direct_mi(m)).epsilon(1e-9));
    }
  const auto pt = evaluate_point(0.01, 0.01, 0.01);
  CHECK(pt.kl_x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pt.kl_y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pt.a == doctest::Approx(0.98));
}

TEST_CASE("sweep: parallel equals serial and the constant stays below ln 2") {
  const SweepConfig cfg{0.01, 200, true};
  const auto a = largediv_sweep(cfg);
  const auto b = largediv_sweep_serial(cfg);
  std::ostringstream sa, sb;
  write_sweep_report(sa, a);
  write_sweep_report(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(a.violations == 0);
  CHECK(a.filtered > 0);
  CHECK(a.kappa <= std::log(2.0) + 1e-9);
  CHECK(a.min_kl_y_ratio >= 1.0);
  CHECK_THROWS_AS(largediv_sweep({0.01, 50, false}), RefusedError);
}
