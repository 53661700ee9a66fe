#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mplab/andlab/process.hpp"

namespace mplab::andlab {

struct SearchConfig {
  double gamma = 0.01;
  std::size_t z_size = 4;
  double eps = 0.01;
  std::size_t restarts = 200;
  std::uint64_t seed = 1;
  std::size_t iterations = 6000;  // proposals per restart, split over the penalty schedule
};

/// Hypotheses of the robust cut-and-paste statement: contract PASS,
/// I(Z;X) <= eps gamma and I(X;Y|Z) <= eps gamma^2.
bool search_feasible(const CostProfile& c, double gamma, double eps);

struct SearchResult {
  bool feasible = false;            // some restart ended on a feasible kernel
  RandomProcess best;               // best feasible kernel, or the least-violating one
  CostProfile profile;
  std::size_t best_restart = 0;
  std::size_t feasible_restarts = 0;
  double best_violation = 0.0;      // normalised constraint violation of `best` (0 when feasible)
  std::size_t evaluations = 0;
};

/// Multi-restart local search on the kernel simplex minimising I(Z;Y). The
/// first max(1, z_size / 4) z values answer 0 and the (1,1) row lives on them,
/// so err_and1 = 0 holds by construction; the remaining constraints enter an
/// exact penalty whose weight decreases over the run. Refused for gamma
/// outside (0, 0.1] or z_size outside [2, 16].
SearchResult adversarial_search(const SearchConfig& cfg);
SearchResult adversarial_search_serial(const SearchConfig& cfg);

/// Smallest I(Z_ans; X) over answer channels meeting the AND contract, on a
/// grid x grid mesh of the (Pr[ans=0 | X=0], Pr[ans=0 | 10]) region. Since Z_ans is
/// a function of Z, every contract-meeting kernel has I(Z;X) at least this
/// (up to the mesh), so eps gamma below it leaves the search nothing feasible.
double answer_information_floor(double gamma, std::size_t grid = 2000);

void write_search_csv_header(std::ostream& out);
void write_search_csv_row(std::ostream& out, const SearchConfig& cfg, const SearchResult& r);

// ---------------------------------------------------------------------------

struct SweepConfig {
  double gamma = 0.01;
  std::size_t resolution = 1000;
  bool zoom = true;  // second grid on b, c in [0, 3 gamma]
};

struct SweepPoint {
  double a = 0.0, b = 0.0, c = 0.0;
  double kl_x = 0.0;     // KL(X_z || B_gamma), X_z = B(c)
  double info = 0.0;     // I(X;Y | Z = z)
  double kl_y = 0.0;     // KL(Y_z || B_gamma), Y_z = B(b)
};

struct SweepReport {
  double gamma = 0.0;
  std::size_t resolution = 0;
  std::size_t points = 0;
  std::size_t filtered = 0;         // points passing both hypotheses
  std::size_t violations = 0;       // filtered points with KL(Y_z || B_gamma) < gamma / 100
  double kappa = 0.0;               // max b c / I(X;Y|Z=z) over points with positive information
  double min_kl_y_ratio = 0.0;      // min over filtered points of KL(Y_z || B_gamma) / (gamma / 100)
  std::vector<SweepPoint> examples; // first violations, at most 10
};

/// Conditional law at one z with no mass on (1,1): a = Pr[00], b = Pr[01], c = Pr[10].
SweepPoint evaluate_point(double gamma, double b, double c);
/// Closed form of I(X;Y|Z=z) for that law, stable for small b c.
double conditional_information(double b, double c);

/// Refused below resolution 100.
SweepReport largediv_sweep(const SweepConfig& cfg);
SweepReport largediv_sweep_serial(const SweepConfig& cfg);

void write_sweep_report(std::ostream& out, const SweepReport& r);

}  // namespace mplab::andlab
