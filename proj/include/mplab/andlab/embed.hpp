#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "mplab/andlab/process.hpp"
#include "mplab/nof/protocol.hpp"

namespace mplab::andlab {

struct EmbedConfig {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t p = 1;
  std::optional<double> gamma;  // defaults to 1 / (1000 sqrt n)
};

/// Z^AND for the embedding: (P, ell, j) uniform, S_{I_ell}^j = X and T^j = Y,
/// every other coordinate i.i.d. B_gamma, and
///   Z = (Pi_{I_ell}, S_{I_<ell}, PiM_{I_<ell}, P, ell, T^{<j}, j).
/// z values are the distinct keys of that tuple, sorted; ans is the protocol's
/// answer, which the transcript determines.
struct EmbeddedProcess {
  RandomProcess process;
  CostProfile profile;
  bool source_zero_error = true;  // the protocol answered disj correctly on every input
  std::size_t c_bits = 0;         // max |Pi_i| seen
  std::size_t u_bits = 0;         // max |U| seen
};

/// Exhaustive: every input, ordered tuple, ell and j. Refused when n(k+1) > 20
/// or the record count passes 2^24.
EmbeddedProcess embed_and_exact(const nof::ProtocolSpec& proto, const EmbedConfig& cfg);

/// Stratified Monte Carlo: samples / 4 draws per (x, y) row. Sample s of row r
/// uses CounterRng(seed, (r << 40) | s), so the result does not depend on the
/// thread count.
struct MonteCarloEmbedding {
  RandomProcess process;  // empirical kernel
  CostProfile profile;    // plug-in values on the empirical kernel, exact prior
  CostProfile se;         // delta-method standard errors (rates: Jeffreys-smoothed binomial)
  CostProfile bias;       // second-order bias of the plug-in values
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

MonteCarloEmbedding embed_and_mc(const nof::ProtocolSpec& proto, const EmbedConfig& cfg, std::size_t samples,
                                 std::uint64_t seed);
MonteCarloEmbedding embed_and_mc_serial(const nof::ProtocolSpec& proto, const EmbedConfig& cfg,
                                        std::size_t samples, std::uint64_t seed);

struct FieldAgreement {
  std::string field;
  double exact = 0.0;
  double estimate = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

/// Per field: |estimate - exact| <= 4 sqrt(se^2 + 2 bias^2) + |bias| + 1e-12.
/// The bias terms cover plug-in information values sitting at zero, where the
/// delta method alone reports a vanishing error.
std::vector<FieldAgreement> compare_profiles(const CostProfile& exact, const MonteCarloEmbedding& mc,
                                             double sigmas = 4.0);

}  // namespace mplab::andlab
