#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mplab/core/bitvec.hpp"

namespace mplab {

inline constexpr std::string_view kHardTag = "hard-distribution";

/// gamma = 1 / (1000 sqrt(n)), kept as a real number for every n.
double hard_gamma(std::size_t n);

/// (S_1..S_k, T) over universe [n]. Indices are 0-based throughout the code.
struct MultiphaseInstance {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<BitVec> sets;
  BitVec t;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::string generator;  // generator id, empty for hand-built instances
  std::string tag;        // "hard-distribution" or empty

  bool answer(std::size_t i) const;  // disj(S_i, T)
  void validate() const;             // throws ContractViolation
  bool operator==(const MultiphaseInstance&) const = default;
};

/// Hand-built instance (no generator); validates lengths.
MultiphaseInstance make_instance(std::vector<BitVec> sets, BitVec t, double gamma = 0.5);

/// All bits i.i.d. Bernoulli(gamma) with gamma = hard_gamma(n) unless overridden.
/// Row r < k is S_{r}, row k is T; each row owns RNG stream r, so the result is
/// the same whether rows are sampled in parallel or one after another.
MultiphaseInstance sample_hard_instance(std::size_t n, std::size_t k, std::uint64_t seed,
                                        std::optional<double> gamma_override = std::nullopt);

/// Serial reference for sample_hard_instance; bit-identical by construction.
MultiphaseInstance sample_hard_instance_serial(std::size_t n, std::size_t k, std::uint64_t seed,
                                               std::optional<double> gamma_override = std::nullopt);

/// Decodes instance number `code` of the exhaustive input space: bit r*n + j of
/// `code` is bit j of row r (rows 0..k-1 are sets, row k is T). n*(k+1) <= 63.
MultiphaseInstance instance_from_code(std::size_t n, std::size_t k, std::uint64_t code);

void write_instance(std::ostream& out, const MultiphaseInstance& inst);
/// Throws ParseError with line/column on malformed input.
MultiphaseInstance read_instance(std::istream& in);

}  // namespace mplab
