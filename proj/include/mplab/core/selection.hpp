#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mplab/core/rng.hpp"

namespace mplab {

/// Ordered distinct indices (I_1..I_p) drawn from [k], a position ell in [p] and
/// a coordinate j in [n] (only the AND embedding uses j). All 0-based.
struct CoordinateSelection {
  std::size_t p = 0;
  std::vector<std::size_t> indices;
  std::size_t ell = 0;
  std::size_t j = 0;

  std::size_t target() const { return indices.at(ell); }
  void validate(std::size_t k, std::size_t n) const;
  bool operator==(const CoordinateSelection&) const = default;
};

/// Uniform ordered p-tuple (partial Fisher-Yates), uniform ell and j.
CoordinateSelection sample_selection(std::size_t k, std::size_t p, std::size_t n, CounterRng& rng);

/// All k!/(k-p)! ordered tuples in lexicographic order.
std::vector<std::vector<std::size_t>> ordered_tuples(std::size_t k, std::size_t p);

}  // namespace mplab
