#include "mplab/core/selection.hpp"

#include <algorithm>
#include <numeric>

#include "mplab/core/errors.hpp"

namespace mplab {

void CoordinateSelection::validate(std::size_t k, std::size_t n) const {
  if (p < 1 || p > k) throw ContractViolation("selection needs 1 <= p <= k");
  if (indices.size() != p) throw ContractViolation("selection must list exactly p indices");
  if (ell >= p) throw ContractViolation("ell out of range");
  if (j >= n) throw ContractViolation("coordinate j out of range");
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractViolation("selected indices must be distinct");
  }
  if (sorted.back() >= k) throw ContractViolation("selected index out of range");
}

CoordinateSelection sample_selection(std::size_t k, std::size_t p, std::size_t n, CounterRng& rng) {
  if (p < 1 || p > k || n < 1) throw ContractViolation("sample_selection needs 1 <= p <= k and n >= 1");
  std::vector<std::size_t> pool(k);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  CoordinateSelection sel;
  sel.p = p;
  for (std::size_t a = 0; a < p; ++a) {
    std::size_t b = a + static_cast<std::size_t>(rng.below(k - a));
    std::swap(pool[a], pool[b]);
    sel.indices.push_back(pool[a]);
  }
  sel.ell = static_cast<std::size_t>(rng.below(p));
  sel.j = static_cast<std::size_t>(rng.below(n));
  return sel;
}

std::vector<std::vector<std::size_t>> ordered_tuples(std::size_t k, std::size_t p) {
  if (p > k) throw ContractViolation("ordered_tuples needs p <= k");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::vector<bool> used(k, false);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == p) {
      out.push_back(cur);
      return;
    }
    for (std::size_t x = 0; x < k; ++x) {
      if (used[x]) continue;
      used[x] = true;
      cur.push_back(x);
      self(self);
      cur.pop_back();
      used[x] = false;
    }
  };
  rec(rec);
  return out;
}

}  // namespace mplab
