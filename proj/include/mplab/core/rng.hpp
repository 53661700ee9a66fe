#pragma once

#include <cstdint>
#include <string_view>

namespace mplab {

inline constexpr std::string_view kGeneratorId = "splitmix64-ctr-v1";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: value(c) depends only on (seed, stream, c), so any
/// worker can jump to any position without sharing state.
///
///   key      = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019))
///   value(c) = splitmix64(key + c * 0x9e3779b97f4a7c15)
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t at(std::uint64_t counter) const noexcept {
    return splitmix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next() noexcept { return at(counter_++); }

  /// Uniform double in (0, 1]; never returns 0 so log() is always finite.
  double next_open01() noexcept {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  bool bernoulli(double p) noexcept { return next_open01() <= p && p > 0.0; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t v = next();
    if (v < limit) return v % bound;
  }
}

}  // namespace mplab
