#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mplab {

/// Growable packed bit vector. Bit j lives in word j / 64 at position j % 64.
///
/// Used both for subsets of [n] (fixed length) and for message bit-strings
/// (appended to while a protocol runs).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  static BitVec from_indices(std::size_t n, std::span<const std::size_t> ones);
  static BitVec from_indices(std::size_t n, std::initializer_list<std::size_t> ones);
  /// "1010" -> bits {0, 2}; character j is bit j.
  static BitVec from_string(std::string_view bits);
  /// Low `n` bits of `value`, bit j = (value >> j) & 1.
  static BitVec from_uint(std::uint64_t value, std::size_t n);
  /// Inverse of to_hex(); throws ContractViolation on malformed payloads.
  static BitVec from_hex(std::string_view hex, std::size_t n);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t j) const;
  void set(std::size_t j, bool value = true);
  void push_back(bool bit);
  /// Appends the low `width` bits of `value`, least significant first.
  void append_uint(std::uint64_t value, unsigned width);
  void append(const BitVec& other);
  /// Reads `width` bits starting at `pos` as an unsigned integer (inverse of append_uint).
  std::uint64_t read_uint(std::size_t pos, unsigned width) const;
  BitVec slice(std::size_t pos, std::size_t len) const;

  std::size_t count() const noexcept;
  bool any() const noexcept;
  bool intersects(const BitVec& other) const;
  std::vector<std::size_t> ones() const;
  std::uint64_t to_uint() const;

  /// Base-16 payload: digit d carries bits 4d..4d+3, bit 4d in the digit's LSB.
  std::string to_hex() const;
  /// '0'/'1' characters, bit 0 first.
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend bool operator<(const BitVec& a, const BitVec& b) noexcept {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.words_ < b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Set-disjointness: 1 iff no position is set in both vectors.
bool disj(const BitVec& s, const BitVec& t);

/// Two-bit AND.
constexpr bool and2(bool x, bool y) noexcept { return x && y; }

/// ceil(log2(x)) for x >= 1, with ceil_log2(1) == 0.
unsigned ceil_log2(std::uint64_t x);

/// Number of bits needed to write values in [0, x], at least 1.
unsigned bits_for(std::uint64_t x);

/// Default cell width: max{ceil(log2 n), ceil(log2 k)} + 1, floored at 2 bits.
unsigned default_word_size(std::size_t n, std::size_t k);

}  // namespace mplab
