#include "mplab/core/bitvec.hpp"

#include <algorithm>
#include <bit>

#include "mplab/core/errors.hpp"

namespace mplab {

BitVec BitVec::from_indices(std::size_t n, std::span<const std::size_t> ones) {
  BitVec v(n);
  for (std::size_t j : ones) v.set(j);
  return v;
}

BitVec BitVec::from_indices(std::size_t n, std::initializer_list<std::size_t> ones) {
  return from_indices(n, std::span<const std::size_t>(ones.begin(), ones.size()));
}

BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == '1') {
      v.set(j);
    } else if (bits[j] != '0') {
      throw ContractViolation("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

BitVec BitVec::from_uint(std::uint64_t value, std::size_t n) {
  if (n > 64) throw ContractViolation("from_uint supports at most 64 bits");
  BitVec v(n);
  if (n > 0) v.words_[0] = n == 64 ? value : (value & ((std::uint64_t{1} << n) - 1));
  return v;
}

BitVec BitVec::from_hex(std::string_view hex, std::size_t n) {
  if (hex.size() != (n + 3) / 4) {
    throw ContractViolation("hex payload has " + std::to_string(hex.size()) + " digits, expected " +
                            std::to_string((n + 3) / 4));
  }
  BitVec v(n);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    char c = hex[d];
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw ContractViolation(std::string("invalid hex digit '") + c + "'");
    }
    for (unsigned b = 0; b < 4; ++b) {
      std::size_t j = 4 * d + b;
      bool bit = (nibble >> b) & 1u;
      if (j >= n) {
        if (bit) throw ContractViolation("hex payload sets bits beyond the vector length");
        continue;
      }
      if (bit) v.set(j);
    }
  }
  return v;
}

bool BitVec::test(std::size_t j) const {
  if (j >= size_) throw ContractViolation("bit index out of range");
  return (words_[j / 64] >> (j % 64)) & 1u;
}

void BitVec::set(std::size_t j, bool value) {
  if (j >= size_) throw ContractViolation("bit index out of range");
  std::uint64_t mask = std::uint64_t{1} << (j % 64);
  if (value) {
    words_[j / 64] |= mask;
  } else {
    words_[j / 64] &= ~mask;
  }
}

void BitVec::push_back(bool bit) {
  if (size_ % 64 == 0) words_.push_back(0);
  ++size_;
  if (bit) words_[(size_ - 1) / 64] |= std::uint64_t{1} << ((size_ - 1) % 64);
}

void BitVec::append_uint(std::uint64_t value, unsigned width) {
  if (width > 64) throw ContractViolation("append_uint width exceeds 64");
  if (width < 64 && (value >> width) != 0) {
    throw ContractViolation("value does not fit in " + std::to_string(width) + " bits");
  }
  for (unsigned b = 0; b < width; ++b) push_back((value >> b) & 1u);
}

void BitVec::append(const BitVec& other) {
  for (std::size_t j = 0; j < other.size_; ++j) push_back(other.test(j));
}

std::uint64_t BitVec::read_uint(std::size_t pos, unsigned width) const {
  if (width > 64) throw ContractViolation("read_uint width exceeds 64");
  if (pos + width > size_) throw ContractViolation("read_uint past the end of the bit string");
  std::uint64_t value = 0;
  for (unsigned b = 0; b < width; ++b) {
    if (test(pos + b)) value |= std::uint64_t{1} << b;
  }
  return value;
}

BitVec BitVec::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > size_) throw ContractViolation("slice past the end of the bit string");
  BitVec out(len);
  for (std::size_t j = 0; j < len; ++j) {
    if (test(pos + j)) out.set(j);
  }
  return out;
}

std::size_t BitVec::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVec::any() const noexcept {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

bool BitVec::intersects(const BitVec& other) const {
  if (other.size_ != size_) {
    throw ContractViolation("disjointness needs equal lengths (" + std::to_string(size_) + " vs " +
                            std::to_string(other.size_) + ")");
  }
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & other.words_[w]) return true;
  }
  return false;
}

std::vector<std::size_t> BitVec::ones() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::uint64_t BitVec::to_uint() const {
  if (size_ > 64) throw ContractViolation("to_uint supports at most 64 bits");
  return words_.empty() ? 0 : words_[0];
}

std::string BitVec::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((size_ + 3) / 4, '0');
  for (std::size_t d = 0; d < out.size(); ++d) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) {
      std::size_t j = 4 * d + b;
      if (j < size_ && test(j)) nibble |= 1u << b;
    }
    out[d] = kDigits[nibble];
  }
  return out;
}

std::string BitVec::to_string() const {
  std::string out(size_, '0');
  for (std::size_t j = 0; j < size_; ++j) {
    if (test(j)) out[j] = '1';
  }
  return out;
}

bool disj(const BitVec& s, const BitVec& t) { return !s.intersects(t); }

unsigned ceil_log2(std::uint64_t x) {
  if (x == 0) throw ContractViolation("ceil_log2(0) is undefined");
  return x == 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

unsigned bits_for(std::uint64_t x) { return std::max(1u, static_cast<unsigned>(std::bit_width(x))); }

unsigned default_word_size(std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw ContractViolation("word size needs n >= 1 and k >= 1");
  return std::max(2u, std::max(ceil_log2(n), ceil_log2(k)) + 1);
}

}  // namespace mplab
