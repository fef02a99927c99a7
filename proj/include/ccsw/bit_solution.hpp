#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ccsw/errors.hpp"

namespace ccsw {

/// Fixed-length bit vector x in {0,1}^n, one bit per item / graph node.
class BitSolution {
 public:
  BitSolution() = default;
  explicit BitSolution(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  static BitSolution zeros(std::size_t n) { return BitSolution(n); }

  static BitSolution ones(std::size_t n) {
    BitSolution x(n);
    for (auto& w : x.words_) w = ~std::uint64_t{0};
    x.clear_tail();
    return x;
  }

  /// Builds from a string of '0'/'1' characters, position i = character i.
  static BitSolution from_string(std::string_view bits) {
    BitSolution x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        x.set(i, true);
      } else if (bits[i] != '0') {
        throw ParseError("bit string may only contain '0' and '1'", 0);
      }
    }
    return x;
  }

  /// Inverse of to_hex(); the length must be supplied since hex pads to 4 bits.
  static BitSolution from_hex(std::string_view hex, std::size_t n) {
    if (hex.size() != (n + 3) / 4) throw ParseError("hex bit string has wrong length", 0);
    BitSolution x(n);
    for (std::size_t d = 0; d < hex.size(); ++d) {
      const char ch = hex[d];
      unsigned nibble = 0;
      if (ch >= '0' && ch <= '9') {
        nibble = static_cast<unsigned>(ch - '0');
      } else if (ch >= 'a' && ch <= 'f') {
        nibble = static_cast<unsigned>(ch - 'a' + 10);
      } else {
        throw ParseError("invalid hex digit in bit string", 0);
      }
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t i = 4 * d + b;
        if ((nibble >> b) & 1U) {
          if (i >= n) throw ParseError("hex bit string sets bits past its length", 0);
          x.set(i, true);
        }
      }
    }
    return x;
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  [[nodiscard]] bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  [[nodiscard]] bool operator[](std::size_t i) const noexcept { return get(i); }

  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  /// |x|_1
  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  [[nodiscard]] bool none() const noexcept {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  /// Calls f(i) for every set bit, in increasing index order.
  template <typename F>
  void for_each_set_bit(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(w));
        f(wi * 64 + bit);
        w &= w - 1;
      }
    }
  }

  /// Hex digits ordered from bit 0 upward; digit d holds bits 4d..4d+3 with bit 4d as its least significant bit.
  [[nodiscard]] std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out((size_ + 3) / 4, '0');
    for (std::size_t d = 0; d < out.size(); ++d) {
      unsigned nibble = 0;
      for (std::size_t b = 0; b < 4 && 4 * d + b < size_; ++b) nibble |= static_cast<unsigned>(get(4 * d + b)) << b;
      out[d] = digits[nibble];
    }
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (get(i)) out[i] = '1';
    return out;
  }

  friend bool operator==(const BitSolution&, const BitSolution&) = default;

 private:
  void clear_tail() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ccsw
