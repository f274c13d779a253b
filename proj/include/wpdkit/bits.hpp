#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace wpdkit {

/// Fixed-length packed bit vector; also a vector over GF(2).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits) : size_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  /// popcount(*this & ~o)
  std::size_t count_without(const BitVector& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += static_cast<std::size_t>(std::popcount(words_[k] & ~o.words_[k]));
    return c;
  }
  /// true iff every set bit of *this is set in o
  bool subset_of(const BitVector& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  /// Index of the highest set bit, or -1.
  std::ptrdiff_t highest() const {
    for (std::size_t k = words_.size(); k-- > 0;)
      if (words_[k]) return static_cast<std::ptrdiff_t>(k * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[k])));
    return -1;
  }

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace wpdkit
