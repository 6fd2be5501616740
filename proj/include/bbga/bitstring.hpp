#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bbga/rng.hpp"

namespace bbga {

/// Fixed-length binary genotype, packed 64 genes per word.
///
/// Positions are 0-based in this API: gene `i` here is position `i + 1` in
/// the usual 1..n notation. Bits past `size()` in the last word are always
/// zero, so word-level kernels can run over whole words.
class Bitstring {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitstring() = default;
  explicit Bitstring(std::size_t n, bool value = false);

  /// Parses a string of '0'/'1' characters; leftmost character is position 0.
  static Bitstring from_string(std::string_view bits);
  static Bitstring random(std::size_t n, Stream& rng);
  static Bitstring ones(std::size_t n) { return Bitstring(n, true); }

  std::size_t size() const noexcept { return n_; }
  std::size_t word_count() const noexcept { return words_.size(); }

  bool get(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  bool operator[](std::size_t i) const noexcept { return get(i); }
  void set(std::size_t i, bool value) noexcept {
    const Word bit = Word{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= bit;
    else
      words_[i / kWordBits] &= ~bit;
  }
  void flip(std::size_t i) noexcept {
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
  }

  std::uint64_t count_ones() const noexcept;
  std::uint64_t hamming(const Bitstring& other) const;
  Bitstring complement() const;
  std::string to_string() const;

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  /// Clears the bits past size() in the last word.
  void clear_tail() noexcept;

  /// Mask of valid bits in the last word.
  Word tail_mask() const noexcept;

  friend bool operator==(const Bitstring& a, const Bitstring& b) noexcept {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Word> words_;
};

}  // namespace bbga
