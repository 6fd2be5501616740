#include "bbga/bitstring.hpp"

#include <stdexcept>

#include "bbga/kernels.hpp"

namespace bbga {

Bitstring::Bitstring(std::size_t n, bool value)
    : n_(n), words_((n + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
  clear_tail();
}

Bitstring Bitstring::from_string(std::string_view bits) {
  Bitstring x(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      x.set(i, true);
    else if (bits[i] != '0')
      throw std::invalid_argument("bitstring: invalid character at position " +
                                  std::to_string(i));
  }
  return x;
}

Bitstring Bitstring::random(std::size_t n, Stream& rng) {
  Bitstring x(n);
  for (auto& w : x.words_) w = rng();
  x.clear_tail();
  return x;
}

std::uint64_t Bitstring::count_ones() const noexcept {
  return kernels::active().popcount(words_.data(), words_.size());
}

std::uint64_t Bitstring::hamming(const Bitstring& other) const {
  if (other.n_ != n_) throw std::invalid_argument("bitstring: length mismatch");
  return kernels::active().hamming(words_.data(), other.words_.data(),
                                   words_.size());
}

Bitstring Bitstring::complement() const {
  Bitstring y(*this);
  for (auto& w : y.words_) w = ~w;
  y.clear_tail();
  return y;
}

std::string Bitstring::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

Bitstring::Word Bitstring::tail_mask() const noexcept {
  const std::size_t r = n_ % kWordBits;
  return r == 0 ? ~Word{0} : (Word{1} << r) - 1;
}

void Bitstring::clear_tail() noexcept {
  if (!words_.empty()) words_.back() &= tail_mask();
}

}  // namespace bbga
