#include <bit>

#include "bbga/kernels.hpp"

namespace bbga::kernels {
namespace {

std::uint64_t popcount_scalar(const Word* words, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < count; ++w) total += std::popcount(words[w]);
  return total;
}

void blend_scalar(const Word* a, const Word* b, const Word* mask, Word* out,
                  std::size_t count) {
  for (std::size_t w = 0; w < count; ++w)
    out[w] = (a[w] & ~mask[w]) | (b[w] & mask[w]);
}

std::uint64_t hamming_scalar(const Word* a, const Word* b, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < count; ++w) total += std::popcount(a[w] ^ b[w]);
  return total;
}

void xor_scalar(const Word* a, const Word* b, Word* out, std::size_t count) {
  for (std::size_t w = 0; w < count; ++w) out[w] = a[w] ^ b[w];
}

double masked_sum_scalar(const Word* words, const double* weights,
                         std::size_t nbits) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < nbits; ++j) {
    const bool bit = (words[j >> 6] >> (j & 63)) & 1U;
    lane[j & 3] += bit ? weights[j] : 0.0;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

constexpr KernelTable kScalar{
    "scalar",     popcount_scalar, blend_scalar, hamming_scalar,
    xor_scalar,   masked_sum_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace bbga::kernels
