#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Word-array kernels behind the bit-packed genotype. Every kernel has a scalar
// reference implementation and, where the CPU allows it, an AVX2 variant. The
// variants are required to be bit-for-bit equivalent to the reference, which
// keeps runs reproducible no matter which table the dispatcher picks.

namespace bbga::kernels {

using Word = std::uint64_t;

struct KernelTable {
  std::string_view name;

  /// Number of set bits in words[0, count).
  std::uint64_t (*popcount)(const Word* words, std::size_t count);

  /// out[w] = (a[w] & ~mask[w]) | (b[w] & mask[w]). out may alias a or b.
  void (*blend)(const Word* a, const Word* b, const Word* mask, Word* out,
                std::size_t count);

  /// popcount(a ^ b).
  std::uint64_t (*hamming)(const Word* a, const Word* b, std::size_t count);

  /// out[w] = a[w] ^ b[w]. out may alias a or b.
  void (*xor_words)(const Word* a, const Word* b, Word* out, std::size_t count);

  /// Sum of weights[j] over set bits j < nbits, accumulated in four striped
  /// lanes (lane j % 4, ascending j) then combined as (l0 + l1) + (l2 + l3).
  /// The fixed association makes the result identical across variants.
  double (*masked_sum)(const Word* words, const double* weights,
                       std::size_t nbits);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table, or nullptr when the running CPU lacks AVX2/POPCNT.
const KernelTable* avx2_table() noexcept;

/// Table used by the library. Chosen once: BBGA_KERNELS=scalar|avx2|auto in
/// the environment, otherwise the widest supported variant.
const KernelTable& active() noexcept;

/// Overrides the active table by name ("scalar", "avx2", "auto").
/// Returns false if the name is unknown or the variant is unsupported.
bool select(std::string_view name) noexcept;

}  // namespace bbga::kernels
