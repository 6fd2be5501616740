#include "bbga/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define BBGA_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#endif

namespace bbga::kernels {

#if BBGA_HAVE_AVX2_VARIANT
namespace {

#define BBGA_AVX2 __attribute__((target("avx2,popcnt")))

// Nibble-LUT popcount over one 256-bit vector, summed per 64-bit lane.
BBGA_AVX2 inline __m256i popcount_lanes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2,
                                       3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2,
                                       2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                                         _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

BBGA_AVX2 inline std::uint64_t horizontal_sum(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

BBGA_AVX2 std::uint64_t popcount_avx2(const Word* words, std::size_t count) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= count; w += 4) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + w));
    acc = _mm256_add_epi64(acc, popcount_lanes(v));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; w < count; ++w) total += _mm_popcnt_u64(words[w]);
  return total;
}

BBGA_AVX2 void blend_avx2(const Word* a, const Word* b, const Word* mask,
                          Word* out, std::size_t count) {
  std::size_t w = 0;
  for (; w + 4 <= count; w += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    const __m256i vm =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + w));
    const __m256i r =
        _mm256_or_si256(_mm256_andnot_si256(vm, va), _mm256_and_si256(vm, vb));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + w), r);
  }
  for (; w < count; ++w) out[w] = (a[w] & ~mask[w]) | (b[w] & mask[w]);
}

BBGA_AVX2 std::uint64_t hamming_avx2(const Word* a, const Word* b,
                                     std::size_t count) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= count; w += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_xor_si256(va, vb)));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; w < count; ++w) total += _mm_popcnt_u64(a[w] ^ b[w]);
  return total;
}

BBGA_AVX2 void xor_avx2(const Word* a, const Word* b, Word* out,
                        std::size_t count) {
  std::size_t w = 0;
  for (; w + 4 <= count; w += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + w),
                        _mm256_xor_si256(va, vb));
  }
  for (; w < count; ++w) out[w] = a[w] ^ b[w];
}

// Four consecutive positions land in lanes 0..3, matching the scalar striping.
BBGA_AVX2 double masked_sum_avx2(const Word* words, const double* weights,
                                 std::size_t nbits) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= nbits; j += 4) {
    const unsigned nibble =
        static_cast<unsigned>((words[j >> 6] >> (j & 63)) & 0xFU);
    const __m256i bits = _mm256_set1_epi64x(nibble);
    const __m256i select = _mm256_setr_epi64x(1, 2, 4, 8);
    const __m256i lanes =
        _mm256_cmpeq_epi64(_mm256_and_si256(bits, select), select);
    const __m256d w = _mm256_loadu_pd(weights + j);
    acc = _mm256_add_pd(acc, _mm256_and_pd(w, _mm256_castsi256_pd(lanes)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; j < nbits; ++j) {
    const bool bit = (words[j >> 6] >> (j & 63)) & 1U;
    lane[j & 3] += bit ? weights[j] : 0.0;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

constexpr KernelTable kAvx2{
    "avx2",   popcount_avx2, blend_avx2, hamming_avx2,
    xor_avx2, masked_sum_avx2,
};

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() noexcept { return nullptr; }

#endif

}  // namespace bbga::kernels
