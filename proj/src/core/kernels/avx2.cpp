// Compiled with -mavx2; only reached after a CPUID check.
#include "kernels_impl.hpp"

#include <immintrin.h>

#include <bit>

namespace dd::kernels::detail {

namespace {

// Nonzero iff some bit of needle[0..stride) is missing from row.
inline bool has_stray_bits(const std::uint64_t* needle, const std::uint64_t* row,
                           std::size_t stride) {
  std::size_t w = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; w + 4 <= stride; w += 4) {
    const __m256i n = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(needle + w));
    const __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + w));
    acc = _mm256_or_si256(acc, _mm256_andnot_si256(r, n));
  }
  if (!_mm256_testz_si256(acc, acc)) return true;
  for (; w < stride; ++w)
    if (needle[w] & ~row[w]) return true;
  return false;
}

}  // namespace

std::ptrdiff_t find_superset_avx2(std::span<const std::uint64_t> needle,
                                  std::span<const std::uint64_t> rows,
                                  std::size_t stride) {
  if (stride == 0) return rows.empty() ? -1 : 0;
  const std::size_t n_rows = rows.size() / stride;

  // Single-word universes (<= 64 deltas) are the common case: compare four
  // rows per iteration against a broadcast needle.
  if (stride == 1) {
    const __m256i n = _mm256_set1_epi64x(static_cast<long long>(needle[0]));
    std::size_t r = 0;
    for (; r + 4 <= n_rows; r += 4) {
      const __m256i row = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rows.data() + r));
      const __m256i stray = _mm256_andnot_si256(row, n);
      const __m256i zero = _mm256_cmpeq_epi64(stray, _mm256_setzero_si256());
      const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(zero));
      if (mask != 0) return static_cast<std::ptrdiff_t>(r + std::countr_zero(static_cast<unsigned>(mask)));
    }
    for (; r < n_rows; ++r)
      if ((needle[0] & ~rows[r]) == 0) return static_cast<std::ptrdiff_t>(r);
    return -1;
  }

  for (std::size_t r = 0; r < n_rows; ++r)
    if (!has_stray_bits(needle.data(), rows.data() + r * stride, stride))
      return static_cast<std::ptrdiff_t>(r);
  return -1;
}

bool is_subset_avx2(std::span<const std::uint64_t> a,
                    std::span<const std::uint64_t> b) {
  return !has_stray_bits(a.data(), b.data(), a.size());
}

std::size_t popcount_avx2(std::span<const std::uint64_t> words) {
  // Nibble-lookup popcount (Mula) with a horizontal sum via SAD.
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= words.size(); w += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words.data() + w));
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                        _mm256_shuffle_epi8(lookup, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; w < words.size(); ++w) total += static_cast<std::size_t>(std::popcount(words[w]));
  return total;
}

}  // namespace dd::kernels::detail
