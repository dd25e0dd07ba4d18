#include <immintrin.h>

#include "kernels_impl.hpp"
#include "ptcount/kernels.hpp"

namespace ptcount::kernels::detail {

namespace {

void affine_row_avx2(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t* out) {
  const __m256i vb = _mm256_set1_epi64x(base);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_add_epi64(vb, t));
  }
  for (; i < n; ++i) out[i] = base + table[i];
}

// Low 64 bits of a 64x64 product from three 32x32->64 multiplies.
inline __m256i mullo_epi64(__m256i a, __m256i b) {
  const __m256i lolo = _mm256_mul_epu32(a, b);
  const __m256i hilo = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
  const __m256i lohi = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
  return _mm256_add_epi64(lolo, _mm256_slli_epi64(_mm256_add_epi64(hilo, lohi), 32));
}

void hash_row_avx2(const std::int64_t* keys, std::size_t n, unsigned shift, std::uint64_t* out) {
  const __m256i mul = _mm256_set1_epi64x(static_cast<long long>(kHashMultiplier));
  const __m128i count = _mm_cvtsi32_si128(static_cast<int>(shift));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i));
    const __m256i h = _mm256_srl_epi64(mullo_epi64(k, mul), count);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), h);
  }
  for (; i < n; ++i) out[i] = hash_key(keys[i], shift);
}

std::size_t find_equal_avx2(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t target,
                            std::uint32_t* hits) {
  const std::int64_t want = target - base;
  const __m256i vw = _mm256_set1_epi64x(want);
  std::size_t found = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table + i));
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(t, vw)));
    while (mask != 0) {
      const int bit = __builtin_ctz(static_cast<unsigned>(mask));
      hits[found++] = static_cast<std::uint32_t>(i + static_cast<std::size_t>(bit));
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i) {
    if (table[i] == want) hits[found++] = static_cast<std::uint32_t>(i);
  }
  return found;
}

}  // namespace

const KernelTable avx2_table{affine_row_avx2, hash_row_avx2, find_equal_avx2};

}  // namespace ptcount::kernels::detail
