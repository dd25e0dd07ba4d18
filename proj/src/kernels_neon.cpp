#include <arm_neon.h>

#include "kernels_impl.hpp"
#include "ptcount/kernels.hpp"

namespace ptcount::kernels::detail {

namespace {

void affine_row_neon(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t* out) {
  const int64x2_t vb = vdupq_n_s64(base);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_s64(out + i, vaddq_s64(vb, vld1q_s64(table + i)));
  for (; i < n; ++i) out[i] = base + table[i];
}

// NEON has no 64-bit lane multiply; the scalar multiply-shift is already one
// instruction pair per key, so this variant only unrolls.
void hash_row_neon(const std::int64_t* keys, std::size_t n, unsigned shift, std::uint64_t* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    out[i] = hash_key(keys[i], shift);
    out[i + 1] = hash_key(keys[i + 1], shift);
  }
  for (; i < n; ++i) out[i] = hash_key(keys[i], shift);
}

std::size_t find_equal_neon(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t target,
                            std::uint32_t* hits) {
  const int64x2_t vw = vdupq_n_s64(target - base);
  std::size_t found = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t eq = vceqq_s64(vld1q_s64(table + i), vw);
    if (vgetq_lane_u64(eq, 0) != 0) hits[found++] = static_cast<std::uint32_t>(i);
    if (vgetq_lane_u64(eq, 1) != 0) hits[found++] = static_cast<std::uint32_t>(i + 1);
  }
  for (; i < n; ++i) {
    if (table[i] == target - base) hits[found++] = static_cast<std::uint32_t>(i);
  }
  return found;
}

}  // namespace

const KernelTable neon_table{affine_row_neon, hash_row_neon, find_equal_neon};

}  // namespace ptcount::kernels::detail
