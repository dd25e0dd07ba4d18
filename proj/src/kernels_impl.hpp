#pragma once

#include <cstddef>
#include <cstdint>

namespace ptcount::kernels::detail {

struct KernelTable {
  void (*affine_row)(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t* out);
  void (*hash_row)(const std::int64_t* keys, std::size_t n, unsigned shift, std::uint64_t* out);
  std::size_t (*find_equal)(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t target,
                            std::uint32_t* hits);
};

extern const KernelTable scalar_table;
#if defined(PTCOUNT_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(PTCOUNT_HAVE_NEON)
extern const KernelTable neon_table;
#endif

}  // namespace ptcount::kernels::detail
