#include "kernels_impl.hpp"
#include "ptcount/kernels.hpp"

namespace ptcount::kernels::detail {

namespace {

void affine_row_scalar(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = base + table[i];
}

void hash_row_scalar(const std::int64_t* keys, std::size_t n, unsigned shift, std::uint64_t* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = hash_key(keys[i], shift);
}

std::size_t find_equal_scalar(std::int64_t base, const std::int64_t* table, std::size_t n, std::int64_t target,
                              std::uint32_t* hits) {
  std::size_t found = 0;
  const std::int64_t want = target - base;
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i] == want) hits[found++] = static_cast<std::uint32_t>(i);
  }
  return found;
}

}  // namespace

const KernelTable scalar_table{affine_row_scalar, hash_row_scalar, find_equal_scalar};

}  // namespace ptcount::kernels::detail
