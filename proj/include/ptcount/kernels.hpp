#pragma once

// Row kernels for the meet-in-the-middle tables and the exhaustive oracle.
// Each kernel has a scalar reference and vector variants (AVX2 on x86-64,
// NEON on aarch64); the variant is picked once at startup from the CPU and
// can be overridden with PTCOUNT_KERNELS=scalar|avx2|neon or set_active_isa.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ptcount::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
std::vector<Isa> available_isas();
Isa active_isa();
/// Throws std::invalid_argument if the CPU or build lacks the variant.
void set_active_isa(Isa isa);

/// Fibonacci hashing multiplier (2^64 / golden ratio).
inline constexpr std::uint64_t kHashMultiplier = 0x9E3779B97F4A7C15ull;

inline std::uint64_t hash_key(std::int64_t key, unsigned shift) {
  return (static_cast<std::uint64_t>(key) * kHashMultiplier) >> shift;
}

/// out[i] = base + table[i]. Wrapping is the caller's responsibility.
void affine_row(std::int64_t base, std::span<const std::int64_t> table, std::span<std::int64_t> out);

/// out[i] = hash_key(keys[i], shift), 1 <= shift <= 63.
void hash_row(std::span<const std::int64_t> keys, unsigned shift, std::span<std::uint64_t> out);

/// Writes every index j with base + table[j] == target into hits (which must
/// have room for table.size() entries) and returns how many were written.
std::size_t find_equal(std::int64_t base, std::span<const std::int64_t> table, std::int64_t target,
                       std::span<std::uint32_t> hits);

}  // namespace ptcount::kernels
