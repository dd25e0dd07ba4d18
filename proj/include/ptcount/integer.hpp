#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ptcount {

using BigInt = mpz_class;
using BigRational = mpq_class;
using i128 = __int128;

/// Rejected user input: malformed scenario, bad coefficients, invalid grid.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bounded search finished without producing any result.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline BigInt to_big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

inline BigInt to_big(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt hi(static_cast<unsigned long>(u >> 64));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  BigInt r = (hi << 64) + lo;
  return neg ? BigInt(-r) : r;
}

inline std::int64_t to_i64(const BigInt& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + v.get_str());
  return static_cast<std::int64_t>(v.get_si());
}

std::string to_string(i128 v);

inline std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("64-bit multiplication overflow");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("64-bit addition overflow");
  return r;
}

inline i128 cube128(std::int64_t v) {
  const i128 w = v;
  return w * w * w;
}

/// Largest r with r^3 <= v.
std::int64_t icbrt_floor(i128 v);

/// Exact cube root if v is a perfect cube.
std::optional<std::int64_t> exact_cbrt(i128 v);
std::optional<BigInt> exact_cbrt(const BigInt& v);

/// Largest r >= 0 with r^2 <= v, for v >= 0.
std::int64_t isqrt_floor(i128 v);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

/// Smallest-prime-factor table for 0..limit.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint32_t limit);
  std::uint32_t limit() const { return static_cast<std::uint32_t>(spf_.size() - 1); }
  /// Distinct prime factors of n (1 <= n <= limit), ascending.
  void distinct_primes(std::uint32_t n, std::vector<std::uint32_t>& out) const;

 private:
  std::vector<std::uint32_t> spf_;
};

/// Squarefree divisors d of the product of `primes` paired with mu(d).
void mobius_divisors(const std::vector<std::uint32_t>& primes, std::vector<std::pair<std::int64_t, int>>& out);

}  // namespace ptcount
