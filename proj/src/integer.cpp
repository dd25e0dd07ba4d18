#include "ptcount/integer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptcount {

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::int64_t icbrt_floor(i128 v) {
  // cbrt is odd, so round toward -inf via the magnitude of a negative input.
  if (v < 0) {
    const std::int64_t r = icbrt_floor(-v);
    return cube128(r) == -v ? -r : -r - 1;
  }
  auto r = static_cast<std::int64_t>(std::cbrt(static_cast<long double>(v)));
  while (r > 0 && cube128(r) > v) --r;
  while (cube128(r + 1) <= v) ++r;
  return r;
}

std::optional<std::int64_t> exact_cbrt(i128 v) {
  const std::int64_t r = icbrt_floor(v);
  if (cube128(r) == v) return r;
  return std::nullopt;
}

std::optional<BigInt> exact_cbrt(const BigInt& v) {
  BigInt r;
  const int exact = mpz_root(r.get_mpz_t(), v.get_mpz_t(), 3);
  if (exact != 0) return r;
  return std::nullopt;
}

std::int64_t isqrt_floor(i128 v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && static_cast<i128>(r) * r > v) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

PrimeSieve::PrimeSieve(std::uint32_t limit) : spf_(static_cast<std::size_t>(limit) + 1, 0) {
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (std::uint64_t j = i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = i;
    }
  }
}

void PrimeSieve::distinct_primes(std::uint32_t n, std::vector<std::uint32_t>& out) const {
  out.clear();
  if (n == 0 || n > limit()) throw std::out_of_range("sieve lookup out of range");
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
}

void mobius_divisors(const std::vector<std::uint32_t>& primes, std::vector<std::pair<std::int64_t, int>>& out) {
  out.assign(1, {1, 1});
  for (auto p : primes) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({out[i].first * p, -out[i].second});
  }
}

}  // namespace ptcount
