#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "ptcount/integer.hpp"
#include "ptcount/linalg.hpp"

namespace ptcount {

/// A point of P^m(Q), held as its primitive integer representative whose
/// first nonzero coordinate is positive.
class ProjectivePointQ {
 public:
  const std::vector<BigInt>& coords() const { return coords_; }
  std::size_t dimension() const { return coords_.size() - 1; }

  friend bool operator==(const ProjectivePointQ&, const ProjectivePointQ&) = default;
  friend bool operator<(const ProjectivePointQ& a, const ProjectivePointQ& b) { return a.coords_ < b.coords_; }

 private:
  friend ProjectivePointQ canonicalize(std::span<const BigInt> raw);
  explicit ProjectivePointQ(std::vector<BigInt> coords) : coords_(std::move(coords)) {}
  std::vector<BigInt> coords_;
};

/// Divides out the gcd and fixes the sign. Throws InvalidInput on the zero vector.
ProjectivePointQ canonicalize(std::span<const BigInt> raw);
ProjectivePointQ canonicalize(std::span<const std::int64_t> raw);
ProjectivePointQ canonicalize(std::initializer_list<std::int64_t> raw);

/// Polynomial with integer coefficients in a fixed number of variables.
/// Terms are kept sorted by exponent vector with like terms merged.
class Polynomial {
 public:
  struct Term {
    BigInt coeff;
    std::vector<unsigned> exponents;
    friend bool operator==(const Term&, const Term&) = default;
  };

  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}
  static Polynomial monomial(std::size_t num_vars, std::vector<unsigned> exponents, const BigInt& coeff = 1);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  Polynomial& add_term(const BigInt& coeff, std::vector<unsigned> exponents);

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Common total degree of all terms; nullopt if not homogeneous or zero.
  std::optional<unsigned> homogeneous_degree() const;

  BigInt evaluate(std::span<const BigInt> x) const;
  BigInt evaluate(std::span<const std::int64_t> x) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial scaled(const BigInt& c) const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::size_t num_vars_;
  std::vector<Term> terms_;
};

/// A basis of global sections: nonempty list of homogeneous polynomials of
/// one common degree, not all zero.
class SectionBasis {
 public:
  SectionBasis(std::vector<Polynomial> sections, unsigned degree);

  /// x_0, ..., x_m on P^m.
  static SectionBasis coordinates(std::size_t m);
  /// All monomials of the given degree on P^m, in lexicographic exponent order.
  static SectionBasis monomials(std::size_t m, unsigned degree);

  const std::vector<Polynomial>& sections() const { return sections_; }
  std::size_t size() const { return sections_.size(); }
  std::size_t num_vars() const { return sections_.front().num_vars(); }
  unsigned degree() const { return degree_; }

  std::vector<BigInt> evaluate(const ProjectivePointQ& p) const;

 private:
  std::vector<Polynomial> sections_;
  unsigned degree_;
};

/// Exact height; always >= 1.
struct HeightValue {
  BigInt value;
  friend bool operator==(const HeightValue&, const HeightValue&) = default;
  friend auto operator<=>(const HeightValue& a, const HeightValue& b) { return cmp(a.value, b.value) <=> 0; }
};

/// The point is a common zero of every section, where the height is undefined.
class BasePointError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// max |v_i| / gcd(v_i): the product over all places of Q of max_i |v_i|_v.
HeightValue height_of_values(std::span<const BigInt> values);

HeightValue height_q(const SectionBasis& basis, const ProjectivePointQ& p);

/// Visits canonical points of P^m with max |x_i| <= bound, lexicographically.
/// Only points whose coordinate x_0 lies in [lead_lo, lead_hi] are produced,
/// which partitions the stream by leading coordinate.
template <class Visit>
void for_each_projective_point(std::size_t m, std::int64_t bound, std::int64_t lead_lo, std::int64_t lead_hi,
                               Visit&& visit);

template <class Visit>
void for_each_projective_point(std::size_t m, std::int64_t bound, Visit&& visit) {
  for_each_projective_point(m, bound, 0, bound, std::forward<Visit>(visit));
}

std::vector<ProjectivePointQ> enumerate_projective_space(std::size_t m, std::int64_t bound);

/// c2 with height_q(b, p) <= c2 * height_q(a, p) for every p, where the
/// sections of b are `change` applied to the sections of a.
BigRational weil_comparison_bound(const SectionBasis& a, const SectionBasis& b, const IntMatrix& change);

// ---------------------------------------------------------------------------

namespace detail {

template <class Visit>
void projective_suffix(std::vector<std::int64_t>& x, std::size_t pos, std::int64_t bound, bool leading_done,
                       std::int64_t running_gcd, Visit& visit) {
  if (pos == x.size()) {
    if (leading_done && running_gcd == 1) visit(std::span<const std::int64_t>(x));
    return;
  }
  const std::int64_t lo = leading_done ? -bound : 0;
  for (std::int64_t v = lo; v <= bound; ++v) {
    x[pos] = v;
    projective_suffix(x, pos + 1, bound, leading_done || v != 0, gcd64(running_gcd, v), visit);
  }
}

}  // namespace detail

template <class Visit>
void for_each_projective_point(std::size_t m, std::int64_t bound, std::int64_t lead_lo, std::int64_t lead_hi,
                               Visit&& visit) {
  if (m < 1) throw InvalidInput("projective dimension must be at least 1");
  if (bound < 1) throw InvalidInput("height bound must be at least 1");
  std::vector<std::int64_t> x(m + 1, 0);
  const std::int64_t first = std::max<std::int64_t>(lead_lo, 0);
  const std::int64_t last = std::min(lead_hi, bound);
  for (std::int64_t v = first; v <= last; ++v) {
    x[0] = v;
    detail::projective_suffix(x, 1, bound, v != 0, v, visit);
  }
}

}  // namespace ptcount
