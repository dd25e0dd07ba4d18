#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptcount/count_series.hpp"
#include "ptcount/heights.hpp"
#include "ptcount/integer.hpp"
#include "ptcount/parallel.hpp"

namespace ptcount {

/// a + b*w in Z[w], where w^2 + w + 1 = 0. Arithmetic is exact and throws
/// std::overflow_error rather than wrapping.
struct EisensteinInt {
  std::int64_t a = 0;
  std::int64_t b = 0;

  constexpr EisensteinInt() = default;
  constexpr EisensteinInt(std::int64_t re) : a(re) {}  // NOLINT: integers embed in Z[w]
  constexpr EisensteinInt(std::int64_t a_, std::int64_t b_) : a(a_), b(b_) {}

  bool is_zero() const { return a == 0 && b == 0; }
  /// Galois conjugate a + b*w^2 = (a - b) - b*w.
  EisensteinInt conj() const;

  friend EisensteinInt operator+(EisensteinInt x, EisensteinInt y);
  friend EisensteinInt operator-(EisensteinInt x, EisensteinInt y);
  friend EisensteinInt operator*(EisensteinInt x, EisensteinInt y);
  EisensteinInt operator-() const;
  EisensteinInt& operator+=(EisensteinInt y) { return *this = *this + y; }
  EisensteinInt& operator*=(EisensteinInt y) { return *this = *this * y; }

  friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
  friend auto operator<=>(const EisensteinInt&, const EisensteinInt&) = default;
};

inline constexpr EisensteinInt kOmega{0, 1};

/// The six units 1, -w^2, w, -1, w^2, -w (powers of -w^2 = 1 + w).
const std::array<EisensteinInt, 6>& eisenstein_units();

/// N(a + b*w) = a^2 - ab + b^2.
std::int64_t norm(EisensteinInt z);
bool is_unit(EisensteinInt z);
EisensteinInt cube(EisensteinInt z);
std::string to_string(EisensteinInt z);

struct EisDivision {
  EisensteinInt quotient;
  EisensteinInt remainder;
};

/// Division with the quotient rounded to the nearest lattice point; ties go
/// to the smaller b, then the smaller a. N(remainder) <= N(divisor) / 3.
EisDivision eis_divide(EisensteinInt z, EisensteinInt d);
bool eis_divides(EisensteinInt d, EisensteinInt z);
/// Exact quotient; throws InvalidInput if d does not divide z.
EisensteinInt eis_exact_div(EisensteinInt z, EisensteinInt d);

EisensteinInt eis_gcd(EisensteinInt u, EisensteinInt v);

/// Among the six associates, the one with the largest a, then smallest b.
EisensteinInt canonical_associate(EisensteinInt z);

/// Point of P^3 over Q(sqrt(-3)): unit gcd, leading nonzero coordinate in
/// canonical associate form.
class ProjectivePointE {
 public:
  const std::array<EisensteinInt, 4>& coords() const { return coords_; }
  friend bool operator==(const ProjectivePointE&, const ProjectivePointE&) = default;
  friend auto operator<=>(const ProjectivePointE&, const ProjectivePointE&) = default;

 private:
  friend ProjectivePointE canonicalize_e(const std::array<EisensteinInt, 4>& raw);
  explicit ProjectivePointE(const std::array<EisensteinInt, 4>& c) : coords_(c) {}
  std::array<EisensteinInt, 4> coords_;
};

ProjectivePointE canonicalize_e(const std::array<EisensteinInt, 4>& raw);

/// Polynomial in four variables with Z[w] coefficients.
class EisPolynomial {
 public:
  struct Term {
    EisensteinInt coeff;
    std::array<unsigned, 4> exponents;
  };
  EisPolynomial& add_term(EisensteinInt coeff, std::array<unsigned, 4> exponents);
  static EisPolynomial variable(std::size_t index);
  const std::vector<Term>& terms() const { return terms_; }
  std::optional<unsigned> homogeneous_degree() const;
  EisensteinInt evaluate(const std::array<EisensteinInt, 4>& y) const;

 private:
  std::vector<Term> terms_;
};

class EisSectionBasis {
 public:
  EisSectionBasis(std::vector<EisPolynomial> sections, unsigned degree);
  static EisSectionBasis coordinates();
  const std::vector<EisPolynomial>& sections() const { return sections_; }

 private:
  std::vector<EisPolynomial> sections_;
};

/// Relative height over Q(sqrt(-3)): max N(s_i(p)) / N(gcd_i s_i(p)). The
/// complex place contributes the norms, the finite places the gcd; no root
/// of the field degree is taken.
std::int64_t height_eis(const EisSectionBasis& basis, const ProjectivePointE& p);

/// A line of P^3 cut out by two linear forms with Z[w] coefficients.
struct EisLine {
  std::array<EisensteinInt, 4> first;
  std::array<EisensteinInt, 4> second;
  bool contains(const std::array<EisensteinInt, 4>& y) const;
  bool contains(const std::array<std::int64_t, 4>& y) const;
  friend bool operator==(const EisLine&, const EisLine&) = default;
  friend auto operator<=>(const EisLine&, const EisLine&) = default;
};

/// Pairings (01)(23), (02)(13), (03)(12) of the four coordinates.
inline constexpr std::array<std::array<int, 4>, 3> kPairings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};

/// The 27 lines b_i y_i + z b_j y_j = 0, b_k y_k + z' b_l y_l = 0 of the
/// surface sum a_i y_i^3 = 0 with a_i = lambda b_i^3, for the three pairings
/// and z, z' in {1, w, w^2}. Order: pairing, then z, then z'.
/// Throws InvalidInput if the witnesses are zero or not proportional.
std::vector<EisLine> lines_27(const std::array<EisensteinInt, 4>& coeffs, const std::array<EisensteinInt, 4>& witnesses);

struct EisFilter {
  std::vector<EisLine> lines;
  bool excludes(const std::array<EisensteinInt, 4>& y) const;
};

struct EisCountOptions {
  int threads = 1;
  bool keep_points = false;
  Checkpoint* checkpoint = nullptr;
};

struct EisCountResult {
  CountSeries series;
  std::vector<ProjectivePointE> points;  // sorted; only with keep_points
};

/// Canonical Q(sqrt(-3))-points of sum a_i y_i^3 = 0 with height_eis <= each
/// grid bound, minus filtered points. Meet in the middle over a sorted table
/// of a0 y0^3 + a1 y1^3, partitioned by the norm of y0.
EisCountResult enumerate_eis_cubic(const std::array<EisensteinInt, 4>& coeffs, const std::vector<std::uint64_t>& grid,
                                   const EisFilter& filter, const EisCountOptions& options = {});

/// Exhaustive scan of all coordinate tuples; refuses bounds above `ceiling`.
EisCountResult brute_force_eis_cubic(const std::array<EisensteinInt, 4>& coeffs, const std::vector<std::uint64_t>& grid,
                                     const EisFilter& filter, std::uint64_t ceiling = 7);

/// All z with N(z) <= bound, sorted.
std::vector<EisensteinInt> elements_of_norm_at_most(std::int64_t bound);

}  // namespace ptcount
