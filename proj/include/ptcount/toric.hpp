#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ptcount/count_series.hpp"
#include "ptcount/heights.hpp"
#include "ptcount/parallel.hpp"

namespace ptcount {

/// The seven cubic monomials z0z1z2, z1^2z2, z1z2^2, z2^2z0, z2z0^2, z0^2z1,
/// z0z1^2 on P^2: an anticanonical basis for the toric Del Pezzo surface of
/// degree 6.
SectionBasis toric_anticanonical_basis();

/// Height of (z0 : z1 : z2) under that basis (max / gcd of the monomials).
std::uint64_t toric_height(std::int64_t z0, std::int64_t z1, std::int64_t z2);

struct TorusOptions {
  int threads = 1;
  Checkpoint* checkpoint = nullptr;
  /// Use the sorted-triple box scan with no outer cutoff instead of the
  /// factorized enumerator.
  bool full_box = false;
  /// Cross-check factorized enumerator, box scan and full box scan at every
  /// grid bound up to validate_limit; throws std::logic_error on mismatch.
  bool validate_box = false;
  std::uint64_t validate_limit = 200;
  /// When set, use the box scan with smallest coordinate up to 2 B^r.
  std::optional<double> box_exponent;
};

/// Canonical torus points (all coordinates nonzero, primitive, z0 > 0)
/// with height <= each grid bound.
///
/// The default engine writes a primitive positive point as
///   z0 = g01 g02 a,  z1 = g01 g12 b,  z2 = g02 g12 c
/// with g_ij = gcd(z_i, z_j). Around the hexagon (a, g01, b, g12, c, g02)
/// non-neighbours are coprime, and the height is the largest of the six
/// products e_k e_{k+1}^2 e_{k+2}^2 e_{k+3}. The last variable is counted in
/// closed form by inclusion-exclusion.
CountSeries enumerate_torus(const std::vector<std::uint64_t>& grid, const TorusOptions& options = {});

/// Sorted-triple scan |z2| <= |z1| <= |z0| with |z0| <= |z2| sqrt(B) (always
/// valid) and |z2| <= 2 B^r (a cutoff, not a theorem), or |z2| <= 2B when
/// `full_box`. Orbits under signs and permutations are counted with exact
/// stabilizers.
CountSeries enumerate_torus_box(const std::vector<std::uint64_t>& grid, bool full_box, double box_exponent = 2.0 / 3.0);

/// Exhaustive scan over |z_i| <= 2B. For bounds <= 50 it also scans
/// |z_i| <= 4B and throws std::logic_error if anything new appears.
CountSeries brute_force_torus(const std::vector<std::uint64_t>& grid, std::uint64_t ceiling = 500);

/// Visits every positive primitive torus point of height <= bound as
/// (z0, z1, z2, height); the other sign classes follow by symmetry.
void for_each_positive_torus_point(std::uint64_t bound,
                                   const std::function<void(std::int64_t, std::int64_t, std::int64_t, std::uint64_t)>& visit);

/// Torus points with height <= each grid bound on which `condition` (a
/// nonzero homogeneous polynomial in z0, z1, z2) vanishes.
CountSeries count_torus_curve(const Polynomial& condition, const std::vector<std::uint64_t>& grid);

}  // namespace ptcount
