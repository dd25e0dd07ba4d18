#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptcount/count_series.hpp"
#include "ptcount/cubic_surface.hpp"
#include "ptcount/heights.hpp"
#include "ptcount/linalg.hpp"
#include "ptcount/parallel.hpp"

namespace ptcount {

/// The hypersurface sum_i l_i(x) y_i^3 = 0 in P^n x P^3, with each form l_i
/// given by its n+1 integer coefficients.
struct CubicBundle {
  int n = 1;
  std::array<std::vector<std::int64_t>, 4> forms;
  std::string name;
};

/// Reads {"n": .., "forms": [[..], [..], [..], [..]], "name": ..}. Throws
/// InvalidInput on anything malformed (non-integers, wrong lengths, n < 1).
CubicBundle parse_scenario(const nlohmann::json& j);
CubicBundle load_scenario(const std::string& path);
nlohmann::json to_json(const CubicBundle& bundle);

struct BundleValidation {
  bool ok = true;
  std::vector<std::size_t> failing_subset;  // form indices; empty when ok
  std::string message;
};

/// Every min(n+1, 4) of the forms must be linearly independent and no form
/// may vanish. Reports the first failing subset in lexicographic order.
BundleValidation validate_bundle(const CubicBundle& bundle);

/// l_0(x), ..., l_3(x).
std::array<BigInt, 4> evaluate_forms(const CubicBundle& bundle, const std::vector<BigInt>& x);
std::array<std::int64_t, 4> evaluate_forms(const CubicBundle& bundle, const std::vector<std::int64_t>& x);

struct BundlePoint {
  ProjectivePointQ base;
  ProjectivePointQ fiber;
};

/// Canonicalizes both factors; throws InvalidInput unless the point lies on
/// the bundle.
BundlePoint make_bundle_point(const CubicBundle& bundle, std::span<const std::int64_t> base,
                              std::span<const std::int64_t> fiber);

/// (max |x_i|)^n * max |y_i| at canonical representatives.
BigInt bundle_height(const CubicBundle& bundle, const BundlePoint& p);

/// The same height computed directly from all products y_i * m(x), m running
/// over the degree-n monomials in x.
BigInt bundle_height_tensor(const CubicBundle& bundle, const BundlePoint& p);

struct BundleCountOptions {
  int threads = 1;
  /// Only base points where every l_i(x) is nonzero.
  bool restrict_up = false;
  /// On smooth fibers, leave out the rational lines b_i y_i + b_j y_j = 0 =
  /// b_k y_k + b_l y_l. Singular fibers are unaffected.
  bool filter_fiber_lines = false;
  std::size_t top_fibers = 0;
  std::size_t memory_budget = std::size_t{1} << 30;
  Checkpoint* checkpoint = nullptr;
};

struct FiberContribution {
  std::vector<std::int64_t> base;       // canonical
  std::array<std::int64_t, 4> coeffs;   // l_i(base)
  CountSeries series;                   // this fiber's share of each grid bound
};

struct BundleCountResult {
  CountSeries series;
  /// Largest contributions at the top bound, ties broken by base point.
  std::vector<FiberContribution> top_fibers;
  /// False when partitions were resumed from a checkpoint, whose fibers are
  /// then missing from top_fibers.
  bool top_fibers_complete = true;
};

BundleCountResult enumerate_bundle_points(const CubicBundle& bundle, const std::vector<std::uint64_t>& grid,
                                          const BundleCountOptions& options = {});

/// Composite oracle: every canonical base point, every canonical fiber
/// vector in the box, equation checked directly. Refuses bounds above `ceiling`.
CountSeries brute_force_bundle(const CubicBundle& bundle, const std::vector<std::uint64_t>& grid, bool restrict_up,
                               bool filter_fiber_lines, std::uint64_t ceiling = 30);

/// Saturated basis (rows) of {a in Z^4 : sum a_i l_i = 0}.
IntMatrix relation_lattice(const CubicBundle& bundle);

struct CubeFiber {
  std::vector<std::int64_t> base;    // canonical q
  std::array<std::int64_t, 4> b{};   // l_i(q) = lambda b_i^3, gcd 1, b_0 > 0
  BigRational lambda;
};

/// Base points whose fiber coefficients are proportional to four nonzero
/// cubes, from cube vectors with entries of absolute value <= search_bound.
/// Throws SearchExhausted when there are none.
std::vector<CubeFiber> find_cube_fibers(const CubicBundle& bundle, std::int64_t search_bound);

/// The fiber over q with the common factor of the coefficients removed.
/// Throws InvalidInput ("degenerate fiber") when some l_i(q) = 0.
DiagonalCubic fiber_surface(const CubicBundle& bundle, const std::vector<std::int64_t>& q);

}  // namespace ptcount
