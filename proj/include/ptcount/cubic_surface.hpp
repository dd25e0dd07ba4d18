#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptcount/count_series.hpp"
#include "ptcount/eisenstein.hpp"
#include "ptcount/heights.hpp"
#include "ptcount/integer.hpp"
#include "ptcount/parallel.hpp"

namespace ptcount {

using Quad = std::array<std::int64_t, 4>;

/// a_i = lambda * b_i^3 with integer b_i (gcd 1, b_0 > 0) and rational lambda.
struct CubeWitnesses {
  std::array<std::int64_t, 4> b{};
  BigRational lambda;
};

/// Witnesses exist iff every a_i / a_0 is the cube of a rational number.
std::optional<CubeWitnesses> detect_cube_witnesses(const std::array<std::int64_t, 4>& coeffs);

/// The surface a0 y0^3 + a1 y1^3 + a2 y2^3 + a3 y3^3 = 0, all a_i nonzero.
class DiagonalCubic {
 public:
  /// Detects cube witnesses automatically.
  explicit DiagonalCubic(const std::array<std::int64_t, 4>& coeffs);
  /// Uses the given witnesses; throws InvalidInput unless a_i b_j^3 = a_j b_i^3.
  DiagonalCubic(const std::array<std::int64_t, 4>& coeffs, const std::array<std::int64_t, 4>& witnesses);

  const std::array<std::int64_t, 4>& coeffs() const { return coeffs_; }
  const std::optional<CubeWitnesses>& witnesses() const { return witnesses_; }
  bool contains(const Quad& y) const;
  std::string describe() const;

 private:
  std::array<std::int64_t, 4> coeffs_;
  std::optional<CubeWitnesses> witnesses_;
};

/// A line of P^3 over Q: the common zeros of two independent integer forms.
struct LineDescriptor {
  Quad first{};
  Quad second{};

  /// Throws InvalidInput if the forms are dependent.
  static LineDescriptor make(const Quad& first, const Quad& second);
  bool contains(const Quad& y) const;
  std::string describe() const;
  friend bool operator==(const LineDescriptor&, const LineDescriptor&) = default;
};

/// Points to leave out of a count. A point is excluded if it lies on any
/// line or is a zero of any listed polynomial (the zero polynomial excludes
/// everything).
struct PointFilter {
  std::vector<LineDescriptor> lines;
  std::vector<EisLine> eis_lines;
  std::vector<Polynomial> vanishing;

  bool empty() const { return lines.empty() && eis_lines.empty() && vanishing.empty(); }
  bool excludes(const Quad& y) const;
  std::string describe() const;
};

/// The lines b_i y_i + b_j y_j = 0 = b_k y_k + b_l y_l for the pairings
/// (01)(23), (02)(13), (03)(12). Throws InvalidInput without witnesses.
std::vector<LineDescriptor> rational_lines(const DiagonalCubic& surface);

/// Lines over Q of the same shape that exist for any coefficients: one for
/// each pairing (ij)(kl) where a_i/a_j and a_k/a_l are both rational cubes.
/// Equals rational_lines when the surface has witnesses.
std::vector<LineDescriptor> pairwise_rational_lines(const std::array<std::int64_t, 4>& coeffs);

/// The 27 lines over Q(sqrt(-3)); needs witnesses.
std::vector<EisLine> lines_27(const DiagonalCubic& surface);

struct CubicCountOptions {
  int threads = 1;
  /// Bytes of hash table per worker; affects speed only.
  std::size_t memory_budget = std::size_t{2} << 30;
  /// Upper limit on table entries per pass, whatever the budget; affects speed only.
  std::size_t chunk_entries = std::size_t{1} << 20;
  bool keep_points = false;
  Checkpoint* checkpoint = nullptr;
};

struct CubicCountResult {
  CountSeries series;
  std::vector<Quad> points;  // canonical, sorted; only with keep_points
};

/// Canonical rational points (primitive, first nonzero coordinate positive)
/// of the surface with max |y_i| <= each grid bound and not excluded by the
/// filter. Meet in the middle: a0 y0^3 + a1 y1^3 is tabulated into a hash
/// table one key interval at a time and probed with -(a2 y2^3 + a3 y3^3).
CubicCountResult enumerate_cubic_points(const DiagonalCubic& surface, const std::vector<std::uint64_t>& grid,
                                        const PointFilter& filter, const CubicCountOptions& options = {});

/// Exhaustive scan of the box |y_i| <= max bound. Refuses bounds above `ceiling`.
CubicCountResult brute_force_cubic(const DiagonalCubic& surface, const std::vector<std::uint64_t>& grid,
                                   const PointFilter& filter, std::uint64_t ceiling = 100);

/// Count of canonical points of sum a_i y_i^3 = 0 with height <= each grid
/// bound, for coefficients of which some may vanish (a cone over a curve, a
/// union of planes, or all of P^3). Not all coefficients zero is not required.
std::vector<std::uint64_t> count_degenerate_fiber(const std::array<std::int64_t, 4>& coeffs,
                                                  const std::vector<std::uint64_t>& grid);

/// Canonical points on the line with max |y_i| <= each grid bound, by
/// sweeping the primitive parameter pairs (s, t) of an integral basis.
CountSeries count_on_line(const LineDescriptor& line, const std::vector<std::uint64_t>& grid);

/// Writes points one per line as "y0 y1 y2 y3", LF terminated.
void write_points(const std::string& path, const std::vector<Quad>& points);

}  // namespace ptcount
