#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptcount/integer.hpp"

namespace ptcount {

struct SeriesRow {
  std::uint64_t bound = 0;
  std::uint64_t count = 0;
  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

/// (height bound, exact count) pairs with bounds strictly increasing and
/// counts nondecreasing. The metadata strings travel alongside but are not
/// part of the CSV form.
struct CountSeries {
  std::vector<SeriesRow> rows;
  std::string scenario;
  std::string filter;
  std::string field = "Q";

  /// Throws InvalidInput naming the first offending row.
  void validate() const;
  friend bool operator==(const CountSeries& a, const CountSeries& b) { return a.rows == b.rows; }
};

/// Bounds start * factor^j for j < count.
std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t factor, std::size_t count);

/// Parses "START:FACTOR:COUNT".
std::vector<std::uint64_t> parse_grid(std::string_view spec);

/// Checks a bound list is nonempty, positive and strictly increasing.
void validate_grid(std::span<const std::uint64_t> grid);

/// Index of the first grid bound >= h, or grid.size() when h exceeds them all.
std::size_t grid_bin(std::span<const std::uint64_t> grid, std::uint64_t h);

/// Cumulative series from per-bin counts (bin j holds heights in (grid[j-1], grid[j]]).
CountSeries series_from_bins(std::span<const std::uint64_t> grid, std::span<const std::uint64_t> bins);

class SeriesParseError : public InvalidInput {
 public:
  SeriesParseError(std::size_t line, const std::string& what)
      : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// CSV: header "B,count", one "<B>,<count>" row per line, LF endings.
void write_series(std::ostream& out, const CountSeries& series);
void write_series(const std::string& path, const CountSeries& series);
CountSeries read_series(std::istream& in);
CountSeries read_series(const std::string& path);

}  // namespace ptcount
