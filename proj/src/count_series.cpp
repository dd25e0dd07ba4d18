#include "ptcount/count_series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace ptcount {

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void CountSeries::validate() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].bound <= rows[i - 1].bound) {
      throw InvalidInput("series row " + std::to_string(i) + ": bounds must be strictly increasing");
    }
    if (rows[i].count < rows[i - 1].count) {
      throw InvalidInput("series row " + std::to_string(i) + ": counts must be nondecreasing");
    }
  }
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t factor, std::size_t count) {
  if (start < 1) throw InvalidInput("grid start must be at least 1");
  if (count < 1) throw InvalidInput("grid must have at least one bound");
  if (count > 1 && factor < 2) throw InvalidInput("grid factor must be at least 2");
  std::vector<std::uint64_t> g;
  std::uint64_t b = start;
  for (std::size_t j = 0; j < count; ++j) {
    g.push_back(b);
    if (j + 1 < count && __builtin_mul_overflow(b, factor, &b)) throw InvalidInput("grid bound overflows");
  }
  return g;
}

std::vector<std::uint64_t> parse_grid(std::string_view spec) {
  std::uint64_t parts[3];
  std::size_t n = 0;
  std::size_t pos = 0;
  while (n < 3) {
    const auto colon = spec.find(':', pos);
    const auto piece = spec.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos);
    if (!parse_u64(piece, parts[n])) throw InvalidInput("grid must look like START:FACTOR:COUNT, got '" + std::string(spec) + "'");
    ++n;
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (n != 3 || spec.find(':', pos) != std::string_view::npos) {
    throw InvalidInput("grid must look like START:FACTOR:COUNT, got '" + std::string(spec) + "'");
  }
  return geometric_grid(parts[0], parts[1], parts[2]);
}

void validate_grid(std::span<const std::uint64_t> grid) {
  if (grid.empty()) throw InvalidInput("grid must have at least one bound");
  if (grid.front() < 1) throw InvalidInput("grid bounds must be at least 1");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw InvalidInput("grid bounds must be strictly increasing");
  }
}

std::size_t grid_bin(std::span<const std::uint64_t> grid, std::uint64_t h) {
  return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), h) - grid.begin());
}

CountSeries series_from_bins(std::span<const std::uint64_t> grid, std::span<const std::uint64_t> bins) {
  CountSeries s;
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    total += bins[j];
    s.rows.push_back({grid[j], total});
  }
  return s;
}

void write_series(std::ostream& out, const CountSeries& series) {
  series.validate();
  out << "B,count\n";
  for (const auto& r : series.rows) out << r.bound << ',' << r.count << '\n';
}

void write_series(const std::string& path, const CountSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  write_series(out, series);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

CountSeries read_series(std::istream& in) {
  CountSeries s;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') throw SeriesParseError(lineno, "CR line endings are not accepted");
    if (!header) {
      if (line != "B,count") throw SeriesParseError(lineno, "expected header 'B,count'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    SeriesRow row;
    if (comma == std::string::npos || !parse_u64(std::string_view(line).substr(0, comma), row.bound) ||
        !parse_u64(std::string_view(line).substr(comma + 1), row.count)) {
      throw SeriesParseError(lineno, "malformed row '" + line + "'");
    }
    if (!s.rows.empty() && row.bound <= s.rows.back().bound) throw SeriesParseError(lineno, "bounds must be strictly increasing");
    if (!s.rows.empty() && row.count < s.rows.back().count) throw SeriesParseError(lineno, "counts must be nondecreasing");
    s.rows.push_back(row);
  }
  if (!header) throw SeriesParseError(1, "missing header 'B,count'");
  return s;
}

CountSeries read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return read_series(in);
}

}  // namespace ptcount
