#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ptcount/cubic_surface.hpp"

using namespace ptcount;

namespace {

std::vector<std::uint64_t> upto(std::uint64_t n) {
  std::vector<std::uint64_t> g(n);
  std::iota(g.begin(), g.end(), 1);
  return g;
}

std::vector<std::uint64_t> counts(const CountSeries& s) {
  std::vector<std::uint64_t> out;
  for (const auto& r : s.rows) out.push_back(r.count);
  return out;
}

using Counts = std::vector<std::uint64_t>;

}  // namespace

TEST_SUITE("cubic") {

TEST_CASE("surface construction") {
  CHECK_THROWS_AS(DiagonalCubic({1, 0, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(DiagonalCubic({1, 1, 8, 27}, {1, 1, 2, 4}), InvalidInput);
  const auto w = detect_cube_witnesses({1, 1, 8, 27});
  REQUIRE(w.has_value());
  CHECK(w->b == std::array<std::int64_t, 4>{1, 1, 2, 3});
  const auto v = detect_cube_witnesses({2, 16, -54, 128});
  REQUIRE(v.has_value());
  CHECK(v->b == std::array<std::int64_t, 4>{1, 2, -3, 4});
  CHECK(v->lambda == 2);
  const auto f = detect_cube_witnesses({27, 8, 1, 1});
  REQUIRE(f.has_value());
  CHECK(f->b == std::array<std::int64_t, 4>{3, 2, 1, 1});
  CHECK_FALSE(detect_cube_witnesses({1, 2, 3, 4}).has_value());
  CHECK_THROWS_AS(rational_lines(DiagonalCubic({1, 2, 3, 4})), InvalidInput);
}

TEST_CASE("rational lines") {
  const auto f = rational_lines(DiagonalCubic({1, 1, 1, 1}));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == LineDescriptor::make({1, 1, 0, 0}, {0, 0, 1, 1}));
  const auto g = rational_lines(DiagonalCubic({1, 8, 27, 64}));
  CHECK(g[0] == LineDescriptor::make({1, 2, 0, 0}, {0, 0, 3, 4}));
  CHECK(pairwise_rational_lines({1, 1, 8, 27}) == rational_lines(DiagonalCubic({1, 1, 8, 27})));
  CHECK(pairwise_rational_lines({1, 2, 3, 4}).empty());
  CHECK(pairwise_rational_lines({1, 1, 2, 2}).size() == 1);
  CHECK_THROWS_AS(LineDescriptor::make({1, 1, 0, 0}, {2, 2, 0, 0}), InvalidInput);
  // Points swept along y0 + 2 y1 = 0 = 3 y2 + 4 y3 lie on the line and the surface.
  const DiagonalCubic s({1, 8, 27, 64});
  for (std::int64_t u = -6; u <= 6; ++u)
    for (std::int64_t v = -6; v <= 6; ++v) {
      const Quad y{2 * u, -u, 4 * v, -3 * v};
      CHECK(g[0].contains(y));
      CHECK(s.contains(y));
    }
  for (const auto& l : g) CHECK(count_on_line(l, {1000}).rows[0].count > 0);
}

TEST_CASE("frozen oracle counts") {
  const auto grid = upto(10);
  CHECK(counts(enumerate_cubic_points(DiagonalCubic({1, 1, 1, 1}), grid, {}).series) ==
        Counts{9, 21, 45, 69, 117, 165, 237, 285, 381, 429});
  CHECK(counts(enumerate_cubic_points(DiagonalCubic({1, 2, 3, 4}), grid, {}).series) ==
        Counts{3, 3, 4, 4, 6, 6, 8, 11, 11, 11});
  CHECK(counts(enumerate_cubic_points(DiagonalCubic({1, 1, 8, 27}), grid, {}).series) ==
        Counts{1, 3, 16, 22, 28, 49, 53, 63, 97, 117});
  const DiagonalCubic fermat({1, 1, 1, 1});
  CHECK(counts(enumerate_cubic_points(fermat, grid, {rational_lines(fermat)}).series) ==
        Counts{0, 0, 0, 0, 0, 24, 24, 24, 48, 48});
  const DiagonalCubic c({1, 1, 8, 27}, {1, 1, 2, 3});
  CHECK(counts(enumerate_cubic_points(c, grid, {rational_lines(c)}).series) == Counts{0, 0, 0, 0, 4, 8, 8, 12, 18, 22});
}

TEST_CASE("meet in the middle agrees with the box scan") {
  const auto grid = upto(24);
  for (const auto& a : std::vector<std::array<std::int64_t, 4>>{
           {1, 1, 1, 1}, {1, 2, 3, 4}, {1, 1, 8, 27}, {-3, 5, 7, -2}, {2, 2, -2, 9}}) {
    const DiagonalCubic s(a);
    CAPTURE(s.describe());
    const auto fast = enumerate_cubic_points(s, grid, {}, {.keep_points = true});
    const auto slow = brute_force_cubic(s, grid, {}, 100);
    CHECK(fast.series == slow.series);
    CHECK(fast.points == brute_force_cubic(s, grid, {}).points);
    const PointFilter lines{pairwise_rational_lines(a)};
    CHECK(enumerate_cubic_points(s, grid, lines).series == brute_force_cubic(s, grid, lines).series);
  }
}

TEST_CASE("emitted points are canonical solutions") {
  const DiagonalCubic s({1, 1, 8, 27});
  const auto r = enumerate_cubic_points(s, {30}, {}, {.keep_points = true});
  REQUIRE(r.points.size() == r.series.rows[0].count);
  CHECK(std::is_sorted(r.points.begin(), r.points.end()));
  for (const auto& y : r.points) {
    CHECK(s.contains(y));
    std::int64_t g = 0;
    for (auto v : y) g = gcd64(g, v);
    CHECK(g == 1);
    const auto lead = *std::find_if(y.begin(), y.end(), [](std::int64_t v) { return v != 0; });
    CHECK(lead > 0);
    for (auto v : y) CHECK(iabs(v) <= 30);
  }
}

TEST_CASE("chunking, memory and threads do not change counts") {
  const DiagonalCubic s({1, 1, 1, 1});
  const auto grid = upto(40);
  const PointFilter f{rational_lines(s)};
  const auto base = enumerate_cubic_points(s, grid, f).series;
  for (std::size_t chunk : {std::size_t{64}, std::size_t{1000}, std::size_t{1} << 22}) {
    CubicCountOptions o;
    o.chunk_entries = chunk;
    CHECK(enumerate_cubic_points(s, grid, f, o).series == base);
    o.threads = 3;
    o.memory_budget = 1 << 16;
    CHECK(enumerate_cubic_points(s, grid, f, o).series == base);
  }
}

TEST_CASE("scaling and permuting coefficients") {
  const auto grid = upto(20);
  const auto base = enumerate_cubic_points(DiagonalCubic({1, 2, 3, 4}), grid, {}).series;
  CHECK(enumerate_cubic_points(DiagonalCubic({-5, -10, -15, -20}), grid, {}).series == base);
  CHECK(enumerate_cubic_points(DiagonalCubic({3, 1, 4, 2}), grid, {}).series == base);
  CHECK(enumerate_cubic_points(DiagonalCubic({4, 3, 2, 1}), grid, {}).series == base);
  const auto cubes = enumerate_cubic_points(DiagonalCubic({1, 1, 8, 27}), grid, {}).series;
  CHECK(enumerate_cubic_points(DiagonalCubic({27, 8, 1, 1}), grid, {}).series == cubes);
  CHECK(enumerate_cubic_points(DiagonalCubic({2, 2, 16, 54}), grid, {}).series == cubes);
}

TEST_CASE("filters only remove points") {
  const DiagonalCubic s({1, 1, 1, 1});
  const auto grid = upto(30);
  const auto lines = rational_lines(s);
  std::vector<std::uint64_t> prev = counts(enumerate_cubic_points(s, grid, {}).series);
  PointFilter f;
  for (const auto& l : lines) {
    f.lines.push_back(l);
    const auto now = counts(enumerate_cubic_points(s, grid, f).series);
    for (std::size_t i = 0; i < now.size(); ++i) CHECK(now[i] <= prev[i]);
    prev = now;
  }
  PointFilter everything;
  everything.vanishing.push_back(Polynomial(4));
  for (auto c : counts(enumerate_cubic_points(s, grid, everything).series)) CHECK(c == 0);
  for (auto c : counts(brute_force_cubic(s, grid, everything).series)) CHECK(c == 0);
}

TEST_CASE("grid validation") {
  const DiagonalCubic s({1, 1, 1, 1});
  CHECK_THROWS_AS(enumerate_cubic_points(s, {}, {}), InvalidInput);
  CHECK_THROWS_AS(enumerate_cubic_points(s, {0}, {}), InvalidInput);
  CHECK_THROWS_AS(enumerate_cubic_points(s, {4, 4}, {}), InvalidInput);
  CHECK_THROWS_AS(brute_force_cubic(s, {}, {}), InvalidInput);
  CHECK_THROWS_AS(brute_force_cubic(s, {200}, {}), InvalidInput);
}

TEST_CASE("points on lines") {
  const auto l = LineDescriptor::make({1, 1, 0, 0}, {0, 0, 1, 1});
  CHECK(counts(count_on_line(l, upto(8))) == Counts{4, 8, 16, 24, 40, 48, 72, 88});
  const auto m = LineDescriptor::make({2, 0, 0, 3}, {0, 1, 5, 0});
  CHECK(counts(count_on_line(m, upto(8))) == Counts{0, 0, 1, 1, 4, 6, 6, 6});
  CHECK_THROWS_AS(count_on_line(l, {0}), InvalidInput);
  // The swept points are exactly the fermat points on the line.
  const DiagonalCubic fermat({1, 1, 1, 1});
  const auto pts = brute_force_cubic(fermat, {12}, {}, 100).points;
  const auto on = std::count_if(pts.begin(), pts.end(), [&](const Quad& y) { return l.contains(y); });
  CHECK(static_cast<std::uint64_t>(on) == count_on_line(l, {12}).rows[0].count);
}

TEST_CASE("degenerate fibers") {
  const std::vector<std::uint64_t> g{1, 2, 3, 4, 6, 8};
  CHECK(count_degenerate_fiber({1, 0, 9, 28}, g) == Counts{1, 1, 1, 1, 1, 1});
  CHECK(count_degenerate_fiber({1, -1, 0, 0}, g) == Counts{13, 49, 145, 289, 865, 2017});
  CHECK(count_degenerate_fiber({0, 0, 0, 0}, g) == Counts{40, 272, 1120, 2928, 12768, 38128});
  CHECK(count_degenerate_fiber({0, 0, 0, 5}, g) == Counts{13, 49, 145, 289, 865, 2017});
  CHECK(count_degenerate_fiber({1, 2, 0, 0}, g) == Counts{4, 8, 16, 24, 48, 88});
  CHECK(count_degenerate_fiber({1, 1, 1, 0}, g) == Counts{10, 22, 46, 70, 142, 262});
  CHECK(count_degenerate_fiber({2, -16, 0, 0}, g) == Counts{4, 33, 65, 161, 481, 1057});
}

TEST_CASE("point dump format") {
  const DiagonalCubic s({1, 1, 1, 1});
  const auto r = enumerate_cubic_points(s, {2}, {}, {.keep_points = true});
  const auto path = std::filesystem::temp_directory_path() / "ptcount_dump_test.txt";
  write_points(path.string(), r.points);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  std::istringstream lines(text);
  Quad y;
  std::vector<Quad> back;
  while (lines >> y[0] >> y[1] >> y[2] >> y[3]) back.push_back(y);
  CHECK(back == r.points);
  std::filesystem::remove(path);
}

}
