#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ptcount/analysis.hpp"

using namespace ptcount;

namespace {

CountSeries synthetic(double c, int k, std::size_t rows = 13) {
  CountSeries s;
  for (auto b : geometric_grid(16, 2, rows)) {
    const double x = static_cast<double>(b);
    s.rows.push_back({b, static_cast<std::uint64_t>(std::floor(c * x * std::pow(std::log(x), k)))});
  }
  return s;
}

CountSeries parse(const std::string& text) {
  std::istringstream in(text);
  return read_series(in);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("grids") {
  CHECK(geometric_grid(16, 2, 4) == std::vector<std::uint64_t>{16, 32, 64, 128});
  CHECK(parse_grid("16:2:3") == std::vector<std::uint64_t>{16, 32, 64});
  CHECK(parse_grid("1:10:3") == std::vector<std::uint64_t>{1, 10, 100});
  CHECK_THROWS_AS(parse_grid("16:2"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("16:1:3"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("0:2:3"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("16:2:0"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("a:2:3"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("16:2:80"), std::exception);
  const std::vector<std::uint64_t> g{2, 5, 9};
  CHECK(grid_bin(g, 1) == 0);
  CHECK(grid_bin(g, 2) == 0);
  CHECK(grid_bin(g, 3) == 1);
  CHECK(grid_bin(g, 9) == 2);
  CHECK(grid_bin(g, 10) == 3);
  const std::vector<std::uint64_t> bins{1, 0, 4};
  CHECK(series_from_bins(g, bins).rows == std::vector<SeriesRow>{{2, 1}, {5, 1}, {9, 5}});
}

TEST_CASE("exact model recovery") {
  for (int k = 0; k <= 3; ++k) {
    const auto fit = fit_log_power(synthetic(k == 0 ? 9 : 5, k));
    CAPTURE(k);
    CHECK(std::abs(fit.exponent - k) <= 0.05);
    CHECK(fit.residual >= 0);
    CHECK(fit.samples == 13);
  }
  const auto fit = fit_log_power(synthetic(9, 0));
  CHECK(fit.constant == doctest::Approx(9).epsilon(0.01));
}

TEST_CASE("scaling counts leaves the exponent alone") {
  auto s = synthetic(3, 2);
  auto t = s;
  for (auto& r : t.rows) r.count *= 8;
  const auto a = fit_log_power(s), b = fit_log_power(t);
  CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-12));
  CHECK(b.constant == doctest::Approx(8 * a.constant).epsilon(1e-9));
}

TEST_CASE("dropped rows and minimal input") {
  CountSeries s;
  s.rows = {{2, 0}, {4, 3}, {16, 40}, {32, 100}, {64, 250}, {128, 600}};
  const auto fit = fit_log_power(s);
  CHECK(fit.samples == 4);
  CHECK(fit.warnings.size() == 2);
  s.rows.pop_back();
  CHECK_THROWS_AS(fit_log_power(s), InvalidInput);
  auto full = synthetic(2, 2);
  const double k = fit_log_power(full).exponent;
  full.rows.pop_back();
  CHECK(std::abs(fit_log_power(full).exponent - k) < 0.1);
}

TEST_CASE("power fit") {
  CountSeries s;
  for (auto b : geometric_grid(2, 2, 12)) s.rows.push_back({b, b * b * 3});
  CHECK(fit_power(s).exponent == doctest::Approx(2).epsilon(1e-9));
}

TEST_CASE("Manin comparison") {
  const auto cubic = manin_compare(synthetic(7, 3), 2);
  CHECK(cubic.predicted_exponent == 1);
  CHECK(cubic.fit.exponent > 2.9);
  CHECK(cubic.monotone_fraction == 1.0);
  CHECK(cubic.ratio_rows.size() == 13);
  CHECK(cubic.ratio_rows[0].bound == 16);

  const auto linear = manin_compare(synthetic(5, 1), 2);
  CHECK(std::abs(linear.fit.exponent - 1) < 0.05);
  CHECK(linear.monotone_fraction == 0.0);

  CountSeries with_one;
  with_one.rows = {{1, 1}, {16, 60}, {32, 200}, {64, 700}, {128, 2500}};
  const auto r = manin_compare(with_one, 3);
  CHECK(r.predicted_exponent == 2);
  CHECK_FALSE(r.ratio_rows[0].ratio.has_value());
  CHECK(r.monotone_fraction >= 0);
  CHECK(r.monotone_fraction <= 1);
  CHECK_THROWS_AS(manin_compare(with_one, 0), InvalidInput);

  const auto j = to_json(cubic);
  for (const char* key : {"t", "predicted_exponent", "fitted_exponent", "fitted_constant", "residual", "ratio_rows",
                          "monotone_fraction"})
    CHECK(j.contains(key));
}

TEST_CASE("CSV round trip") {
  const auto s = synthetic(5, 2);
  std::ostringstream out;
  write_series(out, s);
  const std::string text = out.str();
  CHECK(text.rfind("B,count\n16,", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find(" \n") == std::string::npos);
  CHECK(parse(text) == s);
  std::ostringstream again;
  write_series(again, parse(text));
  CHECK(again.str() == text);
  CHECK(parse("B,count\n").rows.empty());
}

TEST_CASE("CSV parser rejects bad input") {
  CHECK_THROWS_AS(parse(""), SeriesParseError);
  CHECK_THROWS_AS(parse("B,n\n1,2\n"), SeriesParseError);
  CHECK_THROWS_AS(parse("B,count\n1,2,3\n"), SeriesParseError);
  CHECK_THROWS_AS(parse("B,count\n1,x\n"), SeriesParseError);
  CHECK_THROWS_AS(parse("B,count\n-1,2\n"), SeriesParseError);
  CHECK_THROWS_AS(parse("B,count\n1,2 \n"), SeriesParseError);
  CHECK_THROWS_AS(parse("B,count\r\n1,2\r\n"), SeriesParseError);
  try {
    parse("B,count\n4,2\n2,3\n");
    FAIL("out of order bounds accepted");
  } catch (const SeriesParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse("B,count\n2,5\n4,3\n");
    FAIL("decreasing counts accepted");
  } catch (const SeriesParseError& e) {
    CHECK(e.line() == 3);
  }
}

}
