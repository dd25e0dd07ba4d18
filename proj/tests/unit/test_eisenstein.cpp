#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ptcount/cubic_surface.hpp"
#include "ptcount/eisenstein.hpp"

using namespace ptcount;

namespace {

using E = EisensteinInt;

std::vector<E> sample(std::uint64_t seed, int count, std::int64_t range) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> d(-range, range);
  std::vector<E> out;
  for (int i = 0; i < count; ++i) out.push_back({d(rng), d(rng)});
  return out;
}

bool associates(E x, E y) {
  for (const auto& u : eisenstein_units())
    if (x * u == y) return true;
  return false;
}

// Plucker coordinates of the line cut out by two forms.
std::array<E, 6> plucker(const EisLine& l) {
  std::array<E, 6> p;
  int n = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) p[n++] = l.first[i] * l.second[j] - l.first[j] * l.second[i];
  return p;
}

bool same_line(const EisLine& x, const EisLine& y) {
  const auto p = plucker(x), q = plucker(y);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!(p[i] * q[j] - p[j] * q[i]).is_zero()) return false;
  return true;
}

}  // namespace

TEST_SUITE("eisenstein") {

TEST_CASE("ring basics") {
  CHECK(kOmega * kOmega == E(-1, -1));
  CHECK(kOmega * kOmega + kOmega + E(1) == E());
  CHECK(norm(E(1, -1)) == 3);
  CHECK(norm(E(2, 1)) == 3);
  CHECK(E(3, 2).conj() == E(1, -2));
  CHECK(norm(E(3, 2)) == 7);
  CHECK((E(3, 2) * E(3, 2).conj()) == E(7));
  for (const auto& u : eisenstein_units()) {
    CHECK(is_unit(u));
    CHECK(norm(u) == 1);
  }
  CHECK(cube(E(1, -1)) == E(1, -1) * E(1, -1) * E(1, -1));
  CHECK_THROWS_AS(E(std::int64_t{1} << 62, 0) * E(4, 0), std::overflow_error);
}

TEST_CASE("norm is multiplicative") {
  const auto xs = sample(1, 400, 3000);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) CHECK(norm(xs[i] * xs[i + 1]) == norm(xs[i]) * norm(xs[i + 1]));
  for (const auto& x : xs) CHECK((norm(x) == 0) == x.is_zero());
}

TEST_CASE("division with remainder") {
  const auto xs = sample(2, 600, 5000);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (xs[i + 1].is_zero()) continue;
    const auto [q, r] = eis_divide(xs[i], xs[i + 1]);
    CHECK(q * xs[i + 1] + r == xs[i]);
    CHECK(3 * norm(r) <= norm(xs[i + 1]));
  }
  CHECK(eis_exact_div(E(7), E(3, 2)) == E(3, 2).conj());
  CHECK_THROWS_AS(eis_exact_div(E(7), E(2)), InvalidInput);
}

TEST_CASE("gcd examples") {
  CHECK(eis_gcd(E(3), E()) == E(3));
  CHECK(is_unit(eis_gcd(E(2), E(1, -1))));
  const E pi(1, -1);
  CHECK(associates(eis_gcd(pi * pi, pi * pi * pi), pi * pi));
}

TEST_CASE("gcd divides and is divisible by common divisors") {
  const auto xs = sample(3, 300, 200);
  const auto ds = sample(4, 300, 20);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const E d = ds[i].is_zero() ? E(1) : ds[i];
    const E u = xs[i] * d, v = xs[i + 1] * d;
    const E g = eis_gcd(u, v);
    if (u.is_zero() && v.is_zero()) {
      CHECK(g.is_zero());
      continue;
    }
    CHECK(eis_divides(g, u));
    CHECK(eis_divides(g, v));
    CHECK(eis_divides(d, g));
  }
}

TEST_CASE("six associates and canonical form") {
  CHECK(canonical_associate(kOmega) == E(1));
  CHECK(canonical_associate(E(-5)) == E(5));
  CHECK_THROWS_AS(canonical_associate(E()), InvalidInput);
  for (const auto& z : sample(5, 500, 1000)) {
    if (z.is_zero()) continue;
    std::set<E> assoc;
    for (const auto& u : eisenstein_units()) assoc.insert(z * u);
    CHECK(assoc.size() == 6);
    const E c = canonical_associate(z);
    CHECK(assoc.count(c) == 1);
    CHECK(canonical_associate(c) == c);
    for (const auto& w : assoc) CHECK(canonical_associate(w) == c);
  }
}

TEST_CASE("relative heights") {
  const auto basis = EisSectionBasis::coordinates();
  CHECK(height_eis(basis, canonicalize_e({E(1), kOmega, E(), E()})) == 1);
  CHECK(height_eis(basis, canonicalize_e({E(1, -1), E(1), E(), E()})) == 3);
  CHECK(height_eis(basis, canonicalize_e({E(2), E(1, 1), E(), E()})) == 4);
  CHECK_THROWS_AS(canonicalize_e({E(), E(), E(), E()}), InvalidInput);

  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::int64_t> d(-9, 9);
  for (int i = 0; i < 300; ++i) {
    std::array<E, 4> y{E(d(rng), d(rng)), E(d(rng), d(rng)), E(d(rng), d(rng)), E(d(rng), d(rng))};
    if (std::all_of(y.begin(), y.end(), [](E v) { return v.is_zero(); })) continue;
    const E s(d(rng), d(rng));
    if (s.is_zero()) continue;
    std::array<E, 4> ys;
    for (int k = 0; k < 4; ++k) ys[k] = y[k] * s;
    const auto p = canonicalize_e(y);
    CHECK(canonicalize_e(ys) == p);
    CHECK(height_eis(basis, p) >= 1);
  }
}

TEST_CASE("27 lines") {
  const std::array<E, 4> fermat{E(1), E(1), E(1), E(1)};
  const auto lines = lines_27(fermat, fermat);
  CHECK(lines.size() == 27);
  CHECK(std::set<EisLine>(lines.begin(), lines.end()).size() == 27);
  int rational = 0;
  for (const auto& l : lines) {
    const bool q = std::all_of(l.first.begin(), l.first.end(), [](E v) { return v.b == 0; }) &&
                   std::all_of(l.second.begin(), l.second.end(), [](E v) { return v.b == 0; });
    rational += q;
  }
  CHECK(rational == 3);

  const auto scaled = lines_27({E(1), E(8), E(27), E(64)}, {E(1), E(2), E(3), E(4)});
  const EisLine want{{E(1), E(2), E(), E()}, {E(), E(), E(3), E(4)}};
  CHECK(std::find(scaled.begin(), scaled.end(), want) != scaled.end());
  CHECK_THROWS_AS(lines_27({E(1), E(1), E(1), E(2)}, fermat), InvalidInput);
  CHECK_THROWS_AS(lines_27(fermat, {E(1), E(1), E(), E(1)}), InvalidInput);

  // Relabelling the coordinates permutes the lines.
  const std::array<int, 4> perm{2, 0, 3, 1};
  std::array<E, 4> pc, pb;
  for (int k = 0; k < 4; ++k) {
    pc[k] = E(1 + perm[k]) * E(1 + perm[k]) * E(1 + perm[k]);
    pb[k] = E(1 + perm[k]);
  }
  const auto permuted = lines_27(pc, pb);
  for (const auto& l : scaled) {
    EisLine img;
    for (int k = 0; k < 4; ++k) {
      img.first[k] = l.first[perm[k]];
      img.second[k] = l.second[perm[k]];
    }
    CHECK(std::count_if(permuted.begin(), permuted.end(), [&](const EisLine& m) { return same_line(m, img); }) == 1);
  }
}

TEST_CASE("Fermat over Z[w] at bound 1") {
  const std::array<E, 4> fermat{E(1), E(1), E(1), E(1)};
  const auto fast = enumerate_eis_cubic(fermat, {1}, {}, {.keep_points = true});
  const auto slow = brute_force_eis_cubic(fermat, {1}, {});
  CHECK(fast.series == slow.series);
  CHECK(fast.series.rows[0].count > 0);
  const EisFilter all27{lines_27(fermat, fermat)};
  for (const auto& p : fast.points) CHECK(all27.excludes(p.coords()));
  CHECK(enumerate_eis_cubic(fermat, {1}, all27).series.rows[0].count == 0);
  CHECK(brute_force_eis_cubic(fermat, {1}, all27).series.rows[0].count == 0);

  const std::array<E, 4> other{E(1), E(1), E(1), E(2)};
  CHECK(enumerate_eis_cubic(other, {1, 2, 3}, {}).series == brute_force_eis_cubic(other, {1, 2, 3}, {}).series);
  CHECK_THROWS_AS(enumerate_eis_cubic({E(1), E(), E(1), E(1)}, {1}, {}), InvalidInput);
}

TEST_CASE("enumerator matches the exhaustive scan") {
  const std::array<E, 4> a{E(1), E(1), E(1), E(1)};
  const std::vector<std::uint64_t> grid{1, 3, 4, 7};
  CHECK(enumerate_eis_cubic(a, grid, {}).series == brute_force_eis_cubic(a, grid, {}).series);
  const std::array<E, 4> b{E(1), E(0, 1), E(2), E(1, -1)};
  CHECK(enumerate_eis_cubic(b, grid, {}).series == brute_force_eis_cubic(b, grid, {}).series);
  const auto one = enumerate_eis_cubic(a, grid, {}, {.threads = 1});
  const auto four = enumerate_eis_cubic(a, grid, {}, {.threads = 4});
  CHECK(one.series == four.series);
}

TEST_CASE("rational points appear at the squared height") {
  const DiagonalCubic fermat({1, 1, 1, 1});
  const auto rational = enumerate_cubic_points(fermat, {3}, {}, {.keep_points = true});
  const std::array<E, 4> c{E(1), E(1), E(1), E(1)};
  const auto eis = enumerate_eis_cubic(c, {9}, {}, {.keep_points = true});
  const std::set<ProjectivePointE> found(eis.points.begin(), eis.points.end());
  for (const auto& y : rational.points) {
    const auto p = canonicalize_e({E(y[0]), E(y[1]), E(y[2]), E(y[3])});
    CHECK(found.count(p) == 1);
  }
}

}
