#include "ptcount/toric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ptcount {

namespace {

std::int64_t isqrt64(std::int64_t v) { return isqrt_floor(static_cast<i128>(v)); }

std::int64_t min4(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return std::min(std::min(a, b), std::min(c, d));
}

void merge_primes(std::vector<std::uint32_t>& into, const std::vector<std::uint32_t>& more) {
  for (auto p : more) {
    if (std::find(into.begin(), into.end(), p) == into.end()) into.push_back(p);
  }
}

// Values of the hexagon enumeration at one (e0, ..., e4), shared by the
// counting and visiting drivers.
struct Hexagon {
  std::int64_t e0, e1, e2, e3, e4;
  std::int64_t v0, v1;      // e5-free vertex products
  std::int64_t p2, p5;      // coefficients of e5 in V2, V5
  std::int64_t q3, q4;      // coefficients of e5^2 in V3, V4
  // Largest e5 with every vertex product <= b (0 if none).
  std::int64_t e5_limit(std::int64_t b) const {
    if (std::max(v0, v1) > b) return 0;
    return std::min(std::min(b / p2, b / p5), isqrt64(b / std::max(q3, q4)));
  }
};

// Calls f(hexagon, divisors) for each admissible 5-tuple with e2 in
// [e2_lo, e2_hi], where divisors are the squarefree divisors (with mu) of
// e1 e2 e3, sorted ascending: the integers e5 must avoid.
template <class F>
void hexagon_loop(std::int64_t bound, std::int64_t e2_lo, std::int64_t e2_hi, const PrimeSieve& sieve, F&& f) {
  const std::int64_t b = bound;
  std::vector<std::uint32_t> primes, scratch;
  std::vector<std::pair<std::int64_t, int>> divisors;
  Hexagon h{};
  for (std::int64_t e2 = e2_lo; e2 <= e2_hi && e2 * e2 <= b; ++e2) {
    h.e2 = e2;
    const std::int64_t m1 = std::min(isqrt64(b / (e2 * e2)), isqrt64(b / e2));
    for (std::int64_t e1 = 1; e1 <= m1; ++e1) {
      h.e1 = e1;
      const std::int64_t e12 = e1 * e1 * e2 * e2;
      const std::int64_t m3 = std::min(std::min(b / e12, isqrt64(b / (e1 * e2 * e2))), isqrt64(b / e2));
      for (std::int64_t e3 = 1; e3 <= m3; ++e3) {
        if (std::gcd(e3, e1) != 1) continue;
        h.e3 = e3;
        sieve.distinct_primes(static_cast<std::uint32_t>(e1), primes);
        sieve.distinct_primes(static_cast<std::uint32_t>(e2), scratch);
        merge_primes(primes, scratch);
        sieve.distinct_primes(static_cast<std::uint32_t>(e3), scratch);
        merge_primes(primes, scratch);
        mobius_divisors(primes, divisors);
        std::sort(divisors.begin(), divisors.end());
        const std::int64_t e23 = e2 * e3;
        const std::int64_t m0 = min4(b / (e12 * e3), b / e3, isqrt64(b / e1), isqrt64(b / (e1 * e1 * e2)));
        for (std::int64_t e0 = 1; e0 <= m0; ++e0) {
          if (std::gcd(e0, e23) != 1) continue;
          h.e0 = e0;
          h.v0 = e0 * e12 * e3;
          const std::int64_t e012 = e0 * e1 * e2;
          const std::int64_t m4 =
              min4(b / (e1 * e2 * e2 * e3 * e3), isqrt64(b / (e2 * e3 * e3)), isqrt64(b / (e3 * e0)), b / (e0 * e0 * e1));
          h.p5 = e0 * e0 * e1 * e1 * e2;
          for (std::int64_t e4 = 1; e4 <= m4; ++e4) {
            if (std::gcd(e4, e012) != 1) continue;
            h.e4 = e4;
            h.v1 = e1 * e2 * e2 * e3 * e3 * e4;
            h.p2 = e2 * e3 * e3 * e4 * e4;
            h.q3 = e3 * e4 * e4 * e0;
            h.q4 = e4 * e0 * e0 * e1;
            f(h, divisors);
          }
        }
      }
    }
  }
}

// #{1 <= x <= l : gcd(x, n) = 1} from the squarefree divisors of n.
std::int64_t coprime_count(std::int64_t l, const std::vector<std::pair<std::int64_t, int>>& divisors) {
  std::int64_t c = 0;
  for (const auto& [d, mu] : divisors) {
    if (d > l) break;
    c += mu * (l / d);
  }
  return c;
}

// e2 ranges: singletons up to 64, then doubling.
std::vector<std::pair<std::int64_t, std::int64_t>> e2_ranges(std::int64_t bound) {
  const std::int64_t top = std::max<std::int64_t>(1, isqrt64(bound));
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t lo = 1; lo <= top;) {
    const std::int64_t hi = lo <= 64 ? lo : std::min(top, 2 * lo - 1);
    out.push_back({lo, std::min(hi, top)});
    lo = hi + 1;
  }
  return out;
}

std::uint32_t sieve_limit(std::uint64_t bound) {
  // e1, e2, e3 are all at most sqrt(B).
  return static_cast<std::uint32_t>(std::max<std::int64_t>(2, isqrt64(static_cast<std::int64_t>(bound)) + 1));
}

CountSeries cumulative_series(const std::vector<std::uint64_t>& grid, const std::vector<std::uint64_t>& counts) {
  CountSeries s;
  for (std::size_t j = 0; j < grid.size(); ++j) s.rows.push_back({grid[j], counts[j]});
  s.scenario = "toric del Pezzo surface of degree 6";
  s.filter = "torus";
  return s;
}

CountSeries enumerate_torus_hexagon(const std::vector<std::uint64_t>& grid, int threads, Checkpoint* checkpoint) {
  const auto bound = static_cast<std::int64_t>(grid.back());
  const PrimeSieve sieve(sieve_limit(grid.back()));
  const auto ranges = e2_ranges(bound);
  std::vector<std::string> labels;
  for (const auto& [lo, hi] : ranges) labels.push_back(std::to_string(lo) + ".." + std::to_string(hi));
  std::vector<std::int64_t> g(grid.begin(), grid.end());
  auto work = [&](std::size_t part) {
    // Cumulative counts per bound, positive octant.
    std::vector<std::uint64_t> acc(grid.size(), 0);
    hexagon_loop(bound, ranges[part].first, ranges[part].second, sieve,
                 [&](const Hexagon& h, const std::vector<std::pair<std::int64_t, int>>& divisors) {
                   for (std::size_t j = g.size(); j-- > 0;) {
                     const std::int64_t l = h.e5_limit(g[j]);
                     if (l < 1) break;
                     acc[j] += static_cast<std::uint64_t>(coprime_count(l, divisors));
                   }
                 });
    return acc;
  };
  auto totals = run_partitions(labels, grid.size(), work, {threads, checkpoint});
  // Each positive point has four sign classes with z0 > 0.
  for (auto& t : totals) t *= 4;
  return cumulative_series(grid, totals);
}

std::uint64_t height_from_monomials(std::int64_t z0, std::int64_t z1, std::int64_t z2) {
  const std::int64_t m[7] = {z0 * z1 * z2, z1 * z1 * z2, z1 * z2 * z2, z2 * z2 * z0,
                             z2 * z0 * z0, z0 * z0 * z1, z0 * z1 * z1};
  std::int64_t g = 0, mx = 0;
  for (auto v : m) {
    g = std::gcd(g, v);
    mx = std::max(mx, iabs(v));
  }
  return g == 0 ? 0 : static_cast<std::uint64_t>(mx / g);
}

}  // namespace

SectionBasis toric_anticanonical_basis() {
  const std::vector<std::vector<unsigned>> exps{{1, 1, 1}, {0, 2, 1}, {0, 1, 2}, {1, 0, 2},
                                                {2, 0, 1}, {2, 1, 0}, {1, 2, 0}};
  std::vector<Polynomial> sections;
  for (const auto& e : exps) sections.push_back(Polynomial::monomial(3, e));
  return SectionBasis(std::move(sections), 3);
}

std::uint64_t toric_height(std::int64_t z0, std::int64_t z1, std::int64_t z2) {
  if (z0 == 0 && z1 == 0 && z2 == 0) throw InvalidInput("projective point cannot have all coordinates zero");
  const std::int64_t big = std::max({iabs(z0), iabs(z1), iabs(z2)});
  if (big > 2000000) {
    return static_cast<std::uint64_t>(to_i64(height_q(toric_anticanonical_basis(), canonicalize({z0, z1, z2})).value));
  }
  const std::int64_t g = std::gcd(std::gcd(z0, z1), z2);
  const std::uint64_t h = height_from_monomials(z0 / g, z1 / g, z2 / g);
  if (h == 0) throw BasePointError("every section vanishes at the point");
  return h;
}

CountSeries enumerate_torus(const std::vector<std::uint64_t>& grid, const TorusOptions& options) {
  validate_grid(grid);
  if (grid.back() > (std::uint64_t{1} << 40)) throw InvalidInput("height bound too large");
  if (options.validate_box) {
    std::vector<std::uint64_t> small;
    for (std::uint64_t b = 1; b <= options.validate_limit; ++b) small.push_back(b);
    const auto hex = enumerate_torus_hexagon(small, 1, nullptr);
    const auto box = enumerate_torus_box(small, false, options.box_exponent.value_or(2.0 / 3.0));
    const auto full = enumerate_torus_box(small, true);
    if (!(hex == full) || !(box == full)) {
      throw std::logic_error("box validation failed: the enumerators disagree below " + std::to_string(options.validate_limit));
    }
  }
  if (options.full_box) return enumerate_torus_box(grid, true);
  if (options.box_exponent) return enumerate_torus_box(grid, false, *options.box_exponent);
  return enumerate_torus_hexagon(grid, options.threads, options.checkpoint);
}

CountSeries enumerate_torus_box(const std::vector<std::uint64_t>& grid, bool full_box, double box_exponent) {
  validate_grid(grid);
  if (!(box_exponent > 0) || box_exponent > 2) throw InvalidInput("box exponent must lie in (0, 2]");
  const auto bound = static_cast<std::int64_t>(grid.back());
  if (bound > 100000) throw InvalidInput("box scan is limited to bounds up to 100000");
  const std::int64_t wmax =
      full_box ? 2 * bound : static_cast<std::int64_t>(std::floor(2.0 * std::pow(static_cast<double>(bound), box_exponent)));
  const std::int64_t root = isqrt64(bound);
  std::vector<std::uint64_t> bins(grid.size(), 0);
  for (std::int64_t w = 1; w <= wmax; ++w) {
    // x^2 / w^2 <= H because the largest monomial is >= x^2 y and the gcd
    // divides y w^2.
    const std::int64_t xmax = full_box ? std::min(2 * bound, w * root + w) : w * root + w;
    for (std::int64_t y = w; y <= xmax; ++y) {
      const std::int64_t gwy = std::gcd(w, y);
      for (std::int64_t x = y; x <= xmax; ++x) {
        if (x > w * root && x * x > bound * w * w) break;
        if (std::gcd(gwy, x) != 1) continue;
        const std::uint64_t h = height_from_monomials(x, y, w);
        const std::size_t j = grid_bin(grid, h);
        if (j == grid.size()) continue;
        const std::uint64_t perms = (x == y && y == w) ? 1 : (x == y || y == w) ? 3 : 6;
        bins[j] += 4 * perms;
      }
    }
  }
  auto s = series_from_bins(grid, bins);
  s.scenario = "toric del Pezzo surface of degree 6";
  s.filter = "torus";
  return s;
}

CountSeries brute_force_torus(const std::vector<std::uint64_t>& grid, std::uint64_t ceiling) {
  validate_grid(grid);
  if (grid.back() > ceiling) throw InvalidInput("bound exceeds the exhaustive oracle ceiling");
  const auto bound = static_cast<std::int64_t>(grid.back());
  auto scan = [&](std::int64_t box) {
    std::vector<std::uint64_t> bins(grid.size(), 0);
    for (std::int64_t z0 = 1; z0 <= box; ++z0) {
      for (std::int64_t z1 = -box; z1 <= box; ++z1) {
        if (z1 == 0) continue;
        const std::int64_t g01 = std::gcd(z0, z1);
        for (std::int64_t z2 = -box; z2 <= box; ++z2) {
          if (z2 == 0 || std::gcd(g01, z2) != 1) continue;
          const std::size_t j = grid_bin(grid, height_from_monomials(z0, z1, z2));
          if (j < grid.size()) ++bins[j];
        }
      }
    }
    return bins;
  };
  const auto bins = scan(2 * bound);
  if (bound <= 50 && scan(4 * bound) != bins) {
    throw std::logic_error("points outside the 2B box: the oracle box is too small");
  }
  auto s = series_from_bins(grid, bins);
  s.scenario = "toric del Pezzo surface of degree 6";
  s.filter = "torus";
  return s;
}

void for_each_positive_torus_point(std::uint64_t bound,
                                   const std::function<void(std::int64_t, std::int64_t, std::int64_t, std::uint64_t)>& visit) {
  if (bound < 1) throw InvalidInput("height bound must be at least 1");
  const auto b = static_cast<std::int64_t>(bound);
  const PrimeSieve sieve(sieve_limit(bound));
  hexagon_loop(b, 1, b, sieve, [&](const Hexagon& h, const std::vector<std::pair<std::int64_t, int>>& divisors) {
    const std::int64_t l = h.e5_limit(b);
    const std::int64_t rad = std::accumulate(divisors.begin(), divisors.end(), std::int64_t{1},
                                             [](std::int64_t acc, const auto& d) { return std::max(acc, d.first); });
    for (std::int64_t e5 = 1; e5 <= l; ++e5) {
      if (std::gcd(e5, rad) != 1) continue;
      const std::int64_t hv = std::max({h.v0, h.v1, h.p2 * e5, h.p5 * e5, std::max(h.q3, h.q4) * e5 * e5});
      visit(h.e1 * e5 * h.e0, h.e1 * h.e3 * h.e2, e5 * h.e3 * h.e4, static_cast<std::uint64_t>(hv));
    }
  });
}

CountSeries count_torus_curve(const Polynomial& condition, const std::vector<std::uint64_t>& grid) {
  validate_grid(grid);
  if (condition.num_vars() != 3) throw InvalidInput("curve condition must be a polynomial in z0, z1, z2");
  if (condition.is_zero()) throw InvalidInput("the zero polynomial does not cut out a proper subvariety");
  if (!condition.homogeneous_degree()) throw InvalidInput("curve condition must be homogeneous");
  // Terms with small coefficients evaluate in 128-bit arithmetic; anything
  // that might overflow falls back to exact integers.
  struct Term {
    std::int64_t c;
    unsigned e[3];
  };
  std::vector<Term> terms;
  bool small = true;
  unsigned degree = *condition.homogeneous_degree();
  for (const auto& t : condition.terms()) {
    if (!t.coeff.fits_slong_p()) small = false;
    terms.push_back({small ? static_cast<std::int64_t>(t.coeff.get_si()) : 0, {t.exponents[0], t.exponents[1], t.exponents[2]}});
  }
  auto vanishes = [&](std::int64_t z0, std::int64_t z1, std::int64_t z2) {
    const std::int64_t z[3] = {z0, z1, z2};
    if (small) {
      i128 sum = 0;
      bool ok = true;
      for (const auto& t : terms) {
        i128 v = t.c;
        for (int i = 0; i < 3 && ok; ++i) {
          for (unsigned k = 0; k < t.e[i] && ok; ++k) ok = !__builtin_mul_overflow(v, static_cast<i128>(z[i]), &v);
        }
        ok = ok && !__builtin_add_overflow(sum, v, &sum);
        if (!ok) break;
      }
      if (ok) return sum == 0;
    }
    return condition.evaluate(std::span<const std::int64_t>(z, 3)) == 0;
  };
  (void)degree;
  std::vector<std::uint64_t> bins(grid.size(), 0);
  for_each_positive_torus_point(grid.back(), [&](std::int64_t z0, std::int64_t z1, std::int64_t z2, std::uint64_t h) {
    const std::size_t j = grid_bin(grid, h);
    if (j == grid.size()) return;
    for (int s1 : {1, -1}) {
      for (int s2 : {1, -1}) {
        if (vanishes(z0, s1 * z1, s2 * z2)) ++bins[j];
      }
    }
  });
  auto s = series_from_bins(grid, bins);
  s.scenario = "toric del Pezzo surface of degree 6";
  s.filter = "torus points on a curve";
  return s;
}

}  // namespace ptcount
