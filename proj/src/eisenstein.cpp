#include "ptcount/eisenstein.hpp"

#include <algorithm>
#include <mutex>

namespace ptcount {

namespace {

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("Eisenstein arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

// Floor division for a positive divisor.
i128 floor_div(i128 n, i128 d) {
  i128 q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

}  // namespace

EisensteinInt EisensteinInt::conj() const { return {checked_add(a, -b), -b}; }

EisensteinInt operator+(EisensteinInt x, EisensteinInt y) { return {checked_add(x.a, y.a), checked_add(x.b, y.b)}; }

EisensteinInt operator-(EisensteinInt x, EisensteinInt y) { return x + (-y); }

EisensteinInt EisensteinInt::operator-() const {
  if (a == std::numeric_limits<std::int64_t>::min() || b == std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("Eisenstein arithmetic overflow");
  }
  return {-a, -b};
}

// (x1 + y1 w)(x2 + y2 w) = x1 x2 - y1 y2 + (x1 y2 + x2 y1 - y1 y2) w
EisensteinInt operator*(EisensteinInt x, EisensteinInt y) {
  const i128 xa = x.a, xb = x.b, ya = y.a, yb = y.b;
  return {narrow(xa * ya - xb * yb), narrow(xa * yb + xb * ya - xb * yb)};
}

const std::array<EisensteinInt, 6>& eisenstein_units() {
  static const std::array<EisensteinInt, 6> units{{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}};
  return units;
}

std::int64_t norm(EisensteinInt z) {
  const i128 a = z.a, b = z.b;
  return narrow(a * a - a * b + b * b);
}

bool is_unit(EisensteinInt z) { return norm(z) == 1; }

EisensteinInt cube(EisensteinInt z) { return z * z * z; }

std::string to_string(EisensteinInt z) {
  if (z.b == 0) return std::to_string(z.a);
  std::string w = z.b == 1 ? "w" : z.b == -1 ? "-w" : std::to_string(z.b) + "w";
  if (z.a == 0) return w;
  return std::to_string(z.a) + (z.b > 0 ? "+" : "") + w;
}

EisDivision eis_divide(EisensteinInt z, EisensteinInt d) {
  if (d.is_zero()) throw InvalidInput("division by zero in Z[w]");
  const i128 n = norm(d);
  // z / d = z conj(d) / N(d); round each coordinate both ways and keep the
  // candidate with the smallest remainder.
  const i128 za = z.a, zb = z.b, ca = d.a - static_cast<i128>(d.b), cb = -static_cast<i128>(d.b);
  const i128 xa = za * ca - zb * cb;
  const i128 xb = za * cb + zb * ca - zb * cb;
  const i128 fa = floor_div(xa, n);
  const i128 fb = floor_div(xb, n);
  EisDivision best{};
  std::int64_t best_norm = -1;
  for (i128 qb = fb; qb <= fb + 1; ++qb) {
    for (i128 qa = fa; qa <= fa + 1; ++qa) {
      const EisensteinInt q{narrow(qa), narrow(qb)};
      const EisensteinInt r = z - q * d;
      const std::int64_t rn = norm(r);
      // Candidates arrive in (b, a) order, so strict < keeps the tie rule.
      if (best_norm < 0 || rn < best_norm) {
        best = {q, r};
        best_norm = rn;
      }
    }
  }
  return best;
}

bool eis_divides(EisensteinInt d, EisensteinInt z) {
  if (d.is_zero()) return z.is_zero();
  return eis_divide(z, d).remainder.is_zero();
}

EisensteinInt eis_exact_div(EisensteinInt z, EisensteinInt d) {
  const auto qr = eis_divide(z, d);
  if (!qr.remainder.is_zero()) throw InvalidInput(to_string(d) + " does not divide " + to_string(z));
  return qr.quotient;
}

EisensteinInt eis_gcd(EisensteinInt u, EisensteinInt v) {
  while (!v.is_zero()) {
    const EisensteinInt r = eis_divide(u, v).remainder;
    u = v;
    v = r;
  }
  return u;
}

EisensteinInt canonical_associate(EisensteinInt z) {
  if (z.is_zero()) throw InvalidInput("zero has no canonical associate");
  EisensteinInt best = z;
  for (const auto& u : eisenstein_units()) {
    const EisensteinInt c = z * u;
    if (c.a > best.a || (c.a == best.a && c.b < best.b)) best = c;
  }
  return best;
}

ProjectivePointE canonicalize_e(const std::array<EisensteinInt, 4>& raw) {
  EisensteinInt g;
  for (const auto& v : raw) g = eis_gcd(g, v);
  if (g.is_zero()) throw InvalidInput("projective point cannot have all coordinates zero");
  std::array<EisensteinInt, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) c[i] = eis_exact_div(raw[i], g);
  const auto lead = *std::find_if(c.begin(), c.end(), [](EisensteinInt v) { return !v.is_zero(); });
  const EisensteinInt unit = eis_exact_div(canonical_associate(lead), lead);
  for (auto& v : c) v = v * unit;
  return ProjectivePointE(c);
}

EisPolynomial& EisPolynomial::add_term(EisensteinInt coeff, std::array<unsigned, 4> exponents) {
  if (coeff.is_zero()) return *this;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->exponents == exponents) {
      it->coeff += coeff;
      if (it->coeff.is_zero()) terms_.erase(it);
      return *this;
    }
  }
  terms_.push_back({coeff, exponents});
  return *this;
}

EisPolynomial EisPolynomial::variable(std::size_t index) {
  std::array<unsigned, 4> e{};
  e.at(index) = 1;
  EisPolynomial p;
  p.add_term(1, e);
  return p;
}

std::optional<unsigned> EisPolynomial::homogeneous_degree() const {
  std::optional<unsigned> deg;
  for (const auto& t : terms_) {
    const unsigned d = t.exponents[0] + t.exponents[1] + t.exponents[2] + t.exponents[3];
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg;
}

EisensteinInt EisPolynomial::evaluate(const std::array<EisensteinInt, 4>& y) const {
  EisensteinInt sum;
  for (const auto& t : terms_) {
    EisensteinInt term = t.coeff;
    for (std::size_t i = 0; i < 4; ++i) {
      for (unsigned k = 0; k < t.exponents[i]; ++k) term = term * y[i];
    }
    sum = sum + term;
  }
  return sum;
}

EisSectionBasis::EisSectionBasis(std::vector<EisPolynomial> sections, unsigned degree) : sections_(std::move(sections)) {
  if (sections_.empty()) throw InvalidInput("section basis must be nonempty");
  bool any = false;
  for (const auto& s : sections_) {
    if (s.terms().empty()) continue;
    any = true;
    if (s.homogeneous_degree() != degree) throw InvalidInput("section is not homogeneous of the basis degree");
  }
  if (!any) throw InvalidInput("section basis has only zero sections");
}

EisSectionBasis EisSectionBasis::coordinates() {
  std::vector<EisPolynomial> s;
  for (std::size_t i = 0; i < 4; ++i) s.push_back(EisPolynomial::variable(i));
  return EisSectionBasis(std::move(s), 1);
}

std::int64_t height_eis(const EisSectionBasis& basis, const ProjectivePointE& p) {
  EisensteinInt g;
  std::int64_t top = 0;
  for (const auto& s : basis.sections()) {
    const EisensteinInt v = s.evaluate(p.coords());
    g = eis_gcd(g, v);
    top = std::max(top, norm(v));
  }
  if (g.is_zero()) throw BasePointError("every section vanishes at the point");
  return top / norm(g);
}

namespace {

bool form_vanishes(const std::array<EisensteinInt, 4>& f, const std::array<EisensteinInt, 4>& y) {
  EisensteinInt s;
  for (std::size_t i = 0; i < 4; ++i) s = s + f[i] * y[i];
  return s.is_zero();
}

}  // namespace

bool EisLine::contains(const std::array<EisensteinInt, 4>& y) const {
  return form_vanishes(first, y) && form_vanishes(second, y);
}

bool EisLine::contains(const std::array<std::int64_t, 4>& y) const {
  return contains(std::array<EisensteinInt, 4>{y[0], y[1], y[2], y[3]});
}

std::vector<EisLine> lines_27(const std::array<EisensteinInt, 4>& coeffs, const std::array<EisensteinInt, 4>& witnesses) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (coeffs[i].is_zero()) throw InvalidInput("coefficients must be nonzero");
    if (witnesses[i].is_zero()) throw InvalidInput("cube witnesses must be nonzero");
  }
  for (std::size_t i = 1; i < 4; ++i) {
    if (coeffs[i] * cube(witnesses[0]) != coeffs[0] * cube(witnesses[i])) {
      throw InvalidInput("coefficients are not proportional to the cubes of the witnesses");
    }
  }
  const std::array<EisensteinInt, 3> zetas{EisensteinInt{1, 0}, kOmega, EisensteinInt{-1, -1}};
  std::vector<EisLine> out;
  for (const auto& pr : kPairings) {
    for (const auto& z1 : zetas) {
      for (const auto& z2 : zetas) {
        EisLine line{};
        line.first[pr[0]] = witnesses[pr[0]];
        line.first[pr[1]] = z1 * witnesses[pr[1]];
        line.second[pr[2]] = witnesses[pr[2]];
        line.second[pr[3]] = z2 * witnesses[pr[3]];
        out.push_back(line);
      }
    }
  }
  return out;
}

bool EisFilter::excludes(const std::array<EisensteinInt, 4>& y) const {
  return std::any_of(lines.begin(), lines.end(), [&](const EisLine& l) { return l.contains(y); });
}

std::vector<EisensteinInt> elements_of_norm_at_most(std::int64_t bound) {
  std::vector<EisensteinInt> out;
  if (bound < 0) return out;
  // N(a + bw) >= 3b^2/4 and >= 3a^2/4.
  const std::int64_t r = isqrt_floor(static_cast<i128>(bound) * 4 / 3) + 1;
  for (std::int64_t a = -r; a <= r; ++a) {
    for (std::int64_t b = -r; b <= r; ++b) {
      if (norm({a, b}) <= bound) out.push_back({a, b});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_eis_inputs(const std::array<EisensteinInt, 4>& coeffs, const std::vector<std::uint64_t>& grid) {
  for (const auto& c : coeffs) {
    if (c.is_zero()) throw InvalidInput("singular surface: every coefficient must be nonzero");
  }
  validate_grid(grid);
  if (grid.back() > (1ull << 40)) throw InvalidInput("height bound too large for the Eisenstein enumerator");
}

bool is_canonical_lead(EisensteinInt z) { return !z.is_zero() && canonical_associate(z) == z; }

// Unit gcd, on the surface and not filtered; the caller checked canonical form.
struct Emitter {
  const std::array<EisensteinInt, 4>& coeffs;
  const std::vector<std::uint64_t>& grid;
  const EisFilter& filter;

  // Returns the bin index, or grid.size() when the point is not counted.
  std::size_t bin(const std::array<EisensteinInt, 4>& y) const {
    EisensteinInt g;
    for (const auto& v : y) g = eis_gcd(g, v);
    if (!is_unit(g)) return grid.size();
    if (filter.excludes(y)) return grid.size();
    std::int64_t h = 0;
    for (const auto& v : y) h = std::max(h, norm(v));
    return grid_bin(grid, static_cast<std::uint64_t>(h));
  }
};

}  // namespace

EisCountResult enumerate_eis_cubic(const std::array<EisensteinInt, 4>& coeffs, const std::vector<std::uint64_t>& grid,
                                   const EisFilter& filter, const EisCountOptions& options) {
  check_eis_inputs(coeffs, grid);
  const auto bound = static_cast<std::int64_t>(grid.back());
  const auto elems = elements_of_norm_at_most(bound);
  std::vector<std::array<EisensteinInt, 4>> scaled(elems.size());
  for (std::size_t e = 0; e < elems.size(); ++e) {
    const EisensteinInt c = cube(elems[e]);
    for (std::size_t i = 0; i < 4; ++i) scaled[e][i] = coeffs[i] * c;
  }
  std::size_t zero_index = std::lower_bound(elems.begin(), elems.end(), EisensteinInt{}) - elems.begin();
  std::vector<char> canonical(elems.size());
  for (std::size_t e = 0; e < elems.size(); ++e) canonical[e] = is_canonical_lead(elems[e]);

  // Partitions are ranges of N(y0); y0 = 0 forms its own shell.
  std::vector<std::pair<std::int64_t, std::int64_t>> shells{{0, 0}};
  const std::int64_t parts = std::min<std::int64_t>(bound, 16);
  for (std::int64_t k = 0; k < parts; ++k) {
    shells.push_back({1 + bound * k / parts, bound * (k + 1) / parts});
  }
  std::vector<std::string> labels;
  for (const auto& [lo, hi] : shells) labels.push_back(std::to_string(lo) + ".." + std::to_string(hi));

  const Emitter emit{coeffs, grid, filter};
  std::mutex points_mu;
  std::vector<ProjectivePointE> points;

  auto work = [&](std::size_t part) {
    const auto [lo, hi] = shells[part];
    struct Left {
      EisensteinInt key;
      std::uint32_t y0, y1;
      bool operator<(const Left& o) const { return key < o.key; }
    };
    std::vector<Left> left;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const std::int64_t n = norm(elems[i]);
      if (n < lo || n > hi) continue;
      if (i != zero_index && !canonical[i]) continue;
      for (std::size_t j = 0; j < elems.size(); ++j) {
        if (i == zero_index && j != zero_index && !canonical[j]) continue;
        left.push_back({scaled[i][0] + scaled[j][1], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
    std::sort(left.begin(), left.end());
    std::vector<std::uint64_t> bins(grid.size(), 0);
    std::vector<ProjectivePointE> local;
    for (std::size_t k = 0; k < elems.size(); ++k) {
      for (std::size_t l = 0; l < elems.size(); ++l) {
        const Left probe{-(scaled[k][2] + scaled[l][3]), 0, 0};
        auto [first, last] = std::equal_range(left.begin(), left.end(), probe);
        for (auto it = first; it != last; ++it) {
          if (it->y0 == zero_index && it->y1 == zero_index) {
            const bool right_canonical = canonical[k] || (k == zero_index && canonical[l]);
            if (!right_canonical) continue;
          }
          const std::array<EisensteinInt, 4> y{elems[it->y0], elems[it->y1], elems[k], elems[l]};
          const std::size_t b = emit.bin(y);
          if (b == grid.size()) continue;
          ++bins[b];
          if (options.keep_points) local.push_back(canonicalize_e(y));
        }
      }
    }
    if (options.keep_points) {
      std::lock_guard lock(points_mu);
      points.insert(points.end(), local.begin(), local.end());
    }
    return bins;
  };

  const auto bins = run_partitions(labels, grid.size(), work, {options.threads, options.checkpoint});
  EisCountResult result;
  result.series = series_from_bins(grid, bins);
  result.series.field = "Q(sqrt-3)";
  std::sort(points.begin(), points.end());
  result.points = std::move(points);
  return result;
}

EisCountResult brute_force_eis_cubic(const std::array<EisensteinInt, 4>& coeffs, const std::vector<std::uint64_t>& grid,
                                     const EisFilter& filter, std::uint64_t ceiling) {
  check_eis_inputs(coeffs, grid);
  if (grid.back() > ceiling) throw InvalidInput("bound exceeds the exhaustive oracle ceiling");
  const auto elems = elements_of_norm_at_most(static_cast<std::int64_t>(grid.back()));
  const Emitter emit{coeffs, grid, filter};
  std::vector<std::uint64_t> bins(grid.size(), 0);
  EisCountResult result;
  for (const auto& y0 : elems) {
    for (const auto& y1 : elems) {
      for (const auto& y2 : elems) {
        for (const auto& y3 : elems) {
          const std::array<EisensteinInt, 4> y{y0, y1, y2, y3};
          const auto lead = std::find_if(y.begin(), y.end(), [](EisensteinInt v) { return !v.is_zero(); });
          if (lead == y.end() || !is_canonical_lead(*lead)) continue;
          EisensteinInt s;
          for (std::size_t i = 0; i < 4; ++i) s = s + coeffs[i] * cube(y[i]);
          if (!s.is_zero()) continue;
          const std::size_t b = emit.bin(y);
          if (b == grid.size()) continue;
          ++bins[b];
          result.points.push_back(canonicalize_e(y));
        }
      }
    }
  }
  std::sort(result.points.begin(), result.points.end());
  result.series = series_from_bins(grid, bins);
  result.series.field = "Q(sqrt-3)";
  return result;
}

}  // namespace ptcount
