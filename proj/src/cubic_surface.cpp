#include "ptcount/cubic_surface.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ptcount/linalg.hpp"

namespace ptcount {

namespace {

i128 dot(const Quad& f, const Quad& y) {
  i128 s = 0;
  for (std::size_t i = 0; i < 4; ++i) s += static_cast<i128>(f[i]) * y[i];
  return s;
}

std::string form_text(const Quad& f) {
  std::string s;
  for (std::size_t i = 0; i < 4; ++i) {
    if (f[i] == 0) continue;
    if (f[i] < 0) {
      s += '-';
    } else if (!s.empty()) {
      s += '+';
    }
    if (iabs(f[i]) != 1) s += std::to_string(iabs(f[i]));
    s += "y" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

// p/q with (p/q)^3 = num/den, q > 0, if it exists.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_cbrt(std::int64_t num, std::int64_t den) {
  BigRational r(to_big(num), to_big(den));
  r.canonicalize();
  const auto p = exact_cbrt(BigInt(r.get_num()));
  const auto q = exact_cbrt(BigInt(r.get_den()));
  if (!p || !q) return std::nullopt;
  return std::make_pair(to_i64(*p), to_i64(*q));
}

Quad pair_form(std::size_t i, std::size_t j, std::int64_t ci, std::int64_t cj) {
  const std::int64_t g = std::gcd(ci, cj);
  if (ci < 0) {
    ci = -ci;
    cj = -cj;
  }
  Quad f{};
  f[i] = ci / g;
  f[j] = cj / g;
  return f;
}

}  // namespace

std::optional<CubeWitnesses> detect_cube_witnesses(const std::array<std::int64_t, 4>& coeffs) {
  for (auto a : coeffs) {
    if (a == 0) return std::nullopt;
  }
  // a_i / a_0 = (p_i / q_i)^3; scale the p_i / q_i to coprime integers.
  std::array<BigRational, 4> ratio;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto r = rational_cbrt(coeffs[i], coeffs[0]);
    if (!r) return std::nullopt;
    ratio[i] = BigRational(to_big(r->first), to_big(r->second));
    ratio[i].canonicalize();
  }
  BigInt l = 1;
  for (const auto& r : ratio) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
  std::array<BigInt, 4> b;
  BigInt g = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    b[i] = BigInt(ratio[i].get_num() * (l / ratio[i].get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b[i].get_mpz_t());
  }
  CubeWitnesses w;
  for (std::size_t i = 0; i < 4; ++i) w.b[i] = to_i64(BigInt(b[i] / g));
  const BigInt b0 = to_big(w.b[0]);
  w.lambda = BigRational(to_big(coeffs[0]), BigInt(b0 * b0 * b0));
  w.lambda.canonicalize();
  return w;
}

DiagonalCubic::DiagonalCubic(const std::array<std::int64_t, 4>& coeffs) : coeffs_(coeffs) {
  for (auto a : coeffs_) {
    if (a == 0) throw InvalidInput("singular surface: every coefficient must be nonzero");
  }
  witnesses_ = detect_cube_witnesses(coeffs_);
}

DiagonalCubic::DiagonalCubic(const std::array<std::int64_t, 4>& coeffs, const std::array<std::int64_t, 4>& witnesses)
    : coeffs_(coeffs) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (coeffs_[i] == 0) throw InvalidInput("singular surface: every coefficient must be nonzero");
    if (witnesses[i] == 0) throw InvalidInput("cube witnesses must be nonzero");
  }
  auto cube_big = [](std::int64_t v) { return BigInt(to_big(v) * to_big(v) * to_big(v)); };
  for (std::size_t i = 1; i < 4; ++i) {
    if (to_big(coeffs_[i]) * cube_big(witnesses[0]) != to_big(coeffs_[0]) * cube_big(witnesses[i])) {
      throw InvalidInput("coefficients are not proportional to the cubes of the witnesses");
    }
  }
  CubeWitnesses w;
  w.b = witnesses;
  w.lambda = BigRational(to_big(coeffs_[0]), cube_big(witnesses[0]));
  w.lambda.canonicalize();
  witnesses_ = w;
}

bool DiagonalCubic::contains(const Quad& y) const {
  BigInt s = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const BigInt v = to_big(y[i]);
    s += to_big(coeffs_[i]) * v * v * v;
  }
  return s == 0;
}

std::string DiagonalCubic::describe() const {
  std::ostringstream out;
  out << "diagonal cubic " << coeffs_[0] << ',' << coeffs_[1] << ',' << coeffs_[2] << ',' << coeffs_[3];
  return out.str();
}

LineDescriptor LineDescriptor::make(const Quad& first, const Quad& second) {
  bool independent = false;
  for (std::size_t i = 0; i < 4 && !independent; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (static_cast<i128>(first[i]) * second[j] != static_cast<i128>(first[j]) * second[i]) {
        independent = true;
        break;
      }
    }
  }
  if (!independent) throw InvalidInput("line forms must be linearly independent");
  return LineDescriptor{first, second};
}

bool LineDescriptor::contains(const Quad& y) const { return dot(first, y) == 0 && dot(second, y) == 0; }

std::string LineDescriptor::describe() const { return form_text(first) + "=0," + form_text(second) + "=0"; }

bool PointFilter::excludes(const Quad& y) const {
  for (const auto& l : lines) {
    if (l.contains(y)) return true;
  }
  for (const auto& l : eis_lines) {
    if (l.contains(y)) return true;
  }
  for (const auto& p : vanishing) {
    if (p.evaluate(std::span<const std::int64_t>(y)) == 0) return true;
  }
  return false;
}

std::string PointFilter::describe() const {
  if (empty()) return "none";
  std::string s;
  for (const auto& l : lines) s += (s.empty() ? "" : ";") + l.describe();
  if (!eis_lines.empty()) s += (s.empty() ? "" : ";") + std::to_string(eis_lines.size()) + " lines over Q(sqrt-3)";
  if (!vanishing.empty()) s += (s.empty() ? "" : ";") + std::to_string(vanishing.size()) + " polynomial conditions";
  return s;
}

std::vector<LineDescriptor> rational_lines(const DiagonalCubic& surface) {
  if (!surface.witnesses()) throw InvalidInput("surface has no cube witnesses, so its rational lines are not of this form");
  const auto& b = surface.witnesses()->b;
  std::vector<LineDescriptor> out;
  for (const auto& pr : kPairings) {
    out.push_back(LineDescriptor::make(pair_form(pr[0], pr[1], b[pr[0]], b[pr[1]]),
                                       pair_form(pr[2], pr[3], b[pr[2]], b[pr[3]])));
  }
  return out;
}

std::vector<LineDescriptor> pairwise_rational_lines(const std::array<std::int64_t, 4>& coeffs) {
  for (auto a : coeffs) {
    if (a == 0) throw InvalidInput("singular surface: every coefficient must be nonzero");
  }
  std::vector<LineDescriptor> out;
  for (const auto& pr : kPairings) {
    // a_i y_i^3 + a_j y_j^3 vanishes on p y_i + q y_j = 0 when a_i / a_j = (p/q)^3.
    const auto r1 = rational_cbrt(coeffs[pr[0]], coeffs[pr[1]]);
    const auto r2 = rational_cbrt(coeffs[pr[2]], coeffs[pr[3]]);
    if (!r1 || !r2) continue;
    out.push_back(LineDescriptor::make(pair_form(pr[0], pr[1], r1->first, r1->second),
                                       pair_form(pr[2], pr[3], r2->first, r2->second)));
  }
  return out;
}

std::vector<EisLine> lines_27(const DiagonalCubic& surface) {
  if (!surface.witnesses()) throw InvalidInput("the 27 lines need cube coefficients");
  std::array<EisensteinInt, 4> b;
  for (std::size_t i = 0; i < 4; ++i) b[i] = surface.witnesses()->b[i];
  // Lines depend only on the witnesses; lambda drops out.
  std::array<EisensteinInt, 4> scaled;
  for (std::size_t i = 0; i < 4; ++i) scaled[i] = cube(b[i]);
  return lines_27(scaled, b);
}

CountSeries count_on_line(const LineDescriptor& line, const std::vector<std::uint64_t>& grid) {
  validate_grid(grid);
  IntMatrix m(2, std::vector<BigInt>(4));
  for (std::size_t i = 0; i < 4; ++i) {
    m[0][i] = to_big(line.first[i]);
    m[1][i] = to_big(line.second[i]);
  }
  const auto kernel = integer_kernel(m);
  if (kernel.size() != 2) throw InvalidInput("line forms must be linearly independent");
  Quad u{}, v{};
  for (std::size_t i = 0; i < 4; ++i) {
    u[i] = to_i64(kernel[0][i]);
    v[i] = to_i64(kernel[1][i]);
  }
  // A nonsingular 2x2 minor bounds s and t in terms of the coordinates.
  i128 best_det = 0;
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const i128 d = static_cast<i128>(u[i]) * v[j] - static_cast<i128>(u[j]) * v[i];
      if ((d < 0 ? -d : d) > (best_det < 0 ? -best_det : best_det)) {
        best_det = d;
        bi = i;
        bj = j;
      }
    }
  }
  const i128 det = best_det < 0 ? -best_det : best_det;
  PrimeSieve sieve(1);
  std::vector<std::uint32_t> primes;
  std::vector<std::pair<std::int64_t, int>> mobius;
  CountSeries series;
  series.filter = "on line " + line.describe();
  std::uint64_t smax_all = 0;
  for (auto bound : grid) {
    smax_all = std::max<std::uint64_t>(smax_all, static_cast<std::uint64_t>(static_cast<i128>(bound) * (iabs(v[bi]) + iabs(v[bj])) / det));
  }
  if (smax_all > (1u << 31)) throw InvalidInput("bound too large for the line sweep");
  sieve = PrimeSieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(smax_all, 1)));

  for (auto bound : grid) {
    const auto b = static_cast<i128>(bound);
    const auto smax = static_cast<std::int64_t>(b * (iabs(v[bi]) + iabs(v[bj])) / det);
    std::uint64_t count = 0;
    for (std::int64_t s = 0; s <= smax; ++s) {
      // t range from |s u_c + t v_c| <= B for every coordinate c.
      i128 lo = std::numeric_limits<std::int64_t>::min(), hi = std::numeric_limits<std::int64_t>::max();
      bool ok = true;
      for (std::size_t c = 0; c < 4 && ok; ++c) {
        const i128 su = static_cast<i128>(s) * u[c];
        if (v[c] == 0) {
          ok = (su <= b && su >= -b);
          continue;
        }
        i128 l = -b - su, h = b - su;
        i128 vc = v[c];
        if (vc < 0) {
          std::swap(l, h);
          l = -l;
          h = -h;
          vc = -vc;
        }
        // ceil(l / vc), floor(h / vc)
        const i128 cl = l >= 0 ? (l + vc - 1) / vc : -((-l) / vc);
        const i128 fh = h >= 0 ? h / vc : -((-h + vc - 1) / vc);
        lo = std::max(lo, cl);
        hi = std::min(hi, fh);
      }
      if (!ok || lo > hi) continue;
      if (s == 0) {
        count += (lo <= 1 && 1 <= hi) ? 1 : 0;
        continue;
      }
      sieve.distinct_primes(static_cast<std::uint32_t>(s), primes);
      mobius_divisors(primes, mobius);
      i128 c = 0;
      for (const auto& [d, mu] : mobius) {
        auto floor_div = [](i128 a, i128 q) { return a >= 0 ? a / q : -((-a + q - 1) / q); };
        c += mu * (floor_div(hi, d) - floor_div(lo - 1, d));
      }
      count += static_cast<std::uint64_t>(c);
    }
    series.rows.push_back({bound, count});
  }
  return series;
}

void write_points(const std::string& path, const std::vector<Quad>& points) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write point dump '" + path + "'");
  for (const auto& y : points) out << y[0] << ' ' << y[1] << ' ' << y[2] << ' ' << y[3] << '\n';
}

}  // namespace ptcount
