#include "ptcount/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ptcount {

namespace {

std::size_t subset_size(const CubicBundle& b) { return std::min<std::size_t>(static_cast<std::size_t>(b.n) + 1, 4); }

void check_shape(const CubicBundle& b) {
  if (b.n < 1) throw InvalidInput("base dimension n must be at least 1");
  for (std::size_t i = 0; i < 4; ++i) {
    if (b.forms[i].size() != static_cast<std::size_t>(b.n) + 1) {
      throw InvalidInput("form " + std::to_string(i) + " must have n+1 = " + std::to_string(b.n + 1) + " coefficients");
    }
  }
}

// Rows are the forms.
IntMatrix form_matrix(const CubicBundle& b) {
  IntMatrix m;
  for (const auto& f : b.forms) {
    std::vector<BigInt> row;
    for (auto c : f) row.push_back(to_big(c));
    m.push_back(std::move(row));
  }
  return m;
}

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

// h^n <= b without overflow.
bool power_at_most(std::int64_t h, int n, std::int64_t b) {
  i128 r = 1;
  for (int i = 0; i < n; ++i) {
    r *= h;
    if (r > b) return false;
  }
  return true;
}

// Largest h >= 1 with h^n <= b (b >= 1).
std::int64_t root_floor(std::int64_t b, int n) {
  auto h = static_cast<std::int64_t>(std::pow(static_cast<double>(b), 1.0 / n));
  h = std::max<std::int64_t>(h, 1);
  while (h > 1 && !power_at_most(h, n, b)) --h;
  while (power_at_most(h + 1, n, b)) ++h;
  return h;
}

std::string describe_options(const BundleCountOptions& o) {
  std::string s;
  if (o.restrict_up) s += "restrict-up";
  if (o.filter_fiber_lines) s += std::string(s.empty() ? "" : ",") + "fiber-lines";
  return s.empty() ? "none" : s;
}

// Positions j where the budget floor(B_j / w) is positive, with budgets
// deduplicated into a strictly increasing grid.
struct Budgets {
  std::vector<std::uint64_t> grid;     // distinct positive budgets
  std::vector<std::size_t> index;      // per original bound: position in grid, or npos
};

Budgets budgets_for(const std::vector<std::uint64_t>& grid, std::uint64_t weight) {
  Budgets b;
  for (auto bound : grid) {
    const std::uint64_t v = bound / weight;
    if (v == 0) {
      b.index.push_back(std::string::npos);
      continue;
    }
    if (b.grid.empty() || b.grid.back() != v) b.grid.push_back(v);
    b.index.push_back(b.grid.size() - 1);
  }
  return b;
}

std::array<std::int64_t, 4> reduce_coeffs(std::array<std::int64_t, 4> c) {
  std::int64_t g = 0;
  for (auto v : c) g = std::gcd(g, v);
  if (g > 1) {
    for (auto& v : c) v /= g;
  }
  return c;
}

// Cumulative fiber counts at each original grid bound.
std::vector<std::uint64_t> fiber_counts(const std::array<std::int64_t, 4>& raw, const Budgets& budgets,
                                        const BundleCountOptions& options) {
  std::vector<std::uint64_t> out(budgets.index.size(), 0);
  if (budgets.grid.empty()) return out;
  auto c = reduce_coeffs(raw);
  const bool degenerate = std::any_of(c.begin(), c.end(), [](std::int64_t v) { return v == 0; });
  std::vector<std::uint64_t> counts;
  if (degenerate) {
    counts = count_degenerate_fiber(c, budgets.grid);
  } else {
    if (c[0] < 0) {
      for (auto& v : c) v = -v;
    }
    const DiagonalCubic surface(c);
    PointFilter filter;
    if (options.filter_fiber_lines) filter.lines = pairwise_rational_lines(c);
    CubicCountOptions co;
    co.memory_budget = options.memory_budget;
    for (const auto& row : enumerate_cubic_points(surface, budgets.grid, filter, co).series.rows) counts.push_back(row.count);
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (budgets.index[j] != std::string::npos) out[j] = counts[budgets.index[j]];
  }
  return out;
}

bool fiber_order(const FiberContribution& a, const FiberContribution& b) {
  const auto ta = a.series.rows.back().count, tb = b.series.rows.back().count;
  if (ta != tb) return ta > tb;
  return a.base < b.base;
}

void trim(std::vector<FiberContribution>& v, std::size_t k) {
  if (v.size() <= k) return;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), fiber_order);
  v.resize(k);
}

}  // namespace

CubicBundle parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("scenario must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw InvalidInput("scenario needs an integer \"n\"");
  if (!j.contains("forms") || !j["forms"].is_array()) throw InvalidInput("scenario needs a \"forms\" array");
  CubicBundle b;
  const auto n = j["n"].get<std::int64_t>();
  if (n < 1 || n > 16) throw InvalidInput("base dimension n must lie in [1, 16]");
  b.n = static_cast<int>(n);
  const auto& forms = j["forms"];
  if (forms.size() != 4) throw InvalidInput("scenario needs exactly 4 forms");
  for (std::size_t i = 0; i < 4; ++i) {
    if (!forms[i].is_array()) throw InvalidInput("form " + std::to_string(i) + " must be an array");
    for (const auto& c : forms[i]) {
      if (!c.is_number_integer()) throw InvalidInput("form " + std::to_string(i) + " has a non-integer entry");
      if (c.is_number_unsigned() && c.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        throw InvalidInput("form " + std::to_string(i) + " has an entry out of range");
      }
      b.forms[i].push_back(c.get<std::int64_t>());
    }
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InvalidInput("scenario name must be a string");
    b.name = j["name"].get<std::string>();
  }
  check_shape(b);
  return b;
}

CubicBundle load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("scenario " + path + ": " + e.what());
  }
  return parse_scenario(j);
}

nlohmann::json to_json(const CubicBundle& bundle) {
  nlohmann::json forms = nlohmann::json::array();
  for (const auto& f : bundle.forms) forms.push_back(f);
  return {{"n", bundle.n}, {"forms", forms}, {"name", bundle.name}};
}

BundleValidation validate_bundle(const CubicBundle& bundle) {
  BundleValidation r;
  try {
    check_shape(bundle);
  } catch (const InvalidInput& e) {
    r.ok = false;
    r.message = e.what();
    return r;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::all_of(bundle.forms[i].begin(), bundle.forms[i].end(), [](std::int64_t c) { return c == 0; })) {
      r.ok = false;
      r.failing_subset = {i};
      r.message = "form " + std::to_string(i) + " is zero";
      return r;
    }
  }
  const std::size_t k = subset_size(bundle);
  const IntMatrix all = form_matrix(bundle);
  std::vector<std::vector<std::size_t>> subsets;
  for (unsigned mask = 0; mask < 16; ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < 4; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    subsets.push_back(std::move(s));
  }
  std::sort(subsets.begin(), subsets.end());
  for (const auto& s : subsets) {
    IntMatrix m;
    for (auto i : s) m.push_back(all[i]);
    if (matrix_rank(m) < k) {
      r.ok = false;
      r.failing_subset = s;
      r.message = "forms";
      for (auto i : s) r.message += " " + std::to_string(i);
      r.message += " are linearly dependent";
      return r;
    }
  }
  return r;
}

std::array<BigInt, 4> evaluate_forms(const CubicBundle& bundle, const std::vector<BigInt>& x) {
  if (x.size() != static_cast<std::size_t>(bundle.n) + 1) throw InvalidInput("base point must have n+1 coordinates");
  std::array<BigInt, 4> v;
  for (std::size_t i = 0; i < 4; ++i) {
    v[i] = 0;
    for (std::size_t k = 0; k < x.size(); ++k) v[i] += to_big(bundle.forms[i][k]) * x[k];
  }
  return v;
}

std::array<std::int64_t, 4> evaluate_forms(const CubicBundle& bundle, const std::vector<std::int64_t>& x) {
  if (x.size() != static_cast<std::size_t>(bundle.n) + 1) throw InvalidInput("base point must have n+1 coordinates");
  std::array<std::int64_t, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < x.size(); ++k) v[i] = checked_add(v[i], checked_mul(bundle.forms[i][k], x[k]));
  }
  return v;
}

BundlePoint make_bundle_point(const CubicBundle& bundle, std::span<const std::int64_t> base,
                              std::span<const std::int64_t> fiber) {
  check_shape(bundle);
  if (base.size() != static_cast<std::size_t>(bundle.n) + 1) throw InvalidInput("base point must have n+1 coordinates");
  if (fiber.size() != 4) throw InvalidInput("fiber point must have 4 coordinates");
  BundlePoint p{canonicalize(base), canonicalize(fiber)};
  const auto l = evaluate_forms(bundle, p.base.coords());
  BigInt sum = 0;
  for (std::size_t i = 0; i < 4; ++i) sum += l[i] * p.fiber.coords()[i] * p.fiber.coords()[i] * p.fiber.coords()[i];
  if (sum != 0) throw InvalidInput("point is not on the bundle");
  return p;
}

BigInt bundle_height(const CubicBundle& bundle, const BundlePoint& p) {
  BigInt hx = 0, hy = 0;
  for (const auto& c : p.base.coords()) hx = std::max<BigInt>(hx, abs(c));
  for (const auto& c : p.fiber.coords()) hy = std::max<BigInt>(hy, abs(c));
  BigInt h = hy;
  for (int i = 0; i < bundle.n; ++i) h *= hx;
  return h;
}

BigInt bundle_height_tensor(const CubicBundle& bundle, const BundlePoint& p) {
  const auto s = SectionBasis::coordinates(3).evaluate(p.fiber);
  const auto t = SectionBasis::monomials(static_cast<std::size_t>(bundle.n), static_cast<unsigned>(bundle.n)).evaluate(p.base);
  std::vector<BigInt> values;
  for (const auto& a : s) {
    for (const auto& b : t) values.push_back(a * b);
  }
  return height_of_values(values).value;
}

BundleCountResult enumerate_bundle_points(const CubicBundle& bundle, const std::vector<std::uint64_t>& grid,
                                          const BundleCountOptions& options) {
  validate_grid(grid);
  const auto v = validate_bundle(bundle);
  if (!v.ok) throw InvalidInput("invalid bundle: " + v.message);
  if (grid.back() > (1u << 30)) throw InvalidInput("height bound too large");
  const int n = bundle.n;
  const std::int64_t hmax = root_floor(static_cast<std::int64_t>(grid.back()), n);

  // Ranges of the first base coordinate.
  const std::int64_t parts = std::min<std::int64_t>(hmax + 1, 64);
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  std::vector<std::string> labels;
  for (std::int64_t p = 0; p < parts; ++p) {
    const std::int64_t lo = (hmax + 1) * p / parts, hi = (hmax + 1) * (p + 1) / parts - 1;
    ranges.push_back({lo, hi});
    labels.push_back(std::to_string(lo) + ".." + std::to_string(hi));
  }

  std::vector<std::vector<FiberContribution>> tops(ranges.size());
  std::vector<char> ran(ranges.size(), 0);
  auto work = [&](std::size_t part) {
    std::vector<std::uint64_t> acc(grid.size(), 0);
    auto& top = tops[part];
    ran[part] = 1;
    for_each_projective_point(static_cast<std::size_t>(n), hmax, ranges[part].first, ranges[part].second,
                              [&](std::span<const std::int64_t> x) {
      std::vector<std::int64_t> base(x.begin(), x.end());
      std::int64_t h = 0;
      for (auto c : base) h = std::max(h, iabs(c));
      const auto l = evaluate_forms(bundle, base);
      if (options.restrict_up && std::any_of(l.begin(), l.end(), [](std::int64_t c) { return c == 0; })) return;
      const auto counts = fiber_counts(l, budgets_for(grid, static_cast<std::uint64_t>(ipow(h, n))), options);
      for (std::size_t j = 0; j < grid.size(); ++j) acc[j] += counts[j];
      if (options.top_fibers > 0 && counts.back() > 0) {
        FiberContribution f{base, l, {}};
        for (std::size_t j = 0; j < grid.size(); ++j) f.series.rows.push_back({grid[j], counts[j]});
        top.push_back(std::move(f));
        if (top.size() > 2 * options.top_fibers + 64) trim(top, options.top_fibers);
      }
    });
    trim(top, options.top_fibers);
    return acc;
  };
  const auto totals = run_partitions(labels, grid.size(), work, {options.threads, options.checkpoint});

  BundleCountResult r;
  for (std::size_t j = 0; j < grid.size(); ++j) r.series.rows.push_back({grid[j], totals[j]});
  r.series.scenario = bundle.name.empty() ? "cubic bundle" : bundle.name;
  r.series.filter = describe_options(options);
  for (std::size_t p = 0; p < tops.size(); ++p) {
    if (!ran[p]) r.top_fibers_complete = false;
    for (auto& f : tops[p]) r.top_fibers.push_back(std::move(f));
  }
  std::sort(r.top_fibers.begin(), r.top_fibers.end(), fiber_order);
  if (r.top_fibers.size() > options.top_fibers) r.top_fibers.resize(options.top_fibers);
  for (auto& f : r.top_fibers) {
    f.series.scenario = r.series.scenario;
    f.series.filter = r.series.filter;
  }
  return r;
}

CountSeries brute_force_bundle(const CubicBundle& bundle, const std::vector<std::uint64_t>& grid, bool restrict_up,
                               bool filter_fiber_lines, std::uint64_t ceiling) {
  validate_grid(grid);
  if (grid.back() > ceiling) throw InvalidInput("bound exceeds the exhaustive oracle ceiling");
  check_shape(bundle);
  const auto bmax = static_cast<std::int64_t>(grid.back());
  std::vector<std::uint64_t> bins(grid.size(), 0);
  for (std::int64_t h = 1; power_at_most(h, bundle.n, bmax); ++h) {
    const std::int64_t w = ipow(h, bundle.n);
    for (const auto& bp : enumerate_projective_space(static_cast<std::size_t>(bundle.n), h)) {
      std::vector<std::int64_t> x;
      std::int64_t hx = 0;
      for (const auto& c : bp.coords()) {
        x.push_back(to_i64(c));
        hx = std::max(hx, iabs(x.back()));
      }
      if (hx != h) continue;
      const auto l = evaluate_forms(bundle, x);
      const bool degenerate = std::any_of(l.begin(), l.end(), [](std::int64_t c) { return c == 0; });
      if (restrict_up && degenerate) continue;
      PointFilter filter;
      if (filter_fiber_lines && !degenerate) filter.lines = pairwise_rational_lines(l);
      for (const auto& yp : enumerate_projective_space(3, bmax / w)) {
        Quad y;
        i128 sum = 0;
        std::int64_t hy = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          y[i] = to_i64(yp.coords()[i]);
          sum += static_cast<i128>(l[i]) * cube128(y[i]);
          hy = std::max(hy, iabs(y[i]));
        }
        if (sum != 0 || filter.excludes(y)) continue;
        const std::size_t j = grid_bin(grid, static_cast<std::uint64_t>(w * hy));
        if (j < grid.size()) ++bins[j];
      }
    }
  }
  return series_from_bins(grid, bins);
}

IntMatrix relation_lattice(const CubicBundle& bundle) {
  check_shape(bundle);
  // Columns of the transpose are the forms: a^T L = 0.
  IntMatrix t(static_cast<std::size_t>(bundle.n) + 1, std::vector<BigInt>(4));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < t.size(); ++k) t[k][i] = to_big(bundle.forms[i][k]);
  }
  return integer_kernel(t);
}

namespace {

// Solves l(q) = lambda z^3 and records the base point.
void add_fiber(const CubicBundle& bundle, const IntMatrix& forms, const std::array<std::int64_t, 4>& z,
               std::set<std::vector<std::int64_t>>& seen, std::vector<CubeFiber>& out) {
  std::vector<BigInt> rhs;
  for (auto v : z) rhs.push_back(to_big(cube128(v)));
  const auto sol = solve_rational(forms, rhs);
  if (!sol) throw std::logic_error("cube target outside the image of the forms");
  BigInt den = 1;
  for (const auto& q : *sol) den = lcm(den, BigInt(q.get_den()));
  std::vector<BigInt> num;
  for (const auto& q : *sol) num.push_back(BigInt(q * den));
  const auto canon = canonicalize(num);
  std::vector<std::int64_t> q;
  for (const auto& c : canon.coords()) q.push_back(to_i64(c));
  if (!seen.insert(q).second) return;
  const auto l = evaluate_forms(bundle, canon.coords());
  CubeFiber f;
  f.base = q;
  f.b = z;
  f.lambda = BigRational(l[0], rhs[0]);
  f.lambda.canonicalize();
  for (std::size_t i = 0; i < 4; ++i) {
    if (l[i] == 0 || l[i] != f.lambda * rhs[i]) throw std::logic_error("cube fiber solve is inconsistent");
  }
  out.push_back(std::move(f));
}

}  // namespace

std::vector<CubeFiber> find_cube_fibers(const CubicBundle& bundle, std::int64_t search_bound) {
  if (search_bound < 1) throw InvalidInput("search bound must be at least 1");
  if (search_bound > 100000) throw InvalidInput("search bound too large");
  const auto v = validate_bundle(bundle);
  if (!v.ok) throw InvalidInput("invalid bundle: " + v.message);
  const IntMatrix forms = form_matrix(bundle);
  const IntMatrix rel = relation_lattice(bundle);
  const std::int64_t m = search_bound;
  std::set<std::vector<std::int64_t>> seen;
  std::vector<CubeFiber> out;

  // Canonical cube vectors: gcd 1, first entry positive, nothing zero.
  auto consider = [&](const std::array<std::int64_t, 4>& z) {
    if (std::gcd(std::gcd(z[0], z[1]), std::gcd(z[2], z[3])) != 1) return;
    for (const auto& a : rel) {
      BigInt s = 0;
      for (std::size_t i = 0; i < 4; ++i) s += a[i] * to_big(cube128(z[i]));
      if (s != 0) return;
    }
    add_fiber(bundle, forms, z, seen, out);
  };

  if (rel.empty()) {
    // Any cube vector is a value of the forms.
    for (std::int64_t z0 = 1; z0 <= m; ++z0) {
      for (std::int64_t z1 = -m; z1 <= m; ++z1) {
        for (std::int64_t z2 = -m; z2 <= m; ++z2) {
          for (std::int64_t z3 = -m; z3 <= m; ++z3) {
            if (z1 != 0 && z2 != 0 && z3 != 0) consider({z0, z1, z2, z3});
          }
        }
      }
    }
  } else {
    // Solve the first relation for a coordinate it involves, loop the others.
    const auto& a = rel.front();
    std::size_t k = 0;
    while (a[k] == 0) ++k;
    std::array<std::size_t, 3> free{};
    for (std::size_t i = 0, f = 0; i < 4; ++i) {
      if (i != k) free[f++] = i;
    }
    std::array<std::int64_t, 4> z{};
    const bool k_first = k == 0;
    for (std::int64_t u = k_first ? -m : 1; u <= m; ++u) {
      for (std::int64_t w = -m; w <= m; ++w) {
        for (std::int64_t t = -m; t <= m; ++t) {
          if (u == 0 || w == 0 || t == 0) continue;
          z[free[0]] = u;
          z[free[1]] = w;
          z[free[2]] = t;
          BigInt s = 0;
          for (auto i : free) s += a[i] * to_big(cube128(z[i]));
          if (s % a[k] != 0) continue;
          const BigInt c = -s / a[k];
          const auto r = exact_cbrt(c);
          if (!r || *r == 0 || abs(*r) > m) continue;
          z[k] = to_i64(*r);
          if (z[0] < 0) continue;
          consider(z);
        }
      }
    }
  }
  if (out.empty()) throw SearchExhausted("no cube fiber with entries up to " + std::to_string(m));
  std::sort(out.begin(), out.end(), [](const CubeFiber& x, const CubeFiber& y) {
    std::int64_t hx = 0, hy = 0;
    for (auto c : x.b) hx = std::max(hx, iabs(c));
    for (auto c : y.b) hy = std::max(hy, iabs(c));
    if (hx != hy) return hx < hy;
    return x.base < y.base;
  });
  return out;
}

DiagonalCubic fiber_surface(const CubicBundle& bundle, const std::vector<std::int64_t>& q) {
  check_shape(bundle);
  const auto p = canonicalize(std::span<const std::int64_t>(q));
  std::vector<std::int64_t> x;
  for (const auto& c : p.coords()) x.push_back(to_i64(c));
  const auto l = evaluate_forms(bundle, x);
  for (std::size_t i = 0; i < 4; ++i) {
    if (l[i] == 0) throw InvalidInput("degenerate fiber: l" + std::to_string(i) + "(q) = 0");
  }
  return DiagonalCubic(reduce_coeffs(l));
}

}  // namespace ptcount
