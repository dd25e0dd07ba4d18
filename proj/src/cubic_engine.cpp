// Meet-in-the-middle enumeration of rational points on diagonal cubic
// surfaces, the exhaustive oracle, and counts for degenerate fibers.

#include <algorithm>
#include <cstring>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ptcount/cubic_surface.hpp"
#include "ptcount/kernels.hpp"

namespace ptcount {

namespace {

std::int64_t max_abs(const Quad& y) {
  return std::max(std::max(iabs(y[0]), iabs(y[1])), std::max(iabs(y[2]), iabs(y[3])));
}

std::int64_t gcd4(const Quad& y) { return std::gcd(std::gcd(y[0], y[1]), std::gcd(y[2], y[3])); }

i128 abs128(i128 v) { return v < 0 ? -v : v; }

// (|a_i| + |a_j|) B^3, the largest |a_i y^3 + a_j z^3| over the box, or -1
// when it reaches 2^125.
i128 pair_key_bound(std::int64_t ai, std::int64_t aj, std::int64_t bound) {
  const BigInt b = to_big(bound);
  const BigInt m = (abs(to_big(ai)) + abs(to_big(aj))) * b * b * b;
  if (m >= (BigInt(1) << 125)) return -1;
  i128 r = 0;
  for (std::size_t i = mpz_sizeinbase(m.get_mpz_t(), 2); i-- > 0;) r = (r << 1) | mpz_tstbit(m.get_mpz_t(), i);
  return r;
}

// Collects bins and (optionally) points for accepted solutions.
// A linear form kept as its nonzero terms.
struct SparseForm {
  int n = 0;
  std::array<int, 4> idx{};
  std::array<std::int64_t, 4> c{};
  std::int64_t eval(const Quad& y) const {
    if (n == 2) return c[0] * y[idx[0]] + c[1] * y[idx[1]];
    std::int64_t s = 0;
    for (int k = 0; k < n; ++k) s += c[k] * y[idx[k]];
    return s;
  }
};

struct Sink {
  const std::vector<std::uint64_t>& grid;
  const PointFilter& filter;
  bool keep_points;
  std::vector<std::uint64_t> bins;
  std::vector<Quad> points;
  // Rational lines checked in plain 64-bit arithmetic when that cannot
  // overflow; most matches of a filtered run lie on them.
  std::vector<std::array<SparseForm, 2>> fast_lines;
  bool fast = false;
  bool rest = false;

  Sink(const std::vector<std::uint64_t>& g, const PointFilter& f, bool keep)
      : grid(g), filter(f), keep_points(keep), bins(g.size(), 0) {
    const auto bound = static_cast<std::int64_t>(g.back());
    fast = true;
    for (const auto& l : f.lines) {
      std::array<SparseForm, 2> forms;
      for (int which = 0; which < 2; ++which) {
        const Quad& q = which == 0 ? l.first : l.second;
        for (int i = 0; i < 4; ++i) {
          if (q[i] == 0) continue;
          if (iabs(q[i]) > (std::int64_t{1} << 60) / 4 / bound) fast = false;
          auto& sf = forms[which];
          sf.idx[sf.n] = i;
          sf.c[sf.n] = q[i];
          ++sf.n;
        }
      }
      fast_lines.push_back(forms);
    }
    rest = !f.eis_lines.empty() || !f.vanishing.empty();
  }

  bool excluded(const Quad& y) const {
    if (filter.empty()) return false;
    if (!fast) return filter.excludes(y);
    for (const auto& l : fast_lines) {
      if (l[0].eval(y) == 0 && l[1].eval(y) == 0) return true;
    }
    if (!rest) return false;
    for (const auto& l : filter.eis_lines) {
      if (l.contains(y)) return true;
    }
    for (const auto& p : filter.vanishing) {
      if (p.evaluate(std::span<const std::int64_t>(y)) == 0) return true;
    }
    return false;
  }

  // y is already canonical.
  void offer(const Quad& y) {
    if (excluded(y)) return;
    if (gcd4(y) != 1) return;
    const std::size_t b = grid_bin(grid, static_cast<std::uint64_t>(max_abs(y)));
    if (b == grid.size()) return;
    ++bins[b];
    if (keep_points) points.push_back(y);
  }
};

template <class Key>
struct KeyOps;

template <>
struct KeyOps<std::int64_t> {
  static constexpr std::int64_t empty = std::numeric_limits<std::int64_t>::min();
  static std::uint64_t hash(std::int64_t k, unsigned shift) { return kernels::hash_key(k, shift); }
  static std::string text(std::int64_t k) { return std::to_string(k); }
};

template <>
struct KeyOps<i128> {
  static constexpr i128 empty = static_cast<i128>(static_cast<unsigned __int128>(1) << 127);
  static std::uint64_t hash(i128 k, unsigned shift) {
    const auto u = static_cast<unsigned __int128>(k);
    const auto folded = static_cast<std::uint64_t>(u) ^ (static_cast<std::uint64_t>(u >> 64) * 0xC2B2AE3D27D4EB4Full);
    return (folded * kernels::kHashMultiplier) >> shift;
  }
  static std::string text(i128 k) { return to_string(k); }
};

// c y^3 for y in [-B, B], sorted ascending.
template <class Key>
struct CubeTable {
  std::vector<Key> values;
  bool reversed = false;
  std::int64_t bound = 0;

  CubeTable(std::int64_t c, std::int64_t b) : reversed(c < 0), bound(b) {
    values.resize(static_cast<std::size_t>(2 * b + 1));
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<Key>(c) * static_cast<Key>(cube128(y_of(i)));
  }
  std::int64_t y_of(std::size_t idx) const {
    const auto i = static_cast<std::int64_t>(idx);
    return reversed ? bound - i : i - bound;
  }
  std::size_t idx_of(std::int64_t y) const { return static_cast<std::size_t>(reversed ? bound - y : y + bound); }
};

template <class Key>
struct Row {
  Key base;
  std::uint32_t begin, end;  // index range into the cube table
  std::int64_t y;
};

template <class Key>
class HashTable {
 public:
  void reset(std::size_t count) {
    std::size_t cap = 16;
    while (cap < 2 * count) cap <<= 1;
    if (keys_.size() != cap) {
      keys_.assign(cap, KeyOps<Key>::empty);
      payload_.resize(cap);
    } else {
      std::fill(keys_.begin(), keys_.end(), KeyOps<Key>::empty);
    }
    mask_ = cap - 1;
    shift_ = 64 - static_cast<unsigned>(__builtin_ctzll(cap));
  }
  unsigned shift() const { return shift_; }
  std::uint64_t mask() const { return mask_; }
  Key* keys() { return keys_.data(); }
  std::uint64_t* payload() { return payload_.data(); }

 private:
  std::vector<Key> keys_;
  std::vector<std::uint64_t> payload_;
  std::uint64_t mask_ = 0;
  unsigned shift_ = 63;
};

constexpr std::size_t kBlock = 256;

template <class Key>
class MitmEngine {
 public:
  MitmEngine(const std::array<std::int64_t, 4>& a, std::int64_t bound, const std::vector<std::uint64_t>& grid,
             const PointFilter& filter, const CubicCountOptions& options)
      : a_(a), bound_(bound), grid_(grid), filter_(filter), options_(options), t1_(a[1], bound), t3_(-a[3], bound) {
    for (std::int64_t y0 = 0; y0 <= bound; ++y0) {
      Row<Key> r{static_cast<Key>(a[0]) * static_cast<Key>(cube128(y0)), 0, static_cast<std::uint32_t>(2 * bound + 1), y0};
      if (y0 == 0) {
        // Only y1 >= 0 keeps the leading coordinate positive.
        const std::size_t z = t1_.idx_of(0);
        if (t1_.reversed) {
          r.end = static_cast<std::uint32_t>(z + 1);
        } else {
          r.begin = static_cast<std::uint32_t>(z);
        }
      }
      left_.push_back(r);
    }
    for (std::int64_t y2 = -bound; y2 <= bound; ++y2) {
      right_.push_back({-static_cast<Key>(a[2]) * static_cast<Key>(cube128(y2)), 0, static_cast<std::uint32_t>(2 * bound + 1), y2});
    }
    plan();
  }

  const std::vector<std::string>& labels() const { return labels_; }

  std::vector<std::uint64_t> run(std::size_t part, std::vector<Quad>* points) {
    Sink sink(grid_, filter_, points != nullptr);
    const Key plo = part_bounds_[part];
    std::vector<std::uint32_t> lcur(left_.size()), lend(left_.size()), rcur(right_.size());
    for (std::size_t r = 0; r < left_.size(); ++r) lcur[r] = lower(t1_, left_[r], plo);
    for (std::size_t r = 0; r < right_.size(); ++r) rcur[r] = lower(t3_, right_[r], plo);

    const auto& cb = chunk_bounds_[part];
    HashTable<Key> table;
    std::vector<Key> keybuf(kBlock);
    std::vector<std::uint64_t> hashbuf(kBlock);
    for (std::size_t c = 0; c + 1 < cb.size(); ++c) {
      const Key hi = cb[c + 1];
      std::size_t count = 0;
      for (std::size_t r = 0; r < left_.size(); ++r) {
        const auto& row = left_[r];
        std::uint32_t e = lcur[r];
        while (e < row.end && row.base + t1_.values[e] < hi) ++e;
        lend[r] = e;
        count += e - lcur[r];
      }
      table.reset(count);
      insert_left(table, lcur, lend, keybuf, hashbuf);
      probe_right(table, rcur, hi, keybuf, hashbuf, sink);
      std::swap(lcur, lend);
    }
    if (points != nullptr) *points = std::move(sink.points);
    return sink.bins;
  }

 private:
  static std::uint32_t lower(const CubeTable<Key>& t, const Row<Key>& row, Key lo) {
    const auto first = t.values.begin() + row.begin;
    const auto last = t.values.begin() + row.end;
    return static_cast<std::uint32_t>(std::lower_bound(first, last, lo - row.base) - t.values.begin());
  }

  // Partition and chunk boundaries from a strided sample of the left keys.
  void plan() {
    std::size_t total = 0;
    for (const auto& r : left_) total += r.end - r.begin;
    const std::size_t stride = std::max<std::size_t>(1, total >> 22);
    std::vector<Key> sample;
    Key kmin = std::numeric_limits<Key>::max(), kmax = std::numeric_limits<Key>::min();
    for (const auto& r : left_) {
      if (r.begin == r.end) continue;
      kmin = std::min(kmin, r.base + t1_.values[r.begin]);
      kmax = std::max(kmax, r.base + t1_.values[r.end - 1]);
      for (std::size_t i = r.begin; i < r.end; i += stride) sample.push_back(r.base + t1_.values[i]);
    }
    std::sort(sample.begin(), sample.end());
    const std::size_t parts = std::clamp<std::size_t>(total >> 18, 1, 64);
    std::vector<Key> bounds{kmin};
    for (std::size_t p = 1; p < parts; ++p) {
      const Key k = sample[p * sample.size() / parts];
      if (k > bounds.back()) bounds.push_back(k);
    }
    bounds.push_back(kmax + 1);
    part_bounds_ = bounds;

    const std::size_t per_worker = options_.memory_budget / static_cast<std::size_t>(std::max(options_.threads, 1));
    const std::size_t cap = std::max<std::size_t>(1024, std::min(options_.chunk_entries, per_worker / (4 * (sizeof(Key) + 8))));
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
      const auto first = std::lower_bound(sample.begin(), sample.end(), bounds[p]);
      const auto last = std::lower_bound(sample.begin(), sample.end(), bounds[p + 1]);
      const std::size_t n = static_cast<std::size_t>(last - first);
      const std::size_t chunks = std::max<std::size_t>(1, (n * stride + cap - 1) / cap);
      std::vector<Key> cb{bounds[p]};
      for (std::size_t c = 1; c < chunks; ++c) {
        const Key k = first[static_cast<std::ptrdiff_t>(c * n / chunks)];
        if (k > cb.back()) cb.push_back(k);
      }
      cb.push_back(bounds[p + 1]);
      chunk_bounds_.push_back(std::move(cb));
      labels_.push_back(KeyOps<Key>::text(bounds[p]) + ".." + KeyOps<Key>::text(bounds[p + 1]));
    }
  }

  static std::uint64_t pack(std::int64_t y0, std::size_t idx) {
    return (static_cast<std::uint64_t>(y0) << 32) | static_cast<std::uint64_t>(idx);
  }

  void fill_block(const Row<Key>& row, const CubeTable<Key>& t, std::size_t s, std::size_t n, unsigned shift,
                  std::vector<Key>& keybuf, std::vector<std::uint64_t>& hashbuf) const {
    if constexpr (std::is_same_v<Key, std::int64_t>) {
      kernels::affine_row(row.base, std::span<const std::int64_t>(t.values.data() + s, n), std::span<std::int64_t>(keybuf.data(), n));
      kernels::hash_row(std::span<const std::int64_t>(keybuf.data(), n), shift, std::span<std::uint64_t>(hashbuf.data(), n));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        keybuf[i] = row.base + t.values[s + i];
        hashbuf[i] = KeyOps<Key>::hash(keybuf[i], shift);
      }
    }
  }

  void insert_left(HashTable<Key>& table, const std::vector<std::uint32_t>& lcur, const std::vector<std::uint32_t>& lend,
                   std::vector<Key>& keybuf, std::vector<std::uint64_t>& hashbuf) const {
    Key* keys = table.keys();
    std::uint64_t* payload = table.payload();
    const std::uint64_t mask = table.mask();
    for (std::size_t r = 0; r < left_.size(); ++r) {
      const auto& row = left_[r];
      for (std::size_t s = lcur[r]; s < lend[r]; s += kBlock) {
        const std::size_t n = std::min<std::size_t>(kBlock, lend[r] - s);
        fill_block(row, t1_, s, n, table.shift(), keybuf, hashbuf);
        for (std::size_t i = 0; i < n; ++i) __builtin_prefetch(&keys[hashbuf[i]], 1);
        for (std::size_t i = 0; i < n; ++i) {
          const Key k = keybuf[i];
          // Key 0 pairs lie on a line handled separately.
          if (k == 0) continue;
          std::uint64_t h = hashbuf[i];
          while (keys[h] != KeyOps<Key>::empty) h = (h + 1) & mask;
          keys[h] = k;
          payload[h] = pack(row.y, s + i);
        }
      }
    }
  }

  void probe_right(HashTable<Key>& table, std::vector<std::uint32_t>& rcur, Key hi, std::vector<Key>& keybuf,
                   std::vector<std::uint64_t>& hashbuf, Sink& sink) const {
    const Key* keys = table.keys();
    const std::uint64_t* payload = table.payload();
    const std::uint64_t mask = table.mask();
    for (std::size_t r = 0; r < right_.size(); ++r) {
      const auto& row = right_[r];
      std::uint32_t e = rcur[r];
      while (e < row.end && row.base + t3_.values[e] < hi) ++e;
      for (std::size_t s = rcur[r]; s < e; s += kBlock) {
        const std::size_t n = std::min<std::size_t>(kBlock, e - s);
        fill_block(row, t3_, s, n, table.shift(), keybuf, hashbuf);
        for (std::size_t i = 0; i < n; ++i) __builtin_prefetch(&keys[hashbuf[i]]);
        for (std::size_t i = 0; i < n; ++i) {
          const Key k = keybuf[i];
          if (k == 0) continue;
          for (std::uint64_t h = hashbuf[i]; keys[h] != KeyOps<Key>::empty; h = (h + 1) & mask) {
            if (keys[h] != k) continue;
            const std::uint64_t p = payload[h];
            const auto y0 = static_cast<std::int64_t>(p >> 32);
            const std::int64_t y1 = t1_.y_of(static_cast<std::uint32_t>(p));
            sink.offer({y0, y1, row.y, t3_.y_of(s + i)});
          }
        }
      }
      rcur[r] = e;
    }
  }

  std::array<std::int64_t, 4> a_;
  std::int64_t bound_;
  const std::vector<std::uint64_t>& grid_;
  const PointFilter& filter_;
  CubicCountOptions options_;
  CubeTable<Key> t1_, t3_;
  std::vector<Row<Key>> left_, right_;
  std::vector<Key> part_bounds_;
  std::vector<std::vector<Key>> chunk_bounds_;
  std::vector<std::string> labels_;
};

// Primitive (p, q), p > 0, with a_i p^3 + a_j q^3 = 0, if any.
std::optional<std::pair<std::int64_t, std::int64_t>> zero_direction(std::int64_t ai, std::int64_t aj) {
  // (p/q)^3 = -a_j / a_i
  BigRational r(to_big(-aj), to_big(ai));
  r.canonicalize();
  const auto p = exact_cbrt(BigInt(r.get_num()));
  const auto q = exact_cbrt(BigInt(r.get_den()));
  if (!p || !q) return std::nullopt;
  std::int64_t pp = to_i64(*p), qq = to_i64(*q);
  if (pp < 0) {
    pp = -pp;
    qq = -qq;
  }
  return std::make_pair(pp, qq);
}

// Points where both halves vanish: (t w, u v) with w, v the zero directions
// of (a0, a1) and (a2, a3). They form a line (or a single point) whose pairs
// all share the key 0, so the hash join skips them.
void count_zero_line(const std::array<std::int64_t, 4>& a, std::int64_t bound, Sink& sink) {
  const auto wl = zero_direction(a[0], a[1]);
  const auto wr = zero_direction(a[2], a[3]);
  const Quad pl = wl ? Quad{wl->first, wl->second, 0, 0} : Quad{};
  const Quad pr = wr ? Quad{0, 0, wr->first, wr->second} : Quad{};
  if (wl && wr) {
    // Two points of the line in one excluded line exclude all of it.
    for (const auto& l : sink.filter.lines) {
      if (l.contains(pl) && l.contains(pr)) return;
    }
    for (const auto& l : sink.filter.eis_lines) {
      if (l.contains(pl) && l.contains(pr)) return;
    }
  }
  const std::int64_t hl = wl ? std::max(iabs(pl[0]), iabs(pl[1])) : 0;
  const std::int64_t hr = wr ? std::max(iabs(pr[2]), iabs(pr[3])) : 0;
  const std::int64_t tmax = wl ? bound / hl : 0;
  const std::int64_t umax = wr ? bound / hr : 0;
  for (std::int64_t t = 0; t <= tmax; ++t) {
    for (std::int64_t u = -umax; u <= umax; ++u) {
      if (t == 0 && u <= 0) continue;
      if (std::gcd(t, u) != 1) continue;
      sink.offer({t * pl[0], t * pl[1], u * pr[2], u * pr[3]});
    }
  }
}

void check_inputs(const std::vector<std::uint64_t>& grid) {
  validate_grid(grid);
  if (grid.back() > (1u << 30)) throw InvalidInput("height bound too large");
}

}  // namespace

CubicCountResult enumerate_cubic_points(const DiagonalCubic& surface, const std::vector<std::uint64_t>& grid,
                                        const PointFilter& filter, const CubicCountOptions& options) {
  check_inputs(grid);
  if (options.threads < 1) throw InvalidInput("thread count must be at least 1");
  const auto& a = surface.coeffs();
  const auto bound = static_cast<std::int64_t>(grid.back());
  const i128 kl = pair_key_bound(a[0], a[1], bound);
  const i128 kr = pair_key_bound(a[2], a[3], bound);
  if (kl < 0 || kr < 0) throw InvalidInput("coefficients too large for exact enumeration at this bound");

  std::mutex mu;
  std::vector<Quad> all_points;
  auto drive = [&](auto& engine) {
    auto work = [&](std::size_t part) {
      std::vector<Quad> pts;
      auto bins = engine.run(part, options.keep_points ? &pts : nullptr);
      if (options.keep_points) {
        std::lock_guard lock(mu);
        all_points.insert(all_points.end(), pts.begin(), pts.end());
      }
      return bins;
    };
    return run_partitions(engine.labels(), grid.size(), work, {options.threads, options.checkpoint});
  };

  std::vector<std::uint64_t> bins;
  const i128 fast_limit = static_cast<i128>(1) << 62;
  if (kl < fast_limit && kr < fast_limit) {
    MitmEngine<std::int64_t> engine(a, bound, grid, filter, options);
    bins = drive(engine);
  } else {
    MitmEngine<i128> engine(a, bound, grid, filter, options);
    bins = drive(engine);
  }

  Sink zero(grid, filter, options.keep_points);
  count_zero_line(a, bound, zero);
  for (std::size_t j = 0; j < grid.size(); ++j) bins[j] += zero.bins[j];
  all_points.insert(all_points.end(), zero.points.begin(), zero.points.end());

  CubicCountResult result;
  result.series = series_from_bins(grid, bins);
  result.series.scenario = surface.describe();
  result.series.filter = filter.describe();
  std::sort(all_points.begin(), all_points.end());
  result.points = std::move(all_points);
  return result;
}

CubicCountResult brute_force_cubic(const DiagonalCubic& surface, const std::vector<std::uint64_t>& grid,
                                   const PointFilter& filter, std::uint64_t ceiling) {
  validate_grid(grid);
  if (grid.back() > ceiling) throw InvalidInput("bound exceeds the exhaustive oracle ceiling");
  const auto& a = surface.coeffs();
  const auto bound = static_cast<std::int64_t>(grid.back());
  Sink sink(grid, filter, true);
  // Column of a3 y3^3 in y3 order; the scan for y3 is a vector compare.
  const std::size_t width = static_cast<std::size_t>(2 * bound + 1);
  i128 total = 0;
  for (auto c : a) total += abs128(c);
  const bool fast = total * cube128(bound) < (static_cast<i128>(1) << 62);
  std::vector<std::int64_t> col64(width);
  std::vector<i128> col128(width);
  for (std::size_t i = 0; i < width; ++i) {
    col128[i] = static_cast<i128>(a[3]) * cube128(static_cast<std::int64_t>(i) - bound);
    if (fast) col64[i] = static_cast<std::int64_t>(col128[i]);
  }
  std::vector<std::uint32_t> hits(width);
  for (std::int64_t y0 = -bound; y0 <= bound; ++y0) {
    for (std::int64_t y1 = -bound; y1 <= bound; ++y1) {
      for (std::int64_t y2 = -bound; y2 <= bound; ++y2) {
        const i128 partial = static_cast<i128>(a[0]) * cube128(y0) + static_cast<i128>(a[1]) * cube128(y1) +
                             static_cast<i128>(a[2]) * cube128(y2);
        std::size_t n = 0;
        if (fast) {
          n = kernels::find_equal(static_cast<std::int64_t>(partial), col64, 0, hits);
        } else {
          for (std::size_t i = 0; i < width; ++i) {
            if (partial + col128[i] == 0) hits[n++] = static_cast<std::uint32_t>(i);
          }
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Quad y{y0, y1, y2, static_cast<std::int64_t>(hits[k]) - bound};
          const auto lead = std::find_if(y.begin(), y.end(), [](std::int64_t v) { return v != 0; });
          if (lead == y.end() || *lead < 0) continue;
          sink.offer(y);
        }
      }
    }
  }
  CubicCountResult result;
  result.series = series_from_bins(grid, sink.bins);
  result.series.scenario = surface.describe();
  result.series.filter = filter.describe();
  std::sort(sink.points.begin(), sink.points.end());
  result.points = std::move(sink.points);
  return result;
}

std::vector<std::uint64_t> count_degenerate_fiber(const std::array<std::int64_t, 4>& coeffs,
                                                  const std::vector<std::uint64_t>& grid) {
  validate_grid(grid);
  if (grid.back() > (1u << 30)) throw InvalidInput("height bound too large");
  std::vector<std::size_t> nz, zs;
  for (std::size_t i = 0; i < 4; ++i) (coeffs[i] != 0 ? nz : zs).push_back(i);
  if (zs.empty()) throw InvalidInput("fiber is not degenerate");
  const auto bmax = static_cast<std::int64_t>(grid.back());
  for (auto i : nz) {
    if (pair_key_bound(coeffs[i], coeffs[i], bmax) < 0) throw InvalidInput("coefficients too large for exact counting");
  }
  const auto z = static_cast<unsigned>(zs.size());

  // Primitive solutions w of the equation in the nonzero coordinates, one
  // per sign class, with their heights.
  std::vector<std::int64_t> heights;
  if (nz.size() == 2) {
    if (auto w = zero_direction(coeffs[nz[0]], coeffs[nz[1]])) heights.push_back(std::max(iabs(w->first), iabs(w->second)));
  } else if (nz.size() == 3) {
    const std::int64_t ca = coeffs[nz[0]], cb = coeffs[nz[1]], cc = coeffs[nz[2]];
    std::vector<std::pair<i128, std::int64_t>> table;
    for (std::int64_t w = -bmax; w <= bmax; ++w) table.push_back({static_cast<i128>(cc) * cube128(w), w});
    std::sort(table.begin(), table.end());
    for (std::int64_t u = 0; u <= bmax; ++u) {
      for (std::int64_t v = -bmax; v <= bmax; ++v) {
        const i128 target = -(static_cast<i128>(ca) * cube128(u) + static_cast<i128>(cb) * cube128(v));
        auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(target, std::numeric_limits<std::int64_t>::min()));
        for (; it != table.end() && it->first == target; ++it) {
          const std::int64_t w = it->second;
          if (u == 0 && (v < 0 || (v == 0 && w <= 0))) continue;
          if (std::gcd(std::gcd(u, v), w) != 1) continue;
          heights.push_back(std::max({u, iabs(v), iabs(w)}));
        }
      }
    }
  }

  PrimeSieve sieve(static_cast<std::uint32_t>(std::max<std::int64_t>(bmax, 1)));
  std::vector<std::uint32_t> primes;
  std::vector<std::pair<std::int64_t, int>> mobius;
  auto power = [](i128 base, unsigned e) {
    i128 r = 1;
    for (unsigned k = 0; k < e; ++k) r *= base;
    return r;
  };
  std::vector<std::uint64_t> out;
  for (auto bu : grid) {
    const auto b = static_cast<std::int64_t>(bu);
    i128 total = 0;
    // Points with the nonzero coordinates all zero: primitive vectors of the
    // free coordinates, up to sign.
    if (z > 0) {
      i128 prim = 0;
      for (std::int64_t d = 1; d <= b; ++d) {
        sieve.distinct_primes(static_cast<std::uint32_t>(d), primes);
        std::int64_t prod = 1;
        for (auto p : primes) prod *= p;
        if (prod != d) continue;
        const int mu = (primes.size() % 2 == 0) ? 1 : -1;
        prim += mu * (power(2 * (b / d) + 1, z) - 1);
      }
      total += prim / 2;
    }
    // (m w, u) with m >= 1, gcd(m, u) = 1, max(m h_w, |u|) <= b.
    for (auto hw : heights) {
      for (std::int64_t m = 1; m * hw <= b; ++m) {
        sieve.distinct_primes(static_cast<std::uint32_t>(m), primes);
        mobius_divisors(primes, mobius);
        for (const auto& [d, mu] : mobius) total += mu * power(2 * (b / d) + 1, z);
      }
    }
    if (total < 0 || total > static_cast<i128>(std::numeric_limits<std::uint64_t>::max())) {
      throw std::overflow_error("degenerate fiber count overflows 64 bits");
    }
    out.push_back(static_cast<std::uint64_t>(total));
  }
  return out;
}

}  // namespace ptcount
