// Acceptance run: one PASS/FAIL line per criterion.
//
//   PTCOUNT_ACCEPT_ONLY=1,4,8          run a subset
//   PTCOUNT_ACCEPT_FERMAT_GRID=16:2:12 grid for the Fermat-fiber exhibit
//   PTCOUNT_ACCEPT_REPLAY_GRID=16:2:10 grid for the Fermat replay in the determinism check

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ptcount/analysis.hpp"
#include "ptcount/bundle.hpp"
#include "ptcount/cubic_surface.hpp"
#include "ptcount/eisenstein.hpp"
#include "ptcount/toric.hpp"

extern char** environ;

using namespace ptcount;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::uint64_t> upto(std::uint64_t n) {
  std::vector<std::uint64_t> g;
  for (std::uint64_t b = 1; b <= n; ++b) g.push_back(b);
  return g;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const auto s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("ptcount_accept_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

pid_t spawn(const std::vector<std::string>& args) {
  std::vector<std::string> full{PTCOUNT_CLI_PATH};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : full) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  if (posix_spawn(&pid, argv[0], nullptr, nullptr, argv.data(), environ) != 0) return -1;
  return pid;
}

int wait_for(pid_t pid) {
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_cli(const std::vector<std::string>& args) {
  const pid_t pid = spawn(args);
  return pid < 0 ? -1 : wait_for(pid);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto grid = upto(50);
  std::vector<std::string> bad;
  for (const auto& a : std::vector<std::array<std::int64_t, 4>>{{1, 1, 1, 1}, {1, 2, 3, 4}, {1, 1, 8, 27}}) {
    const DiagonalCubic s(a);
    const PointFilter lines{pairwise_rational_lines(a)};
    for (const auto* f : {&lines, static_cast<const PointFilter*>(nullptr)}) {
      const PointFilter filter = f ? *f : PointFilter{};
      const auto fast = enumerate_cubic_points(s, grid, filter, {.keep_points = true});
      const auto slow = brute_force_cubic(s, grid, filter);
      if (!(fast.series == slow.series) || fast.points != slow.points)
        bad.push_back(s.describe() + (f ? " filtered" : ""));
    }
  }
  return {bad.empty(), bad.empty() ? "3 surfaces x 2 filters, B=1..50 exact" : "mismatch on " + bad.front()};
}

Outcome criterion2() {
  const auto grid = upto(200);
  const auto brute = brute_force_torus(grid);
  const auto fast = enumerate_torus(grid);
  TorusOptions v;
  v.validate_box = true;
  bool validated = true;
  try {
    validated = enumerate_torus(grid, v) == brute;
  } catch (const std::logic_error&) {
    validated = false;
  }
  const bool ok = fast == brute && validated && fast.rows[0].count == 4;
  return {ok, "B=1..200, N(1)=" + std::to_string(fast.rows[0].count) + ", N(200)=" +
                  std::to_string(fast.rows.back().count) + (validated ? ", box validation ok" : ", box validation FAILED")};
}

Outcome criterion3() {
  double worst = 0;
  std::string detail;
  for (int k = 0; k <= 3; ++k) {
    CountSeries s;
    const double c = 1 + 2 * k;
    for (auto b : geometric_grid(16, 2, 13)) {
      const double x = static_cast<double>(b);
      s.rows.push_back({b, static_cast<std::uint64_t>(std::floor(c * x * std::pow(std::log(x), k)))});
    }
    const double kh = fit_log_power(s).exponent;
    worst = std::max(worst, std::abs(kh - k));
    detail += (k ? ", " : "") + ("k" + std::to_string(k) + "=" + fmt("%.4f", kh));
  }
  return {worst <= 0.05, detail};
}

Outcome criterion4() {
  const auto series = enumerate_torus(parse_grid("16:2:17"));
  const auto fit = fit_log_power(series);
  const auto report = manin_compare(series);
  const auto& rows = report.ratio_rows;
  bool increasing = true;
  for (std::size_t i = rows.size() - 8; i < rows.size(); ++i) increasing = increasing && *rows[i].ratio > *rows[i - 1].ratio;
  return {fit.exponent >= 2.0 && increasing,
          "k=" + fmt("%.3f", fit.exponent) + " (need >= 2.0), last 8 ratios " +
              (increasing ? "strictly increasing" : "not strictly increasing") + ", N(" +
              std::to_string(series.rows.back().bound) + ")=" + std::to_string(series.rows.back().count)};
}

Outcome criterion5() {
  const auto out = scratch() / "line.csv";
  const int rc = run_cli({"count-line", "--line", "0,1,2,3", "--witnesses", "1,1,1,1", "--grid", "20:2:10", "--out",
                          out.string()});
  if (rc != 0) return {false, "count-line exited " + std::to_string(rc)};
  const auto s = read_series(out.string());
  const double k = fit_power(s).exponent;
  return {k >= 1.8 && k <= 2.2, "B up to " + std::to_string(s.rows.back().bound) + ", exponent " + fmt("%.4f", k)};
}

Outcome criterion6() {
  const auto diag = Polynomial::variable(3, 0) - Polynomial::variable(3, 1);
  const auto s = count_torus_curve(diag, parse_grid("25:2:13"));
  const double k = fit_power(s).exponent;
  return {k <= 1.2, "B up to " + std::to_string(s.rows.back().bound) + ", exponent " + fmt("%.4f", k)};
}

Outcome criterion7() {
  const std::string dir = PTCOUNT_SCENARIO_DIR;
  const auto n1 = load_scenario(dir + "/fermat-fiber-n1.json");
  const auto n2 = load_scenario(dir + "/sum-of-cubes-n2.json");
  const auto n3 = load_scenario(dir + "/coordinates-n3.json");
  auto has = [](const std::vector<CubeFiber>& fs, std::vector<std::int64_t> base) {
    return std::find_if(fs.begin(), fs.end(), [&](const CubeFiber& f) { return f.base == base; }) != fs.end();
  };
  const auto f1 = find_cube_fibers(n1, 1);
  const bool ok1 = has(f1, {1, 1}) && fiber_surface(n1, {1, 1}).coeffs() == std::array<std::int64_t, 4>{1, 1, 1, 1};
  const bool ok3 = has(find_cube_fibers(n3, 1), {1, 1, 1, 1});
  const auto f2 = find_cube_fibers(n2, 6);
  const auto it = std::find_if(f2.begin(), f2.end(), [](const CubeFiber& f) { return f.b == std::array<std::int64_t, 4>{3, 4, 5, 6}; });
  const bool ok2 = it != f2.end() && it->base == std::vector<std::int64_t>{27, 64, 125};
  return {ok1 && ok2 && ok3, std::string("n=1 q=(1:1) ") + (ok1 ? "found" : "missing") + ", n=3 q=(1:1:1:1) " +
                                 (ok3 ? "found" : "missing") + ", n=2 (3,4,5,6) " + (ok2 ? "found" : "missing")};
}

CountSeries fermat_fiber_series(const std::string& grid, int threads) {
  const auto n1 = load_scenario(std::string(PTCOUNT_SCENARIO_DIR) + "/fermat-fiber-n1.json");
  const auto q = find_cube_fibers(n1, 1).front().base;
  const auto surface = fiber_surface(n1, q);
  CubicCountOptions o;
  o.threads = threads;
  return enumerate_cubic_points(surface, parse_grid(grid), {rational_lines(surface)}, o).series;
}

Outcome criterion8() {
  const std::string grid = env_or("PTCOUNT_ACCEPT_FERMAT_GRID", "16:2:12");
  const auto t0 = std::chrono::steady_clock::now();
  const auto series = fermat_fiber_series(grid, 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto report = manin_compare(series, 2);
  const bool growth = report.monotone_fraction >= 0.9 && report.fit.exponent >= 2.0;
  const std::uint64_t top = series.rows.back().bound;
  const bool scale = top >= 500000;
  const bool fast = secs < 1800;

  // Speedup on a reduced grid, against the cores this machine actually has.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto s0 = std::chrono::steady_clock::now();
  const auto one = fermat_fiber_series("16:2:9", 1);
  const auto s1 = std::chrono::steady_clock::now();
  const auto eight = fermat_fiber_series("16:2:9", 8);
  const auto s2 = std::chrono::steady_clock::now();
  const double speedup = std::chrono::duration<double>(s1 - s0).count() / std::chrono::duration<double>(s2 - s1).count();
  const double want = 0.8 * std::min(8u, hw);
  const bool scales = one == eight && speedup >= want;

  std::string detail = "B up to " + std::to_string(top) + ": k=" + fmt("%.3f", report.fit.exponent) +
                       " vs predicted " + std::to_string(report.predicted_exponent) + ", monotone " +
                       fmt("%.3f", report.monotone_fraction) + ", " + fmt("%.0f s", secs) + "; 8-thread speedup " +
                       fmt("%.2f", speedup) + " on " + std::to_string(hw) + " core(s) (need " + fmt("%.2f", want) + ")";
  if (!scale) detail += "; required scale B ~ 1e6 not reached";
  return {growth && scale && fast && scales, detail};
}

bool eis_properties(std::string& why) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<std::int64_t> d(-400, 400), s(-30, 30);
  std::size_t checks = 0;
  for (int i = 0; i < 20000; ++i) {
    const EisensteinInt x(d(rng), d(rng)), y(d(rng), d(rng)), m(s(rng), s(rng));
    if (norm(x * y) != norm(x) * norm(y)) return why = "norm not multiplicative", false;
    const EisensteinInt u = x * m, v = y * m;
    const EisensteinInt g = eis_gcd(u, v);
    if (!u.is_zero() || !v.is_zero()) {
      if (!eis_divides(g, u) || !eis_divides(g, v)) return why = "gcd does not divide", false;
      if (!m.is_zero() && !eis_divides(m, g)) return why = "common divisor does not divide gcd", false;
    }
    if (!x.is_zero()) {
      std::set<EisensteinInt> assoc;
      for (const auto& w : eisenstein_units()) assoc.insert(x * w);
      if (assoc.size() != 6) return why = "associates not distinct", false;
      const auto c = canonical_associate(x);
      if (canonical_associate(c) != c || !assoc.count(c)) return why = "canonical form not idempotent", false;
      for (const auto& w : assoc)
        if (canonical_associate(w) != c) return why = "associates disagree on canonical form", false;
    }
    ++checks;
  }
  why = std::to_string(checks) + " random property rounds";
  return true;
}

Outcome criterion9() {
  std::string why;
  const bool props = eis_properties(why);
  const std::array<EisensteinInt, 4> f{EisensteinInt(1), EisensteinInt(1), EisensteinInt(1), EisensteinInt(1)};
  const auto fast = enumerate_eis_cubic(f, {1}, {});
  const auto slow = brute_force_eis_cubic(f, {1}, {});
  const EisFilter lines{lines_27(f, f)};
  const auto filtered = enumerate_eis_cubic(f, {1}, lines).series.rows[0].count;
  const bool ok = props && fast.series == slow.series && filtered == 0;
  return {ok, why + ", N(1)=" + std::to_string(fast.series.rows[0].count) + " (oracle " +
                  std::to_string(slow.series.rows[0].count) + "), after 27 lines " + std::to_string(filtered)};
}

// Runs a CLI workload three ways: one thread, eight threads, and killed
// partway through then resumed from its checkpoint.
bool replay(const std::string& tag, std::vector<std::string> args, std::string& note) {
  const auto dir = scratch();
  auto with = [&](std::vector<std::string> extra) {
    auto a = args;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const auto one = dir / (tag + "-1.csv"), eight = dir / (tag + "-8.csv"), resumed = dir / (tag + "-r.csv");
  const auto ck = dir / (tag + ".ckpt");
  if (run_cli(with({"--threads", "1", "--out", one.string()})) != 0) return note = tag + " failed to run", false;
  if (run_cli(with({"--threads", "8", "--out", eight.string()})) != 0) return note = tag + " failed at 8 threads", false;

  const pid_t pid = spawn(with({"--threads", "1", "--out", resumed.string(), "--checkpoint", ck.string()}));
  bool killed = false;
  for (;;) {
    int status = 0;
    if (waitpid(pid, &status, WNOHANG) == pid) break;
    if (fs::exists(ck) && line_count(ck) >= 3) {
      ::kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      killed = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!killed) {
    // Finished before it could be interrupted: tear the checkpoint by hand.
    const auto text = slurp(ck);
    std::size_t cut = text.find('\n');
    for (std::size_t i = 0; i < (line_count(ck) - 1) / 2 && cut != std::string::npos; ++i) cut = text.find('\n', cut + 1);
    std::ofstream(ck, std::ios::binary | std::ios::trunc) << text.substr(0, cut + 1) << "0..";
  }
  fs::remove(resumed);
  if (run_cli(with({"--threads", "1", "--out", resumed.string(), "--checkpoint", ck.string()})) != 0)
    return note = tag + " resume failed", false;
  const auto ref = slurp(one);
  const bool same = !ref.empty() && ref == slurp(eight) && ref == slurp(resumed) &&
                    slurp(one.string() + ".meta.json") == slurp(eight.string() + ".meta.json");
  note += (note.empty() ? "" : ", ") + tag + (killed ? " (killed+resumed)" : " (torn checkpoint)");
  if (!same) note += " DIFFERS";
  return same;
}

Outcome criterion10() {
  std::string note;
  bool ok = true;
  ok &= replay("c1-fermat", {"count-cubic", "--coeffs", "1,1,1,1", "--grid", "2:5:3", "--exclude-rational-lines"}, note);
  ok &= replay("c1-1234", {"count-cubic", "--coeffs", "1,2,3,4", "--grid", "2:5:3"}, note);
  ok &= replay("c1-cubes", {"count-cubic", "--coeffs", "1,1,8,27", "--grid", "2:5:3", "--exclude-rational-lines"}, note);
  ok &= replay("c4-toric", {"count-toric", "--grid", "16:2:17"}, note);
  const std::string grid = env_or("PTCOUNT_ACCEPT_REPLAY_GRID", "16:2:10");
  ok &= replay("c8-fermat", {"count-cubic", "--coeffs", "1,1,1,1", "--grid", grid, "--exclude-rational-lines"}, note);
  return {ok, note + "; Fermat replay grid " + grid};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                        criterion6, criterion7, criterion8, criterion9, criterion10};
  const std::vector<double> budget{60, 120, 1, 600, 0, 0, 5, 0, 60, 0};
  std::set<int> only;
  {
    std::istringstream in(env_or("PTCOUNT_ACCEPT_ONLY", ""));
    for (std::string tok; std::getline(in, tok, ',');)
      if (!tok.empty()) only.insert(std::stoi(tok));
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(n)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget[i] > 0 && secs > budget[i]) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f s", budget[i]) + " budget";
    }
    std::printf("criterion %2d: %s  %s [%.1f s]\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  fs::remove_all(scratch());
  return failed == 0 ? 0 : 1;
}
