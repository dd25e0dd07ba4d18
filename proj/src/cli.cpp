#include "ptcount/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "ptcount/analysis.hpp"
#include "ptcount/bundle.hpp"
#include "ptcount/count_series.hpp"
#include "ptcount/cubic_surface.hpp"
#include "ptcount/eisenstein.hpp"
#include "ptcount/parallel.hpp"
#include "ptcount/toric.hpp"

namespace ptcount::cli {

namespace {

using nlohmann::json;

std::vector<std::int64_t> parse_ints(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput(what + ": '" + item + "' is not an integer");
    }
    if (used != item.size()) throw InvalidInput(what + ": '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.size() != expected) throw InvalidInput(what + " needs " + std::to_string(expected) + " comma-separated integers");
  return out;
}

Quad to_quad(const std::vector<std::int64_t>& v) { return {v[0], v[1], v[2], v[3]}; }

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

// Sidecar with everything the CSV leaves out. Contains nothing that depends
// on thread count, so reruns compare byte for byte.
void write_meta(const std::string& out, const std::string& command, const CountSeries& s,
                const std::vector<std::uint64_t>& grid, json extra = json::object()) {
  extra["command"] = command;
  extra["scenario"] = s.scenario;
  extra["filter"] = s.filter;
  extra["field"] = s.field;
  extra["grid"] = grid;
  write_json(out + ".meta.json", extra);
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::unique_ptr<Checkpoint> open_checkpoint(const std::string& path, const std::string& workload) {
  if (path.empty()) return nullptr;
  return std::make_unique<Checkpoint>(path, workload);
}

void check_threads(int threads) {
  if (threads < 1 || threads > 1024) throw InvalidInput("--threads must lie in [1, 1024]");
}

struct CubicArgs {
  std::string coeffs, field = "q", grid, out, checkpoint, dump;
  bool rational_lines = false, lines27 = false;
  int threads = 1;
};

void count_cubic(const CubicArgs& a) {
  check_threads(a.threads);
  const auto c = parse_ints(a.coeffs, 4, "--coeffs");
  const auto grid = parse_grid(a.grid);
  if (!a.dump.empty() && !a.checkpoint.empty()) {
    throw InvalidInput("--dump-points cannot be combined with --checkpoint: resumed partitions have no points");
  }
  for (auto v : c) {
    if (v == 0) throw InvalidInput("coefficients must be nonzero (the surface would be singular)");
  }
  const std::string workload = "count-cubic coeffs=" + a.coeffs + " field=" + a.field +
                               " rational-lines=" + std::to_string(a.rational_lines) +
                               " 27-lines=" + std::to_string(a.lines27) + " grid=" + join(grid);
  auto cp = open_checkpoint(a.checkpoint, workload);
  CountSeries series;
  if (a.field == "q") {
    const DiagonalCubic surface(to_quad(c));
    PointFilter filter;
    if (a.rational_lines) filter.lines = pairwise_rational_lines(surface.coeffs());
    if (a.lines27) filter.eis_lines = lines_27(surface);
    CubicCountOptions o;
    o.threads = a.threads;
    o.keep_points = !a.dump.empty();
    o.checkpoint = cp.get();
    auto r = enumerate_cubic_points(surface, grid, filter, o);
    if (!a.dump.empty()) write_points(a.dump, r.points);
    series = std::move(r.series);
  } else if (a.field == "eisenstein") {
    std::array<EisensteinInt, 4> ce;
    for (std::size_t i = 0; i < 4; ++i) ce[i] = EisensteinInt(c[i]);
    EisFilter filter;
    if (a.rational_lines || a.lines27) {
      const auto w = detect_cube_witnesses(to_quad(c));
      if (!w) throw InvalidInput("line filters need every a_i/a_0 to be a rational cube");
      std::array<EisensteinInt, 4> we;
      for (std::size_t i = 0; i < 4; ++i) we[i] = EisensteinInt(w->b[i]);
      const auto lines = lines_27(ce, we);
      // Lines are ordered by pairing, then the two cube roots of unity; the
      // first of each block of nine is the one defined over Q.
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (a.lines27 || i % 9 == 0) filter.lines.push_back(lines[i]);
      }
    }
    EisCountOptions o;
    o.threads = a.threads;
    o.keep_points = !a.dump.empty();
    o.checkpoint = cp.get();
    auto r = enumerate_eis_cubic(ce, grid, filter, o);
    if (!a.dump.empty()) {
      std::ofstream out(a.dump, std::ios::binary);
      if (!out) throw InvalidInput("cannot write " + a.dump);
      for (const auto& p : r.points) {
        for (std::size_t i = 0; i < 4; ++i) out << (i ? " " : "") << to_string(p.coords()[i]);
        out << '\n';
      }
    }
    series = std::move(r.series);
  } else {
    throw InvalidInput("--field must be q or eisenstein");
  }
  write_series(a.out, series);
  write_meta(a.out, "count-cubic", series, grid, {{"coeffs", c}});
}

struct ToricArgs {
  std::string grid, out, checkpoint;
  int threads = 1;
  bool full_box = false, validate = false;
  std::optional<double> exponent;
};

void count_toric(const ToricArgs& a) {
  check_threads(a.threads);
  const auto grid = parse_grid(a.grid);
  if (a.full_box && a.exponent) throw InvalidInput("--full-box and --box-exponent are exclusive");
  std::string engine = a.full_box ? "full-box" : a.exponent ? "box" : "hexagon";
  auto cp = open_checkpoint(a.checkpoint, "count-toric engine=" + engine + " grid=" + join(grid));
  if (cp && engine != "hexagon") throw InvalidInput("--checkpoint is only supported by the default engine");
  TorusOptions o;
  o.threads = a.threads;
  o.checkpoint = cp.get();
  o.full_box = a.full_box;
  o.validate_box = a.validate;
  o.box_exponent = a.exponent;
  const auto series = enumerate_torus(grid, o);
  write_series(a.out, series);
  json extra{{"engine", engine}};
  if (a.exponent) extra["box_exponent"] = *a.exponent;
  if (a.validate) extra["validated_up_to"] = o.validate_limit;
  write_meta(a.out, "count-toric", series, grid, extra);
}

struct BundleArgs {
  std::string scenario, grid, out, checkpoint;
  bool restrict_up = false, fiber_lines = false;
  int threads = 1;
  std::size_t top = 0;
};

void count_bundle(const BundleArgs& a) {
  check_threads(a.threads);
  const auto bundle = load_scenario(a.scenario);
  const auto grid = parse_grid(a.grid);
  const std::string workload = "count-bundle scenario=" + to_json(bundle).dump() +
                               " restrict-up=" + std::to_string(a.restrict_up) +
                               " fiber-lines=" + std::to_string(a.fiber_lines) + " grid=" + join(grid);
  auto cp = open_checkpoint(a.checkpoint, workload);
  BundleCountOptions o;
  o.threads = a.threads;
  o.restrict_up = a.restrict_up;
  o.filter_fiber_lines = a.fiber_lines;
  o.top_fibers = a.top;
  o.checkpoint = cp.get();
  const auto r = enumerate_bundle_points(bundle, grid, o);
  write_series(a.out, r.series);
  write_meta(a.out, "count-bundle", r.series, grid, {{"bundle", to_json(bundle)}});
  if (a.top > 0) {
    json fibers = json::array();
    for (const auto& f : r.top_fibers) {
      json rows = json::array();
      for (const auto& row : f.series.rows) rows.push_back({row.bound, row.count});
      fibers.push_back({{"base", f.base}, {"coeffs", f.coeffs}, {"rows", rows}});
    }
    write_json(a.out + ".fibers.json", {{"complete", r.top_fibers_complete}, {"fibers", fibers}});
  }
}

void find_fibers(const std::string& scenario, std::int64_t bound, const std::string& out) {
  const auto bundle = load_scenario(scenario);
  const auto fibers = find_cube_fibers(bundle, bound);
  json list = json::array();
  for (const auto& f : fibers) {
    const auto surface = fiber_surface(bundle, f.base);
    list.push_back({{"base", f.base}, {"b", f.b}, {"lambda", f.lambda.get_str()}, {"fiber", surface.coeffs()}});
  }
  write_json(out, {{"scenario", bundle.name}, {"search_bound", bound}, {"fibers", list}});
}

void count_line(const std::string& line, const std::string& witnesses, const std::string& grid_spec,
                const std::string& out) {
  const auto idx = parse_ints(line, 4, "--line");
  const auto b = parse_ints(witnesses, 4, "--witnesses");
  std::array<bool, 4> seen{};
  for (auto i : idx) {
    if (i < 0 || i > 3 || seen[static_cast<std::size_t>(i)]) throw InvalidInput("--line must be a permutation of 0,1,2,3");
    seen[static_cast<std::size_t>(i)] = true;
  }
  Quad f{}, g{};
  f[static_cast<std::size_t>(idx[0])] = b[static_cast<std::size_t>(idx[0])];
  f[static_cast<std::size_t>(idx[1])] = b[static_cast<std::size_t>(idx[1])];
  g[static_cast<std::size_t>(idx[2])] = b[static_cast<std::size_t>(idx[2])];
  g[static_cast<std::size_t>(idx[3])] = b[static_cast<std::size_t>(idx[3])];
  const auto l = LineDescriptor::make(f, g);
  const auto grid = parse_grid(grid_spec);
  const auto series = count_on_line(l, grid);
  write_series(out, series);
  write_meta(out, "count-line", series, grid, {{"line", l.describe()}});
}

void fit_growth(const std::string& in, const std::string& out) {
  const auto fit = fit_log_power(read_series(in));
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
  write_json(out, to_json(fit));
}

void compare_manin(const std::string& in, int rank, const std::string& out) {
  if (rank < 1) throw InvalidInput("--picard-rank must be at least 1");
  const auto report = manin_compare(read_series(in), rank);
  for (const auto& w : report.fit.warnings) std::cerr << "warning: " << w << '\n';
  write_json(out, to_json(report));
}

}  // namespace

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Counts rational points of bounded height and fits their growth."};
  app.require_subcommand(1);

  CubicArgs cubic;
  auto* cc = app.add_subcommand("count-cubic", "points on a diagonal cubic surface");
  cc->add_option("--coeffs", cubic.coeffs, "a0,a1,a2,a3")->required();
  cc->add_option("--field", cubic.field, "q or eisenstein");
  cc->add_flag("--exclude-rational-lines", cubic.rational_lines);
  cc->add_flag("--exclude-27-lines", cubic.lines27);
  cc->add_option("--grid", cubic.grid, "START:FACTOR:COUNT")->required();
  cc->add_option("--out", cubic.out)->required();
  cc->add_option("--threads", cubic.threads);
  cc->add_option("--checkpoint", cubic.checkpoint);
  cc->add_option("--dump-points", cubic.dump);

  ToricArgs toric;
  auto* ct = app.add_subcommand("count-toric", "torus points of the toric Del Pezzo surface of degree 6");
  ct->add_option("--grid", toric.grid)->required();
  ct->add_option("--out", toric.out)->required();
  ct->add_option("--threads", toric.threads);
  ct->add_option("--checkpoint", toric.checkpoint);
  ct->add_flag("--full-box", toric.full_box);
  ct->add_flag("--validate-box", toric.validate);
  ct->add_option("--box-exponent", toric.exponent);

  BundleArgs bundle;
  auto* cb = app.add_subcommand("count-bundle", "points on a cubic bundle, fiber by fiber");
  cb->add_option("--scenario", bundle.scenario)->required();
  cb->add_option("--grid", bundle.grid)->required();
  cb->add_option("--out", bundle.out)->required();
  cb->add_flag("--restrict-up", bundle.restrict_up);
  cb->add_flag("--filter-fiber-lines", bundle.fiber_lines);
  cb->add_option("--threads", bundle.threads);
  cb->add_option("--checkpoint", bundle.checkpoint);
  cb->add_option("--top-fibers", bundle.top);

  std::string scenario, out, line, witnesses, grid, in, fiber;
  std::int64_t search_bound = 0;
  int rank = 2;
  auto* fc = app.add_subcommand("find-cube-fibers", "base points whose fiber has cube coefficients");
  fc->add_option("--scenario", scenario)->required();
  fc->add_option("--search-bound", search_bound)->required();
  fc->add_option("--out", out)->required();

  auto* cl = app.add_subcommand("count-line", "points on a line b_i y_i + b_j y_j = 0 = b_k y_k + b_l y_l");
  cl->add_option("--line", line, "i,j,k,l")->required();
  cl->add_option("--witnesses", witnesses, "b0,b1,b2,b3")->required();
  cl->add_option("--grid", grid)->required();
  cl->add_option("--out", out)->required();

  auto* fg = app.add_subcommand("fit-growth", "fit N = c B (log B)^k");
  fg->add_option("--in", in)->required();
  fg->add_option("--out", out)->required();

  auto* cm = app.add_subcommand("compare-manin", "fitted exponent against t - 1");
  cm->add_option("--fiber", fiber)->required();
  cm->add_option("--picard-rank", rank);
  cm->add_option("--out", out)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*cc) count_cubic(cubic);
    else if (*ct) count_toric(toric);
    else if (*cb) count_bundle(bundle);
    else if (*fc) find_fibers(scenario, search_bound, out);
    else if (*cl) count_line(line, witnesses, grid, out);
    else if (*fg) fit_growth(in, out);
    else if (*cm) compare_manin(fiber, rank, out);
  } catch (const SearchExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}

}  // namespace ptcount::cli
