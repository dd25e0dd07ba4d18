#include "ptcount/analysis.hpp"

#include <cmath>

namespace ptcount {

namespace {

GrowthFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys, std::vector<std::string> warnings) {
  if (xs.size() < 4) throw InvalidInput("growth fit needs at least 4 usable rows, got " + std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw InvalidInput("growth fit needs at least two distinct bounds");
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.constant = std::exp(intercept);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = ss / n;
  fit.samples = xs.size();
  fit.warnings = std::move(warnings);
  return fit;
}

}  // namespace

GrowthFit fit_log_power(const CountSeries& series) {
  series.validate();
  std::vector<double> xs, ys;
  std::vector<std::string> warnings;
  for (const auto& r : series.rows) {
    if (r.bound < 16) {
      warnings.push_back("row B=" + std::to_string(r.bound) + " dropped: bound below 16");
      continue;
    }
    if (r.count == 0) {
      warnings.push_back("row B=" + std::to_string(r.bound) + " dropped: zero count");
      continue;
    }
    const double b = static_cast<double>(r.bound);
    xs.push_back(std::log(std::log(b)));
    ys.push_back(std::log(static_cast<double>(r.count) / b));
  }
  return least_squares(xs, ys, std::move(warnings));
}

GrowthFit fit_power(const CountSeries& series) {
  series.validate();
  std::vector<double> xs, ys;
  std::vector<std::string> warnings;
  for (const auto& r : series.rows) {
    if (r.bound < 2 || r.count == 0) {
      warnings.push_back("row B=" + std::to_string(r.bound) + " dropped");
      continue;
    }
    xs.push_back(std::log(static_cast<double>(r.bound)));
    ys.push_back(std::log(static_cast<double>(r.count)));
  }
  return least_squares(xs, ys, std::move(warnings));
}

ManinReport manin_compare(const CountSeries& series, int picard_rank) {
  if (picard_rank < 1) throw InvalidInput("Picard rank must be at least 1");
  ManinReport report;
  report.picard_rank = picard_rank;
  report.predicted_exponent = picard_rank - 1;
  report.fit = fit_log_power(series);
  for (const auto& r : series.rows) {
    RatioRow row{r.bound, std::nullopt};
    if (r.bound >= 2) {
      const double b = static_cast<double>(r.bound);
      row.ratio = static_cast<double>(r.count) / (b * std::log(b));
    }
    report.ratio_rows.push_back(row);
  }
  std::size_t pairs = 0, increases = 0;
  for (std::size_t i = 1; i < series.rows.size(); ++i) {
    const auto& prev = series.rows[i - 1];
    const auto& cur = series.rows[i];
    if (prev.bound < 2) continue;
    ++pairs;
    // Increase only if it survives bumping the previous count by one.
    const double bp = static_cast<double>(prev.bound);
    const double bc = static_cast<double>(cur.bound);
    const double prev_ratio_hi = (static_cast<double>(prev.count) + 1.0) / (bp * std::log(bp));
    const double cur_ratio = static_cast<double>(cur.count) / (bc * std::log(bc));
    if (cur_ratio > prev_ratio_hi) ++increases;
  }
  report.monotone_fraction = pairs == 0 ? 0.0 : static_cast<double>(increases) / static_cast<double>(pairs);
  return report;
}

nlohmann::json to_json(const GrowthFit& fit) {
  return nlohmann::json{{"exponent", fit.exponent},
                        {"constant", fit.constant},
                        {"residual", fit.residual},
                        {"samples", fit.samples},
                        {"warnings", fit.warnings}};
}

nlohmann::json to_json(const ManinReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.ratio_rows) {
    rows.push_back(nlohmann::json::array({r.bound, r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr)}));
  }
  return nlohmann::json{{"t", report.picard_rank},
                        {"predicted_exponent", report.predicted_exponent},
                        {"fitted_exponent", report.fit.exponent},
                        {"fitted_constant", report.fit.constant},
                        {"residual", report.fit.residual},
                        {"ratio_rows", rows},
                        {"monotone_fraction", report.monotone_fraction}};
}

}  // namespace ptcount
