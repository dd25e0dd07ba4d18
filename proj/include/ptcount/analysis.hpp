#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptcount/count_series.hpp"

namespace ptcount {

struct GrowthFit {
  double exponent = 0;   // slope of the regression
  double constant = 0;   // exp(intercept)
  double residual = 0;   // mean squared residual
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

/// Least squares of log(N/B) on log log B, i.e. the model N = c B (log B)^k.
/// Rows with B < 16 or N = 0 are dropped (with a warning); at least four
/// rows must remain.
GrowthFit fit_log_power(const CountSeries& series);

/// Least squares of log N on log B, i.e. the model N = c B^k. Rows with
/// N = 0 or B < 2 are dropped; at least four rows must remain.
GrowthFit fit_power(const CountSeries& series);

struct RatioRow {
  std::uint64_t bound;
  std::optional<double> ratio;  // N / (B log B); absent for B = 1
};

struct ManinReport {
  int picard_rank = 2;
  int predicted_exponent = 1;
  GrowthFit fit;
  std::vector<RatioRow> ratio_rows;
  /// Fraction of consecutive rows whose ratio increases by more than a
  /// single count of rounding could explain.
  double monotone_fraction = 0;
};

ManinReport manin_compare(const CountSeries& series, int picard_rank = 2);

nlohmann::json to_json(const GrowthFit& fit);
nlohmann::json to_json(const ManinReport& report);

}  // namespace ptcount
