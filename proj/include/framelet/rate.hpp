#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "framelet/errors.hpp"

namespace framelet {

/*
 * Empirical convergence rate: given per-level errors e_N, fits
 * y_N = -log_m e_N against N by least squares. The slope estimates the decay
 * exponent (e_N ~ C m^(-slope N)). When every error sits below the numeric
 * noise floor the fit is flagged `exact_floor` and the slope is not
 * meaningful.
 */

struct RatePoint {
  int level = 0;
  double error = 0.0;
};

struct RateReport {
  std::vector<RatePoint> points;
  double slope = 0.0;
  double residual_rms = 0.0;
  bool exact_floor = false;
  double floor = 1e-8;
};

inline RateReport rate_fit(const std::vector<RatePoint>& points, double m,
                           double floor = 1e-8) {
  if (points.size() < 3)
    throw argument_error("rate_fit: need at least 3 levels, got " +
                         std::to_string(points.size()));
  if (!(m > 1.0)) throw argument_error("rate_fit: m must be > 1");
  bool constant_n = true;
  bool all_below_floor = true;
  for (const auto& p : points) {
    if (!(p.error >= 0.0))
      throw argument_error("rate_fit: errors must be nonnegative (level " +
                           std::to_string(p.level) + ")");
    all_below_floor = all_below_floor && p.error < floor;
    constant_n = constant_n && p.level == points.front().level;
  }
  if (constant_n)
    throw argument_error("rate_fit: levels are all equal, slope is undefined");

  RateReport r;
  r.points = points;
  r.floor = floor;
  r.exact_floor = all_below_floor;
  // At the exactness floor the errors are numeric noise (possibly exact
  // zeros); a log fit would be meaningless, so the slope is left at 0.
  if (all_below_floor) return r;
  for (const auto& p : points) {
    if (!(p.error > 0.0))
      throw argument_error("rate_fit: errors must be positive (level " +
                           std::to_string(p.level) + ")");
  }

  const double lm = std::log(m);
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += static_cast<double>(p.level);
    my += -std::log(p.error) / lm;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = static_cast<double>(p.level) - mx;
    sxx += dx * dx;
    sxy += dx * (-std::log(p.error) / lm - my);
  }
  r.slope = sxy / sxx;
  double ss = 0.0;
  for (const auto& p : points) {
    const double y = -std::log(p.error) / lm;
    const double fit = my + r.slope * (static_cast<double>(p.level) - mx);
    ss += (y - fit) * (y - fit);
  }
  r.residual_rms = std::sqrt(ss / static_cast<double>(points.size()));
  return r;
}

}  // namespace framelet
