#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "rwave/errors.hpp"

namespace rwave {

struct DecayFit {
  double exponent = 0.0;   // value ~ t^(-exponent)
  double r_squared = 0.0;
};

/// Least-squares slope of log(value) against log(t). A positive exponent
/// means decay.
inline DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 8) throw contract_violation("fit_decay_rate: need at least 8 points");
  double prev_t = -1.0;
  for (const auto& [t, v] : series) {
    if (!(t > prev_t)) throw contract_violation("fit_decay_rate: times must increase");
    if (!(v > 0.0)) throw contract_violation("fit_decay_rate: values must be positive");
    prev_t = t;
  }
  auto n = static_cast<double>(series.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [t, v] : series) {
    double x = std::log(t), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  DecayFit fit;
  fit.exponent = -slope;
  double ss_tot = syy - sy * sy / n;
  if (ss_tot <= 0.0) {
    fit.r_squared = 1.0;  // constant series fits exactly
  } else {
    double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    for (const auto& [t, v] : series) {
      double e = std::log(v) - (slope * std::log(t) + intercept);
      ss_res += e * e;
    }
    fit.r_squared = 1.0 - ss_res / ss_tot;
  }
  return fit;
}

}  // namespace rwave
