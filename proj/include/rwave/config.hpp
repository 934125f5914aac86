#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rwave/errors.hpp"
#include "rwave/grid.hpp"

namespace rwave {

enum class DataFamily { gaussian, smooth_bump, polynomial_decay };

/// Initial-data families. Gaussian and bump decay rapidly, so the weighted
/// energy E_kappa is finite for every kappa; the polynomial family
/// u0 ~ A (1+r^2)^(-beta/2) has E_kappa finite iff kappa < 2 beta - 2 and is
/// used to probe decay thresholds.
struct InitialDataSpec {
  DataFamily family = DataFamily::gaussian;
  double amplitude = 1.0;
  double width = 1.0;              // sigma
  double beta = 2.0;               // polynomial family only
  bool ut_zero = true;
  std::vector<double> ut_values;   // used when ut_zero is false

  double u0_at(double r) const {
    switch (family) {
      case DataFamily::gaussian:
        return amplitude * std::exp(-(r * r) / (width * width));
      case DataFamily::smooth_bump: {
        double x = r / width;
        if (x >= 1.0) return 0.0;
        // C-infinity bump exp(1 - 1/(1-x^2)), normalized to `amplitude` at r=0.
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
      }
      case DataFamily::polynomial_decay:
        return amplitude * std::pow(1.0 + r * r, -beta / 2.0);
    }
    return 0.0;
  }

  /// Radius beyond which the profile is negligible at double precision.
  /// The polynomial family never truly vanishes; the returned radius is where
  /// the amplitude drops below 1e-8, which callers must treat as approximate.
  double support_radius() const {
    switch (family) {
      case DataFamily::gaussian:
        return 7.0 * width;  // exp(-49) ~ 5e-22
      case DataFamily::smooth_bump:
        return width;
      case DataFamily::polynomial_decay:
        return std::sqrt(std::pow(std::abs(amplitude) / 1e-8, 2.0 / beta));
    }
    return 0.0;
  }
};

enum class TimeDirection { forward, backward };

struct SimConfig {
  double p = 5.0;
  double dr = 0.05;
  std::size_t n = 4096;
  double cfl = 0.45;
  double t_final = 50.0;
  TimeDirection direction = TimeDirection::forward;
  bool nonlinear = true;
  InitialDataSpec data;
  std::size_t output_every = 10;
  std::vector<double> kappa_list;
  struct MorawetzParams {
    double R = 20.0, r = 5.0, mu1 = 0.0, mu2 = 0.0;
  };
  std::vector<MorawetzParams> morawetz_R_list;

  double r_max() const { return static_cast<double>(n) * dr; }

  void validate() const {
    if (!(p > 1.0)) throw config_error("config: p must exceed 1");
    if (!(dr > 0.0)) throw config_error("config: dr must be positive");
    if (n < 16) throw config_error("config: n must be at least 16");
    if (!(cfl > 0.0 && cfl < 1.0)) throw config_error("config: cfl must lie in (0,1)");
    if (!(t_final >= 0.0)) throw config_error("config: t_final must be nonnegative");
    if (output_every == 0) throw config_error("config: output_every must be positive");
    // Causality margin: the Dirichlet wall at R_max must stay outside the
    // light cone of the data for the whole run.
    double margin = std::abs(t_final) + data.support_radius() + 8.0 * dr;
    if (r_max() < margin)
      throw config_error("config: causality margin violated, need R_max >= " +
                         std::to_string(margin) + " but R_max = " + std::to_string(r_max()));
    for (const auto& m : morawetz_R_list) {
      if (!(m.R > 0.0) || m.r < 0.0) throw config_error("config: morawetz needs R > 0, r >= 0");
      if (m.mu1 < 0.0 || m.mu1 > 2.0 * (p - 1.0) / (p + 1.0))
        throw config_error("config: mu1 out of range");
      if (m.mu2 < 0.0 || m.mu2 > 1.0 / (p + 1.0)) throw config_error("config: mu2 out of range");
    }
  }
};

inline RadialGrid make_grid(const SimConfig& config) {
  config.validate();
  return RadialGrid(config.dr, config.n);
}

}  // namespace rwave
