#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rwave/errors.hpp"

namespace rwave {

/// Cell-centered radial mesh on [0, R_max]. Nodes sit at r_j = (j + 1/2) dr,
/// so no quantity is ever evaluated at the r = 0 coordinate singularity.
struct RadialGrid {
  double dr = 0.0;
  std::size_t n = 0;
  std::vector<double> nodes;

  RadialGrid() = default;

  RadialGrid(double dr_, std::size_t n_) : dr(dr_), n(n_) {
    if (!(dr > 0.0)) throw config_error("grid: dr must be positive");
    if (n < 16) throw config_error("grid: need at least 16 cells");
    nodes.resize(n);
    for (std::size_t j = 0; j < n; ++j) nodes[j] = (static_cast<double>(j) + 0.5) * dr;
  }

  double r_max() const { return static_cast<double>(n) * dr; }
  double node(std::size_t j) const { return nodes[j]; }
};

namespace detail {

/// Kahan-compensated left-to-right sum. Used for every reduction so results
/// are deterministic and stable for meshes with >1e5 cells.
class kahan_sum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Fraction of cell j (the interval [j dr, (j+1) dr]) covered by [lo, hi].
inline double cell_fraction(const RadialGrid& g, std::size_t j, double lo, double hi) {
  double a = static_cast<double>(j) * g.dr;
  double b = a + g.dr;
  double overlap = std::min(b, hi) - std::max(a, lo);
  if (overlap <= 0.0) return 0.0;
  return std::min(overlap / g.dr, 1.0);
}

}  // namespace detail

/// Midpoint-rule reduction of the planar integral 2π ∫ w(r) f(r) r dr.
/// Every area integral in the library routes through here.
template <class Weight>
double radial_integral(const std::vector<double>& values, const RadialGrid& grid, Weight&& weight) {
  if (values.size() != grid.n) throw contract_violation("radial_integral: length mismatch");
  detail::kahan_sum s;
  for (std::size_t j = 0; j < grid.n; ++j) {
    double r = grid.nodes[j];
    s.add(weight(r) * values[j] * r);
  }
  return 2.0 * M_PI * grid.dr * s.value();
}

inline double radial_integral(const std::vector<double>& values, const RadialGrid& grid) {
  return radial_integral(values, grid, [](double) { return 1.0; });
}

/// Same reduction restricted to the annulus r in [r_lo, r_hi]. Cells cut by
/// the region boundary contribute their covered fraction, which keeps the
/// truncation error of region integrals at second order.
template <class Weight>
double radial_integral_region(const std::vector<double>& values, const RadialGrid& grid,
                              double r_lo, double r_hi, Weight&& weight) {
  if (values.size() != grid.n) throw contract_violation("radial_integral_region: length mismatch");
  detail::kahan_sum s;
  for (std::size_t j = 0; j < grid.n; ++j) {
    double frac = detail::cell_fraction(grid, j, r_lo, r_hi);
    if (frac == 0.0) continue;
    double r = grid.nodes[j];
    s.add(frac * weight(r) * values[j] * r);
  }
  return 2.0 * M_PI * grid.dr * s.value();
}

/// Plain 1D reduction ∫ w(r) f(r) dr over [r_lo, r_hi] (no 2πr factor);
/// used by the characteristic-line machinery where integrals live in r, not x.
template <class Weight>
double line_integral_region(const std::vector<double>& values, const RadialGrid& grid,
                            double r_lo, double r_hi, Weight&& weight) {
  if (values.size() != grid.n) throw contract_violation("line_integral_region: length mismatch");
  detail::kahan_sum s;
  for (std::size_t j = 0; j < grid.n; ++j) {
    double frac = detail::cell_fraction(grid, j, r_lo, r_hi);
    if (frac == 0.0) continue;
    s.add(frac * weight(grid.nodes[j]) * values[j]);
  }
  return grid.dr * s.value();
}

/// Linear interpolation of node values at radius r; clamped at the ends.
inline double interp_at(const std::vector<double>& values, const RadialGrid& grid, double r) {
  if (values.size() != grid.n) throw contract_violation("interp_at: length mismatch");
  double x = r / grid.dr - 0.5;
  if (x <= 0.0) return values.front();
  auto j = static_cast<std::size_t>(x);
  if (j + 1 >= grid.n) return values.back();
  double f = x - static_cast<double>(j);
  return (1.0 - f) * values[j] + f * values[j + 1];
}

}  // namespace rwave
