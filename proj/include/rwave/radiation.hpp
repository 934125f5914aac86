#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "rwave/diagnostics.hpp"
#include "rwave/errors.hpp"
#include "rwave/grid.hpp"
#include "rwave/solver.hpp"
#include "rwave/state.hpp"

namespace rwave {

/// 1D reduction of a radial state: w = r^(1/2) u and the characteristic
/// fields v+- = w_t -+ w_r. Exact identities v+ + v- = 2 w_t and
/// v- - v+ = 2 w_r hold on the discrete level.
struct WTransform {
  std::vector<double> w;
  std::vector<double> v_plus;
  std::vector<double> v_minus;
};

inline WTransform w_transform(const FieldState& state, const RadialGrid& grid) {
  WTransform out;
  std::size_t n = grid.n;
  out.w.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.w[j] = std::sqrt(grid.nodes[j]) * state.u[j];
  std::vector<double> wr = radial_derivative(out.w, grid);
  out.v_plus.resize(n);
  out.v_minus.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double wt = std::sqrt(grid.nodes[j]) * state.ut[j];
    out.v_plus[j] = wt - wr[j];
    out.v_minus[j] = wt + wr[j];
  }
  return out;
}

/// eta-sampled estimate of the outgoing profile g+ with extraction metadata.
struct RadiationProfile {
  std::vector<double> eta_nodes;
  std::vector<double> g_plus;
  std::vector<double> extracted_at;
  /// L^2(eta-window) difference of v+ samples for each consecutive time pair.
  std::map<std::pair<double, double>, double> cauchy_l2;

  double deta() const {
    return eta_nodes.size() > 1 ? eta_nodes[1] - eta_nodes[0] : 0.0;
  }

  /// pi * int |g+|^2 deta, the planar energy carried by the profile.
  double energy() const {
    detail::kahan_sum s;
    for (double g : g_plus) s.add(g * g);
    return M_PI * s.value() * deta();
  }

  double g_at(double eta) const {
    if (eta_nodes.empty()) return 0.0;
    double d = deta();
    if (d <= 0.0) return 0.0;
    double x = (eta - eta_nodes.front()) / d;
    if (x < 0.0 || x > static_cast<double>(eta_nodes.size() - 1)) return 0.0;
    auto j = static_cast<std::size_t>(x);
    if (j + 1 >= eta_nodes.size()) return g_plus.back();
    double f = x - static_cast<double>(j);
    return (1.0 - f) * g_plus[j] + f * g_plus[j + 1];
  }
};

/// Sample v+ along the outgoing characteristics r = t - eta at each
/// extraction time; the latest time provides the g+ estimate and consecutive
/// pairs provide the Cauchy drift. eta spacing equals the grid spacing.
inline RadiationProfile extract_radiation(const Trajectory& traj,
                                          std::pair<double, double> eta_window,
                                          std::vector<double> extraction_times) {
  const RadialGrid& g = traj.grid;
  auto [eta_min, eta_max] = eta_window;
  if (!(eta_max > eta_min)) throw contract_violation("extract_radiation: empty eta window");
  if (extraction_times.empty())
    throw contract_violation("extract_radiation: need at least one extraction time");
  std::sort(extraction_times.begin(), extraction_times.end());
  for (double t : extraction_times) {
    if (!(t - eta_max > 1.0))
      throw contract_violation("extract_radiation: extraction time too early for window");
    if (t - eta_min > g.r_max() * (1.0 + 1e-12))
      throw contract_violation("extract_radiation: window exits the grid");
  }

  RadiationProfile prof;
  prof.extracted_at = extraction_times;
  auto m = static_cast<std::size_t>(std::floor((eta_max - eta_min) / g.dr)) + 1;
  prof.eta_nodes.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    prof.eta_nodes[k] = eta_min + static_cast<double>(k) * g.dr;

  std::vector<std::vector<double>> samples;
  for (double t : extraction_times) {
    FieldState s = traj.state_at(t);
    WTransform wt = w_transform(s, g);
    std::vector<double> v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = interp_at(wt.v_plus, g, t - prof.eta_nodes[k]);
    samples.push_back(std::move(v));
  }
  prof.g_plus = samples.back();

  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    detail::kahan_sum s;
    for (std::size_t k = 0; k < m; ++k) {
      double d = samples[i][k] - samples[i + 1][k];
      s.add(d * d);
    }
    prof.cauchy_l2[{extraction_times[i], extraction_times[i + 1]}] = s.value() * g.dr;
  }
  return prof;
}

/// Mismatch between the state and the outgoing profile in the exterior
/// region r > t - eta:
/// int (|r^(1/2) u_t - g+(t-r)/2|^2 + |r^(1/2) u_r + g+(t-r)/2|^2) dr.
inline double exterior_error(const FieldState& state, const RadialGrid& grid,
                             const RadiationProfile& profile, double eta) {
  double t = state.t;
  double r_lo = t - eta;
  if (!(r_lo < grid.r_max()))
    throw contract_violation("exterior_error: t - eta outside the grid");
  auto ur = radial_derivative(state.u, grid);
  std::vector<double> f(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    double r = grid.nodes[j];
    double gp = 0.5 * profile.g_at(t - r);
    double a = std::sqrt(r) * state.ut[j] - gp;
    double b = std::sqrt(r) * ur[j] + gp;
    f[j] = a * a + b * b;
  }
  return line_integral_region(f, grid, std::max(r_lo, 0.0), grid.r_max(),
                              [](double) { return 1.0; });
}

/// Energy-norm distance || S_L(T2-T1)(u(T1), u_t(T1)) - (u(T2), u_t(T2)) ||
/// in H^1 x L^2, the Cauchy quantity of energy-space scattering.
inline double scattering_cauchy(const Trajectory& traj, const RadialGrid& grid, double t1,
                                double t2) {
  if (!(t1 >= 0.0) || !(t2 >= t1)) throw contract_violation("scattering_cauchy: need 0 <= T1 <= T2");
  FieldState a = traj.state_at(t1);
  FieldState b = traj.state_at(t2);
  FieldState lin = linear_propagate(a, t2 - t1, grid, traj.config.cfl);
  std::vector<double> du(grid.n), dut(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    du[j] = lin.u[j] - b.u[j];
    dut[j] = lin.ut[j] - b.ut[j];
  }
  auto dur = radial_derivative(du, grid);
  std::vector<double> f(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) f[j] = dur[j] * dur[j] + dut[j] * dut[j];
  return std::sqrt(radial_integral(f, grid));
}

}  // namespace rwave
