#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rwave/errors.hpp"
#include "rwave/grid.hpp"
#include "rwave/solver.hpp"
#include "rwave/state.hpp"

namespace rwave {

/// Energy density e = 1/2 |u_r|^2 + 1/2 |u_t|^2 + 1/(p+1) |u|^(p+1) at each node.
inline std::vector<double> energy_density(const FieldState& state, const RadialGrid& grid,
                                          double p) {
  std::vector<double> ur = radial_derivative(state.u, grid);
  std::vector<double> e(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    e[j] = 0.5 * ur[j] * ur[j] + 0.5 * state.ut[j] * state.ut[j] +
           std::pow(std::abs(state.u[j]), p + 1.0) / (p + 1.0);
  }
  return e;
}

inline double total_energy(const FieldState& state, const RadialGrid& grid, double p) {
  return radial_integral(energy_density(state, grid, p), grid);
}

/// Weighted energy E_kappa = int (|x|^kappa + 1) e dx.
inline double weighted_energy(const FieldState& state, const RadialGrid& grid, double p,
                              double kappa) {
  if (kappa < 0.0) throw contract_violation("weighted_energy: kappa must be nonnegative");
  auto e = energy_density(state, grid, p);
  return radial_integral(e, grid, [kappa](double r) { return std::pow(r, kappa) + 1.0; });
}

/// int_{|x|<|t|} (|t|-|x|)/|t| e dx; zero when the cone has not yet opened.
inline double interior_weighted_energy(const FieldState& state, const RadialGrid& grid, double p) {
  double T = std::abs(state.t);
  if (T <= grid.nodes.front()) return 0.0;
  auto e = energy_density(state, grid, p);
  return radial_integral_region(e, grid, 0.0, T,
                                [T](double r) { return (T - r) / T; });
}

enum class EnergyDirection { inward, outward };

/// Directional energy int (|u_r +- u_t|^2 + |u|^(p+1)) dx. For positive times
/// the inward part uses +u_t (it vanishes as t -> +infinity).
inline double directional_energy(const FieldState& state, const RadialGrid& grid, double p,
                                 EnergyDirection dir) {
  auto ur = radial_derivative(state.u, grid);
  double sign = (dir == EnergyDirection::inward) ? 1.0 : -1.0;
  std::vector<double> f(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    double q = ur[j] + sign * state.ut[j];
    f[j] = q * q + std::pow(std::abs(state.u[j]), p + 1.0);
  }
  return radial_integral(f, grid);
}

namespace detail {

/// Sample times for a trapezoid rule over [a, b]: every snapshot time inside
/// plus the two endpoints exactly (states there are time-interpolated).
inline std::vector<double> trapezoid_times(const std::vector<double>& snapshot_times, double a,
                                           double b) {
  std::vector<double> ts;
  ts.push_back(a);
  for (double t : snapshot_times)
    if (t > a && t < b) ts.push_back(t);
  ts.push_back(b);
  std::sort(ts.begin(), ts.end());
  return ts;
}

/// Two-branch view of an evolution: nonnegative times from the forward run,
/// negative times from the backward run of the same data.
struct TwoSidedRun {
  const Trajectory& fwd;
  const Trajectory& bwd;

  FieldState at(double t) const { return (t >= 0.0) ? fwd.state_at(t) : bwd.state_at(t); }

  std::vector<double> times(double a, double b) const {
    std::vector<double> ts;
    for (const auto& s : bwd.snapshots)
      if (s.t < 0.0) ts.push_back(s.t);
    for (const auto& s : fwd.snapshots) ts.push_back(s.t);
    std::sort(ts.begin(), ts.end());
    return trapezoid_times(ts, a, b);
  }

  void check_coverage(double a, double b) const {
    double lo = std::min(bwd.t_min(), fwd.t_min());
    double hi = std::max(bwd.t_max(), fwd.t_max());
    double tol = 1e-9 * (1.0 + std::abs(b));
    if (a < lo - tol || b > hi + tol)
      throw contract_violation("diagnostics: trajectories do not cover the requested time span");
  }
};

template <class F>
double trapezoid_in_time(const std::vector<double>& ts, F&& value_at) {
  kahan_sum s;
  double prev_t = ts.front();
  double prev_v = value_at(prev_t);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double v = value_at(ts[i]);
    s.add(0.5 * (prev_v + v) * (ts[i] - prev_t));
    prev_t = ts[i];
    prev_v = v;
  }
  return s.value();
}

}  // namespace detail

/// Every term group of the Morawetz identity over [-(R+r), R+r], plus the
/// M_j ledger of the derived energy-distribution inequality.
struct MorawetzReport {
  double R = 0.0, r = 0.0, mu1 = 0.0, mu2 = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;

  // identity term groups
  double interior_bulk = 0.0;
  double circle_term = 0.0;
  double exterior_bulk = 0.0;
  double endpoint_interior = 0.0;
  double endpoint_exterior = 0.0;
  double identity_sum = 0.0;
  double two_E = 0.0;
  double residual = 0.0;

  // inequality ledger
  double M1 = 0.0, M2 = 0.0, M3 = 0.0, M4 = 0.0, M5 = 0.0, M6 = 0.0;
  double rhs_data_term = 0.0;
  double rhs_tail_terms = 0.0;
  double slack = 0.0;

  double sum_M() const { return M1 + M2 + M3 + M4 + M5 + M6; }
};

namespace detail {

// int_{|x|<R} of the bulk integrand |u_r|^2 + |u_t|^2 + c |u|^(p+1).
inline double interior_bulk_slice(const FieldState& s, const RadialGrid& g, double p, double R,
                                  double coeff) {
  auto ur = radial_derivative(s.u, g);
  std::vector<double> f(g.n);
  for (std::size_t j = 0; j < g.n; ++j)
    f[j] = ur[j] * ur[j] + s.ut[j] * s.ut[j] + coeff * std::pow(std::abs(s.u[j]), p + 1.0);
  return radial_integral_region(f, g, 0.0, R, [](double) { return 1.0; });
}

// Endpoint integrand of the identity / M5, |x| < R, with u_t sign `sign`.
inline double endpoint_interior_slice(const FieldState& s, const RadialGrid& g, double p, double R,
                                      double sign) {
  auto ur = radial_derivative(s.u, g);
  std::vector<double> f(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    double r = g.nodes[j];
    double u = s.u[j];
    double q = (r / R) * ur[j] + u / (2.0 * R) + sign * s.ut[j];
    f[j] = (R * R - r * r) / (2.0 * R * R) * ur[j] * ur[j] + 0.5 * q * q +
           3.0 * u * u / (8.0 * R * R) + std::pow(std::abs(u), p + 1.0) / (p + 1.0);
  }
  return radial_integral_region(f, g, 0.0, R, [](double) { return 1.0; });
}

// Endpoint integrand, |x| > R: 1/2 |u_r + u/(2|x|) + sign u_t|^2 + c_pp1 |u|^(p+1) + c_u2 |u|^2/|x|^2.
inline double endpoint_exterior_slice(const FieldState& s, const RadialGrid& g, double p, double R,
                                      double sign, double c_pp1, double c_u2) {
  auto ur = radial_derivative(s.u, g);
  std::vector<double> f(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    double r = g.nodes[j];
    double u = s.u[j];
    double q = ur[j] + u / (2.0 * r) + sign * s.ut[j];
    f[j] = 0.5 * q * q + c_pp1 * std::pow(std::abs(u), p + 1.0) + c_u2 * u * u / (r * r);
  }
  return radial_integral_region(f, g, R, g.r_max(), [](double) { return 1.0; });
}

// Tail endpoint integrand, |x| > R: (9/8) |u|^2/|x|^2 - lambda2 |u|^(p+1).
inline double endpoint_exterior_slice2(const FieldState& s, const RadialGrid& g, double p,
                                       double R, double lambda2) {
  std::vector<double> f(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    double r = g.nodes[j];
    double u = s.u[j];
    f[j] = 9.0 / 8.0 * u * u / (r * r) - lambda2 * std::pow(std::abs(u), p + 1.0);
  }
  return radial_integral_region(f, g, R, g.r_max(), [](double) { return 1.0; });
}

// Exterior bulk integrand: c1 |u|^(p+1)/|x| + c2 |u|^2/|x|^3.
inline double exterior_bulk_slice(const FieldState& s, const RadialGrid& g, double p, double R,
                                  double c1, double c2) {
  std::vector<double> f(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    double r = g.nodes[j];
    double u = s.u[j];
    f[j] = c1 * std::pow(std::abs(u), p + 1.0) / r + c2 * u * u / (r * r * r);
  }
  return radial_integral_region(f, g, R, g.r_max(), [](double) { return 1.0; });
}

}  // namespace detail

/// Evaluate the Morawetz identity and the M_j ledger for one (R, r, mu1, mu2).
/// Both trajectories must stem from the same initial data and jointly cover
/// [-(R+r), R+r]; time integration is trapezoid over the snapshot cadence.
inline MorawetzReport morawetz_report(const Trajectory& traj_fwd, const Trajectory& traj_bwd,
                                      double R, double r, double mu1, double mu2) {
  const SimConfig& cfg = traj_fwd.config;
  const RadialGrid& g = traj_fwd.grid;
  double p = cfg.p;
  double T0 = R + r;
  if (mu1 < 0.0 || mu1 > 2.0 * (p - 1.0) / (p + 1.0) || mu2 < 0.0 || mu2 > 1.0 / (p + 1.0))
    throw contract_violation("morawetz_report: mu out of admissible range");

  detail::TwoSidedRun run{traj_fwd, traj_bwd};
  run.check_coverage(-T0, T0);
  auto ts = run.times(-T0, T0);

  MorawetzReport rep;
  rep.R = R;
  rep.r = r;
  rep.mu1 = mu1;
  rep.mu2 = mu2;
  rep.lambda1 = 2.0 * (p - 1.0) / (p + 1.0) - mu1;
  rep.lambda2 = 1.0 / (p + 1.0) - mu2;

  // --- identity term groups ---
  rep.interior_bulk = detail::trapezoid_in_time(ts, [&](double t) {
                        return detail::interior_bulk_slice(run.at(t), g, p, R,
                                                           (p - 3.0) / (p + 1.0));
                      }) /
                      (2.0 * R);
  // circle term: int_{|x|=R} |u|^2 dsigma = 2 pi R |u(R,t)|^2 in radial reduction
  rep.circle_term = detail::trapezoid_in_time(ts, [&](double t) {
    FieldState s = run.at(t);
    double uR = interp_at(s.u, g, R);
    return M_PI / (2.0 * R) * uR * uR;
  });
  rep.exterior_bulk = detail::trapezoid_in_time(ts, [&](double t) {
    return detail::exterior_bulk_slice(run.at(t), g, p, R, (p - 1.0) / (2.0 * (p + 1.0)), -0.25);
  });
  {
    FieldState s1 = run.at(-T0);
    FieldState s2 = run.at(T0);
    rep.endpoint_interior = detail::endpoint_interior_slice(s1, g, p, R, -1.0) +
                            detail::endpoint_interior_slice(s2, g, p, R, +1.0);
    rep.endpoint_exterior =
        detail::endpoint_exterior_slice(s1, g, p, R, -1.0, 1.0 / (p + 1.0), -0.125) +
        detail::endpoint_exterior_slice(s2, g, p, R, +1.0, 1.0 / (p + 1.0), -0.125);
  }
  rep.identity_sum = rep.interior_bulk + rep.circle_term + rep.exterior_bulk +
                     rep.endpoint_interior + rep.endpoint_exterior;
  rep.two_E = 2.0 * total_energy(traj_fwd.snapshots.front(), g, p);
  rep.residual = rep.identity_sum - rep.two_E;

  // --- M_j ledger ---
  if (r > 0.0) {
    auto ts_neg = detail::trapezoid_times(ts, -T0, -R);
    auto ts_pos = detail::trapezoid_times(ts, R, T0);
    auto bulk = [&](double t) {
      return detail::interior_bulk_slice(run.at(t), g, p, R, (p - 3.0) / (p + 1.0));
    };
    rep.M1 = (detail::trapezoid_in_time(ts_neg, bulk) + detail::trapezoid_in_time(ts_pos, bulk)) /
             (2.0 * R);
  }
  {
    auto ts_mid = detail::trapezoid_times(ts, -R, R);
    rep.M2 = (p - 5.0) / (2.0 * (p + 1.0) * R) *
             detail::trapezoid_in_time(ts_mid, [&](double t) {
               FieldState s = run.at(t);
               std::vector<double> f(g.n);
               for (std::size_t j = 0; j < g.n; ++j)
                 f[j] = std::pow(std::abs(s.u[j]), p + 1.0);
               return radial_integral_region(f, g, 0.0, R, [](double) { return 1.0; });
             });
  }
  rep.M3 = rep.circle_term;
  rep.M4 = detail::trapezoid_in_time(ts, [&](double t) {
    return detail::exterior_bulk_slice(run.at(t), g, p, R, mu1, 1.0);
  });
  {
    FieldState s1 = run.at(-T0);
    FieldState s2 = run.at(T0);
    rep.M5 = detail::endpoint_interior_slice(s1, g, p, R, -1.0) +
             detail::endpoint_interior_slice(s2, g, p, R, +1.0);
    rep.M6 = detail::endpoint_exterior_slice(s1, g, p, R, -1.0, mu2, 1.0) +
             detail::endpoint_exterior_slice(s2, g, p, R, +1.0, mu2, 1.0);
    rep.rhs_tail_terms =
        detail::endpoint_exterior_slice2(s1, g, p, R, rep.lambda2) +
        detail::endpoint_exterior_slice2(s2, g, p, R, rep.lambda2) +
        detail::trapezoid_in_time(ts, [&](double t) {
          return detail::exterior_bulk_slice(run.at(t), g, p, R, -rep.lambda1, 1.25);
        });
  }
  {
    const FieldState& d0 = traj_fwd.snapshots.front();
    auto ur = radial_derivative(d0.u, g);
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j)
      f[j] = ur[j] * ur[j] + d0.ut[j] * d0.ut[j] +
             2.0 / (p + 1.0) * std::pow(std::abs(d0.u[j]), p + 1.0);
    rep.rhs_data_term =
        radial_integral(f, g, [R](double rr) { return std::min(rr / R, 1.0); });
  }
  rep.slack = rep.rhs_data_term + rep.rhs_tail_terms - rep.sum_M();
  return rep;
}

/// Q(t): the recurrence quantity of the sub-conformal energy-distribution
/// argument, with the free constants c1 = c2 = 1.
inline double q_of_t(const Trajectory& traj_fwd, const Trajectory& traj_bwd, double t,
                     double mu2) {
  if (!(t > 0.0)) throw contract_violation("q_of_t: t must be positive");
  const RadialGrid& g = traj_fwd.grid;
  double p = traj_fwd.config.p;
  detail::TwoSidedRun run{traj_fwd, traj_bwd};
  run.check_coverage(-t, t);

  double q = 0.0;
  for (double sign : {+1.0, -1.0}) {
    FieldState s = run.at(sign * t);
    std::vector<double> upp(g.n);
    for (std::size_t j = 0; j < g.n; ++j) upp[j] = std::pow(std::abs(s.u[j]), p + 1.0);
    q += mu2 * radial_integral(upp, g);

    auto ur = radial_derivative(s.u, g);
    std::vector<double> grad(g.n);
    for (std::size_t j = 0; j < g.n; ++j) grad[j] = ur[j] * ur[j] + s.ut[j] * s.ut[j];
    q += radial_integral_region(grad, g, 0.0, t, [t](double r) { return (t - r) / t; });

    std::vector<double> dirs(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
      double v = ur[j] + sign * s.ut[j];
      dirs[j] = v * v;
    }
    q += radial_integral(dirs, g);
  }
  return q;
}

/// Cumulative space-time integral of the coercive Nakanishi-multiplier
/// integrand from t = 1 to T, together with the energy bound it is tested
/// against.
struct NakanishiReport {
  double T = 0.0;
  double cumulative = 0.0;       // I(T)
  double bound_value = 0.0;      // E + E^(2/(p+1))
};

inline NakanishiReport nakanishi_cumulative(const Trajectory& traj_fwd, double T) {
  if (T < 1.0) throw contract_violation("nakanishi_cumulative: T must be at least 1");
  const RadialGrid& g = traj_fwd.grid;
  double p = traj_fwd.config.p;
  if (traj_fwd.t_max() + 1e-9 < T || traj_fwd.t_min() > 1.0)
    throw contract_violation("nakanishi_cumulative: snapshots do not cover [1, T]");

  std::vector<double> snap_times;
  for (const auto& s : traj_fwd.snapshots) snap_times.push_back(s.t);
  auto ts = detail::trapezoid_times(snap_times, 1.0, T);

  NakanishiReport rep;
  rep.T = T;
  rep.cumulative = detail::trapezoid_in_time(ts, [&](double t) {
    FieldState s = traj_fwd.state_at(t);
    auto ur = radial_derivative(s.u, g);
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
      double r = g.nodes[j];
      double lam = std::sqrt(t * t + r * r);
      double lam3 = lam * lam * lam;
      double m = r * s.ut[j] + t * ur[j];
      f[j] = m * m / lam3 +
             (p - 1.0) / (p + 1.0) * t * t * std::pow(std::abs(s.u[j]), p + 1.0) / lam3;
    }
    return radial_integral(f, g);
  });
  double E = total_energy(traj_fwd.snapshots.front(), g, p);
  rep.bound_value = E + std::pow(E, 2.0 / (p + 1.0));
  return rep;
}

/// Energy flux along the outgoing characteristic r = t - eta:
/// int_{t1}^{t2} (t - eta) |u(t - eta, t)|^(p+1) dt.
inline double characteristic_flux(const Trajectory& traj_fwd, double eta, double t1, double t2) {
  const RadialGrid& g = traj_fwd.grid;
  double p = traj_fwd.config.p;
  if (!(t2 > t1) || !(t1 > eta + g.nodes.front()))
    throw contract_violation("characteristic_flux: need t2 > t1 > eta + first node");
  if (t2 - eta > g.r_max())
    throw contract_violation("characteristic_flux: characteristic exits the grid");
  if (traj_fwd.t_max() + 1e-9 < t2 || traj_fwd.t_min() > t1 + 1e-9)
    throw contract_violation("characteristic_flux: snapshots do not cover [t1, t2]");

  std::vector<double> snap_times;
  for (const auto& s : traj_fwd.snapshots) snap_times.push_back(s.t);
  auto ts = detail::trapezoid_times(snap_times, t1, t2);
  return detail::trapezoid_in_time(ts, [&](double t) {
    FieldState s = traj_fwd.state_at(t);
    double r = t - eta;
    double u = interp_at(s.u, g, r);
    return r * std::pow(std::abs(u), p + 1.0);
  });
}

/// One time slice of all scalar diagnostics.
struct DiagnosticRow {
  double t = 0.0;
  double E_total = 0.0;
  std::vector<double> E_kappa;       // per config.kappa_list
  double interior_weighted = 0.0;
  double e_in = 0.0;
  double e_out = 0.0;
  double Q = 0.0;                    // 0 unless a backward run was available
  double nakanishi_cum = 0.0;        // I(min(t, T)) running value, 0 for t < 1
  std::vector<double> char_flux;     // per tracked eta
};

}  // namespace rwave
