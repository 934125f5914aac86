#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rwave/calibration.hpp"
#include "rwave/config.hpp"
#include "rwave/diagnostics.hpp"
#include "rwave/errors.hpp"
#include "rwave/fit.hpp"
#include "rwave/ineq.hpp"
#include "rwave/io.hpp"
#include "rwave/radiation.hpp"
#include "rwave/solver.hpp"

namespace rwave {

inline constexpr const char* kSolverVersion = "rwave 1.0.0";

/// Per-snapshot scalar diagnostics for a forward run, with the running
/// Nakanishi integral and characteristic fluxes accumulated incrementally.
/// Q columns need the matching backward run; pass nullptr to leave them zero.
inline std::vector<DiagnosticRow> diagnostic_rows(const Trajectory& fwd, const Trajectory* bwd,
                                                  const std::vector<double>& kappas,
                                                  const std::vector<double>& flux_etas,
                                                  double q_mu2 = 0.0) {
  const RadialGrid& g = fwd.grid;
  double p = fwd.config.p;
  if (q_mu2 <= 0.0) q_mu2 = 0.5 / (p + 1.0);

  std::vector<DiagnosticRow> rows;
  rows.reserve(fwd.snapshots.size());

  double nak_cum = 0.0, nak_prev_t = 0.0, nak_prev_v = 0.0;
  bool nak_started = false;
  std::vector<double> flux_cum(flux_etas.size(), 0.0);
  std::vector<double> flux_prev_t(flux_etas.size(), 0.0);
  std::vector<double> flux_prev_v(flux_etas.size(), 0.0);
  std::vector<char> flux_started(flux_etas.size(), 0);

  auto nak_slice = [&](const FieldState& s) {
    auto ur = radial_derivative(s.u, g);
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
      double r = g.nodes[j];
      double lam = std::sqrt(s.t * s.t + r * r);
      double lam3 = lam * lam * lam;
      double m = r * s.ut[j] + s.t * ur[j];
      f[j] = m * m / lam3 +
             (p - 1.0) / (p + 1.0) * s.t * s.t * std::pow(std::abs(s.u[j]), p + 1.0) / lam3;
    }
    return radial_integral(f, g);
  };

  for (const auto& s : fwd.snapshots) {
    DiagnosticRow row;
    row.t = s.t;
    auto e = energy_density(s, g, p);
    row.E_total = radial_integral(e, g);
    for (double k : kappas)
      row.E_kappa.push_back(
          radial_integral(e, g, [k](double r) { return std::pow(r, k) + 1.0; }));
    row.interior_weighted = interior_weighted_energy(s, g, p);
    row.e_in = directional_energy(s, g, p, EnergyDirection::inward);
    row.e_out = directional_energy(s, g, p, EnergyDirection::outward);

    if (bwd != nullptr && s.t > 0.0 && -s.t >= bwd->t_min() - 1e-9)
      row.Q = q_of_t(fwd, *bwd, s.t, q_mu2);

    if (s.t >= 1.0) {
      double v = nak_slice(s);
      if (nak_started) nak_cum += 0.5 * (nak_prev_v + v) * (s.t - nak_prev_t);
      nak_started = true;
      nak_prev_t = s.t;
      nak_prev_v = v;
    }
    row.nakanishi_cum = nak_cum;

    for (std::size_t i = 0; i < flux_etas.size(); ++i) {
      double eta = flux_etas[i];
      double r = s.t - eta;
      if (r > g.nodes.front() && r < g.r_max()) {
        double u = interp_at(s.u, g, r);
        double v = r * std::pow(std::abs(u), p + 1.0);
        if (flux_started[i]) flux_cum[i] += 0.5 * (flux_prev_v[i] + v) * (s.t - flux_prev_t[i]);
        flux_started[i] = 1;
        flux_prev_t[i] = s.t;
        flux_prev_v[i] = v;
      }
      row.char_flux.push_back(flux_cum[i]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct PipelineOptions {
  std::string out_dir = "out";
  unsigned long long seed = calib::family_seed;
  bool gate = false;
};

/// Orchestrates one full run: forward (and, when identity or Q diagnostics
/// are requested, backward) evolution, the requested reports, and all file
/// outputs. Output bytes are deterministic for a fixed config.
inline RunManifest run_pipeline(const json& config_doc, const PipelineOptions& opt) {
  namespace fs = std::filesystem;
  auto t_start = std::chrono::steady_clock::now();

  json doc = config_doc;
  DiagnosticsRequest req;
  if (doc.contains("diagnostics")) {
    req = diagnostics_request_from_json(doc.at("diagnostics"));
    doc.erase("diagnostics");
  }
  SimConfig cfg = config_from_json(doc);

  fs::create_directories(opt.out_dir);
  RunManifest manifest;
  manifest.solver_version = kSolverVersion;
  {
    std::ostringstream os;
    os << "n=" << cfg.n << " dr=" << format_double(cfg.dr)
       << " R_max=" << format_double(cfg.r_max());
    manifest.grid_summary = os.str();
  }
  {
    std::ostringstream os;
    os << std::hex << config_hash(cfg);
    manifest.config_hash = os.str();
  }

  Trajectory fwd = evolve(cfg);
  manifest.step_count =
      (cfg.t_final > 0.0)
          ? static_cast<std::size_t>(std::ceil(cfg.t_final / (cfg.cfl * cfg.dr)))
          : 0;

  bool need_backward = (req.morawetz && !cfg.morawetz_R_list.empty()) || !req.q_times.empty();
  Trajectory bwd;
  if (need_backward) {
    double span = 0.0;
    for (const auto& m : cfg.morawetz_R_list) span = std::max(span, m.R + m.r);
    for (double t : req.q_times) span = std::max(span, t);
    SimConfig bcfg = cfg;
    bcfg.direction = TimeDirection::backward;
    bcfg.t_final = span;
    bwd = evolve(bcfg);
  }

  auto emit = [&](const std::string& name, const std::string& bytes) {
    fs::path path = fs::path(opt.out_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open " + path.string());
    os << bytes;
    manifest.outputs.push_back(path.string());
  };

  if (req.rows) {
    auto rows = diagnostic_rows(fwd, need_backward ? &bwd : nullptr, cfg.kappa_list,
                                req.char_flux_etas, req.q_mu2);
    std::ostringstream os;
    write_diagnostics_csv(rows, cfg.kappa_list, req.char_flux_etas, os);
    emit("diagnostics.csv", os.str());
  }

  if (req.morawetz) {
    json reports = json::array();
    for (const auto& m : cfg.morawetz_R_list)
      reports.push_back(to_json(morawetz_report(fwd, bwd, m.R, m.r, m.mu1, m.mu2)));
    emit("morawetz.json", reports.dump(2) + "\n");
  }

  if (req.nakanishi_T >= 1.0)
    emit("nakanishi.json", to_json(nakanishi_cumulative(fwd, req.nakanishi_T)).dump(2) + "\n");

  if (req.radiation) {
    std::vector<double> times = req.radiation_times;
    if (times.empty())
      times = {cfg.t_final / 4.0, cfg.t_final / 2.0, cfg.t_final};
    auto prof =
        extract_radiation(fwd, {req.radiation_eta_min, req.radiation_eta_max}, times);
    emit("radiation.json", to_json(prof).dump(2) + "\n");
  }

  bool gates_ok = true;
  if (req.inequalities) {
    json verdicts = json::array();
    // pointwise estimate on every recorded snapshot; report the worst
    InequalityVerdict worst;
    worst.pass = true;
    for (const auto& s : fwd.snapshots) {
      auto v = pointwise_estimate_check(s, fwd.grid, cfg.p);
      if (v.ratio >= worst.ratio) worst = v;
    }
    worst.name = "pointwise_estimate_all_snapshots";
    verdicts.push_back(to_json(worst));
    gates_ok = gates_ok && worst.pass;

    auto fam = synthetic_family(opt.seed, 50);
    double hardy_worst = 0.0;
    bool hardy_ok = true;
    for (const auto& spec : fam) {
      FieldState s = sample_initial_data(spec, fwd.grid);
      auto v = weighted_hardy_check(s.u, fwd.grid, 0.5, 1.0, 0.0,
                                    calib::hardy_constant_kappa_half);
      hardy_worst = std::max(hardy_worst, v.ratio);
      hardy_ok = hardy_ok && v.pass;
    }
    json hv = {{"name", "weighted_hardy_family"},
               {"ratio", hardy_worst},
               {"constant_bound", calib::hardy_constant_kappa_half},
               {"pass", hardy_ok},
               {"seed", opt.seed},
               {"members", fam.size()}};
    verdicts.push_back(hv);
    gates_ok = gates_ok && hardy_ok;

    if (cfg.t_final > 0.0) {
      double tp = std::min(cfg.t_final, 10.0);
      // keep R - t' inside the data support so the comparison integral is alive
      double R = std::min(tp + 0.5 * cfg.data.support_radius(), 0.5 * cfg.r_max());
      if (R + tp < cfg.r_max()) {
        auto v1 = finite_speed_weight_check(fwd, WeightSpec{1.0, 0.0}, R, tp,
                                            calib::finite_speed_tolerance);
        v1.name = "finite_speed_plain";
        auto v2 = finite_speed_weight_check(fwd, WeightSpec{1.0, 0.7}, R, tp,
                                            calib::finite_speed_tolerance);
        v2.name = "finite_speed_weight_0.7";
        verdicts.push_back(to_json(v1));
        verdicts.push_back(to_json(v2));
        gates_ok = gates_ok && v1.pass && v2.pass;
      }
    }
    emit("verdicts.json", verdicts.dump(2) + "\n");
  }

  if (req.write_snapshots > 0) {
    for (std::size_t i = 0; i < fwd.snapshots.size(); i += req.write_snapshots) {
      std::ostringstream os;
      write_snapshot_csv(fwd.snapshots[i], fwd.grid, os);
      emit("snapshot_" + std::to_string(i) + ".csv", os.str());
    }
  }

  manifest.all_gates_passed = gates_ok;
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  {
    fs::path path = fs::path(opt.out_dir) / "manifest.json";
    std::ofstream os(path, std::ios::binary);
    manifest.outputs.push_back(path.string());
    os << to_json(manifest).dump(2) << "\n";
  }
  return manifest;
}

}  // namespace rwave
