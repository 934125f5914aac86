// Command-line front end: each subcommand exposes one verification surface
// (full pipeline, Morawetz identity, radiation extraction, inequality lab,
// refinement ladder, decay-rate fits).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwave/calibration.hpp"
#include "rwave/diagnostics.hpp"
#include "rwave/fit.hpp"
#include "rwave/ineq.hpp"
#include "rwave/io.hpp"
#include "rwave/lab.hpp"
#include "rwave/pipeline.hpp"
#include "rwave/radiation.hpp"
#include "rwave/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitIo = 4;
constexpr int kExitGate = 5;

rwave::json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot open config file " + path);
  rwave::json doc;
  is >> doc;
  return doc;
}

void write_text(const std::string& dir, const std::string& name, const std::string& bytes) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot write " + name);
  os << bytes;
}

// Split a config into (sim config, diagnostics request).
std::pair<rwave::SimConfig, rwave::DiagnosticsRequest> split_config(rwave::json doc) {
  rwave::DiagnosticsRequest req;
  if (doc.contains("diagnostics")) {
    req = rwave::diagnostics_request_from_json(doc.at("diagnostics"));
    doc.erase("diagnostics");
  }
  return {rwave::config_from_json(doc), req};
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            unsigned long long seed, bool gate) {
  rwave::PipelineOptions opt;
  opt.out_dir = out_dir;
  opt.seed = seed;
  opt.gate = gate;
  rwave::RunManifest m = rwave::run_pipeline(load_config(config_path), opt);
  std::cout << "run complete: " << m.outputs.size() << " artifacts, " << m.step_count
            << " steps, " << m.wall_seconds << " s\n";
  if (gate && !m.all_gates_passed) {
    std::cerr << "gated checks failed\n";
    return kExitGate;
  }
  return kExitOk;
}

int cmd_identity(const std::string& config_path, const std::string& out_dir, bool gate) {
  auto [cfg, req] = split_config(load_config(config_path));
  (void)req;
  if (cfg.morawetz_R_list.empty())
    throw rwave::config_error("identity: config needs a nonempty morawetz_R_list");
  double span = 0.0;
  for (const auto& m : cfg.morawetz_R_list) span = std::max(span, m.R + m.r);
  if (cfg.t_final < span) cfg.t_final = span;
  cfg.validate();

  rwave::Trajectory fwd = rwave::evolve(cfg);
  rwave::SimConfig bcfg = cfg;
  bcfg.direction = rwave::TimeDirection::backward;
  rwave::Trajectory bwd = rwave::evolve(bcfg);

  bool ok = true;
  rwave::json reports = rwave::json::array();
  for (const auto& m : cfg.morawetz_R_list) {
    auto rep = rwave::morawetz_report(fwd, bwd, m.R, m.r, m.mu1, m.mu2);
    reports.push_back(rwave::to_json(rep));
    double rel = std::abs(rep.residual) / std::abs(rep.two_E);
    std::cout << "R=" << m.R << " r=" << m.r << "  |identity - 2E|/2E = " << rel
              << "  slack = " << rep.slack << "\n";
    if (rel > 1e-2 || rep.slack < -1e-3 * rep.two_E / 2.0) ok = false;
  }
  write_text(out_dir, "morawetz.json", reports.dump(2) + "\n");
  return (gate && !ok) ? kExitGate : kExitOk;
}

int cmd_radiation(const std::string& config_path, const std::string& out_dir) {
  auto [cfg, req] = split_config(load_config(config_path));
  rwave::Trajectory fwd = rwave::evolve(cfg);
  std::vector<double> times = req.radiation_times;
  if (times.empty()) times = {cfg.t_final / 4.0, cfg.t_final / 2.0, cfg.t_final};
  auto prof = rwave::extract_radiation(
      fwd, {req.radiation_eta_min, req.radiation_eta_max}, times);
  write_text(out_dir, "radiation.json", rwave::to_json(prof).dump(2) + "\n");
  std::cout << "profile energy pi*int|g+|^2 = " << prof.energy() << "\n";
  for (const auto& [pair, l2] : prof.cauchy_l2)
    std::cout << "cauchy_l2(" << pair.first << ", " << pair.second << ") = " << l2 << "\n";
  return kExitOk;
}

int cmd_inequalities(const std::string& out_dir, unsigned long long seed, bool gate) {
  auto fam = rwave::synthetic_family(seed, 50);
  rwave::RadialGrid grid(0.02, 4096);  // R_max ~ 82, plenty for the family profiles
  rwave::json verdicts = rwave::json::array();
  bool ok = true;

  for (std::size_t i = 0; i < fam.size(); ++i) {
    rwave::FieldState s = rwave::sample_initial_data(fam[i], grid);
    auto pw = rwave::pointwise_estimate_check(s, grid, 5.0);
    auto hd = rwave::weighted_hardy_check(s.u, grid, 0.5, 1.0, 0.0,
                                          rwave::calib::hardy_constant_kappa_half);
    ok = ok && pw.pass && hd.pass;
    verdicts.push_back({{"member", i},
                        {"pointwise", rwave::to_json(pw)},
                        {"hardy", rwave::to_json(hd)}});
  }

  // finite-speed checks need a short evolution per member
  rwave::RadialGrid coarse(0.05, 1024);  // R_max ~ 51
  for (std::size_t i = 0; i < fam.size(); ++i) {
    auto traj = rwave::lab_trajectory(fam[i], coarse, 5.0, 0.45, 10.0);
    // keep R - t' inside the member's support so the comparison side is alive
    double tp = 10.0;
    double R = std::min(tp + 0.5 * fam[i].support_radius(), 20.0);
    auto fs = rwave::finite_speed_weight_check(traj, rwave::WeightSpec{1.0, 0.7}, R, tp,
                                               rwave::calib::finite_speed_tolerance);
    ok = ok && fs.pass;
    verdicts[i]["finite_speed"] = rwave::to_json(fs);
  }

  rwave::json doc = {{"seed", seed}, {"members", fam.size()}, {"verdicts", verdicts}};
  write_text(out_dir, "verdicts.json", doc.dump(2) + "\n");
  std::cout << (ok ? "inequality lab: all members pass\n"
                   : "inequality lab: FAILURES present\n");
  return (gate && !ok) ? kExitGate : kExitOk;
}

int cmd_converge(const std::string& config_path, const std::string& out_dir, int threads) {
  rwave::json base_doc = load_config(config_path);
  auto run_member = [&](int level) {
    rwave::json doc = base_doc;
    doc.erase("diagnostics");
    double scale = std::pow(2.0, level);
    doc["dr"] = base_doc.at("dr").get<double>() / scale;
    doc["n"] = static_cast<std::size_t>(base_doc.at("n").get<std::size_t>() * scale);
    rwave::SimConfig cfg = rwave::config_from_json(doc);
    rwave::Trajectory fwd = rwave::evolve(cfg);
    double E0 = rwave::total_energy(fwd.snapshots.front(), fwd.grid, cfg.p);
    double drift = 0.0;
    for (const auto& s : fwd.snapshots)
      drift = std::max(drift,
                       std::abs(rwave::total_energy(s, fwd.grid, cfg.p) - E0) / E0);
    double residual = 0.0;
    if (!cfg.morawetz_R_list.empty()) {
      rwave::SimConfig bcfg = cfg;
      bcfg.direction = rwave::TimeDirection::backward;
      const auto& m = cfg.morawetz_R_list.front();
      bcfg.t_final = std::max(cfg.t_final, m.R + m.r);
      rwave::Trajectory bwd = rwave::evolve(bcfg);
      auto rep = rwave::morawetz_report(fwd, bwd, m.R, m.r, m.mu1, m.mu2);
      residual = std::abs(rep.residual) / std::abs(rep.two_E);
    }
    return std::make_pair(drift, residual);
  };

  std::vector<std::pair<double, double>> results(3);
  if (threads > 1) {
    std::vector<std::future<std::pair<double, double>>> futs;
    for (int lvl = 0; lvl < 3; ++lvl)
      futs.push_back(std::async(std::launch::async, run_member, lvl));
    for (int lvl = 0; lvl < 3; ++lvl) results[lvl] = futs[lvl].get();
  } else {
    for (int lvl = 0; lvl < 3; ++lvl) results[lvl] = run_member(lvl);
  }

  rwave::json ladder = rwave::json::array();
  for (int lvl = 0; lvl < 3; ++lvl)
    ladder.push_back({{"refinement", lvl},
                      {"energy_drift", results[lvl].first},
                      {"morawetz_residual", results[lvl].second}});
  auto order = [](double coarse, double fine) {
    return (coarse > 0 && fine > 0) ? std::log2(coarse / fine) : 0.0;
  };
  rwave::json doc = {
      {"ladder", ladder},
      {"drift_order_01", order(results[0].first, results[1].first)},
      {"drift_order_12", order(results[1].first, results[2].first)},
      {"residual_order_01", order(results[0].second, results[1].second)},
      {"residual_order_12", order(results[1].second, results[2].second)}};
  write_text(out_dir, "converge.json", doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_ratefit(const std::string& csv_path, const std::string& column, double tmin,
                double tmax) {
  std::ifstream is(csv_path);
  if (!is) throw std::ios_base::failure("cannot open " + csv_path);
  std::string header;
  if (!std::getline(is, header)) throw rwave::contract_violation("ratefit: empty csv");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  std::size_t idx = cols.size();
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == column) idx = i;
  if (idx == cols.size())
    throw rwave::contract_violation("ratefit: no column named '" + column + "'");

  std::vector<std::pair<double, double>> series;
  std::string line;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(rwave::parse_double(cell));
    if (vals.empty()) continue;
    double t = vals[0];
    if (t < tmin || t > tmax) continue;
    if (vals[idx] > 0.0) series.emplace_back(t, vals[idx]);
  }
  auto fit = rwave::fit_decay_rate(series);
  std::cout << column << " ~ t^-" << fit.exponent << "  (r^2 = " << fit.r_squared << ", "
            << series.size() << " points)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial defocusing wave solver and scattering diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", csv_path, column = "e_in";
  unsigned long long seed = rwave::calib::family_seed;
  int threads = 1;
  bool gate = false;
  double tmin = 0.0, tmax = 1e300;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--seed", seed, "seed for synthetic families");
    sub->add_flag("--gate", gate, "nonzero exit when a gated check fails");
  };

  auto* run = app.add_subcommand("run", "full pipeline for one config");
  add_common(run, true);
  auto* identity = app.add_subcommand("identity", "Morawetz identity report only");
  add_common(identity, true);
  auto* radiation = app.add_subcommand("radiation", "radiation profile extraction");
  add_common(radiation, true);
  auto* ineq = app.add_subcommand("inequalities", "inequality lab on the seeded family");
  add_common(ineq, false);
  auto* converge = app.add_subcommand("converge", "refinement ladder dr, dr/2, dr/4");
  add_common(converge, true);
  auto* ratefit = app.add_subcommand("ratefit", "decay-exponent fit on a diagnostics CSV");
  ratefit->add_option("--csv", csv_path, "diagnostics CSV")->required();
  ratefit->add_option("--column", column, "column to fit");
  ratefit->add_option("--tmin", tmin, "fit window start");
  ratefit->add_option("--tmax", tmax, "fit window end");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed, gate);
    if (identity->parsed()) return cmd_identity(config_path, out_dir, gate);
    if (radiation->parsed()) return cmd_radiation(config_path, out_dir);
    if (ineq->parsed()) return cmd_inequalities(out_dir, seed, gate);
    if (converge->parsed()) return cmd_converge(config_path, out_dir, threads);
    if (ratefit->parsed()) return cmd_ratefit(csv_path, column, tmin, tmax);
  } catch (const rwave::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rwave::blowup_error& e) {
    std::cerr << "solver blow-up: " << e.what() << "\n";
    return kExitBlowup;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
