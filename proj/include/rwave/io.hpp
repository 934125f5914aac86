#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwave/config.hpp"
#include "rwave/diagnostics.hpp"
#include "rwave/errors.hpp"
#include "rwave/ineq.hpp"
#include "rwave/radiation.hpp"
#include "rwave/state.hpp"

namespace rwave {

using nlohmann::json;

/// Shortest representation that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw contract_violation("parse_double: bad literal '" + s + "'");
  return v;
}

// ---------------------------------------------------------------------------
// Requested-diagnostics block
// ---------------------------------------------------------------------------

struct DiagnosticsRequest {
  bool rows = true;
  bool morawetz = false;           // evaluates config.morawetz_R_list
  double nakanishi_T = 0.0;        // 0 = off
  double q_mu2 = 0.0;              // 0 = use 1/(2(p+1))
  std::vector<double> q_times;
  std::vector<double> char_flux_etas;
  bool radiation = false;
  double radiation_eta_min = -10.0;
  double radiation_eta_max = 40.0;
  std::vector<double> radiation_times;
  bool inequalities = false;
  std::size_t write_snapshots = 0;  // write every Nth recorded snapshot; 0 = none
};

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw config_error("config: unknown key '" + it.key() + "' in " + where);
  }
}

inline const json& require_key(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw config_error("config: missing key '" + std::string(key) + "' in " + where);
  return j.at(key);
}

}  // namespace detail

inline InitialDataSpec data_spec_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"family", "amplitude", "width", "beta", "ut_mode", "ut_values"},
                              "data");
  InitialDataSpec s;
  std::string fam = j.value("family", "gaussian");
  if (fam == "gaussian")
    s.family = DataFamily::gaussian;
  else if (fam == "smooth-bump")
    s.family = DataFamily::smooth_bump;
  else if (fam == "polynomial-decay")
    s.family = DataFamily::polynomial_decay;
  else
    throw config_error("config: unknown data family '" + fam + "'");
  s.amplitude = j.value("amplitude", 1.0);
  s.width = j.value("width", 1.0);
  s.beta = j.value("beta", 2.0);
  std::string utm = j.value("ut_mode", "zero");
  if (utm == "zero") {
    s.ut_zero = true;
  } else if (utm == "specified") {
    s.ut_zero = false;
    s.ut_values = detail::require_key(j, "ut_values", "data").get<std::vector<double>>();
  } else {
    throw config_error("config: ut_mode must be 'zero' or 'specified'");
  }
  return s;
}

inline json data_spec_to_json(const InitialDataSpec& s) {
  json j;
  switch (s.family) {
    case DataFamily::gaussian: j["family"] = "gaussian"; break;
    case DataFamily::smooth_bump: j["family"] = "smooth-bump"; break;
    case DataFamily::polynomial_decay: j["family"] = "polynomial-decay"; break;
  }
  j["amplitude"] = s.amplitude;
  j["width"] = s.width;
  j["beta"] = s.beta;
  j["ut_mode"] = s.ut_zero ? "zero" : "specified";
  if (!s.ut_zero) j["ut_values"] = s.ut_values;
  return j;
}

inline SimConfig config_from_json(const json& j) {
  detail::reject_unknown_keys(j,
                              {"p", "dr", "n", "cfl", "t_final", "direction", "nonlinear", "data",
                               "output_every", "kappa_list", "morawetz_R_list", "diagnostics"},
                              "config");
  SimConfig c;
  c.p = detail::require_key(j, "p", "config").get<double>();
  c.dr = detail::require_key(j, "dr", "config").get<double>();
  c.n = detail::require_key(j, "n", "config").get<std::size_t>();
  c.cfl = j.value("cfl", 0.45);
  c.t_final = detail::require_key(j, "t_final", "config").get<double>();
  std::string dir = j.value("direction", "forward");
  if (dir == "forward")
    c.direction = TimeDirection::forward;
  else if (dir == "backward")
    c.direction = TimeDirection::backward;
  else
    throw config_error("config: direction must be 'forward' or 'backward'");
  c.nonlinear = j.value("nonlinear", true);
  if (j.contains("data")) c.data = data_spec_from_json(j.at("data"));
  c.output_every = j.value("output_every", std::size_t{10});
  if (j.contains("kappa_list")) c.kappa_list = j.at("kappa_list").get<std::vector<double>>();
  if (j.contains("morawetz_R_list")) {
    for (const auto& row : j.at("morawetz_R_list")) {
      if (!row.is_array() || row.size() != 4)
        throw config_error("config: morawetz_R_list entries must be [R, r, mu1, mu2]");
      c.morawetz_R_list.push_back({row[0].get<double>(), row[1].get<double>(),
                                   row[2].get<double>(), row[3].get<double>()});
    }
  }
  c.validate();
  return c;
}

inline json config_to_json(const SimConfig& c) {
  json j;
  j["p"] = c.p;
  j["dr"] = c.dr;
  j["n"] = c.n;
  j["cfl"] = c.cfl;
  j["t_final"] = c.t_final;
  j["direction"] = (c.direction == TimeDirection::forward) ? "forward" : "backward";
  j["nonlinear"] = c.nonlinear;
  j["data"] = data_spec_to_json(c.data);
  j["output_every"] = c.output_every;
  j["kappa_list"] = c.kappa_list;
  json ml = json::array();
  for (const auto& m : c.morawetz_R_list) ml.push_back({m.R, m.r, m.mu1, m.mu2});
  j["morawetz_R_list"] = ml;
  return j;
}

inline DiagnosticsRequest diagnostics_request_from_json(const json& j) {
  detail::reject_unknown_keys(j,
                              {"rows", "morawetz", "nakanishi_T", "q_mu2", "q_times",
                               "char_flux_etas", "radiation", "inequalities", "write_snapshots"},
                              "diagnostics");
  DiagnosticsRequest r;
  r.rows = j.value("rows", true);
  r.morawetz = j.value("morawetz", false);
  r.nakanishi_T = j.value("nakanishi_T", 0.0);
  r.q_mu2 = j.value("q_mu2", 0.0);
  if (j.contains("q_times")) r.q_times = j.at("q_times").get<std::vector<double>>();
  if (j.contains("char_flux_etas"))
    r.char_flux_etas = j.at("char_flux_etas").get<std::vector<double>>();
  if (j.contains("radiation")) {
    const json& rad = j.at("radiation");
    detail::reject_unknown_keys(rad, {"eta_min", "eta_max", "times"}, "diagnostics.radiation");
    r.radiation = true;
    r.radiation_eta_min = rad.value("eta_min", -10.0);
    r.radiation_eta_max = rad.value("eta_max", 40.0);
    if (rad.contains("times")) r.radiation_times = rad.at("times").get<std::vector<double>>();
  }
  r.inequalities = j.value("inequalities", false);
  r.write_snapshots = j.value("write_snapshots", std::size_t{0});
  return r;
}

/// FNV-1a over the canonical (key-sorted) serialization, so the hash is
/// invariant under field reordering in the source file.
inline std::uint64_t config_hash(const SimConfig& c) {
  std::string s = config_to_json(c).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_snapshot_csv(const FieldState& s, const RadialGrid& g, std::ostream& os) {
  os << "r,u,ut\n";
  for (std::size_t j = 0; j < g.n; ++j)
    os << format_double(g.nodes[j]) << ',' << format_double(s.u[j]) << ','
       << format_double(s.ut[j]) << '\n';
}

inline FieldState read_snapshot_csv(std::istream& is, const RadialGrid& g, double t) {
  std::string line;
  if (!std::getline(is, line) || line != "r,u,ut")
    throw contract_violation("snapshot csv: bad header");
  FieldState s(t, g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    if (!std::getline(is, line)) throw contract_violation("snapshot csv: truncated");
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw contract_violation("snapshot csv: malformed row");
    s.u[j] = parse_double(line.substr(c1 + 1, c2 - c1 - 1));
    s.ut[j] = parse_double(line.substr(c2 + 1));
  }
  return s;
}

inline std::string diagnostics_csv_header(const std::vector<double>& kappas,
                                          const std::vector<double>& etas) {
  std::string h = "t,E_total";
  for (double k : kappas) h += ",E_kappa_" + format_double(k);
  h += ",interior_weighted,e_in,e_out,Q,nakanishi_cum";
  for (double e : etas) h += ",char_flux_" + format_double(e);
  return h;
}

inline void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows,
                                  const std::vector<double>& kappas,
                                  const std::vector<double>& etas, std::ostream& os) {
  os << diagnostics_csv_header(kappas, etas) << '\n';
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.E_total);
    for (double v : r.E_kappa) os << ',' << format_double(v);
    os << ',' << format_double(r.interior_weighted) << ',' << format_double(r.e_in) << ','
       << format_double(r.e_out) << ',' << format_double(r.Q) << ','
       << format_double(r.nakanishi_cum);
    for (double v : r.char_flux) os << ',' << format_double(v);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

inline json to_json(const MorawetzReport& r) {
  return json{{"R", r.R},
              {"r", r.r},
              {"mu1", r.mu1},
              {"mu2", r.mu2},
              {"lambda1", r.lambda1},
              {"lambda2", r.lambda2},
              {"interior_bulk", r.interior_bulk},
              {"circle_term", r.circle_term},
              {"exterior_bulk", r.exterior_bulk},
              {"endpoint_interior", r.endpoint_interior},
              {"endpoint_exterior", r.endpoint_exterior},
              {"identity_sum", r.identity_sum},
              {"two_E", r.two_E},
              {"residual", r.residual},
              {"M1", r.M1},
              {"M2", r.M2},
              {"M3", r.M3},
              {"M4", r.M4},
              {"M5", r.M5},
              {"M6", r.M6},
              {"rhs_data_term", r.rhs_data_term},
              {"rhs_tail_terms", r.rhs_tail_terms},
              {"slack", r.slack}};
}

inline json to_json(const NakanishiReport& r) {
  return json{{"T", r.T}, {"cumulative", r.cumulative}, {"bound_value", r.bound_value}};
}

inline json to_json(const RadiationProfile& r) {
  json cauchy = json::array();
  for (const auto& [pair, val] : r.cauchy_l2)
    cauchy.push_back({{"t1", pair.first}, {"t2", pair.second}, {"l2", val}});
  return json{{"eta_nodes", r.eta_nodes},
              {"g_plus", r.g_plus},
              {"extracted_at", r.extracted_at},
              {"cauchy_l2", cauchy},
              {"profile_energy", r.energy()}};
}

inline json to_json(const InequalityVerdict& v) {
  return json{{"name", v.name},
              {"ratio", v.ratio},
              {"constant_bound", v.constant_bound},
              {"pass", v.pass},
              {"witness_r", v.witness_r}};
}

/// Everything one run emitted, plus enough metadata to reproduce it.
struct RunManifest {
  std::string config_hash;
  std::string solver_version;
  std::string grid_summary;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
  std::size_t step_count = 0;
  bool all_gates_passed = true;
};

inline json to_json(const RunManifest& m) {
  return json{{"config_hash", m.config_hash},
              {"solver_version", m.solver_version},
              {"grid_summary", m.grid_summary},
              {"outputs", m.outputs},
              {"wall_seconds", m.wall_seconds},
              {"step_count", m.step_count},
              {"all_gates_passed", m.all_gates_passed}};
}

}  // namespace rwave
