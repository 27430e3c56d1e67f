// Serialization plumbing: fluctuation-profile JSON configs in, reports and
// trajectories out (JSON / CSV). Everything here is deterministic; numeric
// CSV fields use %.12g.
//
// Profile config schema:
//   {"kind": "zero" | "piecewise_sine" | "global_sine" | "tabulated",
//    "f0": number, "g0": number, "xi": integer, "eta": integer,
//    "samples": [[t, f, g], ...]}
// kind selects which of the other keys are required; unknown keys are
// rejected so typos cannot silently change a run.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pulseloop/experiments.hpp"

namespace pulseloop {

using ordered_json = nlohmann::ordered_json;

// Optional parameter overrides applied on top of a parametric profile config
// (command-line flags override file values).
struct ProfileOverrides {
  std::optional<double> f0, g0;
  std::optional<int> xi, eta;

  bool any() const { return f0 || g0 || xi || eta; }
};

namespace detail {

inline double require_number(const ordered_json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw std::invalid_argument("profile config: missing numeric key \"" + key + "\"");
  return j.at(key).get<double>();
}

inline int require_integer(const ordered_json& j, const std::string& key) {
  const double v = require_number(j, key);
  if (v != std::floor(v))
    throw std::invalid_argument("profile config: \"" + key + "\" must be an integer");
  return static_cast<int>(v);
}

inline void reject_unknown_keys(const ordered_json& j,
                                const std::vector<std::string>& allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const std::string& k : allowed) ok = ok || item.key() == k;
    if (!ok)
      throw std::invalid_argument("profile config: unknown key \"" + item.key() + "\"");
  }
}

}  // namespace detail

// Builds a profile from a parsed JSON config. Piecewise profiles attach to
// the segment boundaries of the sequence being simulated.
inline FluctuationProfile profile_from_json(const ordered_json& j,
                                            const std::vector<double>& sequence_breakpoints,
                                            const ProfileOverrides& overrides = {}) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw std::invalid_argument("profile config: expected an object with a \"kind\" string");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "zero" || kind == "tabulated") {
    if (overrides.any())
      throw std::invalid_argument(
          "profile config: parameter overrides apply to parametric profiles only");
  }

  if (kind == "zero") {
    detail::reject_unknown_keys(j, {"kind"});
    return zero_profile();
  }

  if (kind == "piecewise_sine" || kind == "global_sine") {
    detail::reject_unknown_keys(j, {"kind", "f0", "g0", "xi", "eta"});
    const double f0 = overrides.f0 ? *overrides.f0 : detail::require_number(j, "f0");
    const double g0 = overrides.g0 ? *overrides.g0 : detail::require_number(j, "g0");
    const int xi = overrides.xi ? *overrides.xi : detail::require_integer(j, "xi");
    const int eta = overrides.eta ? *overrides.eta : detail::require_integer(j, "eta");
    return kind == "piecewise_sine"
               ? piecewise_sine_profile(f0, g0, xi, eta, sequence_breakpoints)
               : global_sine_profile(f0, g0, xi, eta);
  }

  if (kind == "tabulated") {
    detail::reject_unknown_keys(j, {"kind", "samples"});
    if (!j.contains("samples") || !j.at("samples").is_array())
      throw std::invalid_argument("profile config: tabulated profiles need a \"samples\" array");
    std::vector<std::array<double, 3>> samples;
    for (const auto& row : j.at("samples")) {
      if (!row.is_array() || row.size() != 3)
        throw std::invalid_argument("profile config: each sample must be [t, f, g]");
      samples.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    return tabulated_profile(samples);
  }

  throw std::invalid_argument("profile config: unknown kind \"" + kind + "\"");
}

inline FluctuationProfile load_profile_file(const std::string& path,
                                            const std::vector<double>& sequence_breakpoints,
                                            const ProfileOverrides& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("profile file " + path + ": " + e.what());
  }
  return profile_from_json(j, sequence_breakpoints, overrides);
}

// ---------------------------------------------------------------------------
// JSON report serialization

inline ordered_json phase_decomposition_json(const PhaseDecomposition& d) {
  return {{"gamma_total", d.gamma_total},
          {"gamma_dynamical", d.gamma_dynamical},
          {"gamma_geometric", d.gamma_geometric},
          {"fidelity", d.fidelity}};
}

inline ordered_json gate_report_json(const GateReport& g) {
  auto entry = [](const complexd& c) { return ordered_json::array({c.real(), c.imag()}); };
  return {{"basis_plus", {g.basis_plus.x, g.basis_plus.y, g.basis_plus.z}},
          {"basis_minus", {g.basis_minus.x, g.basis_minus.y, g.basis_minus.z}},
          {"plus", phase_decomposition_json(g.plus)},
          {"minus", phase_decomposition_json(g.minus)},
          {"unitary",
           {{entry(g.unitary.m00), entry(g.unitary.m01)},
            {entry(g.unitary.m10), entry(g.unitary.m11)}}},
          {"reconstruction_error", g.reconstruction_error},
          {"antisymmetry_residual", g.antisymmetry_residual}};
}

inline ordered_json scenario_report_json(const ScenarioReport& r) {
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  ordered_json outputs = ordered_json::object();
  for (const auto& [k, v] : r.outputs) outputs[k] = v;
  ordered_json checks = ordered_json::array();
  for (const CheckRow& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"expected", c.expected},
                      {"actual", c.actual},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"source", c.source}});
  return {{"id", r.id},        {"status", r.status},   {"note", r.note},
          {"pass", r.all_pass()}, {"inputs", inputs},  {"checks", checks},
          {"outputs", outputs}};
}

inline ordered_json criteria_json(const std::vector<CriterionResult>& criteria, int steps) {
  bool all = true;
  ordered_json rows = ordered_json::array();
  for (const CriterionResult& c : criteria) {
    all = all && (c.passed || !c.blocking);
    rows.push_back({{"index", c.index},
                    {"name", c.name},
                    {"passed", c.passed},
                    {"blocking", c.blocking},
                    {"detail", c.detail}});
  }
  return {{"steps", steps}, {"all_blocking_pass", all}, {"criteria", rows}};
}

// ---------------------------------------------------------------------------
// CSV writers

// Schema: t,nx,ny,nz,re_c0,im_c0,re_c1,im_c1 with 12 significant digits.
// `every` keeps one row per N grid nodes; the final node is always written.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int every = 1) {
  if (every < 1) throw std::invalid_argument("write_trajectory_csv: every must be >= 1");
  os << "t,nx,ny,nz,re_c0,im_c0,re_c1,im_c1\n";
  const std::size_t n = traj.times.size();
  auto row = [&](std::size_t k) {
    const BlochVector& b = traj.bloch[k];
    const StateVector& s = traj.states[k];
    os << detail::fmt_g(traj.times[k]) << ',' << detail::fmt_g(b.x) << ',' << detail::fmt_g(b.y)
       << ',' << detail::fmt_g(b.z) << ',' << detail::fmt_g(s.c0.real()) << ','
       << detail::fmt_g(s.c0.imag()) << ',' << detail::fmt_g(s.c1.real()) << ','
       << detail::fmt_g(s.c1.imag()) << '\n';
  };
  std::size_t last_written = 0;
  for (std::size_t k = 0; k < n; k += static_cast<std::size_t>(every)) {
    row(k);
    last_written = k;
  }
  if (last_written != n - 1) row(n - 1);
}

// One row per sweep point; cells missing from a report (e.g. failed points)
// are left empty.
inline void write_sweep_csv(std::ostream& os, const std::vector<ScenarioReport>& reports) {
  static const char* kOutputCols[] = {
      "fidelity_plus",          "gamma_total_plus",   "gamma_dynamical_plus",
      "gamma_geometric_plus",   "gamma_total_minus",  "gamma_dynamical_minus",
      "gamma_geometric_minus",  "gamma_dynamical_closed_plus",
      "solid_angle_plus",       "geometric_deviation"};

  os << "family,f0,g0,xi,eta,status,symmetry";
  for (const char* c : kOutputCols) os << ',' << c;
  os << '\n';

  auto input = [](const ScenarioReport& r, const std::string& key) -> std::string {
    for (const auto& [k, v] : r.inputs)
      if (k == key) return v;
    return "";
  };

  for (const ScenarioReport& r : reports) {
    os << input(r, "profile") << ',' << input(r, "f0") << ',' << input(r, "g0") << ','
       << input(r, "xi") << ',' << input(r, "eta") << ',' << r.status << ','
       << input(r, "symmetry");
    for (const char* c : kOutputCols) {
      os << ',';
      if (const double* v = r.find_output(c)) os << detail::fmt_g(*v);
    }
    os << '\n';
  }
}

}  // namespace pulseloop
