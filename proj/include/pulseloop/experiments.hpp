// Canned scenario runners over the composite pulse and the two single-segment
// drives H_A (pure geometric) and H_B (mixed), plus a deterministic sweep
// engine and the reference-criteria battery behind `pulseloop papercheck`.
//
// Every runner returns a ScenarioReport: echoed inputs, named numeric
// outputs, and check rows each carrying expected value, tolerance and the
// kind of oracle it came from ("closed-form", "reference-data",
// "consistency"). Reports never throw on a failed check; status records
// whether the scenario ran at all.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pulseloop/phase_analysis.hpp"

namespace pulseloop {

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Uniform double in [0, 1) from the standard-specified mt19937_64 stream,
// bypassing the implementation-defined distribution classes so that results
// are bit-identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

struct CheckRow {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string source;  // closed-form | reference-data | consistency
};

struct ScenarioReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<CheckRow> checks;
  std::vector<std::pair<std::string, double>> outputs;
  std::string status = "ok";  // ok | rejected | failure
  std::string note;           // set when status != ok

  void add_input(const std::string& k, const std::string& v) { inputs.emplace_back(k, v); }

  void add_check(const std::string& name, double expected, double actual, double tol,
                 const std::string& source) {
    checks.push_back({name, expected, actual, tol, std::abs(actual - expected) <= tol, source});
  }

  void add_output(const std::string& k, double v) { outputs.emplace_back(k, v); }

  const double* find_output(const std::string& k) const {
    for (const auto& [name, v] : outputs)
      if (name == k) return &v;
    return nullptr;
  }

  bool all_pass() const {
    if (status != "ok") return false;
    for (const CheckRow& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Single-segment drives. With the zero profile these reduce to
//   H_A = (pi/4) sigma_y          (half turn of the Bloch vector about y)
//   H_B = pi (sigma_x + sigma_z) / (2 sqrt 2)
// both mapping (0,0,1) to (1,0,0) over unit time. Their fluctuated forms keep
// the drive in the xy-plane with phase g(t), amplitude perturbed by f'(t) and
// detuning perturbed by g'(t); H_B retains its constant z term.

inline HamiltonianSchedule make_ha_schedule(const FluctuationProfile& p) {
  HamiltonianSchedule s;
  s.breakpoints = p.breakpoints;
  s.sample = [p](double t, double loc) {
    const double phi = 0.5 * kPi + p.g(t, loc);
    return HamiltonianSample{0.5 * kPi + p.df(t, loc), {std::cos(phi), std::sin(phi), 0.0},
                             p.dg(t, loc)};
  };
  return s;
}

inline HamiltonianSchedule make_hb_schedule(const FluctuationProfile& p) {
  const double w = kPi / std::numbers::sqrt2;
  HamiltonianSchedule s;
  s.breakpoints = p.breakpoints;
  s.sample = [p, w](double t, double loc) {
    const double phi = p.g(t, loc);
    return HamiltonianSample{w + p.df(t, loc), {std::cos(phi), std::sin(phi), 0.0},
                             w + p.dg(t, loc)};
  };
  return s;
}

// ---------------------------------------------------------------------------
// Scenario runners

inline const char* composite_text() { return "90x 180y 90x"; }

namespace detail {

inline void echo_profile(ScenarioReport& r, const FluctuationProfile& p) {
  r.add_input("profile", p.metadata.kind);
  r.add_input("f0", fmt_g(p.metadata.f0));
  r.add_input("g0", fmt_g(p.metadata.g0));
  r.add_input("xi", std::to_string(p.metadata.xi));
  r.add_input("eta", std::to_string(p.metadata.eta));
}

inline bool is_symmetric(SymmetryClass c) {
  return c == SymmetryClass::ZeroG || c == SymmetryClass::ShiftSymmetric ||
         c == SymmetryClass::ReflectSymmetric;
}

}  // namespace detail

// Ideal composite pulse: closed n+ trajectory, gamma_± = -+pi/2 with zero
// dynamical part, gate e^{-i pi sigma_y / 2}, solid angle pi.
inline ScenarioReport run_ideal_composite(const GridSpec& grid = {}) {
  ScenarioReport r;
  r.id = "ideal_composite";
  r.add_input("sequence", composite_text());
  r.add_input("steps", std::to_string(grid.steps_per_unit_time));

  const PulseSequence seq = parse_sequence(composite_text());
  const BlochVector n_plus{0.0, 1.0, 0.0};
  const GateReport gate = gate_from_simulation(seq, std::nullopt, n_plus, grid);
  const Trajectory traj = propagate(make_ideal_schedule(seq), bloch_to_state(n_plus), grid);
  const double omega = solid_angle(traj.bloch);

  r.add_check("gamma_total_plus", -0.5 * kPi, gate.plus.gamma_total, 1e-8, "closed-form");
  r.add_check("gamma_total_minus", 0.5 * kPi, gate.minus.gamma_total, 1e-8, "closed-form");
  r.add_check("gamma_dynamical_plus", 0.0, gate.plus.gamma_dynamical, 1e-9, "closed-form");
  r.add_check("gamma_dynamical_minus", 0.0, gate.minus.gamma_dynamical, 1e-9, "closed-form");
  r.add_check("gate_vs_y_half_turn", 0.0,
              distance_up_to_global_phase(su2_rotation({0.0, 1.0, 0.0}, kPi), gate.unitary),
              1e-8, "closed-form");
  r.add_check("solid_angle_plus", kPi, omega, 1e-3, "closed-form");
  r.add_check("aa_relation", 0.0, std::abs(wrap_angle(gate.plus.gamma_geometric + 0.5 * omega)),
              1e-3, "consistency");

  r.add_output("fidelity_plus", gate.plus.fidelity);
  r.add_output("gamma_total_plus", gate.plus.gamma_total);
  r.add_output("gamma_dynamical_plus", gate.plus.gamma_dynamical);
  r.add_output("gamma_geometric_plus", gate.plus.gamma_geometric);
  r.add_output("gamma_total_minus", gate.minus.gamma_total);
  r.add_output("gamma_dynamical_minus", gate.minus.gamma_dynamical);
  r.add_output("gamma_geometric_minus", gate.minus.gamma_geometric);
  r.add_output("solid_angle_plus", omega);
  r.add_output("reconstruction_error", gate.reconstruction_error);
  r.add_output("antisymmetry_residual", gate.antisymmetry_residual);
  r.add_output("geometric_deviation", std::abs(wrap_angle(gate.plus.gamma_geometric + 0.5 * kPi)));
  return r;
}

// Fluctuated composite pulse. The total phases stay at -+pi/2 for any profile
// satisfying the boundary conditions; the dynamical part vanishes (and the
// gate is purely geometric) exactly when the profile falls in one of the
// recognized symmetry classes, so those checks are added per class.
inline ScenarioReport run_fluctuated_composite(const FluctuationProfile& profile,
                                               const GridSpec& grid = {}) {
  ScenarioReport r;
  r.id = "fluctuated_composite";
  r.add_input("sequence", composite_text());
  detail::echo_profile(r, profile);
  r.add_input("steps", std::to_string(grid.steps_per_unit_time));

  const BoundaryCheck bc = check_boundary_conditions(profile);
  r.add_output("boundary_residual", bc.max_residual());
  if (!bc.ok) {
    r.status = "rejected";
    r.note = "profile violates the endpoint conditions f(0)=g(0)=f(1)=g(1)=0";
    return r;
  }

  const SymmetryClass cls = classify_symmetry(profile);
  r.add_input("symmetry", to_string(cls));

  const PulseSequence seq = parse_sequence(composite_text());
  const HamiltonianSchedule sched = make_fluctuated_schedule(seq, profile);
  const BlochVector n_plus{0.0, 1.0, 0.0};

  Trajectory tp, tm;
  PhaseDecomposition dp, dm;
  try {
    tp = propagate(sched, bloch_to_state(n_plus), grid);
    tm = propagate(sched, bloch_to_state(-n_plus), grid);
    dp = decompose_phase(tp, sched);
    dm = decompose_phase(tm, sched);
  } catch (const cyclicity_error& e) {
    r.status = "failure";
    r.note = e.what();
    r.add_output("fidelity_plus", e.fidelity());
    return r;
  }

  const double closed_p = dynamical_phase_closed_form(profile, +1, grid.steps_per_unit_time);
  const double closed_m = dynamical_phase_closed_form(profile, -1, grid.steps_per_unit_time);
  const double omega = solid_angle(tp.bloch);
  const double geo_dev = std::abs(wrap_angle(dp.gamma_geometric + 0.5 * kPi));

  r.add_check("cyclic_plus", 1.0, dp.fidelity, 1e-6, "closed-form");
  r.add_check("cyclic_minus", 1.0, dm.fidelity, 1e-6, "closed-form");
  r.add_check("gamma_total_plus", -0.5 * kPi, dp.gamma_total, 1e-6, "closed-form");
  r.add_check("gamma_total_minus", 0.5 * kPi, dm.gamma_total, 1e-6, "closed-form");
  r.add_check("quadrature_vs_closed_form_plus", closed_p, dp.gamma_dynamical, 1e-6,
              "consistency");
  r.add_check("quadrature_vs_closed_form_minus", closed_m, dm.gamma_dynamical, 1e-6,
              "consistency");
  if (detail::is_symmetric(cls)) {
    r.add_check("gamma_dynamical_plus", 0.0, dp.gamma_dynamical, 1e-6, "closed-form");
    r.add_check("gamma_dynamical_minus", 0.0, dm.gamma_dynamical, 1e-6, "closed-form");
    r.add_check("gamma_geometric_plus", -0.5 * kPi, dp.gamma_geometric, 1e-5, "closed-form");
    r.add_check("gamma_geometric_minus", 0.5 * kPi, dm.gamma_geometric, 1e-5, "closed-form");
    r.add_check("solid_angle_plus", kPi, omega, 1e-3, "closed-form");
  }

  r.add_output("fidelity_plus", dp.fidelity);
  r.add_output("gamma_total_plus", dp.gamma_total);
  r.add_output("gamma_dynamical_plus", dp.gamma_dynamical);
  r.add_output("gamma_geometric_plus", dp.gamma_geometric);
  r.add_output("gamma_total_minus", dm.gamma_total);
  r.add_output("gamma_dynamical_minus", dm.gamma_dynamical);
  r.add_output("gamma_geometric_minus", dm.gamma_geometric);
  r.add_output("gamma_dynamical_closed_plus", closed_p);
  r.add_output("solid_angle_plus", omega);
  r.add_output("geometric_deviation", geo_dev);
  return r;
}

// Published endpoint of the fluctuated H_B run with the reference profile
// global_sine(1.0, 1.0, 10, 10), stated to two decimals.
inline constexpr double kReferenceEndpointB[3] = {0.95, -0.26, -0.16};

// Runs both single-segment drives from (0,0,1), ideal and fluctuated.
// Endpoint checks against the published two-decimal H_B endpoint are added
// only for the reference profile; other profiles get outputs only.
inline ScenarioReport run_ha_hb_comparison(
    const std::optional<FluctuationProfile>& profile = std::nullopt,
    const GridSpec& grid = {}) {
  const FluctuationProfile p = profile ? *profile : global_sine_profile(1.0, 1.0, 10, 10);

  ScenarioReport r;
  r.id = "ha_hb_comparison";
  detail::echo_profile(r, p);
  r.add_input("steps", std::to_string(grid.steps_per_unit_time));

  const BoundaryCheck bc = check_boundary_conditions(p);
  r.add_output("boundary_residual", bc.max_residual());
  if (!bc.ok) {
    r.status = "rejected";
    r.note = "profile violates the endpoint conditions f(0)=g(0)=f(1)=g(1)=0";
    return r;
  }

  const StateVector psi0 = bloch_to_state({0.0, 0.0, 1.0});
  const BlochVector ideal_a =
      propagate(make_ha_schedule(zero_profile()), psi0, grid).final_bloch();
  const BlochVector ideal_b =
      propagate(make_hb_schedule(zero_profile()), psi0, grid).final_bloch();
  const BlochVector end_a = propagate(make_ha_schedule(p), psi0, grid).final_bloch();
  const BlochVector end_b = propagate(make_hb_schedule(p), psi0, grid).final_bloch();

  r.add_check("ideal_a_end_x", 1.0, ideal_a.x, 1e-6, "closed-form");
  r.add_check("ideal_a_end_y", 0.0, ideal_a.y, 1e-6, "closed-form");
  r.add_check("ideal_a_end_z", 0.0, ideal_a.z, 1e-6, "closed-form");
  r.add_check("ideal_b_end_x", 1.0, ideal_b.x, 1e-6, "closed-form");
  r.add_check("ideal_b_end_y", 0.0, ideal_b.y, 1e-6, "closed-form");
  r.add_check("ideal_b_end_z", 0.0, ideal_b.z, 1e-6, "closed-form");

  // The geometric construction behind H_A drags its eigenbasis exactly, so
  // the endpoint is fluctuation-free for every admissible profile.
  r.add_check("fluctuated_a_end_x", 1.0, end_a.x, 1e-6, "closed-form");
  r.add_check("fluctuated_a_end_y", 0.0, end_a.y, 1e-6, "closed-form");
  r.add_check("fluctuated_a_end_z", 0.0, end_a.z, 1e-6, "closed-form");

  const bool reference_profile = p.metadata.kind == "global_sine" && p.metadata.f0 == 1.0 &&
                                 p.metadata.g0 == 1.0 && p.metadata.xi == 10 &&
                                 p.metadata.eta == 10;
  if (reference_profile) {
    r.add_check("fluctuated_b_end_x", kReferenceEndpointB[0], end_b.x, 0.01, "reference-data");
    r.add_check("fluctuated_b_end_y", kReferenceEndpointB[1], end_b.y, 0.01, "reference-data");
    r.add_check("fluctuated_b_end_z", kReferenceEndpointB[2], end_b.z, 0.01, "reference-data");
  }

  r.add_output("fluctuated_a_end_x", end_a.x);
  r.add_output("fluctuated_a_end_y", end_a.y);
  r.add_output("fluctuated_a_end_z", end_a.z);
  r.add_output("fluctuated_b_end_x", end_b.x);
  r.add_output("fluctuated_b_end_y", end_b.y);
  r.add_output("fluctuated_b_end_z", end_b.z);
  return r;
}

// Independent rapidly-oscillating f and g. The claim that such profiles give
// a near-zero dynamical phase is qualitative, so magnitudes are reported
// without a pass threshold; only internal consistency of the two dynamical
// phase routes is reported as a number (also unthresholded here).
inline ScenarioReport run_case_iii(const FluctuationProfile& profile_f,
                                   const FluctuationProfile& profile_g,
                                   const GridSpec& grid = {}) {
  ScenarioReport r;
  r.id = "case_iii";
  r.add_input("sequence", composite_text());
  r.add_input("steps", std::to_string(grid.steps_per_unit_time));

  const FluctuationProfile p = combined_profile(profile_f, profile_g);
  detail::echo_profile(r, p);

  const BoundaryCheck bc = check_boundary_conditions(p);
  r.add_output("boundary_residual", bc.max_residual());
  if (!bc.ok) {
    r.status = "rejected";
    r.note = "profile violates the endpoint conditions f(0)=g(0)=f(1)=g(1)=0";
    return r;
  }
  r.add_input("symmetry", to_string(classify_symmetry(p)));

  const PulseSequence seq = parse_sequence(composite_text());
  const HamiltonianSchedule sched = make_fluctuated_schedule(seq, p);
  const Trajectory tp = propagate(sched, bloch_to_state({0.0, 1.0, 0.0}), grid);
  const double dyn_traj = wrap_angle(dynamical_phase(tp, sched));
  const double dyn_closed = dynamical_phase_closed_form(p, +1, grid.steps_per_unit_time);

  r.add_output("gamma_dynamical_plus", dyn_traj);
  r.add_output("gamma_dynamical_closed_plus", dyn_closed);
  r.add_output("gamma_dynamical_abs", std::abs(dyn_traj));
  r.add_output("route_residual", std::abs(dyn_traj - dyn_closed));
  r.add_output("fidelity_plus", cyclicity_check(tp).fidelity);
  return r;
}

// ---------------------------------------------------------------------------
// Sweep engine

enum class SweepScenario { PiecewiseComposite, GlobalComposite, HaHbGlobal };

inline const char* to_string(SweepScenario s) {
  switch (s) {
    case SweepScenario::PiecewiseComposite: return "piecewise_composite";
    case SweepScenario::GlobalComposite: return "global_composite";
    default: return "ha_hb_global";
  }
}

struct ParamGrid {
  std::vector<double> f0s;
  std::vector<double> g0s;
  std::vector<int> xis;
  std::vector<int> etas;
};

// One report per grid point, iterated f0 (outer) -> g0 -> xi -> eta.
// Per-point failures are recorded inline and the sweep continues.
inline std::vector<ScenarioReport> sweep(SweepScenario scenario, const ParamGrid& params,
                                         const GridSpec& grid = {}) {
  if (params.f0s.empty() || params.g0s.empty() || params.xis.empty() || params.etas.empty())
    throw std::invalid_argument("sweep: parameter grid must be non-empty");

  const PulseSequence seq = parse_sequence(composite_text());
  std::vector<ScenarioReport> reports;
  for (double f0 : params.f0s)
    for (double g0 : params.g0s)
      for (int xi : params.xis)
        for (int eta : params.etas) {
          try {
            FluctuationProfile p =
                scenario == SweepScenario::PiecewiseComposite
                    ? piecewise_sine_profile(f0, g0, xi, eta, seq.breakpoints)
                    : global_sine_profile(f0, g0, xi, eta);
            reports.push_back(scenario == SweepScenario::HaHbGlobal
                                  ? run_ha_hb_comparison(p, grid)
                                  : run_fluctuated_composite(p, grid));
          } catch (const std::exception& e) {
            ScenarioReport r;
            r.id = "sweep_point";
            r.status = "failure";
            r.note = e.what();
            r.add_input("profile", scenario == SweepScenario::PiecewiseComposite
                                       ? "piecewise_sine"
                                       : "global_sine");
            r.add_input("f0", detail::fmt_g(f0));
            r.add_input("g0", detail::fmt_g(g0));
            r.add_input("xi", std::to_string(xi));
            r.add_input("eta", std::to_string(eta));
            reports.push_back(std::move(r));
          }
        }
  return reports;
}

// ---------------------------------------------------------------------------
// Reference criteria: the fixed battery of published-result reproductions and
// internal property checks behind `pulseloop papercheck` and the acceptance
// test binary. Criterion 10 is a report, not a gate; its `blocking` is false.

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  bool blocking = true;
  std::string detail;
};

namespace detail {

// Deterministic boundary-respecting test profile: per composite segment, a
// short harmonic burst with pseudo-random amplitudes for both f and g,
// tabulated densely and rebuilt through the spline path. Vanishes at every
// segment boundary, deliberately has no shift or reflection symmetry.
inline FluctuationProfile random_tabulated_profile(std::mt19937_64& rng,
                                                   const std::vector<double>& bps) {
  const int harmonics = 3;
  std::vector<std::vector<double>> af(bps.size() - 1), ag(bps.size() - 1);
  for (std::size_t s = 0; s + 1 < bps.size(); ++s)
    for (int k = 0; k < harmonics; ++k) {
      af[s].push_back(0.1 * (unit_uniform(rng) - 0.5));
      ag[s].push_back(0.1 * (unit_uniform(rng) - 0.5));
    }

  auto eval = [&](const std::vector<std::vector<double>>& amps, double t, std::size_t s) {
    const double u = (t - bps[s]) / (bps[s + 1] - bps[s]);
    double v = 0.0;
    for (int k = 0; k < harmonics; ++k) v += amps[s][k] * std::sin(kTwoPi * (k + 1) * u);
    return v;
  };

  std::vector<std::array<double, 3>> samples;
  const int per_segment = 256;
  for (std::size_t s = 0; s + 1 < bps.size(); ++s)
    for (int j = (s == 0 ? 0 : 1); j <= per_segment; ++j) {
      const double t = bps[s] + (bps[s + 1] - bps[s]) * j / per_segment;
      samples.push_back({t, eval(af, t, s), eval(ag, t, s)});
    }
  samples.back()[0] = 1.0;

  return tabulated_profile(samples, std::vector<double>(bps.begin() + 1, bps.end() - 1));
}

}  // namespace detail

inline std::vector<CriterionResult> run_reference_criteria(int steps_per_unit_time = 16384) {
  const GridSpec grid{steps_per_unit_time, {}};
  const PulseSequence seq = parse_sequence(composite_text());
  const BlochVector n_plus{0.0, 1.0, 0.0};
  std::vector<CriterionResult> out;

  auto emit = [&out](int index, const std::string& name, bool passed, const std::string& detail,
                     bool blocking = true) {
    out.push_back({index, name, passed, blocking, detail});
  };

  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(2);
  auto flush = [&os]() {
    std::string s = os.str();
    os.str("");
    return s;
  };

  // 1: ideal composite gate and phases
  {
    const GateReport g = gate_from_simulation(seq, std::nullopt, n_plus, grid);
    const double gate_err =
        distance_up_to_global_phase(su2_rotation({0.0, 1.0, 0.0}, kPi), g.unitary);
    const double ep = std::abs(g.plus.gamma_total + 0.5 * kPi);
    const double em = std::abs(g.minus.gamma_total - 0.5 * kPi);
    const double ed = std::max(std::abs(g.plus.gamma_dynamical), std::abs(g.minus.gamma_dynamical));
    const bool ok = gate_err < 1e-8 && ep <= 1e-8 && em <= 1e-8 && ed <= 1e-9;
    os << "gate error " << gate_err << ", phase errors " << ep << "/" << em
       << ", dynamical " << ed;
    emit(1, "ideal composite gate and phases", ok, flush());
  }

  // 2: ideal solid angle and the geometric-phase relation
  {
    const Trajectory traj = propagate(make_ideal_schedule(seq), bloch_to_state(n_plus), grid);
    const HamiltonianSchedule sched = make_ideal_schedule(seq);
    const PhaseDecomposition d = decompose_phase(traj, sched);
    const double omega = solid_angle(traj.bloch);
    const double rel = std::abs(wrap_angle(d.gamma_geometric + 0.5 * omega));
    const bool ok = std::abs(omega - kPi) <= 1e-3 && rel <= 1e-3;
    os << "solid angle error " << std::abs(omega - kPi) << ", relation residual " << rel;
    emit(2, "ideal solid angle and geometric relation", ok, flush());
  }

  // 3: piecewise-sine profile (0.1, 0.1, 5, 5)
  {
    const FluctuationProfile p = piecewise_sine_profile(0.1, 0.1, 5, 5, seq.breakpoints);
    const HamiltonianSchedule sched = make_fluctuated_schedule(seq, p);
    const Trajectory tp = propagate(sched, bloch_to_state(n_plus), grid);
    const Trajectory tm = propagate(sched, bloch_to_state(-n_plus), grid);
    const CyclicityReport cyc = cyclicity_check(tp);
    const PhaseDecomposition dp = decompose_phase(tp, sched);
    const PhaseDecomposition dm = decompose_phase(tm, sched);
    const double cp = dynamical_phase_closed_form(p, +1, steps_per_unit_time);
    const double cm = dynamical_phase_closed_form(p, -1, steps_per_unit_time);
    const double dyn = std::max({std::abs(dp.gamma_dynamical), std::abs(dm.gamma_dynamical),
                                 std::abs(cp), std::abs(cm)});
    const SymmetryClass cls = classify_symmetry(p);
    const bool ok = (1.0 - cyc.fidelity) < 1e-9 &&
                    std::abs(dp.gamma_total + 0.5 * kPi) <= 1e-6 &&
                    std::abs(dm.gamma_total - 0.5 * kPi) <= 1e-6 && dyn <= 1e-6 &&
                    cls == SymmetryClass::ReflectSymmetric;
    os << "1-fidelity " << 1.0 - cyc.fidelity << ", max |dynamical| " << dyn << ", class "
       << to_string(cls);
    emit(3, "piecewise-sine profile phases", ok, flush());
  }

  // 4: global-sine profile (0.1, 0.1, 5, 5)
  {
    const FluctuationProfile p = global_sine_profile(0.1, 0.1, 5, 5);
    const HamiltonianSchedule sched = make_fluctuated_schedule(seq, p);
    const Trajectory tp = propagate(sched, bloch_to_state(n_plus), grid);
    const Trajectory tm = propagate(sched, bloch_to_state(-n_plus), grid);
    const PhaseDecomposition dp = decompose_phase(tp, sched);
    const PhaseDecomposition dm = decompose_phase(tm, sched);
    const double omega = solid_angle(tp.bloch);
    const SymmetryClass cls = classify_symmetry(p);
    const double worst =
        std::max({std::abs(dp.gamma_total + 0.5 * kPi), std::abs(dp.gamma_geometric + 0.5 * kPi),
                  std::abs(dm.gamma_total - 0.5 * kPi), std::abs(dm.gamma_geometric - 0.5 * kPi)});
    const bool ok =
        worst <= 1e-6 && cls == SymmetryClass::ShiftSymmetric && std::abs(omega - kPi) <= 1e-3;
    os << "max phase error " << worst << ", solid angle error " << std::abs(omega - kPi)
       << ", class " << to_string(cls);
    emit(4, "global-sine profile phases", ok, flush());
  }

  // 5: fluctuated H_A endpoint
  {
    const FluctuationProfile p = global_sine_profile(1.0, 1.0, 10, 10);
    const BlochVector e = propagate(make_ha_schedule(p), bloch_to_state({0, 0, 1}), grid)
                              .final_bloch();
    const double dev = std::max({std::abs(e.x - 1.0), std::abs(e.y), std::abs(e.z)});
    os << "max component deviation " << dev << " from (1,0,0)";
    emit(5, "robust drive endpoint", dev < 1e-6, flush());
  }

  // 6: fluctuated H_B endpoint against the published two-decimal value
  {
    const FluctuationProfile p = global_sine_profile(1.0, 1.0, 10, 10);
    const BlochVector e = propagate(make_hb_schedule(p), bloch_to_state({0, 0, 1}), grid)
                              .final_bloch();
    const double dev =
        std::max({std::abs(e.x - kReferenceEndpointB[0]), std::abs(e.y - kReferenceEndpointB[1]),
                  std::abs(e.z - kReferenceEndpointB[2])});
    os << "endpoint (" << e.x << ", " << e.y << ", " << e.z << "), max deviation " << dev
       << " vs (0.95, -0.26, -0.16) at 0.01";
    emit(6, "reference drive endpoint", dev <= 0.01, flush());
  }

  // 7: drive-axis / curve orthogonality across built-in profiles
  {
    std::vector<FluctuationProfile> profiles;
    profiles.push_back(zero_profile());
    profiles.push_back(piecewise_sine_profile(0.1, 0.1, 5, 5, seq.breakpoints));
    profiles.push_back(piecewise_sine_profile(0.5, 0.3, 3, 7, seq.breakpoints));
    profiles.push_back(global_sine_profile(0.1, 0.1, 5, 5));
    profiles.push_back(global_sine_profile(1.0, 1.0, 10, 10));
    double worst = 0.0;
    for (const FluctuationProfile& p : profiles)
      for (int j = 0; j <= 1024; ++j) {
        const double t = static_cast<double>(j) / 1024.0;
        const HamiltonianSample h = fluctuated_hamiltonian_at(seq, p, t);
        worst = std::max(worst, std::abs(dot(h.axis, fluctuated_curve_at(seq, p, t, +1))));
      }
    os << "max |axis . curve| " << worst << " over " << profiles.size() << " profiles";
    emit(7, "drive axis orthogonal to curve", worst < 1e-10, flush());
  }

  // 8: quadrature vs closed form on randomized tabulated profiles
  {
    std::mt19937_64 rng(20260821u);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const FluctuationProfile p = detail::random_tabulated_profile(rng, seq.breakpoints);
      const HamiltonianSchedule sched = make_fluctuated_schedule(seq, p);
      const Trajectory tp = propagate(sched, bloch_to_state(n_plus), grid);
      const double a = dynamical_phase(tp, sched);
      const double b = dynamical_phase_closed_form(p, +1, steps_per_unit_time);
      worst = std::max(worst, std::abs(a - b));
    }
    os << "max route disagreement " << worst << " over 20 profiles";
    emit(8, "dynamical-phase oracle equivalence", worst <= 1e-6, flush());
  }

  // 9: norm conservation, gauge invariance, grid doubling, constant drives
  {
    double norm_drift = 0.0;
    const FluctuationProfile p14 = piecewise_sine_profile(0.1, 0.1, 5, 5, seq.breakpoints);
    const FluctuationProfile p15 = global_sine_profile(0.1, 0.1, 5, 5);
    const FluctuationProfile pAB = global_sine_profile(1.0, 1.0, 10, 10);
    std::vector<HamiltonianSchedule> scheds{
        make_ideal_schedule(seq), make_fluctuated_schedule(seq, p14),
        make_fluctuated_schedule(seq, p15), make_ha_schedule(pAB), make_hb_schedule(pAB)};
    std::vector<StateVector> starts{bloch_to_state(n_plus), bloch_to_state(n_plus),
                                    bloch_to_state(n_plus), bloch_to_state({0, 0, 1}),
                                    bloch_to_state({0, 0, 1})};

    double doubling = 0.0;
    const GridSpec fine{2 * steps_per_unit_time, {}};
    for (std::size_t i = 0; i < scheds.size(); ++i) {
      const Trajectory a = propagate(scheds[i], starts[i], grid);
      const Trajectory b = propagate(scheds[i], starts[i], fine);
      norm_drift = std::max(norm_drift, a.max_norm_drift);
      doubling = std::max({doubling, std::abs(a.final_state().c0 - b.final_state().c0),
                           std::abs(a.final_state().c1 - b.final_state().c1)});
    }

    double gauge = 0.0;
    {
      const HamiltonianSchedule& sched = scheds[1];
      const PhaseDecomposition base = decompose_phase(propagate(sched, starts[1], grid), sched);
      std::mt19937_64 rng(777u);
      for (int j = 0; j < 10; ++j) {
        const double alpha = kTwoPi * detail::unit_uniform(rng);
        const StateVector s0 = starts[1] * std::exp(complexd{0.0, alpha});
        const PhaseDecomposition d = decompose_phase(propagate(sched, s0, grid), sched);
        gauge = std::max({gauge, std::abs(d.gamma_total - base.gamma_total),
                          std::abs(d.gamma_dynamical - base.gamma_dynamical),
                          std::abs(d.gamma_geometric - base.gamma_geometric)});
      }
    }

    double const_err = 0.0;
    {
      const HamiltonianSample ha{0.5 * kPi, {0.0, 1.0, 0.0}, 0.0};
      const double w = kPi / std::numbers::sqrt2;
      const HamiltonianSample hb{w, {1.0, 0.0, 0.0}, w};
      const double inv = 1.0 / std::numbers::sqrt2;
      const_err = std::max(
          max_abs_diff(reference_unitary(make_constant_schedule(ha), grid),
                       su2_rotation({0.0, 1.0, 0.0}, 0.5 * kPi)),
          max_abs_diff(reference_unitary(make_constant_schedule(hb), grid),
                       su2_rotation({inv, 0.0, inv}, kPi)));
    }

    const bool ok = norm_drift <= 1e-9 && gauge <= 1e-10 && doubling <= 1e-9 && const_err <= 1e-8;
    os << "norm drift " << norm_drift << ", gauge " << gauge << ", doubling " << doubling
       << ", constant-drive " << const_err;
    emit(9, "integrator property suite", ok, flush());
  }

  // 10: geometric-deviation sweep (reported, never blocking)
  {
    const std::vector<double> amps{0.0, 0.1, 0.5};
    const std::vector<int> freqs{5, 10};
    double worst = 0.0;
    int points = 0;
    for (SweepScenario sc : {SweepScenario::PiecewiseComposite, SweepScenario::GlobalComposite})
      for (double f0 : amps)
        for (double g0 : amps)
          for (int x : freqs) {
            FluctuationProfile p = sc == SweepScenario::PiecewiseComposite
                                       ? piecewise_sine_profile(f0, g0, x, x, seq.breakpoints)
                                       : global_sine_profile(f0, g0, x, x);
            const ScenarioReport rep = run_fluctuated_composite(p, grid);
            if (const double* d = rep.find_output("geometric_deviation"))
              worst = std::max(worst, *d);
            ++points;
          }
    os << "max |geometric - ideal geometric| " << worst << " over " << points << " points";
    emit(10, "geometric-deviation sweep report", true, flush(), false);
  }

  return out;
}

}  // namespace pulseloop
