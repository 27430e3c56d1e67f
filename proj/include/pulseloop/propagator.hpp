// Fixed-step RK4 integration of i d|psi>/dt = H(t)|psi> over piecewise-smooth
// Hamiltonian schedules on [0, 1].
//
// The integration grid is subdivided so that no step crosses a breakpoint and
// every piece gets an even number of steps (so composite Simpson quadrature
// can reuse the stored nodes piece by piece). Within a piece, the schedule is
// sampled with `loc` fixed at the piece midpoint, which selects the correct
// one-sided limit when a stage time lands exactly on a jump of H.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseloop/fluctuation.hpp"
#include "pulseloop/pulse_dsl.hpp"
#include "pulseloop/su2.hpp"

namespace pulseloop {

class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& what, double t)
      : std::runtime_error(what + " at t = " + std::to_string(t)), time_(t) {}

  double time() const { return time_; }

 private:
  double time_;
};

namespace detail {

inline bool finite(const HamiltonianSample& h) {
  return std::isfinite(h.omega) && std::isfinite(h.axis.x) && std::isfinite(h.axis.y) &&
         std::isfinite(h.axis.z) && std::isfinite(h.detuning_z);
}

// -i H |psi>
inline StateVector schrodinger_rhs(const HamiltonianSample& h, const StateVector& psi) {
  const StateVector hp = apply_hamiltonian(h, psi);
  const complexd mi{0.0, -1.0};
  return {mi * hp.c0, mi * hp.c1};
}

inline StateVector axpy(const StateVector& a, double s, const StateVector& b) {
  return {a.c0 + s * b.c0, a.c1 + s * b.c1};
}

// Sorted union of breakpoint lists, deduplicated at 1e-12 and clamped to
// cover [0, 1].
inline std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                             const std::vector<double>& b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size() + 2);
  all.push_back(0.0);
  all.push_back(1.0);
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double t : all) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("breakpoints must lie in [0, 1]");
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  }
  if (std::abs(out.back() - 1.0) < 1e-12) out.back() = 1.0;
  return out;
}

}  // namespace detail

// A Hamiltonian on [0, 1], smooth between consecutive breakpoints.
// sample(t, loc) evaluates H(t) using the piece that owns loc, so callers can
// request one-sided limits at jump points; at(t) is the right-continuous view.
struct HamiltonianSchedule {
  std::vector<double> breakpoints{0.0, 1.0};
  std::function<HamiltonianSample(double t, double loc)> sample;

  HamiltonianSample at(double t) const { return sample(t, t); }
};

inline HamiltonianSchedule make_constant_schedule(const HamiltonianSample& h) {
  return {{0.0, 1.0}, [h](double, double) { return h; }};
}

inline HamiltonianSchedule make_ideal_schedule(const PulseSequence& seq) {
  return {seq.breakpoints, [seq](double, double loc) {
            return HamiltonianSample{seq.ideal_amplitude(),
                                     seq.segments[seq.segment_index(loc)].axis(), 0.0};
          }};
}

inline HamiltonianSchedule make_fluctuated_schedule(const PulseSequence& seq,
                                                    const FluctuationProfile& p) {
  HamiltonianSchedule s;
  s.breakpoints = detail::merge_breakpoints(seq.breakpoints, p.breakpoints);
  s.sample = [seq, p](double t, double loc) { return fluctuated_hamiltonian_at(seq, p, t, loc); };
  return s;
}

struct GridSpec {
  int steps_per_unit_time = 16384;
  std::vector<double> breakpoints;  // extra split points beyond the schedule's

  void validate() const {
    if (steps_per_unit_time < 256)
      throw std::invalid_argument("GridSpec: steps_per_unit_time must be >= 256");
    for (double b : breakpoints)
      if (!(b >= 0.0 && b <= 1.0))
        throw std::invalid_argument("GridSpec: breakpoints must lie in [0, 1]");
  }
};

struct Trajectory {
  std::vector<double> times;        // grid nodes, breakpoint nodes stored once
  std::vector<StateVector> states;  // normalized state at each node
  std::vector<BlochVector> bloch;   // state_to_bloch of each state
  std::vector<double> breakpoints;  // piece boundaries actually used
  std::vector<std::size_t> piece_offsets;  // node index of each breakpoint
  int steps_per_unit_time = 0;
  double max_norm_drift = 0.0;  // largest |norm - 1| seen before renormalizing

  const StateVector& initial_state() const { return states.front(); }
  const StateVector& final_state() const { return states.back(); }
  const BlochVector& final_bloch() const { return bloch.back(); }
};

// Integrates the Schrodinger equation from a normalized initial state.
// States are renormalized after every step (scaling by a positive real does
// not touch the phase); the largest pre-renormalization drift is reported.
inline Trajectory propagate(const HamiltonianSchedule& sched, const StateVector& psi0,
                            const GridSpec& grid = {}) {
  grid.validate();
  if (!sched.sample) throw std::invalid_argument("propagate: schedule has no sampler");
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("propagate: initial state must be normalized");

  Trajectory traj;
  traj.breakpoints = detail::merge_breakpoints(sched.breakpoints, grid.breakpoints);
  traj.steps_per_unit_time = grid.steps_per_unit_time;

  StateVector psi = normalized(psi0);
  traj.times.push_back(0.0);
  traj.states.push_back(psi);

  for (std::size_t p = 0; p + 1 < traj.breakpoints.size(); ++p) {
    const double t0 = traj.breakpoints[p];
    const double t1 = traj.breakpoints[p + 1];
    const double len = t1 - t0;
    const double loc = 0.5 * (t0 + t1);

    auto H = [&](double t) {
      const HamiltonianSample h = sched.sample(t, loc);
      if (!detail::finite(h)) throw integration_error("non-finite Hamiltonian sample", t);
      return h;
    };

    const int n = std::max<long long>(
        2, 2 * static_cast<long long>(std::ceil(0.5 * grid.steps_per_unit_time * len)));
    const double h = len / n;

    traj.piece_offsets.push_back(traj.times.size() - 1);
    for (int k = 0; k < n; ++k) {
      const double ta = t0 + k * h;
      const double tm = ta + 0.5 * h;
      const double tb = (k + 1 == n) ? t1 : ta + h;

      const HamiltonianSample ha = H(ta);
      const HamiltonianSample hm = H(tm);
      const HamiltonianSample hb = H(tb);

      const StateVector k1 = detail::schrodinger_rhs(ha, psi);
      const StateVector k2 = detail::schrodinger_rhs(hm, detail::axpy(psi, 0.5 * h, k1));
      const StateVector k3 = detail::schrodinger_rhs(hm, detail::axpy(psi, 0.5 * h, k2));
      const StateVector k4 = detail::schrodinger_rhs(hb, detail::axpy(psi, h, k3));

      psi.c0 += (h / 6.0) * (k1.c0 + 2.0 * k2.c0 + 2.0 * k3.c0 + k4.c0);
      psi.c1 += (h / 6.0) * (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1);

      const double nrm = psi.norm();
      traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(nrm - 1.0));
      psi.c0 /= nrm;
      psi.c1 /= nrm;

      traj.times.push_back(tb);
      traj.states.push_back(psi);
    }
  }
  traj.piece_offsets.push_back(traj.times.size() - 1);

  traj.bloch.reserve(traj.states.size());
  for (const StateVector& s : traj.states) traj.bloch.push_back(state_to_bloch(s));
  return traj;
}

struct CyclicityReport {
  bool cyclic = false;
  double fidelity = 0.0;     // |<psi(0)|psi(1)>|
  double total_phase = 0.0;  // arg <psi(0)|psi(1)> in (-pi, pi]
};

inline CyclicityReport cyclicity_check(const Trajectory& traj, double tol = 1e-6) {
  const complexd ov = inner(traj.initial_state(), traj.final_state());
  CyclicityReport r;
  r.fidelity = std::abs(ov);
  r.total_phase = (r.fidelity > 0.0) ? std::arg(ov) : 0.0;
  r.cyclic = (1.0 - r.fidelity) < tol;
  return r;
}

// Full evolution operator over [0, 1]: both basis columns are propagated and
// the second is re-orthonormalized against the first to absorb O(h^4) drift.
inline Unitary2 reference_unitary(const HamiltonianSchedule& sched, const GridSpec& grid = {}) {
  const StateVector u0 = propagate(sched, {complexd{1.0, 0.0}, complexd{0.0, 0.0}}, grid).final_state();
  StateVector u1 = propagate(sched, {complexd{0.0, 0.0}, complexd{1.0, 0.0}}, grid).final_state();
  const complexd overlap = inner(u0, u1);
  u1 = normalized({u1.c0 - overlap * u0.c0, u1.c1 - overlap * u0.c1});
  return {u0.c0, u1.c0, u0.c1, u1.c1};
}

}  // namespace pulseloop
