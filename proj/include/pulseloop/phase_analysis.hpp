// Phase bookkeeping for cyclic evolutions: total phase, dynamical phase by
// quadrature, their difference (the geometric phase), the solid angle of the
// Bloch trajectory, and gate reconstruction from basis phases.
//
// All phases are wrapped to (-pi, pi]. Quadratures are composite Simpson
// rules split at every Hamiltonian breakpoint, with the integrand evaluated
// using the one-sided limit of the owning piece; a rule straddling a jump of
// H would otherwise contaminate the O(h^4) result with an O(h^2) error.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseloop/fluctuation.hpp"
#include "pulseloop/propagator.hpp"
#include "pulseloop/pulse_dsl.hpp"
#include "pulseloop/su2.hpp"

namespace pulseloop {

struct PhaseDecomposition {
  double gamma_total = 0.0;
  double gamma_dynamical = 0.0;
  double gamma_geometric = 0.0;  // wrap(gamma_total - gamma_dynamical)
  double fidelity = 0.0;         // cyclicity fidelity of the underlying run
};

// Thrown when a phase decomposition is requested for a non-cyclic trajectory.
class cyclicity_error : public std::runtime_error {
 public:
  cyclicity_error(double fidelity, double total_phase)
      : std::runtime_error("trajectory is not cyclic (fidelity " + std::to_string(fidelity) +
                           ")"),
        fidelity_(fidelity),
        total_phase_(total_phase) {}

  double fidelity() const { return fidelity_; }
  double total_phase() const { return total_phase_; }

 private:
  double fidelity_;
  double total_phase_;
};

namespace detail {

// Composite Simpson over one trajectory piece whose nodes are equally spaced.
// `f(k)` returns the integrand at node index k.
template <typename F>
double simpson_piece(const std::vector<double>& times, std::size_t a, std::size_t b, F&& f) {
  const std::size_t n = b - a;  // even by construction
  const double h = (times[b] - times[a]) / static_cast<double>(n);
  double sum = f(a) + f(b);
  for (std::size_t k = a + 1; k < b; ++k) sum += ((k - a) % 2 == 1 ? 4.0 : 2.0) * f(k);
  return sum * h / 3.0;
}

}  // namespace detail

// gamma_d = -Int_0^1 <psi(t)|H(t)|psi(t)> dt on the trajectory's own grid.
// Every breakpoint of the schedule must be a piece boundary of the trajectory.
inline double dynamical_phase(const Trajectory& traj, const HamiltonianSchedule& sched) {
  for (double b : sched.breakpoints) {
    bool found = false;
    for (double c : traj.breakpoints) found = found || std::abs(c - b) < 1e-12;
    if (!found)
      throw std::invalid_argument(
          "dynamical_phase: trajectory grid does not split at a schedule breakpoint");
  }

  double integral = 0.0;
  for (std::size_t p = 0; p + 1 < traj.breakpoints.size(); ++p) {
    const std::size_t a = traj.piece_offsets[p];
    const std::size_t b = traj.piece_offsets[p + 1];
    const double loc = 0.5 * (traj.breakpoints[p] + traj.breakpoints[p + 1]);
    integral += detail::simpson_piece(traj.times, a, b, [&](std::size_t k) {
      return energy_expectation(traj.states[k], sched.sample(traj.times[k], loc));
    });
  }
  return -integral;
}

// Closed-form dynamical phase of the fluctuated 90x 180y 90x composite:
//   gamma_d(sign) = -sign/2 * Int_0^1 g'(t) cos(theta(t) + f(t)) dt,
// theta(t) = 2 pi t - pi/2. Simpson on a grid split at profile breakpoints.
inline double dynamical_phase_closed_form(const FluctuationProfile& p, int sign,
                                          int steps_per_unit_time = 16384) {
  if (sign != 1 && sign != -1)
    throw std::domain_error("dynamical_phase_closed_form: sign must be +-1");

  double integral = 0.0;
  const std::vector<double>& bps = p.breakpoints;
  for (std::size_t q = 0; q + 1 < bps.size(); ++q) {
    const double t0 = bps[q], t1 = bps[q + 1];
    const double loc = 0.5 * (t0 + t1);
    const auto n = std::max<std::size_t>(
        2, 2 * static_cast<std::size_t>(std::ceil(0.5 * steps_per_unit_time * (t1 - t0))));
    const double h = (t1 - t0) / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = (k == n) ? t1 : t0 + k * h;
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      sum += w * p.dg(t, loc) * std::cos(kTwoPi * t - 0.5 * kPi + p.f(t, loc));
    }
    integral += sum * h / 3.0;
  }
  return -0.5 * static_cast<double>(sign) * integral;
}

// Splits the total phase of a cyclic trajectory into dynamical + geometric.
// Throws cyclicity_error (carrying fidelity and total phase) when the
// trajectory does not return to its initial ray within tol.
inline PhaseDecomposition decompose_phase(const Trajectory& traj,
                                          const HamiltonianSchedule& sched, double tol = 1e-6) {
  const CyclicityReport cyc = cyclicity_check(traj, tol);
  if (!cyc.cyclic) throw cyclicity_error(cyc.fidelity, cyc.total_phase);

  PhaseDecomposition d;
  d.fidelity = cyc.fidelity;
  d.gamma_total = cyc.total_phase;
  d.gamma_dynamical = wrap_angle(dynamical_phase(traj, sched));
  d.gamma_geometric = wrap_angle(d.gamma_total - d.gamma_dynamical);
  return d;
}

// Signed solid angle enclosed by a closed path on the unit sphere, via a
// triangle fan from an apex direction: each (apex, p_k, p_{k+1}) contributes
// its oriented spherical excess (Van Oosterom & Strackee form). The apex is
// the normalized path centroid, or the path's vector-area direction when the
// centroid degenerates (e.g. a great circle). Winding is counted with sign.
inline double solid_angle(const std::vector<BlochVector>& path) {
  if (path.size() < 3) throw std::domain_error("solid_angle: need at least 3 points");
  if ((path.front() - path.back()).norm() > 1e-6)
    throw std::domain_error("solid_angle: path is not closed");
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double gap = std::acos(std::clamp(dot(path[k], path[k + 1]), -1.0, 1.0));
    if (gap > 0.1)
      throw std::domain_error("solid_angle: consecutive samples more than 0.1 rad apart");
  }

  BlochVector mean{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k + 1 < path.size(); ++k) mean = mean + path[k];
  mean = mean * (1.0 / static_cast<double>(path.size() - 1));

  BlochVector apex;
  if (mean.norm() >= 1e-3) {
    apex = normalized(mean);
  } else {
    BlochVector area{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k + 1 < path.size(); ++k) area = area + cross(path[k], path[k + 1]);
    apex = normalized(area);
  }

  double omega = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const BlochVector& a = path[k];
    const BlochVector& b = path[k + 1];
    omega += 2.0 * std::atan2(dot(apex, cross(a, b)),
                              1.0 + dot(apex, a) + dot(apex, b) + dot(a, b));
  }
  {
    const BlochVector& a = path.back();
    const BlochVector& b = path.front();
    omega += 2.0 * std::atan2(dot(apex, cross(a, b)),
                              1.0 + dot(apex, a) + dot(apex, b) + dot(a, b));
  }
  return omega;
}

// U = e^{i gamma_plus} |n+><n+| + e^{i gamma_minus} |n-><n-| built directly
// from the projectors (I +- n.sigma)/2.
inline Unitary2 reconstruct_gate(const BlochVector& n_plus, double gamma_plus,
                                 double gamma_minus) {
  require_unit(n_plus, "reconstruct_gate");
  const complexd ep = std::exp(complexd{0.0, gamma_plus});
  const complexd em = std::exp(complexd{0.0, gamma_minus});
  const complexd off{n_plus.x, n_plus.y};  // n_x + i n_y
  return {0.5 * (ep * (1.0 + n_plus.z) + em * (1.0 - n_plus.z)),
          0.5 * (ep - em) * std::conj(off),
          0.5 * (ep - em) * off,
          0.5 * (ep * (1.0 - n_plus.z) + em * (1.0 + n_plus.z))};
}

struct GateReport {
  BlochVector basis_plus, basis_minus;
  PhaseDecomposition plus, minus;
  Unitary2 unitary;                   // reconstructed from basis phases
  double reconstruction_error = 0.0;  // vs. propagated unitary, up to phase
  double antisymmetry_residual = 0.0; // |wrap(gamma_g+ + gamma_g-)|
};

// Runs both basis states of a (possibly fluctuated) pulse sequence, verifies
// cyclicity, decomposes phases and rebuilds the gate. Residuals against the
// directly propagated unitary and against the gamma_g(n-) = -gamma_g(n+)
// relation are reported, not asserted.
inline GateReport gate_from_simulation(const PulseSequence& seq,
                                       const std::optional<FluctuationProfile>& profile,
                                       const BlochVector& n_plus, const GridSpec& grid = {}) {
  require_unit(n_plus, "gate_from_simulation");
  const HamiltonianSchedule sched =
      profile ? make_fluctuated_schedule(seq, *profile) : make_ideal_schedule(seq);

  GateReport r;
  r.basis_plus = n_plus;
  r.basis_minus = -n_plus;
  const Trajectory tp = propagate(sched, bloch_to_state(n_plus), grid);
  const Trajectory tm = propagate(sched, bloch_to_state(r.basis_minus), grid);
  r.plus = decompose_phase(tp, sched);
  r.minus = decompose_phase(tm, sched);
  r.unitary = reconstruct_gate(n_plus, r.plus.gamma_total, r.minus.gamma_total);
  r.reconstruction_error =
      distance_up_to_global_phase(reference_unitary(sched, grid), r.unitary);
  r.antisymmetry_residual =
      std::abs(wrap_angle(r.plus.gamma_geometric + r.minus.gamma_geometric));
  return r;
}

}  // namespace pulseloop
