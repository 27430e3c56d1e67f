// Minimal SU(2) / two-level-system algebra: Bloch vectors, state vectors,
// 2x2 unitaries, Hamiltonian samples and closed-form rotations.
//
// Conventions used throughout the library:
//   - hbar = 1, time is dimensionless on [0, 1]
//   - H = (omega/2) (axis . sigma) + (detuning_z/2) sigma_z
//   - exp(-i (angle/2) (axis . sigma)) = cos(angle/2) I - i sin(angle/2) (axis . sigma)
//   - state gauge: c0 real and >= 0; the south pole maps to (0, 1)

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace pulseloop {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using complexd = std::complex<double>;

// Wraps an angle to the half-open interval (-pi, pi].
inline double wrap_angle(double x) {
  double w = std::remainder(x, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

// ---------------------------------------------------------------------------
// BlochVector

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const BlochVector& a, const BlochVector& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline BlochVector cross(const BlochVector& a, const BlochVector& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline BlochVector normalized(const BlochVector& v) {
  const double n = v.norm();
  if (n < 1e-12) throw std::domain_error("cannot normalize a near-zero vector");
  return {v.x / n, v.y / n, v.z / n};
}

inline void require_unit(const BlochVector& v, const char* what, double tol = 1e-9) {
  if (std::abs(v.norm() - 1.0) > tol)
    throw std::domain_error(std::string(what) + ": expected a unit vector");
}

// ---------------------------------------------------------------------------
// StateVector

struct StateVector {
  complexd c0{0.0, 0.0};
  complexd c1{0.0, 0.0};

  double norm() const { return std::sqrt(std::norm(c0) + std::norm(c1)); }

  StateVector operator*(const complexd& s) const { return {c0 * s, c1 * s}; }
};

// <a|b>
inline complexd inner(const StateVector& a, const StateVector& b) {
  return std::conj(a.c0) * b.c0 + std::conj(a.c1) * b.c1;
}

inline StateVector normalized(const StateVector& s) {
  const double n = s.norm();
  if (n < 1e-12) throw std::domain_error("cannot normalize a near-zero state");
  return {s.c0 / n, s.c1 / n};
}

// Maps a unit Bloch vector to the state with c0 real and >= 0.
// The south pole (0, 0, -1) maps to (0, 1).
inline StateVector bloch_to_state(const BlochVector& n) {
  require_unit(n, "bloch_to_state");
  const double s = 1.0 + n.z;
  if (s < 1e-14) return {complexd{0.0, 0.0}, complexd{1.0, 0.0}};
  const double c0 = std::sqrt(0.5 * s);
  const double d = std::sqrt(2.0 * s);
  return {complexd{c0, 0.0}, complexd{n.x / d, n.y / d}};
}

// Bloch vector of a state ray: (<sx>, <sy>, <sz>) normalized.
inline BlochVector state_to_bloch(const StateVector& psi) {
  const double nn = std::norm(psi.c0) + std::norm(psi.c1);
  if (nn < 1e-24) throw std::domain_error("state_to_bloch: zero state vector");
  const complexd q = std::conj(psi.c0) * psi.c1;
  BlochVector n{2.0 * q.real() / nn, 2.0 * q.imag() / nn,
                (std::norm(psi.c0) - std::norm(psi.c1)) / nn};
  return normalized(n);
}

// ---------------------------------------------------------------------------
// HamiltonianSample: H = (omega/2) (axis . sigma) + (detuning_z/2) sigma_z.

struct HamiltonianSample {
  double omega = 0.0;
  BlochVector axis{0.0, 0.0, 1.0};  // unit vector
  double detuning_z = 0.0;
};

// H |psi>, expanded in components to avoid building the matrix.
inline StateVector apply_hamiltonian(const HamiltonianSample& h, const StateVector& psi) {
  const double a = 0.5 * (h.omega * h.axis.z + h.detuning_z);
  const complexd b{0.5 * h.omega * h.axis.x, -0.5 * h.omega * h.axis.y};
  return {a * psi.c0 + b * psi.c1, std::conj(b) * psi.c0 - a * psi.c1};
}

// <psi|H|psi> for a normalized state. Equals
// (omega/2) (axis . n) + (detuning_z/2) n_z with n the Bloch vector of psi.
inline double energy_expectation(const StateVector& psi, const HamiltonianSample& h) {
  const double nn = std::norm(psi.c0) + std::norm(psi.c1);
  if (nn < 1e-24) throw std::domain_error("energy_expectation: zero state vector");
  const complexd q = std::conj(psi.c0) * psi.c1;
  const double nx = 2.0 * q.real() / nn;
  const double ny = 2.0 * q.imag() / nn;
  const double nz = (std::norm(psi.c0) - std::norm(psi.c1)) / nn;
  return 0.5 * h.omega * (h.axis.x * nx + h.axis.y * ny + h.axis.z * nz) +
         0.5 * h.detuning_z * nz;
}

// ---------------------------------------------------------------------------
// Unitary2

struct Unitary2 {
  // row-major entries
  complexd m00{1.0, 0.0}, m01{0.0, 0.0};
  complexd m10{0.0, 0.0}, m11{1.0, 0.0};

  static Unitary2 identity() { return {}; }

  Unitary2 adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }

  StateVector apply(const StateVector& s) const {
    return {m00 * s.c0 + m01 * s.c1, m10 * s.c0 + m11 * s.c1};
  }
};

inline Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline double max_abs_diff(const Unitary2& a, const Unitary2& b) {
  double d = std::abs(a.m00 - b.m00);
  d = std::max(d, std::abs(a.m01 - b.m01));
  d = std::max(d, std::abs(a.m10 - b.m10));
  d = std::max(d, std::abs(a.m11 - b.m11));
  return d;
}

inline bool is_unitary(const Unitary2& u, double tol = 1e-10) {
  const Unitary2 p = u.adjoint() * u;
  return max_abs_diff(p, Unitary2::identity()) <= tol;
}

// Max elementwise deviation after aligning the global phase of b to a.
inline double distance_up_to_global_phase(const Unitary2& a, const Unitary2& b) {
  const complexd tr = std::conj(b.m00) * a.m00 + std::conj(b.m01) * a.m01 +
                      std::conj(b.m10) * a.m10 + std::conj(b.m11) * a.m11;
  complexd phase{1.0, 0.0};
  if (std::abs(tr) > 1e-15) phase = tr / std::abs(tr);
  const Unitary2 c{b.m00 * phase, b.m01 * phase, b.m10 * phase, b.m11 * phase};
  return max_abs_diff(a, c);
}

// exp(-i (angle/2) (axis . sigma)); axis must be a unit vector.
inline Unitary2 su2_rotation(const BlochVector& axis, double angle) {
  require_unit(axis, "su2_rotation");
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  return {complexd{c, -s * axis.z}, complexd{-s * axis.y, -s * axis.x},
          complexd{s * axis.y, -s * axis.x}, complexd{c, s * axis.z}};
}

}  // namespace pulseloop
