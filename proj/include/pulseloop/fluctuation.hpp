// Regular-fluctuation noise model: a pair of continuous functions (f, g) on
// [0, 1] vanishing at both ends, together with their first derivatives.
// f perturbs the drive amplitude and phase, g' enters as a z detuning:
//
//   omega~(t)    = omega + f'(t)
//   axis~(t)     = (cos(phi(t) + g(t)), sin(phi(t) + g(t)), 0)
//   detuning_z   = g'(t)
//
// Built-in families:
//   piecewise_sine  f = f0 sin(2 pi xi u_i(t)) per segment, u_i local time
//   global_sine     f = f0 sin(8 pi xi t)
// plus identically-zero, tabulated (cubic-spline) and mix-and-match profiles.
//
// Evaluators take an optional second argument `loc` that selects the owning
// piece when t sits exactly on a breakpoint: the value/derivative of the piece
// containing loc is returned. Integrators use this to get one-sided limits at
// Hamiltonian jumps; plain calls default to loc = t (right-continuous).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseloop/pulse_dsl.hpp"
#include "pulseloop/su2.hpp"

namespace pulseloop {

// Index of the piece of a sorted breakpoint list owning `loc`.
// Right-continuous at interior breakpoints; the last piece includes 1.
inline std::size_t piece_index(const std::vector<double>& breakpoints, double loc) {
  if (breakpoints.size() < 2) throw std::invalid_argument("piece_index: need >= 2 breakpoints");
  std::size_t idx = 0;
  for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i)
    if (loc >= breakpoints[i]) idx = i;
  return idx;
}

namespace detail {

inline void validate_breakpoints(const std::vector<double>& bps, const char* what) {
  if (bps.size() < 2 || bps.front() != 0.0 || bps.back() != 1.0)
    throw std::domain_error(std::string(what) + ": breakpoints must run from 0 to 1");
  for (std::size_t i = 1; i < bps.size(); ++i)
    if (!(bps[i] > bps[i - 1]))
      throw std::domain_error(std::string(what) + ": breakpoints must be strictly increasing");
}

// Natural cubic spline through (x, y); exact analytic derivative of the
// interpolant, so value and derivative are consistent to machine precision.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || n != y_.size())
      throw std::domain_error("CubicSpline: need >= 2 samples per piece");
    m_.assign(n, 0.0);
    if (n == 2) return;

    // Thomas solve for interior second derivatives, natural end conditions.
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1];
      const double hr = x_[i + 1] - x_[i];
      diag[i] = 2.0 * (hl + hr);
      upper[i] = hr;
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1];
      const double w = hl / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  double value(double t) const {
    const std::size_t i = interval(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
  }

  double derivative(double t) const {
    const std::size_t i = interval(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
  }

 private:
  std::size_t interval(double t) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (t >= x_[mid] ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace detail

struct FluctuationProfile {
  struct Metadata {
    std::string kind = "zero";  // zero | piecewise_sine | global_sine | tabulated | combined
    double f0 = 0.0;
    double g0 = 0.0;
    int xi = 0;
    int eta = 0;
  };

  using Evaluator = std::function<double(double t, double loc)>;

  Evaluator f_fn, g_fn, df_fn, dg_fn;
  std::vector<double> breakpoints{0.0, 1.0};  // pieces between which f, g are smooth
  Metadata metadata;

  double f(double t, double loc) const { return f_fn(t, loc); }
  double g(double t, double loc) const { return g_fn(t, loc); }
  double df(double t, double loc) const { return df_fn(t, loc); }
  double dg(double t, double loc) const { return dg_fn(t, loc); }

  double f(double t) const { return f_fn(t, t); }
  double g(double t) const { return g_fn(t, t); }
  double df(double t) const { return df_fn(t, t); }
  double dg(double t) const { return dg_fn(t, t); }
};

inline FluctuationProfile zero_profile() {
  FluctuationProfile p;
  const auto zero = [](double, double) { return 0.0; };
  p.f_fn = p.g_fn = p.df_fn = p.dg_fn = zero;
  p.metadata.kind = "zero";
  return p;
}

// f(t) = f0 sin(2 pi xi u_i(t)), g(t) = g0 sin(2 pi eta u_i(t)), where
// u_i(t) = (t - t_{i-1}) / (t_i - t_{i-1}) is local time within piece i.
// Integer xi, eta make both functions vanish at every breakpoint.
inline FluctuationProfile piecewise_sine_profile(double f0, double g0, int xi, int eta,
                                                 std::vector<double> breakpoints) {
  if (xi < 1 || eta < 1)
    throw std::domain_error("piecewise_sine_profile: xi and eta must be positive integers");
  detail::validate_breakpoints(breakpoints, "piecewise_sine_profile");

  auto make = [breakpoints](double amp, int freq, bool deriv) -> FluctuationProfile::Evaluator {
    return [breakpoints, amp, freq, deriv](double t, double loc) {
      const std::size_t i = piece_index(breakpoints, loc);
      const double width = breakpoints[i + 1] - breakpoints[i];
      const double u = (t - breakpoints[i]) / width;
      const double w = kTwoPi * freq;
      return deriv ? amp * (w / width) * std::cos(w * u) : amp * std::sin(w * u);
    };
  };

  FluctuationProfile p;
  p.f_fn = make(f0, xi, false);
  p.g_fn = make(g0, eta, false);
  p.df_fn = make(f0, xi, true);
  p.dg_fn = make(g0, eta, true);
  p.breakpoints = std::move(breakpoints);
  p.metadata = {"piecewise_sine", f0, g0, xi, eta};
  return p;
}

// f(t) = f0 sin(8 pi xi t), g(t) = g0 sin(8 pi eta t). Period 1/(4 xi), so the
// half-period shift symmetry f(t + 1/2) = f(t) holds for every integer xi.
inline FluctuationProfile global_sine_profile(double f0, double g0, int xi, int eta) {
  if (xi < 1 || eta < 1)
    throw std::domain_error("global_sine_profile: xi and eta must be positive integers");

  auto make = [](double amp, int freq, bool deriv) -> FluctuationProfile::Evaluator {
    const double w = 8.0 * kPi * freq;
    return [amp, w, deriv](double t, double) {
      return deriv ? amp * w * std::cos(w * t) : amp * std::sin(w * t);
    };
  };

  FluctuationProfile p;
  p.f_fn = make(f0, xi, false);
  p.g_fn = make(g0, eta, false);
  p.df_fn = make(f0, xi, true);
  p.dg_fn = make(g0, eta, true);
  p.metadata = {"global_sine", f0, g0, xi, eta};
  return p;
}

// Builds a profile from samples [[t, f, g], ...] covering [0, 1] by natural
// cubic splines, one spline per declared piece so that derivative jumps at
// interior breakpoints are representable. Derivatives are the exact spline
// derivatives. Interior breakpoints, if any, must coincide with sample nodes.
inline FluctuationProfile tabulated_profile(const std::vector<std::array<double, 3>>& samples,
                                            const std::vector<double>& interior_breakpoints = {}) {
  if (samples.size() < 2) throw std::domain_error("tabulated_profile: need >= 2 samples");
  std::vector<double> t(samples.size());
  std::vector<double> fv(samples.size()), gv(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[i] = samples[i][0];
    fv[i] = samples[i][1];
    gv[i] = samples[i][2];
    if (i > 0 && !(t[i] > t[i - 1]))
      throw std::domain_error("tabulated_profile: sample times must be strictly increasing");
  }
  if (std::abs(t.front()) > 1e-12 || std::abs(t.back() - 1.0) > 1e-12)
    throw std::domain_error("tabulated_profile: samples must cover [0, 1]");
  t.front() = 0.0;
  t.back() = 1.0;

  std::vector<double> bps{0.0};
  std::vector<std::size_t> node_of_bp{0};
  for (double b : interior_breakpoints) {
    if (!(b > bps.back() && b < 1.0))
      throw std::domain_error("tabulated_profile: interior breakpoints must be sorted in (0, 1)");
    std::size_t k = node_of_bp.back();
    while (k < t.size() && t[k] < b - 1e-12) ++k;
    if (k >= t.size() || std::abs(t[k] - b) > 1e-12)
      throw std::domain_error("tabulated_profile: breakpoint does not coincide with a sample node");
    bps.push_back(t[k]);
    node_of_bp.push_back(k);
  }
  bps.push_back(1.0);
  node_of_bp.push_back(t.size() - 1);

  auto splines = std::make_shared<std::vector<std::array<detail::CubicSpline, 2>>>();
  for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
    const std::size_t a = node_of_bp[p], b = node_of_bp[p + 1];
    std::vector<double> xs(t.begin() + a, t.begin() + b + 1);
    splines->push_back(
        {detail::CubicSpline(xs, std::vector<double>(fv.begin() + a, fv.begin() + b + 1)),
         detail::CubicSpline(xs, std::vector<double>(gv.begin() + a, gv.begin() + b + 1))});
  }

  auto make = [splines, bps](int col, bool deriv) -> FluctuationProfile::Evaluator {
    return [splines, bps, col, deriv](double t, double loc) {
      const auto& s = (*splines)[piece_index(bps, loc)][col];
      return deriv ? s.derivative(t) : s.value(t);
    };
  };

  FluctuationProfile p;
  p.f_fn = make(0, false);
  p.g_fn = make(1, false);
  p.df_fn = make(0, true);
  p.dg_fn = make(1, true);
  p.breakpoints = bps;
  p.metadata.kind = "tabulated";
  return p;
}

// f parts from one profile, g parts from another (independent noise sources).
inline FluctuationProfile combined_profile(const FluctuationProfile& pf,
                                           const FluctuationProfile& pg) {
  FluctuationProfile p;
  p.f_fn = pf.f_fn;
  p.df_fn = pf.df_fn;
  p.g_fn = pg.g_fn;
  p.dg_fn = pg.dg_fn;
  p.breakpoints = pf.breakpoints;
  for (double b : pg.breakpoints) {
    bool present = false;
    for (double c : p.breakpoints) present = present || std::abs(c - b) < 1e-12;
    if (!present) p.breakpoints.push_back(b);
  }
  std::sort(p.breakpoints.begin(), p.breakpoints.end());
  p.metadata = {"combined", pf.metadata.f0, pg.metadata.g0, pf.metadata.xi, pg.metadata.eta};
  return p;
}

// ---------------------------------------------------------------------------
// Boundary conditions: f and g must vanish at both ends of [0, 1].

struct BoundaryCheck {
  bool ok = false;
  double f_start = 0.0, g_start = 0.0, f_end = 0.0, g_end = 0.0;

  double max_residual() const {
    return std::max(std::max(std::abs(f_start), std::abs(g_start)),
                    std::max(std::abs(f_end), std::abs(g_end)));
  }
};

inline BoundaryCheck check_boundary_conditions(const FluctuationProfile& p, double tol = 1e-9) {
  BoundaryCheck c;
  c.f_start = p.f(0.0);
  c.g_start = p.g(0.0);
  c.f_end = p.f(1.0);
  c.g_end = p.g(1.0);
  c.ok = c.max_residual() < tol;
  return c;
}

// ---------------------------------------------------------------------------
// Symmetry classification. Two function identities are known to null the
// dynamical phase exactly:
//   shift:   f(t + 1/2) = f(t)  and  g'(t + 1/2) = g'(t)
//   reflect: f(1 - t) = -f(t), g'(1 - t) = g'(t), with f(1/2) = 0
// Decided by sampling on grids that avoid piece boundaries (where one-sided
// derivatives differ); checked in the order below, first match wins.

enum class SymmetryClass { ZeroG, ShiftSymmetric, ReflectSymmetric, Unclassified };

inline const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::ZeroG: return "zero_g";
    case SymmetryClass::ShiftSymmetric: return "shift_symmetric";
    case SymmetryClass::ReflectSymmetric: return "reflect_symmetric";
    default: return "unclassified";
  }
}

inline SymmetryClass classify_symmetry(const FluctuationProfile& p) {
  constexpr int kPoints = 1024;
  constexpr double kTol = 1e-9;

  double gmax = 0.0;
  for (int j = 0; j <= kPoints; ++j)
    gmax = std::max(gmax, std::abs(p.g(static_cast<double>(j) / kPoints)));
  if (gmax < 1e-12) return SymmetryClass::ZeroG;

  double shift = 0.0;
  for (int j = 0; j < kPoints; ++j) {
    const double t = (2.0 * j + 1.0) / (4.0 * kPoints);  // in (0, 1/2)
    shift = std::max(shift, std::abs(p.f(t + 0.5) - p.f(t)));
    shift = std::max(shift, std::abs(p.dg(t + 0.5) - p.dg(t)));
  }
  if (shift < kTol) return SymmetryClass::ShiftSymmetric;

  double reflect = std::abs(2.0 * p.f(0.5));
  for (int j = 0; j < kPoints; ++j) {
    const double t = (2.0 * j + 1.0) / (2.0 * kPoints);  // in (0, 1)
    reflect = std::max(reflect, std::abs(p.f(1.0 - t) + p.f(t)));
    reflect = std::max(reflect, std::abs(p.dg(1.0 - t) - p.dg(t)));
  }
  if (reflect < kTol) return SymmetryClass::ReflectSymmetric;

  return SymmetryClass::Unclassified;
}

// ---------------------------------------------------------------------------
// Fluctuated Hamiltonian and reference curve.

// Sample of the noisy drive: amplitude omega + f', segment phase shifted by
// g, detuning g'. `loc` picks the owning piece when t is a joint breakpoint.
inline HamiltonianSample fluctuated_hamiltonian_at(const PulseSequence& seq,
                                                   const FluctuationProfile& p, double t,
                                                   double loc) {
  const PulseSegment& s = seq.segments[seq.segment_index(loc)];
  const double phi = s.phase_deg * kPi / 180.0 + p.g(t, loc);
  return {seq.ideal_amplitude() + p.df(t, loc),
          {std::cos(phi), std::sin(phi), 0.0},
          p.dg(t, loc)};
}

inline HamiltonianSample fluctuated_hamiltonian_at(const PulseSequence& seq,
                                                   const FluctuationProfile& p, double t) {
  return fluctuated_hamiltonian_at(seq, p, t, t);
}

namespace detail {

inline bool is_composite_90x_180y_90x(const PulseSequence& seq) {
  if (seq.segments.size() != 3) return false;
  const double a[3] = {90.0, 180.0, 90.0};
  const double ph[3] = {0.0, 90.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(seq.segments[i].angle_deg - a[i]) > 1e-12) return false;
    if (std::abs(std::remainder(seq.segments[i].phase_deg - ph[i], 360.0)) > 1e-12) return false;
  }
  return true;
}

}  // namespace detail

// Closed-form eigenbasis curve of the fluctuated composite pulse:
//   n~(t) = sign * (sin(theta + f) sin(phi + g), -sin(theta + f) cos(phi + g), cos(theta + f))
// with theta(t) = 2 pi t - pi/2 and phi the segment phase. Defined only for
// the 90x 180y 90x composite, whose ideal curve this parametrization encodes.
inline BlochVector fluctuated_curve_at(const PulseSequence& seq, const FluctuationProfile& p,
                                       double t, int sign = +1) {
  if (!detail::is_composite_90x_180y_90x(seq))
    throw std::domain_error("fluctuated_curve_at: defined only for the 90x 180y 90x composite");
  if (sign != 1 && sign != -1) throw std::domain_error("fluctuated_curve_at: sign must be +-1");
  const double theta = kTwoPi * t - 0.5 * kPi + p.f(t);
  const double phi = seq.segments[seq.segment_index(t)].phase_deg * kPi / 180.0 + p.g(t);
  const double s = static_cast<double>(sign);
  return {s * std::sin(theta) * std::sin(phi), -s * std::sin(theta) * std::cos(phi),
          s * std::cos(theta)};
}

inline BlochVector ideal_curve_at(const PulseSequence& seq, double t, int sign = +1) {
  return fluctuated_curve_at(seq, zero_profile(), t, sign);
}

}  // namespace pulseloop
