// Pulse-sequence notation parser and the piecewise-constant control schedule
// it denotes.
//
// Grammar:  seq := pulse+ ; pulse := ANGLE (AXIS | "(" PHASE_DEG ")")
// with AXIS in {x, y, -x, -y} and ANGLE a positive decimal. Whitespace between
// pulses is optional because an axis letter (or closing parenthesis)
// terminates a token: "90x180y90x" and "90x 180y 90x" parse identically.
//
// Durations are proportional to rotation angles at constant drive amplitude,
// normalized so the whole sequence occupies [0, 1]. The drive amplitude is
// then omega = (total_angle_deg / 360) * 2*pi.

#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseloop/su2.hpp"

namespace pulseloop {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t token_index)
      : std::runtime_error("token " + std::to_string(token_index) + ": " + what),
        token_index_(token_index) {}

  // 1-based index of the offending pulse token.
  std::size_t token_index() const { return token_index_; }

 private:
  std::size_t token_index_;
};

struct PulseSegment {
  double angle_deg = 0.0;  // rotation angle, > 0
  double phase_deg = 0.0;  // rf phase: 0 = +x, 90 = +y
  double t_start = 0.0;
  double t_end = 0.0;

  double duration() const { return t_end - t_start; }

  // In-plane rotation axis (cos phase, sin phase, 0).
  BlochVector axis() const {
    const double phi = phase_deg * kPi / 180.0;
    return {std::cos(phi), std::sin(phi), 0.0};
  }
};

struct PulseSequence {
  std::vector<PulseSegment> segments;
  // Segment boundaries, breakpoints.front() == 0 and breakpoints.back() == 1.
  // Entry i is the exact ratio prefix_angle_i / total_angle, so the list sums
  // to 1 without accumulation error.
  std::vector<double> breakpoints;
  double total_angle_deg = 0.0;
  std::string text;  // normalized notation, single-space separated

  // Constant drive amplitude realizing every segment's angle in its slot.
  double ideal_amplitude() const { return (total_angle_deg / 360.0) * kTwoPi; }

  // Index of the segment owning time t; right-continuous at interior
  // breakpoints, and t == 1 belongs to the last segment.
  std::size_t segment_index(double t) const {
    if (t < 0.0 || t > 1.0)
      throw std::domain_error("segment_index: t outside [0, 1]");
    std::size_t lo = 0;
    for (std::size_t i = 1; i < breakpoints.size() - 1; ++i)
      if (t >= breakpoints[i]) lo = i;
    return lo;
  }
};

namespace detail {

struct RawPulse {
  double angle_deg;
  double phase_deg;
  std::string spelling;
};

inline bool parse_number(const std::string& s, std::size_t& pos, double& out) {
  std::size_t start = pos;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  bool digits = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    ++pos;
    digits = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      digits = true;
    }
  }
  if (!digits) {
    pos = start;
    return false;
  }
  out = std::stod(s.substr(start, pos - start));
  return true;
}

}  // namespace detail

// Parses pulse notation into a normalized sequence tiling [0, 1].
// Throws parse_error (with a 1-based token index) on malformed input.
inline PulseSequence parse_sequence(const std::string& text) {
  std::vector<detail::RawPulse> pulses;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;

    const std::size_t token_index = pulses.size() + 1;
    const std::size_t token_start = pos;

    double angle = 0.0;
    if (!detail::parse_number(text, pos, angle))
      throw parse_error("expected a rotation angle", token_index);
    if (angle <= 0.0)
      throw parse_error("rotation angle must be positive", token_index);

    double phase = 0.0;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      if (!detail::parse_number(text, pos, phase) || pos >= text.size() || text[pos] != ')')
        throw parse_error("malformed explicit phase, expected (<degrees>)", token_index);
      ++pos;
    } else {
      bool neg = false;
      if (pos < text.size() && text[pos] == '-') {
        neg = true;
        ++pos;
      }
      if (pos >= text.size())
        throw parse_error("missing axis after angle", token_index);
      const char axis = text[pos];
      if (axis == 'x')
        phase = neg ? 180.0 : 0.0;
      else if (axis == 'y')
        phase = neg ? 270.0 : 90.0;
      else
        throw parse_error(std::string("unknown axis '") + axis + "'", token_index);
      ++pos;
    }
    pulses.push_back({angle, phase, text.substr(token_start, pos - token_start)});
  }

  if (pulses.empty()) throw parse_error("empty pulse sequence", 1);

  double total = 0.0;
  for (const auto& p : pulses) total += p.angle_deg;

  PulseSequence seq;
  seq.total_angle_deg = total;
  seq.breakpoints.reserve(pulses.size() + 1);
  seq.breakpoints.push_back(0.0);
  double prefix = 0.0;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    prefix += pulses[i].angle_deg;
    const double t_end = (i + 1 == pulses.size()) ? 1.0 : prefix / total;
    seq.segments.push_back(
        {pulses[i].angle_deg, pulses[i].phase_deg, seq.breakpoints.back(), t_end});
    seq.breakpoints.push_back(t_end);
    if (!seq.text.empty()) seq.text += ' ';
    seq.text += pulses[i].spelling;
  }
  return seq;
}

// Piecewise-constant ideal Hamiltonian of a sequence: omega = ideal_amplitude,
// axis from the segment phase, no detuning. Right-continuous at breakpoints.
inline HamiltonianSample ideal_hamiltonian_at(const PulseSequence& seq, double t) {
  const PulseSegment& s = seq.segments[seq.segment_index(t)];
  return {seq.ideal_amplitude(), s.axis(), 0.0};
}

}  // namespace pulseloop
