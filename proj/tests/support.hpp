#pragma once

// Shared fixtures for the test suite.

#include <array>
#include <cmath>
#include <vector>

#include "pulseloop/fluctuation.hpp"
#include "pulseloop/pulse_dsl.hpp"

namespace testsupport {

inline pulseloop::PulseSequence composite() {
  return pulseloop::parse_sequence("90x 180y 90x");
}

// Boundary-respecting profile with no usable symmetry: f = 0, and g is a
// single sine hump confined to the first quarter of the window,
// g(t) = 0.05 sin(8 pi t) on [0, 1/4], zero afterwards. Its forward
// dynamical phase has the closed form 1/150.
inline pulseloop::FluctuationProfile broken_symmetry_profile() {
  std::vector<std::array<double, 3>> samples;
  const int per = 128;
  for (int i = 0; i <= per; ++i) {
    const double t = 0.25 * i / per;
    samples.push_back({t, 0.0, 0.05 * std::sin(8.0 * pulseloop::kPi * t)});
  }
  for (int i = 1; i <= 3 * per; ++i) {
    const double t = 0.25 + 0.75 * i / (3.0 * per);
    samples.push_back({t, 0.0, 0.0});
  }
  samples.back()[0] = 1.0;
  return pulseloop::tabulated_profile(samples, {0.25});
}

constexpr double kBrokenSymmetryDynamicalPhase = 1.0 / 150.0;

}  // namespace testsupport
