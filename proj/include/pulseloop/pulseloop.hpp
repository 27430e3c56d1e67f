// Umbrella header: pulls in the whole library.
//
// pulseloop simulates single-qubit composite-pulse dynamics under smooth
// deterministic control fluctuations and splits the acquired phase of cyclic
// evolutions into dynamical and geometric parts.

#pragma once

#include "pulseloop/su2.hpp"
#include "pulseloop/pulse_dsl.hpp"
#include "pulseloop/fluctuation.hpp"
#include "pulseloop/propagator.hpp"
#include "pulseloop/phase_analysis.hpp"
#include "pulseloop/experiments.hpp"
#include "pulseloop/profile_io.hpp"
