#pragma once

#include <vector>

#include "qkick/pulses.hpp"

namespace qkick {

/// Step density used when a caller does not pick one. Doubling it changes the
/// m = 6, N = 5 transfer peak by about 3e-7.
inline constexpr double kDefaultStepsPerPi = 400.0;

int default_step_count(const PulseSchedule& s, double steps_per_pi = kDefaultStepsPerPi);

/// Uniform grid of `n_steps` intervals on [0, total_time] merged with every
/// schedule discontinuity. Uniform points closer than 1e-12 to a
/// discontinuity are dropped in favour of it.
std::vector<double> step_grid(const PulseSchedule& s, int n_steps);

}  // namespace qkick
