#include "qkick/step_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkick {

int default_step_count(const PulseSchedule& s, double steps_per_pi) {
  return std::max(1, static_cast<int>(std::ceil(steps_per_pi * s.total_time() / kPi - 1e-9)));
}

std::vector<double> step_grid(const PulseSchedule& s, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  const double total = s.total_time();
  const auto breaks = s.breakpoints();
  constexpr double kMergeTolerance = 1e-12;

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n_steps) + breaks.size() + 1);
  for (int k = 0; k <= n_steps; ++k) grid.push_back(total * k / n_steps);
  for (double b : breaks) grid.push_back(b);
  std::sort(grid.begin(), grid.end());

  // Keep breakpoints exact: drop uniform points that sit on top of one.
  std::vector<double> out;
  out.reserve(grid.size());
  auto is_break = [&](double t) { return std::binary_search(breaks.begin(), breaks.end(), t); };
  for (double t : grid) {
    if (!out.empty() && t - out.back() <= kMergeTolerance * std::max(1.0, total)) {
      if (is_break(t) && !is_break(out.back()) && out.size() > 1) out.back() = t;
      continue;
    }
    out.push_back(t);
  }
  out.front() = 0.0;
  out.back() = total;
  return out;
}

}  // namespace qkick
