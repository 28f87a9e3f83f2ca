#include "qkick/fidelity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qkick/error.hpp"
#include "qkick/graph.hpp"

namespace qkick {

double average_fidelity(double alpha_n) {
  constexpr double kSlack = 1e-9;
  if (!std::isfinite(alpha_n) || std::abs(alpha_n) > 1.0 + kSlack)
    throw ContractViolation("transfer coefficient outside [-1, 1]: " + std::to_string(alpha_n));
  const double a = std::clamp(alpha_n, -1.0, 1.0);
  return 0.5 * (1.0 + a * (2.0 / 3.0 + a / 3.0));
}

std::string_view family_name(ScheduleFamily f) {
  switch (f) {
    case ScheduleFamily::IdealKicks: return "ideal";
    case ScheduleFamily::SinPower: return "sin";
    case ScheduleFamily::SquareDelta: return "square";
  }
  return "?";
}

ScheduleFamily parse_family(std::string_view name) {
  if (name == "ideal" || name == "ideal_kicks" || name == "IdealKicks")
    return ScheduleFamily::IdealKicks;
  if (name == "sin" || name == "sin_power" || name == "SinPower") return ScheduleFamily::SinPower;
  if (name == "square" || name == "square_delta" || name == "SquareDelta")
    return ScheduleFamily::SquareDelta;
  throw std::invalid_argument("unknown schedule family '" + std::string(name) + "'");
}

std::string_view parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::N: return "N";
    case SweepParameter::Delta: return "delta";
    case SweepParameter::M: return "m";
  }
  return "?";
}

SweepParameter parse_parameter(std::string_view name) {
  if (name == "N" || name == "n" || name == "n_sites") return SweepParameter::N;
  if (name == "delta") return SweepParameter::Delta;
  if (name == "m") return SweepParameter::M;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
}

namespace {

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("sweep values must be strictly increasing");
  if (parameter == SweepParameter::Delta && family != ScheduleFamily::SquareDelta)
    throw std::invalid_argument("delta can only be swept for square pulses");
  if (parameter == SweepParameter::M && family != ScheduleFamily::SinPower)
    throw std::invalid_argument("m can only be swept for sin^m pulses");
  if (parameter != SweepParameter::Delta) {
    for (double v : values)
      if (!is_integer(v)) throw std::invalid_argument("N and m sweep values must be integers");
  }
  if (n_steps && *n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!(steps_per_pi > 0.0)) throw std::invalid_argument("steps_per_pi must be positive");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

PulseSchedule sweep_schedule(const SweepSpec& spec, double value) {
  int n = spec.n_sites;
  int m = spec.m;
  double delta = spec.delta;
  switch (spec.parameter) {
    case SweepParameter::N: n = static_cast<int>(value); break;
    case SweepParameter::M: m = static_cast<int>(value); break;
    case SweepParameter::Delta: delta = value; break;
  }
  switch (spec.family) {
    case ScheduleFamily::IdealKicks: return ideal_schedule(n, spec.scheme, spec.kick_duration);
    case ScheduleFamily::SinPower: return sin_power_schedule(n, m);
    case ScheduleFamily::SquareDelta: return square_schedule(n, delta);
  }
  throw std::invalid_argument("unknown schedule family");
}

TransferSummary analyze_transfer(const PulseSchedule& s, int n_steps) {
  const OperatorGraph g = build_graph(s.n_sites());
  const GeneratorMatrix k = generator_matrices(g);
  const FluxResult r = propagate(k, s, n_steps, 1);
  const int node = s.n_sites();

  TransferSummary out;
  out.peak = refine_peak(k, s, r, node);
  out.alpha_at_tau = r.alpha(r.size() - 1, node);
  out.fidelity_max = average_fidelity(out.peak.value);
  out.fidelity_at_tau = average_fidelity(std::abs(out.alpha_at_tau));
  out.n_steps = n_steps;
  return out;
}

JointArrival joint_arrival(const PulseSchedule& s, int n_steps) {
  const int n = s.n_sites();
  const OperatorGraph g = build_graph(n);
  const GeneratorMatrix k = generator_matrices(g);
  const auto grid = step_grid(s, n_steps);
  const FluxResult rx = propagate_on_grid(k, s, grid, 1);
  const FluxResult ry = propagate_on_grid(k, s, grid, n + 1);
  // X_1 Z..Z is node N for odd N and node 2N for even N; Y_1 Z..Z the other.
  PauliString x1 = PauliString::single(n, 1, Pauli::X);
  for (int site = 2; site <= n; ++site) x1.set(site, Pauli::Z);
  PauliString y1 = x1;
  y1.set(1, Pauli::Y);
  const int x_node = *g.index_of(x1);
  const int y_node = *g.index_of(y1);

  JointArrival out;
  double best = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = std::abs(rx.alpha(i, x_node));
    const double y = std::abs(ry.alpha(i, y_node));
    if (std::min(x, y) > best) {
      best = std::min(x, y);
      out = JointArrival{grid[i], i, x, y};
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(spec.values.size());

  auto evaluate = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.param = spec.values[i];
    try {
      const PulseSchedule s = sweep_schedule(spec, row.param);
      row.n_steps = spec.n_steps ? *spec.n_steps : default_step_count(s, spec.steps_per_pi);
      const TransferSummary t = analyze_transfer(s, row.n_steps);
      row.max_alpha = t.peak.value;
      row.t_star = t.peak.time;
      row.fidelity_max = t.fidelity_max;
      row.fidelity_at_tau = t.fidelity_at_tau;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(
      rows.size(), spec.threads > 0 ? static_cast<std::size_t>(spec.threads) : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) evaluate(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) evaluate(i);
      });
  }
  return rows;
}

}  // namespace qkick
