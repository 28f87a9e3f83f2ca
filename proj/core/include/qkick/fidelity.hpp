#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkick/flux.hpp"
#include "qkick/pulses.hpp"
#include "qkick/step_grid.hpp"

namespace qkick {

/// Input-averaged transfer fidelity 1/2 [1 + a (2/3 + a/3)] for the transfer
/// coefficient a. Values within 1e-9 outside [-1, 1] are clamped; anything
/// further out signals a propagation bug and throws ContractViolation.
double average_fidelity(double alpha_n);

enum class ScheduleFamily { IdealKicks, SinPower, SquareDelta };
enum class SweepParameter { N, Delta, M };

std::string_view family_name(ScheduleFamily f);
ScheduleFamily parse_family(std::string_view name);
std::string_view parameter_name(SweepParameter p);
SweepParameter parse_parameter(std::string_view name);

struct SweepSpec {
  ScheduleFamily family = ScheduleFamily::SinPower;
  SweepParameter parameter = SweepParameter::N;
  std::vector<double> values;

  // Fixed parameters; the swept one is overridden per row.
  int n_sites = 5;
  int m = 6;
  double delta = 8.0;
  KickScheme scheme = KickScheme::JxB;
  double kick_duration = 1.0;

  // Step policy: n_steps when set, otherwise steps_per_pi * total_time / pi.
  std::optional<int> n_steps;
  double steps_per_pi = kDefaultStepsPerPi;

  /// Worker threads for row evaluation; 0 picks hardware concurrency.
  int threads = 0;

  /// Throws std::invalid_argument on an unusable spec.
  void validate() const;
};

/// Schedule for one sweep row.
PulseSchedule sweep_schedule(const SweepSpec& spec, double value);

struct TransferSummary {
  Peak peak;                 // max |alpha_N| over [0, total_time]
  double alpha_at_tau = 0.0; // alpha_N(total_time), signed
  double fidelity_max = 0.0;
  double fidelity_at_tau = 0.0;
  int n_steps = 0;
};

/// Propagates X_N under `s` and summarizes the transfer coefficient alpha_N.
/// Fidelities use |alpha_N|: its sign is a fixed receiver-frame flip.
TransferSummary analyze_transfer(const PulseSchedule& s, int n_steps);

/// Grid time at which both receiver operators have reached their site-1
/// partners: argmax over t of min(x, y), where x is the X_1 Z..Z coefficient
/// of the evolved X_N and y the Y_1 Z..Z coefficient of the evolved Y_N.
struct JointArrival {
  double time = 0.0;
  std::size_t step = 0;
  double x = 0.0;
  double y = 0.0;
};

JointArrival joint_arrival(const PulseSchedule& s, int n_steps);

struct SweepRow {
  double param = 0.0;
  double max_alpha = 0.0;
  double t_star = 0.0;
  double fidelity_max = 0.0;
  double fidelity_at_tau = 0.0;
  int n_steps = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// One row per value, in input order. Rows are independent and may be
/// evaluated concurrently; a failing row records its error and the sweep goes on.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace qkick
