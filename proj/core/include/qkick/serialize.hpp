#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkick/fidelity.hpp"
#include "qkick/flux.hpp"
#include "qkick/graph.hpp"
#include "qkick/oracle.hpp"
#include "qkick/pulses.hpp"

namespace qkick {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v);

/// {n_sites, channels, nodes: [{index, string, edges: [{to, channel, sign}]}]}.
/// Each edge sign is the generator entry K_c[index][to].
nlohmann::json graph_to_json(const OperatorGraph& g);

/// {variant, n_sites, total_time, ...variant fields}.
nlohmann::json schedule_to_json(const PulseSchedule& s);

/// Reads the full form written by schedule_to_json, or a shorthand:
///   {"variant": "ideal_kicks", "n_sites": 5, "scheme": "JxB", "kick_duration": 1}
///   {"variant": "sin_power", "n_sites": 5, "m": 6}
///   {"variant": "square_delta", "n_sites": 5, "delta": 8}
/// Missing fields fall back to the calibrated builders. Throws
/// std::invalid_argument on malformed input.
PulseSchedule schedule_from_json(const nlohmann::json& j);

/// "# key=value" metadata lines, then t,alpha_1..alpha_2N,norm.
std::string flux_csv(const FluxResult& r, const nlohmann::json& metadata = {});

/// {max_alpha_N, t_star, fidelity, fidelity_at_tau, alpha_N_at_tau, n_steps}.
nlohmann::json transfer_summary_json(const TransferSummary& t);

/// [[bitstring, re, im], ...] over amplitudes with modulus above `threshold`.
nlohmann::json state_to_json(const StateVector& psi, double threshold = 1e-12);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);
nlohmann::json sweep_to_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Accepts a JSON object or key=value lines ('#' starts a comment). Keys:
/// family, parameter, values, n_sites, m, delta, scheme, kick_duration,
/// n_steps, steps_per_pi, threads. `values` is a comma-separated list in
/// key=value form. Throws std::invalid_argument on unknown keys.
SweepSpec parse_sweep_spec(std::string_view text);

}  // namespace qkick
