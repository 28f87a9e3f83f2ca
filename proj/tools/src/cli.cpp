#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qkick/error.hpp"
#include "qkick/fidelity.hpp"
#include "qkick/flux.hpp"
#include "qkick/graph.hpp"
#include "qkick/oracle.hpp"
#include "qkick/pulses.hpp"
#include "qkick/serialize.hpp"
#include "qkick/step_grid.hpp"

namespace qkick::cli {

namespace {

using nlohmann::json;

struct ScheduleArgs {
  std::string file;
  std::string variant = "sin";
  int n = 5;
  std::string scheme = "JxB";
  int m = 6;
  double delta = 8.0;
  double kick_duration = 1.0;
};

void add_schedule_options(CLI::App* cmd, ScheduleArgs& a) {
  cmd->add_option("--schedule", a.file, "Schedule JSON file (overrides --variant)");
  cmd->add_option("--variant", a.variant, "ideal | sin | square")
      ->check(CLI::IsMember({"ideal", "sin", "square"}));
  cmd->add_option("-n,--n", a.n, "Chain length N")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--scheme", a.scheme, "Ideal kick scheme: JxB | JxJy")
      ->check(CLI::IsMember({"JxB", "JxJy"}));
  cmd->add_option("--m", a.m, "sin^m power (even)");
  cmd->add_option("--delta", a.delta, "Square pulse sharpness");
  cmd->add_option("--kick-duration", a.kick_duration, "Ideal kick duration");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

PulseSchedule build_schedule(const ScheduleArgs& a) {
  if (!a.file.empty()) {
    json j;
    try {
      j = json::parse(read_file(a.file));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(a.file + ": " + e.what());
    }
    return schedule_from_json(j);
  }
  if (a.variant == "ideal") return ideal_schedule(a.n, parse_scheme(a.scheme), a.kick_duration);
  if (a.variant == "square") return square_schedule(a.n, a.delta);
  return sin_power_schedule(a.n, a.m);
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

json run_metadata(const std::string& command, const PulseSchedule& s, int n_steps) {
  return {{"command", command},
          {"tool_version", kToolVersion},
          {"schedule", schedule_to_json(s)},
          {"n_steps", n_steps}};
}

int steps_for(const PulseSchedule& s, int requested) {
  return requested > 0 ? requested : default_step_count(s);
}

// --- graph -----------------------------------------------------------------

struct GraphArgs {
  int n = 5;
  std::string channels = "Jx,Jy,B";
  std::string format = "dot";
  std::string out = "-";
};

std::vector<Channel> parse_channels(const std::string& list) {
  std::vector<Channel> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Channel c = parse_channel(item);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  if (out.empty()) throw std::invalid_argument("no channels given");
  return out;
}

void cmd_graph(const GraphArgs& a, std::ostream& out) {
  const OperatorGraph g = build_graph(a.n, parse_channels(a.channels));
  write_output(a.out, a.format == "json" ? graph_to_json(g).dump(2) + "\n" : export_dot(g), out);
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  ScheduleArgs schedule;
  int steps = 0;
  std::string receiver = "X";
  std::string format = "csv";
  std::string out = "-";
  std::string summary;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const PulseSchedule s = build_schedule(a.schedule);
  const int n_steps = steps_for(s, a.steps);
  const OperatorGraph g = build_graph(s.n_sites());
  const int seed = a.receiver == "Y" ? s.n_sites() + 1 : 1;
  const FluxResult r = propagate(generator_matrices(g), s, n_steps, seed);
  const TransferSummary t = analyze_transfer(s, n_steps);

  json meta = run_metadata("simulate", s, n_steps);
  meta["seed_node"] = seed;
  const json summary = {{"metadata", meta}, {"summary", transfer_summary_json(t)}};

  if (a.format == "json") {
    write_output(a.out, summary.dump(2) + "\n", out);
  } else {
    json flat = {{"command", "simulate"},
                 {"tool_version", kToolVersion},
                 {"schedule", schedule_to_json(s).dump()},
                 {"n_steps", n_steps},
                 {"seed_node", seed}};
    write_output(a.out, flux_csv(r, flat), out);
  }
  if (!a.summary.empty()) write_output(a.summary, summary.dump(2) + "\n", out);
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string spec_file;
  std::string format = "csv";
  std::string out = "-";
  int threads = -1;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepSpec spec = parse_sweep_spec(read_file(a.spec_file));
  if (a.threads >= 0) spec.threads = a.threads;
  const auto rows = run_sweep(spec);
  for (const auto& r : rows)
    if (!r.ok()) err << "row " << format_double(r.param) << ": " << r.error << "\n";

  if (a.format == "json") {
    write_output(a.out, sweep_to_json(spec, rows).dump(2) + "\n", out);
  } else {
    std::string text = "# tool_version=" + std::string(kToolVersion) + "\n";
    text += "# spec=" + sweep_spec_to_json(spec).dump() + "\n";
    text += sweep_csv(rows);
    write_output(a.out, text, out);
  }
  for (const auto& r : rows)
    if (!r.ok()) throw ContractViolation("sweep finished with failing rows");
}

// --- oracle ----------------------------------------------------------------

struct OracleArgs {
  ScheduleArgs schedule;
  int steps = 0;
  int max_sites = kDefaultMaxSites;
  bool allow_large = false;
  std::string state;
  std::string out = "-";
  std::string format = "csv";
  // fidelity
  int samples = 2000;
  std::uint64_t seed = 1;
  std::string at = "joint";
  // ghz
  std::string labels = "+00+";
  std::string dump;
};

OracleOptions oracle_options(const OracleArgs& a) {
  OracleOptions o;
  o.max_sites = a.allow_large ? 20 : a.max_sites;
  return o;
}

void check_sites(int n, const OracleOptions& o) {
  if (n > o.max_sites)
    throw ResourceCapExceeded("N = " + std::to_string(n) + " exceeds the oracle cap of " +
                              std::to_string(o.max_sites) + " sites (use --allow-large)");
}

void cmd_oracle_compare(const OracleArgs& a, std::ostream& out) {
  const PulseSchedule s = build_schedule(a.schedule);
  const int n = s.n_sites();
  const OracleOptions opts = oracle_options(a);
  check_sites(n, opts);
  const int n_steps = steps_for(s, a.steps);
  const auto grid = step_grid(s, n_steps);

  const SiteAssignment initial = a.state.empty()
                                     ? SiteAssignment::from_labels("+" + std::string(n - 1, '0'))
                                     : SiteAssignment::from_labels(a.state);
  if (initial.size() != n) throw std::invalid_argument("--state must have one label per site");

  const OperatorGraph g = build_graph(n);
  const FluxResult r = propagate_on_grid(generator_matrices(g), s, grid, 1);
  const auto flux = expectation_series(g, r, initial);
  const auto exact = heisenberg_expectation(Pauli::X, StateVector::product(initial), s, grid, opts);

  double max_dev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    max_dev = std::max(max_dev, std::abs(flux[i] - exact[i]));

  if (a.format == "json") {
    const json report = {{"metadata", run_metadata("oracle compare", s, n_steps)},
                         {"state", initial.labels()},
                         {"max_deviation", max_dev}};
    write_output(a.out, report.dump(2) + "\n", out);
    return;
  }
  std::string text = "# command=oracle compare\n# tool_version=" + std::string(kToolVersion) +
                     "\n# schedule=" + schedule_to_json(s).dump() +
                     "\n# n_steps=" + std::to_string(n_steps) + "\n# state=" + initial.labels() +
                     "\n# max_deviation=" + format_double(max_dev) + "\n";
  text += "t,flux,oracle,deviation\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    text += format_double(grid[i]) + "," + format_double(flux[i]) + "," +
            format_double(exact[i]) + "," + format_double(std::abs(flux[i] - exact[i])) + "\n";
  write_output(a.out, text, out);
}

void cmd_oracle_fidelity(const OracleArgs& a, std::ostream& out) {
  const PulseSchedule s = build_schedule(a.schedule);
  const OracleOptions opts = oracle_options(a);
  check_sites(s.n_sites(), opts);
  const int n_steps = steps_for(s, a.steps);

  MonteCarloOptions mc;
  mc.n_steps = n_steps;
  mc.oracle = opts;
  double alpha = 0.0;
  if (a.at == "tau") {
    mc.eval_time = s.total_time();
    alpha = analyze_transfer(s, n_steps).alpha_at_tau;
  } else if (a.at == "joint") {
    const JointArrival j = joint_arrival(s, n_steps);
    mc.eval_time = j.time;
    const OperatorGraph g = build_graph(s.n_sites());
    const FluxResult r = propagate(generator_matrices(g), s, n_steps, 1);
    alpha = r.alpha(j.step, s.n_sites());
  } else {
    double t = 0.0;
    try {
      std::size_t used = 0;
      t = std::stod(a.at, &used);
      if (used != a.at.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("--at must be tau, joint or a time");
    }
    if (!(t > 0.0 && t <= s.total_time()))
      throw std::invalid_argument("--at time outside the schedule");
    mc.eval_time = t;
    const auto grid = grid_until(step_grid(s, n_steps), t);
    const OperatorGraph g = build_graph(s.n_sites());
    const FluxResult r = propagate_on_grid(generator_matrices(g), s, grid, 1);
    alpha = r.alpha(r.size() - 1, s.n_sites());
  }
  const MonteCarloFidelity f = monte_carlo_average_fidelity(s, a.samples, a.seed, mc);
  const double closed_form = average_fidelity(std::abs(alpha));

  std::string text = "# command=oracle fidelity\n# tool_version=" + std::string(kToolVersion) +
                     "\n# schedule=" + schedule_to_json(s).dump() +
                     "\n# n_steps=" + std::to_string(n_steps) + "\n";
  text += "eval_time,samples,seed,mc_mean,mc_stderr,exact_mean,alpha_N,closed_form\n";
  text += format_double(f.eval_time) + "," + std::to_string(f.n_samples) + "," +
          std::to_string(f.seed) + "," + format_double(f.mean) + "," +
          format_double(f.stderr_of_mean) + "," + format_double(f.exact_mean) + "," +
          format_double(alpha) + "," + format_double(closed_form) + "\n";
  write_output(a.out, text, out);
}

void cmd_oracle_ghz(const OracleArgs& a, std::ostream& out) {
  const SiteAssignment assignment = SiteAssignment::from_labels(a.labels);
  const OracleOptions opts = oracle_options(a);
  check_sites(assignment.size(), opts);
  const GhzReport r = resolve_ghz(assignment, a.schedule.kick_duration, a.steps, opts);

  std::string text = "# command=oracle ghz\n# tool_version=" + std::string(kToolVersion) +
                     "\n# kick_duration=" + format_double(a.schedule.kick_duration) + "\n";
  text += "labels,l,fidelity,other_fidelity,entangled_sites\n";
  text += assignment.labels() + "," + std::to_string(r.l) + "," + format_double(r.fidelity) + "," +
          format_double(r.other_fidelity) + "," + std::to_string(r.entangled_sites) + "\n";
  write_output(a.out, text, out);
  if (!a.dump.empty())
    write_output(a.dump, state_to_json(ghz_predicted(assignment, r.l)).dump(2) + "\n", out);
}

// --- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  std::string shape = "sin";
  int m = 6;
  double width = kPi / 8.0;
  double target = kKickArea;
  std::string out = "-";
};

void cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const PulseShape shape = a.shape == "boxcar" ? boxcar(a.width) : sin_power_hump(a.m);
  const Calibration c = calibrate_amplitude(shape, a.target);
  json report = {{"tool_version", kToolVersion}, {"shape", shape.name},
                 {"target", a.target},           {"amplitude", c.amplitude},
                 {"shape_integral", c.shape_integral}, {"residual", c.residual}};
  if (a.shape == "boxcar")
    report["width"] = a.width;
  else
    report["m"] = a.m;
  write_output(a.out, report.dump(2) + "\n", out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kicked XY-chain state transfer simulator", "qkick"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GraphArgs graph;
  auto* g = app.add_subcommand("graph", "Export the operator graph");
  g->add_option("-n,--n", graph.n, "Chain length N")->check(CLI::Range(2, 1 << 20));
  g->add_option("--channels", graph.channels, "Comma-separated subset of Jx,Jy,B");
  g->add_option("--format", graph.format)->check(CLI::IsMember({"dot", "json"}));
  g->add_option("-o,--out", graph.out, "Output path, - for stdout");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Propagate X_N (or Y_N) and summarize the transfer");
  add_schedule_options(s, sim.schedule);
  s->add_option("--steps", sim.steps, "Step count (default 400 per pi of total time)")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--receiver", sim.receiver, "Seed operator X or Y")
      ->check(CLI::IsMember({"X", "Y"}));
  s->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));
  s->add_option("-o,--out", sim.out, "Output path, - for stdout");
  s->add_option("--summary", sim.summary, "Also write the JSON summary here");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run a parameter sweep from a spec file");
  w->add_option("spec", sweep.spec_file, "Sweep spec (JSON or key=value)")->required();
  w->add_option("--format", sweep.format)->check(CLI::IsMember({"csv", "json"}));
  w->add_option("-o,--out", sweep.out, "Output path, - for stdout");
  w->add_option("--threads", sweep.threads, "Worker threads (0 = hardware)")
      ->check(CLI::NonNegativeNumber);

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Exact state-vector checks");
  o->require_subcommand(1);
  auto add_oracle_common = [&](CLI::App* c) {
    c->add_option("--steps", oracle.steps)->check(CLI::NonNegativeNumber);
    c->add_option("--max-sites", oracle.max_sites, "Resource cap on N")
        ->check(CLI::Range(1, 20));
    c->add_flag("--allow-large", oracle.allow_large, "Raise the cap to 20 sites");
    c->add_option("-o,--out", oracle.out, "Output path, - for stdout");
  };
  auto* oc = o->add_subcommand("compare", "Flux vs exact <X_N(t)>");
  add_schedule_options(oc, oracle.schedule);
  add_oracle_common(oc);
  oc->add_option("--state", oracle.state, "Initial product state labels (default +0...0)");
  oc->add_option("--format", oracle.format)->check(CLI::IsMember({"csv", "json"}));
  auto* of = o->add_subcommand("fidelity", "Monte Carlo average transfer fidelity");
  add_schedule_options(of, oracle.schedule);
  add_oracle_common(of);
  of->add_option("--samples", oracle.samples)->check(CLI::PositiveNumber);
  of->add_option("--seed", oracle.seed);
  of->add_option("--at", oracle.at, "Evaluation time: joint, tau or a number");
  auto* og = o->add_subcommand("ghz", "GHZ generation under the ideal JxJy train");
  add_oracle_common(og);
  og->add_option("--labels", oracle.labels, "Per-site labels from 0 1 + - i j");
  og->add_option("--kick-duration", oracle.schedule.kick_duration);
  og->add_option("--dump", oracle.dump, "Write the predicted state as JSON");

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Amplitude for a pulse shape to reach a kick area");
  c->add_option("--shape", cal.shape)->check(CLI::IsMember({"sin", "boxcar"}));
  c->add_option("--m", cal.m, "sin^m power")->check(CLI::PositiveNumber);
  c->add_option("--width", cal.width, "Boxcar width")->check(CLI::PositiveNumber);
  c->add_option("--target", cal.target, "Target area (default pi/4)")->check(CLI::PositiveNumber);
  c->add_option("-o,--out", cal.out, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "qkick: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (g->parsed()) cmd_graph(graph, out);
    else if (s->parsed()) cmd_simulate(sim, out);
    else if (w->parsed()) cmd_sweep(sweep, out, err);
    else if (oc->parsed()) cmd_oracle_compare(oracle, out);
    else if (of->parsed()) cmd_oracle_fidelity(oracle, out);
    else if (og->parsed()) cmd_oracle_ghz(oracle, out);
    else if (c->parsed()) cmd_calibrate(cal, out);
  } catch (const ResourceCapExceeded& e) {
    err << "qkick: " << e.what() << "\n";
    return kResource;
  } catch (const ContractViolation& e) {
    err << "qkick: " << e.what() << "\n";
    return kContract;
  } catch (const std::invalid_argument& e) {
    err << "qkick: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "qkick: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qkick::cli
