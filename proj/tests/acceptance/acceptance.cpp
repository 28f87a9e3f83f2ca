// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dense.hpp"
#include "qkick/fidelity.hpp"
#include "qkick/flux.hpp"
#include "qkick/graph.hpp"
#include "qkick/oracle.hpp"
#include "qkick/pulses.hpp"
#include "qkick/step_grid.hpp"

using namespace qkick;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > budget_seconds) {
    o.ok = false;
    o.detail += " (over runtime budget)";
  }
  if (!o.ok) ++failures;
  std::printf("%s %d: %s | %s | %.2fs (budget %.0fs)\n", o.ok ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), seconds, budget_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome ideal_transfer() {
  Outcome o;
  double worst_alpha = 0.0, worst_f = 0.0;
  for (int n : {3, 5, 7, 9, 15, 25}) {
    for (KickScheme scheme : {KickScheme::JxJy, KickScheme::JxB}) {
      const auto s = ideal_schedule(n, scheme);
      const auto t = analyze_transfer(s, 2 * (2 * n - 1));
      worst_alpha = std::max(worst_alpha, std::abs(t.peak.value - 1.0));
      worst_alpha = std::max(worst_alpha, std::abs(std::abs(t.alpha_at_tau) - 1.0));
      worst_f = std::max(worst_f, std::abs(t.fidelity_at_tau - 1.0));
      worst_f = std::max(worst_f, std::abs(t.fidelity_max - 1.0));
    }
  }
  o.ok = worst_alpha < 1e-9 && worst_f < 1e-9;
  o.detail = fmt("max | |alpha_N| - 1 | = %.2e, max |F - 1| = %.2e", worst_alpha, worst_f);
  return o;
}

Outcome norm_conservation() {
  double worst = 0.0;
  int runs = 0;
  for (int n = 2; n <= 25; ++n) {
    const auto k = generator_matrices(build_graph(n));
    const std::vector<PulseSchedule> schedules = {
        ideal_schedule(n, KickScheme::JxB), ideal_schedule(n, KickScheme::JxJy),
        sin_power_schedule(n, 4), sin_power_schedule(n, 6), square_schedule(n, 8.0),
        square_schedule(n, 20.0)};
    for (const auto& s : schedules) {
      for (int seed : {1, n + 1}) {
        const auto r = propagate(k, s, default_step_count(s), seed);
        for (std::size_t i = 0; i < r.size(); ++i)
          worst = std::max(worst, std::abs(r.norm(i) - 1.0));
        ++runs;
      }
    }
  }
  return {worst <= 1e-9, fmt("max | ||alpha||_2 - 1 | = %.2e over %.0f runs", worst, runs)};
}

Outcome graph_correctness() {
  const auto g = build_graph(5);
  const std::vector<std::string> expected = {"IIIIX", "IIIYZ", "IIXZZ", "IYZZZ", "XZZZZ",
                                             "IIIIY", "IIIXZ", "IIYZZ", "IXZZZ", "YZZZZ"};
  bool nodes_ok = g.node_count() == 10;
  for (int i = 1; nodes_ok && i <= 10; ++i) nodes_ok = g.node(i).str() == expected[i - 1];

  // d alpha_1/dt = 2(-Jy alpha_2 + B alpha_6); d alpha_2/dt = 2(Jy alpha_1 + Jx alpha_3 - B alpha_7)
  const auto k = generator_matrices(g);
  Eigen::MatrixXd row1 = Eigen::MatrixXd::Zero(3, 10), row2 = Eigen::MatrixXd::Zero(3, 10);
  row1(1, 1) = -1.0;
  row1(2, 5) = 1.0;
  row2(1, 0) = 1.0;
  row2(0, 2) = 1.0;
  row2(2, 6) = -1.0;
  bool rows_ok = true;
  for (int c = 0; c < 3; ++c) {
    const auto& m = k.channel(static_cast<Channel>(c));
    rows_ok = rows_ok && m.row(0) == row1.row(c) && m.row(1) == row2.row(c);
  }

  int checked = 0;
  bool dense_ok = true;
  for (int n = 2; n <= 5; ++n) {
    const auto gn = build_graph(n);
    const auto kn = generator_matrices(gn);
    for (int c = 0; c < 3; ++c) {
      const auto channel = static_cast<Channel>(c);
      Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(2 * n, 2 * n);
      for (int j = 1; j <= gn.node_count(); ++j) {
        const auto pj = testing::dense(gn.node(j));
        for (const auto& term : hamiltonian_terms(n, {channel})) {
          const auto t = testing::dense(term.pauli(n));
          const Eigen::MatrixXcd comm = t * pj - pj * t;
          if (comm.cwiseAbs().maxCoeff() < 1e-12) continue;
          bool found = false;
          for (int q = 1; q <= gn.node_count() && !found; ++q) {
            if (const auto r = testing::proportionality(comm, testing::dense(gn.node(q)))) {
              rebuilt(q - 1, j - 1) += -r->imag() / 2.0;
              found = true;
            }
          }
          dense_ok = dense_ok && found;
        }
      }
      dense_ok = dense_ok && rebuilt == kn.channel(channel);
      checked += static_cast<int>(gn.edges().size());
    }
  }
  Outcome o{nodes_ok && rows_ok && dense_ok, ""};
  o.detail = std::string("nodes ") + (nodes_ok ? "match" : "differ") + ", first rows " +
             (rows_ok ? "match" : "differ") + ", dense commutators " +
             (dense_ok ? "confirm all edges" : "disagree") + " for N = 2..5";
  return o;
}

Outcome sin_pulses() {
  const double amp = calibrate_amplitude(sin_power_hump(6)).amplitude;
  double worst6 = 1.0;
  int worst_n = 0;
  bool trend = true;
  for (int n = 3; n <= 25; n += 2) {
    const auto s6 = sin_power_schedule(n, 6);
    const auto s4 = sin_power_schedule(n, 4);
    const double f6 = analyze_transfer(s6, default_step_count(s6)).fidelity_max;
    const double f4 = analyze_transfer(s4, default_step_count(s4)).fidelity_max;
    if (f6 < worst6) {
      worst6 = f6;
      worst_n = n;
    }
    trend = trend && f6 >= f4;
  }
  Outcome o{worst6 > 0.984 && trend && std::abs(amp - 0.8) < 1e-12, ""};
  o.detail = fmt("calibrated amplitude %.12f, min F(m=6) = %.5f", amp, worst6) +
             fmt(" at N = %.0f, m=6 >= m=4 ", worst_n) + (trend ? "everywhere" : "VIOLATED");
  return o;
}

Outcome square_pulses() {
  // (a) max alpha_5 nondecreasing in delta
  bool monotone = true;
  double previous = 0.0, first = 0.0, last = 0.0;
  for (int delta = 5; delta <= 20; ++delta) {
    const auto s = square_schedule(5, delta);
    const double a = analyze_transfer(s, default_step_count(s)).peak.value;
    if (delta == 5) first = a;
    monotone = monotone && a >= previous;
    previous = last = a;
  }
  // (b) F(5, 10 pi) at delta = 8
  const auto s8 = square_schedule(5, 8.0);
  const double f8 = analyze_transfer(s8, default_step_count(s8)).fidelity_at_tau;
  // (c) delta = 16, odd N <= 15
  double min16 = 1.0;
  for (int n = 3; n <= 15; n += 2) {
    const auto s = square_schedule(n, 16.0);
    min16 = std::min(min16, analyze_transfer(s, default_step_count(s)).peak.value);
  }
  // (d) delta = 20, N = 25
  const auto s20 = square_schedule(25, 20.0);
  const double f20 = analyze_transfer(s20, default_step_count(s20)).fidelity_at_tau;

  const bool a = monotone, b = f8 >= 0.98, c = min16 >= 0.94, d = std::abs(f20 - 0.947) <= 0.02;
  Outcome o{a && b && c && d, ""};
  o.detail = std::string("(a) ") + (a ? "ok" : "FAIL") +
             fmt(" max alpha_5 %.5f -> %.5f", first, last) + "; (b) " + (b ? "ok" : "FAIL") +
             fmt(" F(5,10pi) = %.5f", f8) + "; (c) " + (c ? "ok" : "FAIL") +
             fmt(" min max alpha_N = %.5f", min16) + "; (d) " + (d ? "ok" : "FAIL") +
             fmt(" F(25,50pi) = %.5f", f20);
  return o;
}

Outcome flux_oracle_equivalence() {
  double worst = 0.0;
  for (int n = 3; n <= 5; ++n) {
    const auto g = build_graph(n);
    const auto k = generator_matrices(g);
    const std::vector<PulseSchedule> schedules = {ideal_schedule(n, KickScheme::JxB),
                                                  sin_power_schedule(n, 6),
                                                  square_schedule(n, 8.0)};
    const std::vector<std::string> states = {"+" + std::string(n - 1, '0'),
                                             std::string("+i-j0").substr(0, n)};
    for (const auto& s : schedules) {
      const auto grid = step_grid(s, default_step_count(s));
      const auto r = propagate_on_grid(k, s, grid, 1);
      for (const auto& labels : states) {
        const auto assignment = SiteAssignment::from_labels(labels);
        const auto flux = expectation_series(g, r, assignment);
        const auto exact =
            heisenberg_expectation(Pauli::X, StateVector::product(assignment), s, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
          worst = std::max(worst, std::abs(flux[i] - exact[i]));
      }
    }
  }
  return {worst < 1e-6, fmt("max |flux - oracle| = %.2e", worst)};
}

Outcome fidelity_cross_check() {
  const auto s = sin_power_schedule(5, 6);
  const int steps = default_step_count(s);
  const auto arrival = joint_arrival(s, steps);
  MonteCarloOptions options;
  options.n_steps = steps;
  options.eval_time = arrival.time;
  const auto mc = monte_carlo_average_fidelity(s, 2000, 1, options);
  const auto k = generator_matrices(build_graph(5));
  const auto r = propagate_on_grid(k, s, grid_until(step_grid(s, steps), arrival.time));
  const double closed = average_fidelity(std::abs(r.alpha(r.size() - 1, 5)));
  const double diff = std::abs(mc.mean - closed);
  Outcome o{diff < 3e-3, ""};
  o.detail = fmt("t = %.4f pi, MC mean %.5f", arrival.time / kPi, mc.mean) +
             fmt(" +- %.1e over 2000 inputs, closed form %.5f", mc.stderr_of_mean, closed) +
             fmt(", |diff| = %.2e", diff);
  return o;
}

Outcome ghz_generation() {
  double worst = 0.0;
  int count = 0;
  for (const std::string labels : {"+00+", "0++0", "++++", "i00i", "+0000+", "0+00+0", "++00++",
                                   "+i00i+", "0++++0"}) {
    const auto r = resolve_ghz(SiteAssignment::from_labels(labels));
    worst = std::max(worst, std::abs(r.fidelity - 1.0));
    ++count;
  }
  double worst_mirror = 0.0;
  for (const std::string labels : {"0000", "0001", "0110", "1011", "000000", "010011", "111000"}) {
    const int n = static_cast<int>(labels.size());
    const auto s = ideal_schedule(n, KickScheme::JxJy);
    const auto out = evolve_final(StateVector::product(SiteAssignment::from_labels(labels)), s,
                                  step_grid(s, 4 * n));
    const std::string reversed(labels.rbegin(), labels.rend());
    const auto target = StateVector::product(SiteAssignment::from_labels(reversed));
    worst_mirror = std::max(worst_mirror, std::abs(state_fidelity(out, target) - 1.0));
  }
  Outcome o{worst < 1e-9 && worst_mirror < 1e-9, ""};
  o.detail = fmt("max |F_GHZ - 1| = %.2e over %.0f assignments", worst, count) +
             fmt(", all-Z mirror max |F - 1| = %.2e", worst_mirror);
  return o;
}

Outcome convergence() {
  const auto s = sin_power_schedule(5, 6);
  const int steps = default_step_count(s);
  const double a = analyze_transfer(s, steps).peak.value;
  const double b = analyze_transfer(s, 2 * steps).peak.value;
  Outcome o{std::abs(a - b) < 1e-6, ""};
  o.detail = fmt("max alpha_5 = %.9f at %.0f steps", a, steps) +
             fmt(", %.9f doubled, change %.2e", b, std::abs(a - b));
  return o;
}

}  // namespace

int main() {
  criterion(1, "ideal kicks transfer perfectly", 1.0, ideal_transfer);
  criterion(2, "coefficient norm conserved", 300.0, norm_conservation);
  criterion(3, "operator graph nodes and edges", 1.0, graph_correctness);
  criterion(4, "sin^6 pulses F > 0.984 for odd N <= 25", 60.0, sin_pulses);
  criterion(5, "square pulses vs delta", 300.0, square_pulses);
  criterion(6, "flux matches exact oracle", 30.0, flux_oracle_equivalence);
  criterion(7, "Monte Carlo average fidelity vs closed form", 60.0, fidelity_cross_check);
  criterion(8, "GHZ-like states from ideal kicks", 10.0, ghz_generation);
  criterion(9, "integrator converged at default steps", 10.0, convergence);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
