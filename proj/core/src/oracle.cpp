#include "qkick/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qkick/error.hpp"
#include "qkick/step_grid.hpp"

namespace qkick {

namespace {

using Amplitude = StateVector::Amplitude;

constexpr int kHardSiteLimit = 30;

std::size_t bit_of(int n_sites, int site) { return std::size_t{1} << (n_sites - site); }

void check_cap(int n_sites, const OracleOptions& options) {
  if (n_sites > options.max_sites)
    throw ResourceCapExceeded("exact simulation of N = " + std::to_string(n_sites) +
                              " exceeds the cap of " + std::to_string(options.max_sites) +
                              " sites");
}

}  // namespace

StateVector::StateVector(int n_sites) : n_sites_(n_sites) {
  require(n_sites >= 1 && n_sites <= kHardSiteLimit, "state vector size out of range");
  amplitudes_.assign(std::size_t{1} << n_sites, Amplitude{});
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_sites, std::vector<Amplitude> amplitudes)
    : n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {
  require(n_sites >= 1 && n_sites <= kHardSiteLimit, "state vector size out of range");
  require(amplitudes_.size() == (std::size_t{1} << n_sites),
          "amplitude count does not match 2^N");
}

StateVector StateVector::product(const SiteAssignment& assignment) {
  const int n = assignment.size();
  std::vector<Amplitude> amps{Amplitude{1.0}};
  for (int s = 1; s <= n; ++s) {
    const auto site = qkick::amplitudes(assignment.site(s));
    std::vector<Amplitude> next(amps.size() * 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * site[0];
      next[2 * i + 1] = amps[i] * site[1];
    }
    amps.swap(next);
  }
  return StateVector(n, std::move(amps));
}

StateVector StateVector::basis_state(int n_sites, std::uint64_t index) {
  StateVector psi(n_sites);
  require(index < psi.dimension(), "basis index out of range");
  psi.amplitudes_[0] = 0.0;
  psi.amplitudes_[index] = 1.0;
  return psi;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

Amplitude StateVector::inner(const StateVector& other) const {
  require(other.n_sites_ == n_sites_, "state sizes differ");
  Amplitude sum{};
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    sum += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return sum;
}

double StateVector::expectation(const PauliString& p) const {
  require(p.n_sites() == n_sites_, "Pauli string length does not match the state");
  std::size_t flip = 0;
  for (int s = 1; s <= n_sites_; ++s)
    if (p.at(s) == Pauli::X || p.at(s) == Pauli::Y) flip |= bit_of(n_sites_, s);

  Amplitude sum{};
  for (std::size_t idx = 0; idx < amplitudes_.size(); ++idx) {
    if (amplitudes_[idx] == Amplitude{}) continue;
    Amplitude phase{1.0};
    for (int s = 1; s <= n_sites_; ++s) {
      const bool one = (idx & bit_of(n_sites_, s)) != 0;
      switch (p.at(s)) {
        case Pauli::I:
        case Pauli::X: break;
        case Pauli::Y: phase *= one ? Amplitude{0.0, -1.0} : Amplitude{0.0, 1.0}; break;
        case Pauli::Z: if (one) phase = -phase; break;
      }
    }
    sum += std::conj(amplitudes_[idx ^ flip]) * phase * amplitudes_[idx];
  }
  return sum.real();
}

std::array<double, 3> StateVector::site_bloch(int site) const {
  require(site >= 1 && site <= n_sites_, "site out of range");
  const std::size_t bit = bit_of(n_sites_, site);
  double p0 = 0.0;
  double p1 = 0.0;
  Amplitude coherence{};  // <0|rho|1>
  for (std::size_t idx = 0; idx < amplitudes_.size(); ++idx) {
    if (idx & bit) {
      p1 += std::norm(amplitudes_[idx]);
    } else {
      p0 += std::norm(amplitudes_[idx]);
      coherence += amplitudes_[idx] * std::conj(amplitudes_[idx | bit]);
    }
  }
  return {2.0 * coherence.real(), -2.0 * coherence.imag(), p0 - p1};
}

StateVector StateVector::mirrored() const {
  std::vector<Amplitude> out(amplitudes_.size());
  for (std::size_t idx = 0; idx < amplitudes_.size(); ++idx) {
    std::size_t rev = 0;
    for (int b = 0; b < n_sites_; ++b)
      if (idx & (std::size_t{1} << b)) rev |= std::size_t{1} << (n_sites_ - 1 - b);
    out[rev] = amplitudes_[idx];
  }
  return StateVector(n_sites_, std::move(out));
}

std::string StateVector::bitstring(std::size_t index) const {
  std::string out(static_cast<std::size_t>(n_sites_), '0');
  for (int s = 1; s <= n_sites_; ++s)
    if (index & bit_of(n_sites_, s)) out[static_cast<std::size_t>(s - 1)] = '1';
  return out;
}

StateVector& StateVector::operator+=(const StateVector& other) {
  require(other.n_sites_ == n_sites_, "state sizes differ");
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] += other.amplitudes_[i];
  return *this;
}

StateVector& StateVector::operator*=(Amplitude factor) {
  for (auto& a : amplitudes_) a *= factor;
  return *this;
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(a.inner(b));
}

void apply_hamiltonian(const Amplitudes& a, const StateVector& in, StateVector& out) {
  const int n = in.n_sites();
  const auto src = in.amplitudes();
  auto dst = out.amplitudes();
  std::fill(dst.begin(), dst.end(), Amplitude{});
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    const Amplitude v = src[idx];
    if (v == Amplitude{}) continue;
    if (a.b != 0.0) {
      // sum_i Z_i = (#zeros - #ones)
      const int ones = std::popcount(idx);
      dst[idx] += a.b * static_cast<double>(n - 2 * ones) * v;
    }
    if (a.jx == 0.0 && a.jy == 0.0) continue;
    for (int s = 1; s < n; ++s) {
      const std::size_t hi = bit_of(n, s);
      const std::size_t lo = bit_of(n, s + 1);
      const bool same = ((idx & hi) != 0) == ((idx & lo) != 0);
      // XX flips both bits with weight 1; YY adds -1 on |00>,|11> and +1 on |01>,|10>.
      const double weight = a.jx + (same ? -a.jy : a.jy);
      if (weight != 0.0) dst[idx ^ hi ^ lo] += weight * v;
    }
  }
}

void evolve_on_grid(const StateVector& psi0, const PulseSchedule& s,
                    std::span<const double> grid,
                    const std::function<void(std::size_t, const StateVector&)>& observer,
                    const OracleOptions& options) {
  const int n = psi0.n_sites();
  check_cap(n, options);
  require(n == s.n_sites(), "state and schedule chain lengths differ");
  require(!grid.empty(), "empty grid");

  StateVector psi = psi0;
  StateVector term = psi0;
  StateVector next = psi0;
  if (observer) observer(0, psi);

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t0 = grid[i];
    const double t1 = grid[i + 1];
    require(t1 > t0, "grid times must be strictly increasing");
    const Amplitudes avg = s.average(t0, t1);
    require(std::isfinite(avg.jx) && std::isfinite(avg.jy) && std::isfinite(avg.b),
            "schedule produced non-finite amplitudes");
    const double dt = t1 - t0;
    const double h_bound =
        (n - 1) * (std::abs(avg.jx) + std::abs(avg.jy)) + n * std::abs(avg.b);
    int depth = 0;
    while (dt * h_bound / std::ldexp(1.0, depth) > options.max_step_norm) {
      if (++depth > options.max_subdivision_depth)
        throw ContractViolation("step needs more subdivisions than the depth limit allows");
    }
    const long pieces = 1L << depth;
    const double tau = dt / static_cast<double>(pieces);

    if (h_bound > 0.0) {
      for (long p = 0; p < pieces; ++p) {
        // psi <- exp(-i tau H) psi
        term = psi;
        constexpr int kMaxTerms = 400;
        int l = 1;
        for (; l <= kMaxTerms; ++l) {
          apply_hamiltonian(avg, term, next);
          next *= Amplitude{0.0, -tau / l};
          psi += next;
          std::swap(term, next);
          if (term.norm() <= options.series_tolerance) break;
        }
        if (l > kMaxTerms) throw ContractViolation("state propagation series did not converge");
      }
    }
    if (observer) observer(i + 1, psi);
  }
}

Trajectory evolve_state(const StateVector& psi0, const PulseSchedule& s, int n_steps,
                        const OracleOptions& options) {
  Trajectory out;
  out.times = step_grid(s, n_steps);
  out.states.reserve(out.times.size());
  evolve_on_grid(
      psi0, s, out.times,
      [&](std::size_t, const StateVector& psi) { out.states.push_back(psi); }, options);
  return out;
}

StateVector evolve_final(const StateVector& psi0, const PulseSchedule& s,
                         std::span<const double> grid, const OracleOptions& options) {
  StateVector last = psi0;
  evolve_on_grid(
      psi0, s, grid,
      [&](std::size_t i, const StateVector& psi) {
        if (i + 1 == grid.size()) last = psi;
      },
      options);
  return last;
}

std::vector<double> grid_until(std::span<const double> grid, double t_end) {
  std::vector<double> out;
  for (double t : grid) {
    if (t >= t_end) break;
    out.push_back(t);
  }
  if (out.empty() || t_end > out.back()) out.push_back(t_end);
  return out;
}

std::vector<double> heisenberg_expectation(Pauli receiver_op, const StateVector& psi0,
                                           const PulseSchedule& s,
                                           std::span<const double> grid,
                                           const OracleOptions& options) {
  require(receiver_op == Pauli::X || receiver_op == Pauli::Y,
          "receiver operator must be X or Y");
  const PauliString op = PauliString::single(psi0.n_sites(), psi0.n_sites(), receiver_op);
  std::vector<double> out(grid.size());
  evolve_on_grid(
      psi0, s, grid, [&](std::size_t i, const StateVector& psi) { out[i] = psi.expectation(op); },
      options);
  return out;
}

std::array<double, 3> ReceiverCorrection::apply(const std::array<double, 3>& bloch) const {
  const Eigen::Vector3d v = rotation * Eigen::Vector3d(bloch[0], bloch[1], bloch[2]);
  return {v.x(), v.y(), v.z()};
}

ReceiverCorrection receiver_correction(const StateVector& out_zero, const StateVector& out_plus) {
  const int n = out_zero.n_sites();
  const auto z = out_zero.site_bloch(n);
  const auto x = out_plus.site_bloch(n);
  constexpr double kDegenerate = 1e-9;

  // Orthonormal frame: images of the z axis, then of the x axis.
  Eigen::Vector3d ez(z[0], z[1], z[2]);
  if (ez.norm() < kDegenerate) ez = Eigen::Vector3d::UnitZ();
  ez.normalize();
  const Eigen::Vector3d candidates[] = {Eigen::Vector3d(x[0], x[1], x[2]),
                                        Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                        Eigen::Vector3d::UnitZ()};
  Eigen::Vector3d ex = Eigen::Vector3d::Zero();
  for (const auto& c : candidates) {
    ex = c - c.dot(ez) * ez;
    if (ex.norm() > kDegenerate) break;
  }
  ex.normalize();
  const Eigen::Vector3d ey = ez.cross(ex);

  Eigen::Matrix3d frame;
  frame.col(0) = ex;
  frame.col(1) = ey;
  frame.col(2) = ez;
  return ReceiverCorrection{frame.transpose()};
}

namespace {

StateVector combine_inputs(const StateVector& out0, const StateVector& out1, Amplitude a,
                           Amplitude b) {
  StateVector psi = out0;
  psi *= a;
  StateVector tail = out1;
  tail *= b;
  psi += tail;
  return psi;
}

double corrected_fidelity(const ReceiverCorrection& c, const std::array<double, 3>& in,
                          const std::array<double, 3>& out) {
  const auto r = c.apply(out);
  return 0.5 * (1.0 + in[0] * r[0] + in[1] * r[1] + in[2] * r[2]);
}

std::pair<Amplitude, Amplitude> state_from_bloch(const Eigen::Vector3d& r) {
  const double theta = std::acos(std::clamp(r.z(), -1.0, 1.0));
  const double phi = std::atan2(r.y(), r.x());
  return {Amplitude{std::cos(theta / 2.0)}, std::polar(std::sin(theta / 2.0), phi)};
}

}  // namespace

MonteCarloFidelity monte_carlo_average_fidelity(const PulseSchedule& s, int n_samples,
                                                std::uint64_t seed,
                                                const MonteCarloOptions& options) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const int n = s.n_sites();
  check_cap(n, options.oracle);
  const int n_steps = options.n_steps > 0 ? options.n_steps : default_step_count(s);
  const double eval_time = options.eval_time.value_or(s.total_time());
  require(eval_time > 0.0 && eval_time <= s.total_time() + 1e-12,
          "evaluation time outside the schedule");
  const auto grid = grid_until(step_grid(s, n_steps), eval_time);

  // The final state is linear in the sender amplitudes, so two runs suffice.
  const StateVector out0 = evolve_final(StateVector::basis_state(n, 0), s, grid, options.oracle);
  const StateVector out1 =
      evolve_final(StateVector::basis_state(n, std::uint64_t{1} << (n - 1)), s, grid,
                   options.oracle);
  const double r = 1.0 / std::sqrt(2.0);
  const ReceiverCorrection correction =
      receiver_correction(out0, combine_inputs(out0, out1, r, r));

  auto receiver_bloch = [&](const Eigen::Vector3d& in) {
    const auto [a, b] = state_from_bloch(in);
    return combine_inputs(out0, out1, a, b).site_bloch(n);
  };

  MonteCarloFidelity result;
  result.n_samples = n_samples;
  result.seed = seed;
  result.eval_time = eval_time;

  // Exact sphere average from the linear part of the Bloch map.
  Eigen::Matrix3d linear;
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
    const auto plus = receiver_bloch(e);
    const auto minus = receiver_bloch(-e);
    for (int row = 0; row < 3; ++row)
      linear(row, axis) = 0.5 * (plus[static_cast<std::size_t>(row)] -
                                 minus[static_cast<std::size_t>(row)]);
  }
  result.exact_mean = 0.5 * (1.0 + (correction.rotation * linear).trace() / 3.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    Eigen::Vector3d in;
    do {
      in = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    } while (in.norm() < 1e-12);
    in.normalize();
    const double f =
        corrected_fidelity(correction, {in.x(), in.y(), in.z()}, receiver_bloch(in));
    sum += f;
    sum_sq += f * f;
  }
  result.mean = sum / n_samples;
  const double variance =
      n_samples > 1 ? std::max(0.0, (sum_sq - n_samples * result.mean * result.mean) /
                                        (n_samples - 1))
                    : 0.0;
  result.stderr_of_mean = std::sqrt(variance / n_samples);
  return result;
}

StateVector ghz_predicted(const SiteAssignment& assignment, int l) {
  if (l != 0 && l != 1) throw std::invalid_argument("GHZ phase selector l must be 0 or 1");
  std::vector<SiteState> flipped;
  for (const auto& site : assignment.sites()) {
    const auto* e = std::get_if<Eigenstate>(&site);
    if (!e) throw std::invalid_argument("GHZ prediction needs Pauli eigenstates on every site");
    // Z maps |+> <-> |->, |+i> <-> |-i> and fixes |0>, |1>.
    flipped.emplace_back(e->basis == Basis::Z ? *e : Eigenstate{e->basis, !e->positive});
  }
  StateVector psi = StateVector::product(assignment);
  StateVector partner = StateVector::product(SiteAssignment(std::move(flipped)));
  partner *= Amplitude{0.0, l == 0 ? 1.0 : -1.0};
  psi += partner;
  psi *= Amplitude{1.0 / psi.norm()};
  return psi.mirrored();
}

GhzReport resolve_ghz(const SiteAssignment& assignment, double kick_duration, int n_steps,
                      const OracleOptions& options) {
  const int n = assignment.size();
  check_cap(n, options);
  const PulseSchedule s = ideal_schedule(n, KickScheme::JxJy, kick_duration);
  const auto grid = step_grid(s, n_steps > 0 ? n_steps : default_step_count(s));
  const StateVector out = evolve_final(StateVector::product(assignment), s, grid, options);

  GhzReport report;
  const double f0 = state_fidelity(ghz_predicted(assignment, 0), out);
  const double f1 = state_fidelity(ghz_predicted(assignment, 1), out);
  report.l = f1 > f0 ? 1 : 0;
  report.fidelity = std::max(f0, f1);
  report.other_fidelity = std::min(f0, f1);
  for (const auto& site : assignment.sites()) {
    const auto* e = std::get_if<Eigenstate>(&site);
    if (e && e->basis != Basis::Z) ++report.entangled_sites;
  }
  return report;
}

}  // namespace qkick
