#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkick/pauli.hpp"
#include "qkick/pulses.hpp"
#include "qkick/site_state.hpp"

namespace qkick {

inline constexpr int kDefaultMaxSites = 14;

struct OracleOptions {
  /// Chains longer than this are refused with ResourceCapExceeded.
  int max_sites = kDefaultMaxSites;
  double series_tolerance = 1e-13;
  /// Steps with dt * ||H|| above this bound are split into equal substeps.
  double max_step_norm = 1.0;
  int max_subdivision_depth = 24;
};

/// Pure state of an N-site chain. Basis index bit (N - s) holds site s, so
/// site 1 is the most significant bit and the leftmost bitstring character.
class StateVector {
 public:
  using Amplitude = std::complex<double>;

  /// |0...0>.
  explicit StateVector(int n_sites);
  StateVector(int n_sites, std::vector<Amplitude> amplitudes);

  static StateVector product(const SiteAssignment& assignment);
  static StateVector basis_state(int n_sites, std::uint64_t index);

  int n_sites() const { return n_sites_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  std::span<Amplitude> amplitudes() { return amplitudes_; }
  Amplitude operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const;
  /// <this|other>
  Amplitude inner(const StateVector& other) const;
  double expectation(const PauliString& p) const;
  /// Bloch vector of the reduced state of one site (1-based).
  std::array<double, 3> site_bloch(int site) const;
  /// Site permutation i <-> N - i + 1.
  StateVector mirrored() const;
  std::string bitstring(std::size_t index) const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator*=(Amplitude factor);

 private:
  int n_sites_;
  std::vector<Amplitude> amplitudes_;
};

/// |<a|b>|^2
double state_fidelity(const StateVector& a, const StateVector& b);

/// Applies H(amplitudes) to `in`, writing into `out`.
void apply_hamiltonian(const Amplitudes& a, const StateVector& in, StateVector& out);

/// Evolves `psi0` across `grid` with step-averaged Hamiltonians. `observer`
/// sees the state at every grid time, starting with grid[0].
void evolve_on_grid(const StateVector& psi0, const PulseSchedule& s,
                    std::span<const double> grid,
                    const std::function<void(std::size_t, const StateVector&)>& observer,
                    const OracleOptions& options = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
};

/// Full trajectory over step_grid(s, n_steps).
Trajectory evolve_state(const StateVector& psi0, const PulseSchedule& s, int n_steps,
                        const OracleOptions& options = {});

/// State at the end of `grid`.
StateVector evolve_final(const StateVector& psi0, const PulseSchedule& s,
                         std::span<const double> grid, const OracleOptions& options = {});

/// Grid truncated at `t_end` (which becomes the last point).
std::vector<double> grid_until(std::span<const double> grid, double t_end);

/// <psi(t)| O_N |psi(t)> for O = X or Y at the receiver, on `grid`.
std::vector<double> heisenberg_expectation(Pauli receiver_op, const StateVector& psi0,
                                           const PulseSchedule& s,
                                           std::span<const double> grid,
                                           const OracleOptions& options = {});

/// Fixed receiver rotation, acting on Bloch vectors, that undoes the frame
/// change picked up in transit. Built from the images of the sender inputs
/// |0> and |+> with the rest of the chain in |0...0>.
struct ReceiverCorrection {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

  std::array<double, 3> apply(const std::array<double, 3>& bloch) const;
};

ReceiverCorrection receiver_correction(const StateVector& out_zero, const StateVector& out_plus);

struct MonteCarloOptions {
  int n_steps = 0;                    // 0 -> default_step_count
  std::optional<double> eval_time;    // defaults to total_time
  OracleOptions oracle;
};

struct MonteCarloFidelity {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  /// Sphere average of the same corrected fidelity, computed from the
  /// channel's exact Bloch map.
  double exact_mean = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double eval_time = 0.0;
};

/// Receiver-qubit fidelity averaged over uniformly distributed pure sender
/// inputs, rest of the chain in |0...0>, after the receiver correction.
MonteCarloFidelity monte_carlo_average_fidelity(const PulseSchedule& s, int n_samples,
                                                std::uint64_t seed,
                                                const MonteCarloOptions& options = {});

/// Mirror image of (1/sqrt 2)[ |A>|D> + i (-1)^l |A> Z..Z|D> ], where A are
/// the Z-eigenstate sites and D the X/Y-eigenstate sites of `assignment`.
StateVector ghz_predicted(const SiteAssignment& assignment, int l);

struct GhzReport {
  int l = 0;
  double fidelity = 0.0;        // with the resolved l
  double other_fidelity = 0.0;  // with 1 - l
  int entangled_sites = 0;
};

/// Evolves the product state under the ideal JxJy kick train and matches it
/// against ghz_predicted for l = 0 and 1.
GhzReport resolve_ghz(const SiteAssignment& assignment, double kick_duration = 1.0,
                      int n_steps = 0, const OracleOptions& options = {});

}  // namespace qkick
