#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qkick/graph.hpp"
#include "qkick/pulses.hpp"
#include "qkick/site_state.hpp"

namespace qkick {

struct FluxOptions {
  /// Taylor series stops once the last added term has Frobenius norm below this.
  double series_tolerance = 1e-14;
  /// Steps with ||2 dt K|| above this bound are split into equal substeps.
  double max_step_norm = 1.0;
  /// At most 2^max_subdivision_depth substeps per step.
  int max_subdivision_depth = 24;
};

/// Coefficients alpha(t) of the Heisenberg-evolved seed operator over the
/// canonical operator-graph basis, one row per grid time.
struct FluxResult {
  int seed = 1;
  std::vector<double> times;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> alphas;

  std::size_t size() const { return times.size(); }
  int dimension() const { return static_cast<int>(alphas.cols()); }
  /// alpha_node at grid index `step`; `node` is 1-based.
  double alpha(std::size_t step, int node) const;
  std::vector<double> series(int node) const;
  double norm(std::size_t step) const;
};

/// Propagates the seed's coefficient vector across `grid`.
///
/// Within each interval the channel amplitudes are replaced by their exact
/// averages, and the step is the orthogonal map exp(2 dt K_avg) applied as a
/// truncated Taylor series. Later steps act innermost on the Heisenberg
/// operator, so alpha(t_k) = E_1 E_2 ... E_k e_seed.
FluxResult propagate_on_grid(const GeneratorMatrix& k, const PulseSchedule& s,
                             std::span<const double> grid, int seed = 1,
                             const FluxOptions& options = {});

/// Full coefficient map at the end of `grid`: row j holds alpha for seed j.
Eigen::MatrixXd propagator_on_grid(const GeneratorMatrix& k, const PulseSchedule& s,
                                   std::span<const double> grid, const FluxOptions& options = {});

/// propagate_on_grid over step_grid(s, n_steps).
FluxResult propagate(const GeneratorMatrix& k, const PulseSchedule& s, int n_steps,
                     int seed = 1, const FluxOptions& options = {});

/// Decomposition of the receiver expectation <Psi_0| O_N(t) |Psi_0> into
/// sender-site components: the value equals
/// identity + x <X_1> + y <Y_1> + z <Z_1>.
struct InformationFlux {
  Pauli receiver = Pauli::X;
  std::vector<double> times;
  std::vector<double> identity;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
};

/// Site 1 of `rest_state` is ignored; sites 2..N weight each node string by
/// its expectation in the rest of the chain.
InformationFlux information_flux(const OperatorGraph& g, const FluxResult& r,
                                 const SiteAssignment& rest_state);

/// sum_j alpha_j(t) <Psi_0| node_j |Psi_0> for a product initial state.
std::vector<double> expectation_series(const OperatorGraph& g, const FluxResult& r,
                                       const SiteAssignment& initial_state);

struct Peak {
  double time = 0.0;
  double value = 0.0;         // max |alpha|
  double signed_value = 0.0;  // value carrying the coefficient's sign
  std::size_t step = 0;       // grid index of the best sample
};

/// Largest sampled |alpha_node|; ties go to the earliest time.
Peak max_alpha(const FluxResult& r, int node);

/// max_alpha, then a Brent search for the maximum inside the two grid
/// intervals around the best sample, using exact partial steps.
Peak refine_peak(const GeneratorMatrix& k, const PulseSchedule& s, const FluxResult& r, int node,
                 const FluxOptions& options = {});

}  // namespace qkick
