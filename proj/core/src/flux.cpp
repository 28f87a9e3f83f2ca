#include "qkick/flux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "qkick/error.hpp"
#include "qkick/step_grid.hpp"

namespace qkick {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Entry {
  int row;
  int col;
  double value;
};

// Nonzero pattern of one channel tableau.
std::vector<Entry> channel_entries(const Eigen::MatrixXd& k) {
  std::vector<Entry> out;
  for (int r = 0; r < k.rows(); ++r)
    for (int c = 0; c < k.cols(); ++c)
      if (k(r, c) != 0.0) out.push_back({r, c, k(r, c)});
  return out;
}

class SparseGenerator {
 public:
  explicit SparseGenerator(const GeneratorMatrix& k)
      : dimension_(k.dimension()),
        jx_(channel_entries(k.jx)),
        jy_(channel_entries(k.jy)),
        b_(channel_entries(k.b)) {}

  int dimension() const { return dimension_; }

  // Entries of scale * (jx K_Jx + jy K_Jy + b K_B).
  void combine(const Amplitudes& a, double scale, std::vector<Entry>& out) const {
    out.clear();
    auto add = [&](const std::vector<Entry>& src, double amp) {
      if (amp == 0.0) return;
      for (const auto& e : src) out.push_back({e.row, e.col, scale * amp * e.value});
    };
    add(jx_, a.jx);
    add(jy_, a.jy);
    add(b_, a.b);
  }

 private:
  int dimension_;
  std::vector<Entry> jx_;
  std::vector<Entry> jy_;
  std::vector<Entry> b_;
};

// w <- exp(A) w for sparse A, by Taylor series.
void apply_exponential(const std::vector<Entry>& a, RowMatrix& w, RowMatrix& term,
                       RowMatrix& next, double tolerance) {
  if (a.empty()) return;
  term = w;
  constexpr int kMaxTerms = 400;
  for (int l = 1; l <= kMaxTerms; ++l) {
    next.setZero();
    for (const auto& e : a) next.row(e.row) += e.value * term.row(e.col);
    next /= static_cast<double>(l);
    w += next;
    term.swap(next);
    if (term.norm() <= tolerance) return;
  }
  throw ContractViolation("Taylor series for the step exponential did not converge");
}

// Applies W <- exp(-2 dt K_avg) W for one grid interval.
class Stepper {
 public:
  Stepper(const SparseGenerator& generator, const PulseSchedule& s, const FluxOptions& options)
      : generator_(generator), schedule_(s), options_(options) {}

  void advance(RowMatrix& w, double t0, double t1) {
    if (!(t1 > t0)) return;
    const Amplitudes avg = schedule_.average(t0, t1);
    require(std::isfinite(avg.jx) && std::isfinite(avg.jy) && std::isfinite(avg.b),
            "schedule produced non-finite amplitudes");
    const double dt = t1 - t0;
    // Each channel tableau is a partial matching, so ||K_c|| <= 1.
    const double bound = 2.0 * dt * (std::abs(avg.jx) + std::abs(avg.jy) + std::abs(avg.b));
    int depth = 0;
    while (bound / std::ldexp(1.0, depth) > options_.max_step_norm) {
      if (++depth > options_.max_subdivision_depth)
        throw ContractViolation("step needs more subdivisions than the depth limit allows");
    }
    const long pieces = 1L << depth;
    generator_.combine(avg, -2.0 * dt / static_cast<double>(pieces), a_);
    term_.resize(w.rows(), w.cols());
    next_.resize(w.rows(), w.cols());
    for (long p = 0; p < pieces; ++p)
      apply_exponential(a_, w, term_, next_, options_.series_tolerance);
  }

 private:
  const SparseGenerator& generator_;
  const PulseSchedule& schedule_;
  const FluxOptions& options_;
  std::vector<Entry> a_;
  RowMatrix term_;
  RowMatrix next_;
};

}  // namespace

double FluxResult::alpha(std::size_t step, int node) const {
  return alphas(static_cast<Eigen::Index>(step), node - 1);
}

std::vector<double> FluxResult::series(int node) const {
  require(node >= 1 && node <= dimension(), "node index out of range");
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = alpha(i, node);
  return out;
}

double FluxResult::norm(std::size_t step) const {
  return alphas.row(static_cast<Eigen::Index>(step)).norm();
}

FluxResult propagate_on_grid(const GeneratorMatrix& k, const PulseSchedule& s,
                             std::span<const double> grid, int seed,
                             const FluxOptions& options) {
  const SparseGenerator generator(k);
  const int d = generator.dimension();
  require(d >= 1, "generator is empty");
  require(seed >= 1 && seed <= d, "seed node out of range");
  require(grid.size() >= 2, "grid needs at least one step");

  FluxResult result;
  result.seed = seed;
  result.times.assign(grid.begin(), grid.end());
  result.alphas.resize(static_cast<Eigen::Index>(grid.size()), d);

  // W is the transpose of the accumulated coefficient map M(t); alpha(t) is
  // column `seed` of M, i.e. row `seed` of W, and W_k = exp(-2 dt K_k) W_{k-1}.
  RowMatrix w = RowMatrix::Identity(d, d);
  Stepper stepper(generator, s, options);
  result.alphas.row(0) = w.row(seed - 1);

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    require(grid[i + 1] > grid[i], "grid times must be strictly increasing");
    stepper.advance(w, grid[i], grid[i + 1]);
    result.alphas.row(static_cast<Eigen::Index>(i + 1)) = w.row(seed - 1);
  }
  return result;
}

Eigen::MatrixXd propagator_on_grid(const GeneratorMatrix& k, const PulseSchedule& s,
                                   std::span<const double> grid, const FluxOptions& options) {
  const SparseGenerator generator(k);
  require(generator.dimension() >= 1, "generator is empty");
  require(!grid.empty(), "empty grid");
  RowMatrix w = RowMatrix::Identity(generator.dimension(), generator.dimension());
  Stepper stepper(generator, s, options);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    require(grid[i + 1] > grid[i], "grid times must be strictly increasing");
    stepper.advance(w, grid[i], grid[i + 1]);
  }
  return w;
}

FluxResult propagate(const GeneratorMatrix& k, const PulseSchedule& s, int n_steps, int seed,
                     const FluxOptions& options) {
  const auto grid = step_grid(s, n_steps);
  return propagate_on_grid(k, s, grid, seed, options);
}

InformationFlux information_flux(const OperatorGraph& g, const FluxResult& r,
                                 const SiteAssignment& rest_state) {
  require(rest_state.size() == g.n_sites(), "rest state must cover the whole chain");
  require(r.dimension() == g.node_count(), "flux result does not match the graph");
  const int n = g.n_sites();

  InformationFlux out;
  out.receiver = g.node(r.seed).at(n);
  out.times = r.times;
  out.identity.assign(r.size(), 0.0);
  out.x.assign(r.size(), 0.0);
  out.y.assign(r.size(), 0.0);
  out.z.assign(r.size(), 0.0);

  for (int j = 1; j <= g.node_count(); ++j) {
    const PauliString& p = g.node(j);
    double weight = 1.0;
    for (int s = 2; s <= n && weight != 0.0; ++s) {
      const Pauli op = p.at(s);
      if (op != Pauli::I)
        weight *= bloch_vector(rest_state.site(s))[static_cast<std::size_t>(op) - 1];
    }
    if (weight == 0.0) continue;
    std::vector<double>* bucket = nullptr;
    switch (p.at(1)) {
      case Pauli::I: bucket = &out.identity; break;
      case Pauli::X: bucket = &out.x; break;
      case Pauli::Y: bucket = &out.y; break;
      case Pauli::Z: bucket = &out.z; break;
    }
    for (std::size_t i = 0; i < r.size(); ++i) (*bucket)[i] += weight * r.alpha(i, j);
  }
  return out;
}

std::vector<double> expectation_series(const OperatorGraph& g, const FluxResult& r,
                                       const SiteAssignment& initial_state) {
  require(r.dimension() == g.node_count(), "flux result does not match the graph");
  Eigen::VectorXd weights(g.node_count());
  for (int j = 1; j <= g.node_count(); ++j)
    weights(j - 1) = string_expectation(g.node(j), initial_state);
  const Eigen::VectorXd values = r.alphas * weights;
  return {values.data(), values.data() + values.size()};
}

Peak max_alpha(const FluxResult& r, int node) {
  require(node >= 1 && node <= r.dimension(), "node index out of range");
  require(r.size() >= 1, "empty flux result");
  std::size_t best = 0;
  double best_value = std::abs(r.alpha(0, node));
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double v = std::abs(r.alpha(i, node));
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return Peak{r.times[best], best_value, r.alpha(best, node), best};
}

Peak refine_peak(const GeneratorMatrix& k, const PulseSchedule& s, const FluxResult& r, int node,
                 const FluxOptions& options) {
  Peak peak = max_alpha(r, node);
  if (r.size() < 2) return peak;
  const SparseGenerator generator(k);
  require(generator.dimension() == r.dimension(), "flux result does not match the generator");
  Stepper stepper(generator, s, options);

  // The peak lies in one of the two intervals around the best sample. Within
  // an interval the partial step from its left end is exact for the
  // step-averaged dynamics, so search it directly.
  const std::size_t first = peak.step > 0 ? peak.step - 1 : 0;
  const std::size_t last = std::min(peak.step + 1, r.size() - 1);
  const std::vector<double> prefix(r.times.begin(),
                                   r.times.begin() + static_cast<std::ptrdiff_t>(first) + 1);
  RowMatrix w_left = propagator_on_grid(k, s, prefix, options);

  for (std::size_t a = first; a < last; ++a) {
    const double t0 = r.times[a];
    const double t1 = r.times[a + 1];
    auto value_at = [&](double t) {
      RowMatrix w = w_left;
      stepper.advance(w, t0, t);
      return w(r.seed - 1, node - 1);
    };
    const auto [t_best, neg] = boost::math::tools::brent_find_minima(
        [&](double t) { return -std::abs(value_at(t)); }, t0, t1, 40);
    if (-neg > peak.value) {
      peak.value = std::min(-neg, 1.0);  // exact dynamics are orthogonal
      peak.signed_value = std::copysign(peak.value, value_at(t_best));
      peak.time = t_best;
    }
    stepper.advance(w_left, t0, t1);
  }
  return peak;
}

}  // namespace qkick
