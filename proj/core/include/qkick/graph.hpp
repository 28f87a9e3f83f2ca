#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkick/pauli.hpp"

namespace qkick {

/// Signed coupling between two graph nodes in one channel. Indices are
/// 1-based and `from < to`. The generator entry is K_c[from][to] = sign and
/// K_c[to][from] = -sign.
struct GraphEdge {
  int from;
  int to;
  Channel channel;
  int sign;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Operator graph of the Heisenberg-evolved receiver operator X_N.
///
/// Nodes are the Pauli strings reached from X_N by repeated commutation with
/// the Hamiltonian terms of the enabled channels. With all three channels the
/// closure has exactly 2N nodes, ordered as
///
///   1 = X_N, 2 = Y_{N-1} Z_N, 3 = X_{N-2} Z_{N-1} Z_N, ...,   (X family)
///   N+1 = Y_N, N+2 = X_{N-1} Z_N, ...                          (Y family)
///
/// so node N and node 2N are the site-1 strings that carry the transferred
/// information. Reduced channel sets keep that relative order.
class OperatorGraph {
 public:
  OperatorGraph(int n_sites, std::vector<Channel> channels, std::vector<PauliString> nodes,
                std::vector<GraphEdge> edges);

  int n_sites() const { return n_sites_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Channel>& channels() const { return channels_; }
  const std::vector<PauliString>& nodes() const { return nodes_; }
  const PauliString& node(int one_based) const;
  const std::vector<GraphEdge>& edges() const { return edges_; }

  /// 1-based index of `p`, or nullopt when it is not a node.
  std::optional<int> index_of(const PauliString& p) const;

  /// Partner of `node` across its edge in `channel` and the generator entry
  /// K_c[node][partner]; nullopt when the node is isolated in that channel.
  struct Neighbor {
    int node;
    int sign;
  };
  std::optional<Neighbor> neighbor(int node, Channel channel) const;

 private:
  int n_sites_;
  std::vector<Channel> channels_;
  std::vector<PauliString> nodes_;
  std::vector<GraphEdge> edges_;
};

/// Position of `p` in the canonical 2N ordering, or nullopt when `p` is not
/// of the form (X|Y)_f Z_{f+1} ... Z_N.
std::optional<int> canonical_rank(const PauliString& p);

/// Closure of {X_N} under commutation with `terms`, in canonical order.
OperatorGraph close_under_terms(int n_sites, const std::vector<Channel>& channels,
                                const std::vector<HamiltonianTerm>& terms);

OperatorGraph build_graph(int n_sites, const std::vector<Channel>& channels = {
                                           Channel::Jx, Channel::Jy, Channel::B});

/// Per-channel antisymmetric coupling tableaux. Coefficient dynamics read
/// d alpha/dt = 2 (J_x K_Jx + J_y K_Jy + B K_B) alpha.
struct GeneratorMatrix {
  Eigen::MatrixXd jx;
  Eigen::MatrixXd jy;
  Eigen::MatrixXd b;

  int dimension() const { return static_cast<int>(jx.rows()); }
  const Eigen::MatrixXd& channel(Channel c) const;
  Eigen::MatrixXd combined(double jx_amp, double jy_amp, double b_amp) const;
};

GeneratorMatrix generator_matrices(const OperatorGraph& g);

/// Graphviz digraph; B edges black, Jx green, Jy red, label = sign.
std::string export_dot(const OperatorGraph& g);

}  // namespace qkick
