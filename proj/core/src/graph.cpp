#include "qkick/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "qkick/error.hpp"

namespace qkick {

std::optional<int> canonical_rank(const PauliString& p) {
  const int n = p.n_sites();
  const int f = p.first_active_site();
  if (f == 0) return std::nullopt;
  const Pauli lead = p.at(f);
  if (lead != Pauli::X && lead != Pauli::Y) return std::nullopt;
  for (int s = f + 1; s <= n; ++s)
    if (p.at(s) != Pauli::Z) return std::nullopt;
  const int k = n - f + 1;
  const bool x_family = (lead == Pauli::X) == (k % 2 == 1);
  return x_family ? k : n + k;
}

OperatorGraph::OperatorGraph(int n_sites, std::vector<Channel> channels,
                             std::vector<PauliString> nodes, std::vector<GraphEdge> edges)
    : n_sites_(n_sites),
      channels_(std::move(channels)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)) {}

const PauliString& OperatorGraph::node(int one_based) const {
  require(one_based >= 1 && one_based <= node_count(), "graph node index out of range");
  return nodes_[static_cast<std::size_t>(one_based - 1)];
}

std::optional<int> OperatorGraph::index_of(const PauliString& p) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), p);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<int>(it - nodes_.begin()) + 1;
}

std::optional<OperatorGraph::Neighbor> OperatorGraph::neighbor(int node,
                                                               Channel channel) const {
  for (const auto& e : edges_) {
    if (e.channel != channel) continue;
    if (e.from == node) return Neighbor{e.to, e.sign};
    if (e.to == node) return Neighbor{e.from, -e.sign};
  }
  return std::nullopt;
}

OperatorGraph close_under_terms(int n_sites, const std::vector<Channel>& channels,
                                const std::vector<HamiltonianTerm>& terms) {
  require(n_sites >= 2, "operator graph needs N >= 2");
  require(!channels.empty(), "operator graph needs at least one channel");

  // Breadth-first closure. Couplings are collected as generator entries
  // K_c[q][j] = -sign for [T, P_j] = 2 i sign P_q, since
  // d alpha_q/dt picks up i * (2 i sign) = -2 sign from P_j.
  std::vector<PauliString> found;
  std::unordered_map<PauliString, int, PauliStringHash> seen;
  struct Coupling {
    int row;
    int col;
    Channel channel;
    int value;
  };
  std::vector<Coupling> couplings;

  const PauliString seed = PauliString::single(n_sites, n_sites, Pauli::X);
  found.push_back(seed);
  seen.emplace(seed, 0);
  std::deque<int> work{0};
  while (!work.empty()) {
    const int j = work.front();
    work.pop_front();
    for (const auto& term : terms) {
      const auto r = commute_with_term(found[static_cast<std::size_t>(j)], term);
      if (!r) continue;
      auto [it, inserted] = seen.emplace(r->string, static_cast<int>(found.size()));
      if (inserted) {
        found.push_back(r->string);
        work.push_back(it->second);
      }
      couplings.push_back({it->second, j, term.channel, -r->sign});
    }
  }

  // Canonical order; anything outside the (X|Y) Z...Z family goes last in
  // discovery order.
  std::vector<int> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const int fallback_base = 2 * n_sites + 1;
  auto rank = [&](int i) {
    const auto r = canonical_rank(found[static_cast<std::size_t>(i)]);
    return r ? *r : fallback_base + i;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rank(a) < rank(b); });
  std::vector<int> position(found.size());
  std::vector<PauliString> nodes;
  nodes.reserve(found.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    position[static_cast<std::size_t>(order[p])] = static_cast<int>(p) + 1;
    nodes.push_back(found[static_cast<std::size_t>(order[p])]);
  }

  // Sum per (row, col, channel), then fold the antisymmetric pairs into
  // one edge with from < to.
  std::map<std::tuple<int, int, int>, int> entries;
  for (const auto& c : couplings) {
    const int row = position[static_cast<std::size_t>(c.row)];
    const int col = position[static_cast<std::size_t>(c.col)];
    entries[{row, col, static_cast<int>(c.channel)}] += c.value;
  }
  std::vector<GraphEdge> edges;
  for (const auto& [key, value] : entries) {
    const auto [row, col, ch] = key;
    if (value == 0) continue;
    const auto mirror = entries.find({col, row, ch});
    require(mirror != entries.end() && mirror->second == -value,
            "operator graph coupling is not antisymmetric");
    require(value == 1 || value == -1, "operator graph coupling weight is not +-1");
    if (row < col) edges.push_back({row, col, static_cast<Channel>(ch), value});
  }
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.from, a.to, a.channel) < std::tie(b.from, b.to, b.channel);
  });

  return OperatorGraph(n_sites, channels, std::move(nodes), std::move(edges));
}

OperatorGraph build_graph(int n_sites, const std::vector<Channel>& channels) {
  require(n_sites >= 2, "operator graph needs N >= 2");
  return close_under_terms(n_sites, channels, hamiltonian_terms(n_sites, channels));
}

const Eigen::MatrixXd& GeneratorMatrix::channel(Channel c) const {
  switch (c) {
    case Channel::Jx: return jx;
    case Channel::Jy: return jy;
    case Channel::B: return b;
  }
  return b;
}

Eigen::MatrixXd GeneratorMatrix::combined(double jx_amp, double jy_amp, double b_amp) const {
  return jx_amp * jx + jy_amp * jy + b_amp * b;
}

GeneratorMatrix generator_matrices(const OperatorGraph& g) {
  const int d = g.node_count();
  GeneratorMatrix k{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d),
                    Eigen::MatrixXd::Zero(d, d)};
  for (const auto& e : g.edges()) {
    Eigen::MatrixXd& m = e.channel == Channel::Jx   ? k.jx
                         : e.channel == Channel::Jy ? k.jy
                                                    : k.b;
    m(e.from - 1, e.to - 1) = e.sign;
    m(e.to - 1, e.from - 1) = -e.sign;
  }
  return k;
}

namespace {

std::string_view edge_color(Channel c) {
  switch (c) {
    case Channel::B: return "black";
    case Channel::Jx: return "green";
    case Channel::Jy: return "red";
  }
  return "gray";
}

}  // namespace

std::string export_dot(const OperatorGraph& g) {
  std::ostringstream out;
  out << "digraph operator_graph {\n";
  out << "  graph [label=\"N=" << g.n_sites() << "\"];\n";
  out << "  node [shape=circle];\n";
  for (int i = 1; i <= g.node_count(); ++i)
    out << "  n" << i << " [label=\"" << g.node(i).str() << "\"];\n";
  for (const auto& e : g.edges()) {
    out << "  n" << e.from << " -> n" << e.to << " [color=" << edge_color(e.channel)
        << ", label=\"" << (e.sign > 0 ? "+" : "-") << "\", channel=\""
        << channel_name(e.channel) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace qkick
