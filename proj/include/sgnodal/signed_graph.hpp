#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnodal/errors.hpp"
#include "sgnodal/sym_matrix.hpp"
#include "sgnodal/union_find.hpp"

namespace sgnodal {

using Vertex = int;

struct SignedEdge {
  Vertex u = 0;
  Vertex v = 0;
  int sign = 1;

  friend auto operator<=>(const SignedEdge&, const SignedEdge&) = default;
};

/// A labelling tau: V -> {+1, -1}.
class SwitchingFunction {
public:
  SwitchingFunction() = default;
  explicit SwitchingFunction(std::vector<int> tau) : tau_(std::move(tau)) {
    for (int t : tau_)
      if (t != 1 && t != -1) throw std::invalid_argument("switching function entries must be +1 or -1");
  }
  static SwitchingFunction identity(std::size_t n) { return SwitchingFunction(std::vector<int>(n, 1)); }

  std::size_t size() const noexcept { return tau_.size(); }
  int operator[](std::size_t i) const { return tau_[i]; }
  std::span<const int> values() const noexcept { return tau_; }

  /// Pointwise product tau * f.
  std::vector<double> apply(std::span<const double> f) const {
    std::vector<double> out(f.begin(), f.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= tau_[i];
    return out;
  }

  friend bool operator==(const SwitchingFunction&, const SwitchingFunction&) = default;

private:
  std::vector<int> tau_;
};

struct Neighbor {
  Vertex vertex;
  int sign;
};

/// Simple undirected graph with a +/-1 label on each edge. Edges are kept
/// sorted by (u, v) with u < v; adjacency lists are built on request.
class SignedGraph {
public:
  SignedGraph() = default;

  SignedGraph(std::size_t n, std::vector<SignedEdge> edges) : n_(n), edges_(std::move(edges)) {
    for (auto& e : edges_) {
      if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
      if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n_ || static_cast<std::size_t>(e.v) >= n_)
        throw std::invalid_argument("edge endpoint out of range");
      if (e.sign != 1 && e.sign != -1) throw std::invalid_argument("edge sign must be +1 or -1");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
        throw std::invalid_argument("duplicate edge {" + std::to_string(edges_[i].u) + "," +
                                    std::to_string(edges_[i].v) + "}");
    }
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<SignedEdge>& edges() const noexcept { return edges_; }

  std::vector<std::vector<Neighbor>> adjacency() const {
    std::vector<std::vector<Neighbor>> adj(n_);
    for (const auto& e : edges_) {
      adj[e.u].push_back({e.v, e.sign});
      adj[e.v].push_back({e.u, e.sign});
    }
    return adj;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_, 0);
    for (const auto& e : edges_) {
      ++d[e.u];
      ++d[e.v];
    }
    return d;
  }

  /// Sign of edge {a, b}, or nullopt when the vertices are not adjacent.
  std::optional<int> sign_between(Vertex a, Vertex b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), SignedEdge{a, b, -1});
    if (it != edges_.end() && it->u == a && it->v == b) return it->sign;
    return std::nullopt;
  }

  friend bool operator==(const SignedGraph&, const SignedGraph&) = default;

private:
  std::size_t n_ = 0;
  std::vector<SignedEdge> edges_;
};

/// Induced signed graph of a symmetric matrix: {i, j} is an edge when
/// |M_ij| > zero_tol, with sign -sign(M_ij).
inline SignedGraph from_matrix(const SymMatrix& m, double zero_tol = 0.0) {
  if (zero_tol < 0.0) throw std::invalid_argument("zero_tol must be nonnegative");
  std::vector<SignedEdge> edges;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (std::abs(m(i, j)) > zero_tol)
        edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), m(i, j) < 0.0 ? 1 : -1});
  return SignedGraph(m.size(), std::move(edges));
}

inline bool is_compatible(const SymMatrix& m, const SignedGraph& g, double zero_tol = 0.0) {
  if (m.size() != g.num_vertices()) throw std::invalid_argument("matrix size does not match vertex count");
  return from_matrix(m, zero_tol) == g;
}

inline SignedGraph switched(const SignedGraph& g, const SwitchingFunction& tau) {
  if (tau.size() != g.num_vertices()) throw std::invalid_argument("switching function length mismatch");
  auto edges = g.edges();
  for (auto& e : edges) e.sign *= tau[e.u] * tau[e.v];
  return SignedGraph(g.num_vertices(), std::move(edges));
}

inline SignedGraph negate(const SignedGraph& g) {
  auto edges = g.edges();
  for (auto& e : edges) e.sign = -e.sign;
  return SignedGraph(g.num_vertices(), std::move(edges));
}

/// Keeps only edges passing `keep(edge)`.
template <class Pred>
SignedGraph edge_subgraph(const SignedGraph& g, Pred keep) {
  std::vector<SignedEdge> edges;
  for (const auto& e : g.edges())
    if (keep(e)) edges.push_back(e);
  return SignedGraph(g.num_vertices(), std::move(edges));
}

struct InducedSubgraph {
  SignedGraph graph;
  std::vector<Vertex> original;  // new index -> old index
};

inline InducedSubgraph induced_subgraph(const SignedGraph& g, std::span<const Vertex> keep) {
  std::vector<int> index(g.num_vertices(), -1);
  InducedSubgraph out;
  out.original.assign(keep.begin(), keep.end());
  std::sort(out.original.begin(), out.original.end());
  for (std::size_t i = 0; i < out.original.size(); ++i) index[out.original[i]] = static_cast<int>(i);
  std::vector<SignedEdge> edges;
  for (const auto& e : g.edges())
    if (index[e.u] >= 0 && index[e.v] >= 0) edges.push_back({index[e.u], index[e.v], e.sign});
  out.graph = SignedGraph(out.original.size(), std::move(edges));
  return out;
}

struct Components {
  std::vector<int> label;                  // per vertex, 0..count-1, ordered by smallest member
  std::vector<std::vector<Vertex>> parts;  // each sorted ascending
  std::size_t count() const noexcept { return parts.size(); }
};

inline Components components(const SignedGraph& g) {
  UnionFind uf(g.num_vertices());
  for (const auto& e : g.edges()) uf.unite(e.u, e.v);
  Components c;
  c.label.assign(g.num_vertices(), -1);
  std::vector<int> root_label(g.num_vertices(), -1);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const auto r = uf.find(v);
    if (root_label[r] < 0) {
      root_label[r] = static_cast<int>(c.parts.size());
      c.parts.emplace_back();
    }
    c.label[v] = root_label[r];
    c.parts[root_label[r]].push_back(static_cast<Vertex>(v));
  }
  return c;
}

struct CycleSpaceInfo {
  std::size_t num_edges = 0;
  std::size_t num_vertices = 0;
  std::size_t num_components = 0;
  std::size_t ell = 0;  // |E| - |V| + c
};

inline CycleSpaceInfo cycle_space(const SignedGraph& g) {
  CycleSpaceInfo info;
  info.num_edges = g.num_edges();
  info.num_vertices = g.num_vertices();
  info.num_components = components(g).count();
  info.ell = info.num_edges + info.num_components - info.num_vertices;
  return info;
}

inline bool is_forest(const SignedGraph& g) { return cycle_space(g).ell == 0; }

struct SpanningForestSwitch {
  std::vector<SignedEdge> forest;  // edges of a BFS spanning forest, original signs
  SwitchingFunction tau;
};

/// BFS spanning forest rooted at the smallest vertex of each component, with
/// tau(root) = +1 and tau(x) the sign of the forest path from the root to x.
/// Switching by tau makes every forest edge positive.
inline SpanningForestSwitch spanning_tree_positive_switch(const SignedGraph& g) {
  const auto n = g.num_vertices();
  const auto adj = g.adjacency();
  std::vector<int> tau(n, 0);
  SpanningForestSwitch out;
  for (std::size_t root = 0; root < n; ++root) {
    if (tau[root] != 0) continue;
    tau[root] = 1;
    std::queue<Vertex> q;
    q.push(static_cast<Vertex>(root));
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      for (const auto& [v, s] : adj[u]) {
        if (tau[v] != 0) continue;
        tau[v] = tau[u] * s;
        out.forest.push_back({std::min(u, v), std::max(u, v), s});
        q.push(v);
      }
    }
  }
  std::sort(out.forest.begin(), out.forest.end());
  out.tau = SwitchingFunction(std::move(tau));
  return out;
}

struct BalanceResult {
  bool balanced = false;
  std::optional<SwitchingFunction> certificate;  // switches g to all-positive
};

inline BalanceResult is_balanced(const SignedGraph& g) {
  auto sf = spanning_tree_positive_switch(g);
  for (const auto& e : g.edges())
    if (sf.tau[e.u] * e.sign * sf.tau[e.v] != 1) return {false, std::nullopt};
  return {true, std::move(sf.tau)};
}

inline bool is_antibalanced(const SignedGraph& g) { return is_balanced(negate(g)).balanced; }

inline bool is_bipartite(const SignedGraph& g) {
  // The all-negative signature is balanced exactly when every cycle is even.
  return is_balanced(SignedGraph(g.num_vertices(), [&] {
           auto e = g.edges();
           for (auto& x : e) x.sign = -1;
           return e;
         }()))
      .balanced;
}

/// Bridges of the underlying graph via iterative lowlink DFS.
inline std::vector<SignedEdge> bridges(const SignedGraph& g) {
  const auto n = g.num_vertices();
  const auto adj = g.adjacency();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<SignedEdge> out;
  int timer = 0;
  struct Frame {
    Vertex v;
    Vertex parent;
    std::size_t next;
    bool skipped_parent;
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (disc[s] >= 0) continue;
    std::vector<Frame> stack{{static_cast<Vertex>(s), -1, 0, false}};
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      auto& fr = stack.back();
      if (fr.next < adj[fr.v].size()) {
        const auto [w, sign] = adj[fr.v][fr.next++];
        if (w == fr.parent && !fr.skipped_parent) {
          fr.skipped_parent = true;  // simple graph: exactly one edge back to the parent
          continue;
        }
        if (disc[w] < 0) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, fr.v, 0, false});
        } else {
          low[fr.v] = std::min(low[fr.v], disc[w]);
        }
      } else {
        const Frame done = fr;
        stack.pop_back();
        if (!stack.empty()) {
          const Vertex p = stack.back().v;
          low[p] = std::min(low[p], low[done.v]);
          if (low[done.v] > disc[p]) {
            const auto sign = *g.sign_between(p, done.v);
            out.push_back({std::min(p, done.v), std::max(p, done.v), sign});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Per-vertex flag: true when the vertex lies on no cycle, i.e. all of its
/// incident edges are bridges. Isolated vertices and leaves qualify.
inline std::vector<bool> tree_like_mask(const SignedGraph& g) {
  const auto br = bridges(g);
  std::vector<std::size_t> bridge_deg(g.num_vertices(), 0);
  for (const auto& e : br) {
    ++bridge_deg[e.u];
    ++bridge_deg[e.v];
  }
  const auto deg = g.degrees();
  std::vector<bool> mask(g.num_vertices());
  for (std::size_t v = 0; v < mask.size(); ++v) mask[v] = bridge_deg[v] == deg[v];
  return mask;
}

inline std::vector<Vertex> tree_like_vertices(const SignedGraph& g) {
  const auto mask = tree_like_mask(g);
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < mask.size(); ++v)
    if (mask[v]) out.push_back(static_cast<Vertex>(v));
  return out;
}

/// Product of the edge signs along a walk.
inline int sign_of_walk(const SignedGraph& g, std::span<const Vertex> walk) {
  int s = 1;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const auto e = g.sign_between(walk[i], walk[i + 1]);
    if (!e)
      throw std::invalid_argument("walk steps between non-adjacent vertices " + std::to_string(walk[i]) + " and " +
                                  std::to_string(walk[i + 1]));
    s *= *e;
  }
  return s;
}

/// Reads the signed-graph text format: `n m`, then m lines `u v s`, s in {+,-}.
inline SignedGraph read_signed_graph(std::istream& in) {
  std::vector<detail::DataLine> lines;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto t = detail::tokens(detail::strip_comment(raw));
    if (!t.empty()) lines.push_back({lineno, std::move(t)});
  }
  if (lines.empty()) throw ParseError(lineno, "empty signed graph file");
  if (lines[0].tokens.size() != 2) throw ParseError(lines[0].number, "header must be 'n m'");
  const long long n = detail::parse_int(lines[0].tokens[0], lines[0].number);
  const long long m = detail::parse_int(lines[0].tokens[1], lines[0].number);
  if (n < 1 || m < 0) throw ParseError(lines[0].number, "need n >= 1 and m >= 0");
  if (static_cast<long long>(lines.size()) - 1 != m)
    throw ParseError(lines.back().number, "header announces " + std::to_string(m) + " edges, found " +
                                              std::to_string(lines.size() - 1));
  std::vector<SignedEdge> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.tokens.size() != 3) throw ParseError(l.number, "edge line must be 'u v s'");
    const long long u = detail::parse_int(l.tokens[0], l.number);
    const long long v = detail::parse_int(l.tokens[1], l.number);
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(l.number, "vertex index out of range [0, n)");
    if (u == v) throw ParseError(l.number, "self-loops are not allowed");
    int s = 0;
    if (l.tokens[2] == "+") s = 1;
    else if (l.tokens[2] == "-") s = -1;
    else throw ParseError(l.number, "sign must be '+' or '-'");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), s});
  }
  try {
    return SignedGraph(static_cast<std::size_t>(n), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(lines[0].number, e.what());
  }
}

inline void write_signed_graph(std::ostream& out, const SignedGraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << (e.sign > 0 ? '+' : '-') << '\n';
}

} // namespace sgnodal
