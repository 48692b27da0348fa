#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <queue>
#include <tuple>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgnodal/signed_graph.hpp"
#include "sgnodal/spectral.hpp"
#include "sgnodal/union_find.hpp"

namespace sgnodal {

/// Family of vertex sets; canonical form has each set ascending and sets
/// ordered by their smallest vertex.
using Partition = std::vector<std::vector<Vertex>>;

inline Partition canonical(Partition p) {
  for (auto& s : p) std::sort(s.begin(), s.end());
  std::erase_if(p, [](const auto& s) { return s.empty(); });
  std::sort(p.begin(), p.end());
  return p;
}

struct StrongDomains {
  Partition domains;
  std::vector<SignedEdge> s_edges;  // edges with f(x) sigma_xy f(y) > 0
  std::size_t count() const noexcept { return domains.size(); }
};

struct WeakDomains {
  Partition classes;                 // W-equivalence classes of nonzeros
  Partition domains;                 // classes[i] plus absorbed zeros, same order as classes
  std::vector<Vertex> unassigned;    // zeros in components where f vanishes identically
  std::size_t count() const noexcept { return classes.size(); }
};

struct NodalDecomposition {
  StrongDomains strong;
  WeakDomains weak;
  std::size_t count_strong() const noexcept { return strong.count(); }
  std::size_t count_weak() const noexcept { return weak.count(); }
};

namespace detail {

inline void check_length(const SignedGraph& g, std::span<const double> f) {
  if (f.size() != g.num_vertices()) throw std::invalid_argument("function length does not match vertex count");
}

/// Groups the union-find classes of the listed vertices.
inline Partition classes_of(UnionFind& uf, std::span<const Vertex> members) {
  std::vector<std::vector<Vertex>> by_root(uf.size());
  for (Vertex v : members) by_root[uf.find(v)].push_back(v);
  return canonical(std::move(by_root));
}

} // namespace detail

/// Strong nodal domains: components of the nonzero set under the S-edges.
/// The count is checked against |V| - z - |E(T_S)| for a spanning forest T_S.
inline StrongDomains strong_domains(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  detail::check_length(g, f);
  const auto sgn = sign_pattern(f, zero_tol);
  StrongDomains out;
  UnionFind uf(g.num_vertices());
  std::size_t forest_edges = 0;
  for (const auto& e : g.edges()) {
    if (sgn[e.u] * e.sign * sgn[e.v] > 0) {
      out.s_edges.push_back(e);
      if (uf.unite(e.u, e.v)) ++forest_edges;
    }
  }
  std::vector<Vertex> nonzero;
  for (std::size_t v = 0; v < sgn.size(); ++v)
    if (sgn[v] != 0) nonzero.push_back(static_cast<Vertex>(v));
  out.domains = detail::classes_of(uf, nonzero);
  if (out.domains.size() != nonzero.size() - forest_edges)
    throw std::logic_error("strong domain count disagrees with the spanning-forest identity");
  return out;
}

/// Strong nodal domains of f on the negated signature.
inline StrongDomains dual_strong_domains(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  return strong_domains(negate(g), f, zero_tol);
}

/// Weak nodal domains by zero-component potentials. Every W-walk segment
/// between consecutive nonzeros runs through a single zero component C. If C
/// is balanced, all walks across it between boundary vertices u, u' have sign
/// pi(u) pi(u') for a +/-1 potential pi; otherwise either sign is reachable.
/// Boundary nonzeros are therefore tied to one of two anchors of C (or to a
/// single anchor when C is unbalanced) according to their relative sign.
inline WeakDomains weak_domains(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  detail::check_length(g, f);
  const auto n = g.num_vertices();
  const auto sgn = sign_pattern(f, zero_tol);
  const auto adj = g.adjacency();

  // Zero components with BFS potentials.
  std::vector<int> comp(n, -1), pi(n, 0);
  std::vector<bool> ambiguous;
  std::vector<std::vector<Vertex>> comp_members;
  for (std::size_t s = 0; s < n; ++s) {
    if (sgn[s] != 0 || comp[s] >= 0) continue;
    const int id = static_cast<int>(comp_members.size());
    comp_members.emplace_back();
    ambiguous.push_back(false);
    comp[s] = id;
    pi[s] = 1;
    std::queue<Vertex> q;
    q.push(static_cast<Vertex>(s));
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      comp_members[id].push_back(u);
      for (const auto& [v, sig] : adj[u]) {
        if (sgn[v] != 0) continue;
        if (comp[v] < 0) {
          comp[v] = id;
          pi[v] = pi[u] * sig;
          q.push(v);
        } else if (pi[u] * sig * pi[v] != 1) {
          ambiguous[id] = true;
        }
      }
    }
  }

  const std::size_t ncomp = comp_members.size();
  // Nodes: vertices [0, n), then anchors n + 2c (plus) and n + 2c + 1 (minus).
  UnionFind uf(n + 2 * ncomp);
  std::vector<std::vector<Vertex>> incidences(ncomp);  // boundary nonzeros
  for (const auto& e : g.edges()) {
    const int p = sgn[e.u] * e.sign * sgn[e.v];
    if (p > 0) uf.unite(e.u, e.v);
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (sgn[w] == 0) continue;
    for (const auto& [u, sig] : adj[w]) {
      if (sgn[u] != 0) continue;
      const int c = comp[u];
      const int rel = sgn[w] * sig * pi[u];
      const std::size_t anchor = n + 2 * static_cast<std::size_t>(c) + ((ambiguous[c] || rel > 0) ? 0 : 1);
      uf.unite(w, anchor);
      incidences[c].push_back(static_cast<Vertex>(w));
    }
  }

  WeakDomains out;
  std::vector<Vertex> nonzero;
  for (std::size_t v = 0; v < n; ++v)
    if (sgn[v] != 0) nonzero.push_back(static_cast<Vertex>(v));
  out.classes = detail::classes_of(uf, nonzero);

  std::vector<int> class_of(n, -1);
  for (std::size_t i = 0; i < out.classes.size(); ++i)
    for (Vertex v : out.classes[i]) class_of[v] = static_cast<int>(i);

  out.domains = out.classes;
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (incidences[c].empty()) {
      out.unassigned.insert(out.unassigned.end(), comp_members[c].begin(), comp_members[c].end());
      continue;
    }
    std::vector<int> touched;
    for (Vertex w : incidences[c]) touched.push_back(class_of[w]);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int cls : touched)
      out.domains[cls].insert(out.domains[cls].end(), comp_members[c].begin(), comp_members[c].end());
  }
  for (auto& d : out.domains) std::sort(d.begin(), d.end());
  std::sort(out.unassigned.begin(), out.unassigned.end());

  // Report order: by smallest vertex of the weak domain, classes kept aligned.
  std::vector<std::size_t> order(out.domains.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(out.domains[a].front(), out.classes[a].front()) <
           std::tie(out.domains[b].front(), out.classes[b].front());
  });
  Partition classes, domains;
  for (std::size_t i : order) {
    classes.push_back(std::move(out.classes[i]));
    domains.push_back(std::move(out.domains[i]));
  }
  out.classes = std::move(classes);
  out.domains = std::move(domains);
  return out;
}

inline NodalDecomposition decompose(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  return {strong_domains(g, f, zero_tol), weak_domains(g, f, zero_tol)};
}

/// Graph whose nodes are weak domains; two domains are adjacent when they
/// share a vertex or some x in one is adjacent to some y in the other.
struct DomainAdjacencyGraph {
  std::size_t num_nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool connected() const {
    if (num_nodes == 0) return true;
    UnionFind uf(num_nodes);
    std::size_t merges = 0;
    for (const auto& [a, b] : edges)
      if (uf.unite(a, b)) ++merges;
    return merges + 1 == num_nodes;
  }
};

inline DomainAdjacencyGraph domain_adjacency(const SignedGraph& g, const Partition& domains) {
  DomainAdjacencyGraph out;
  out.num_nodes = domains.size();
  std::vector<std::vector<std::size_t>> member_of(g.num_vertices());
  for (std::size_t i = 0; i < domains.size(); ++i)
    for (Vertex v : domains[i]) member_of[v].push_back(i);
  std::vector<std::vector<bool>> adjacent(domains.size(), std::vector<bool>(domains.size(), false));
  auto link = [&](std::size_t a, std::size_t b) {
    if (a != b) adjacent[std::min(a, b)][std::max(a, b)] = true;
  };
  for (const auto& owners : member_of)
    for (std::size_t a : owners)
      for (std::size_t b : owners) link(a, b);
  for (const auto& e : g.edges())
    for (std::size_t a : member_of[e.u])
      for (std::size_t b : member_of[e.v]) link(a, b);
  for (std::size_t a = 0; a < domains.size(); ++a)
    for (std::size_t b = a + 1; b < domains.size(); ++b)
      if (adjacent[a][b]) out.edges.emplace_back(a, b);
  return out;
}

enum class WalkKind { Strong, Weak };

struct OracleResult {
  Partition classes;
  Partition domains;  // weak kind only: classes plus zeros with a W-walk into them
};

/// Independent walk-based oracle. From each nonzero source it explores states
/// (vertex, accumulated sign since the source); a nonzero y is related to the
/// source when the segment reaching it satisfies f(x) * sign * f(y) > 0. The
/// strong kind only steps between nonzeros along S-edges; the weak kind may
/// pass through zeros. Transitive closure via union-find.
inline OracleResult walk_oracle(const SignedGraph& g, std::span<const double> f, double zero_tol, WalkKind kind) {
  detail::check_length(g, f);
  const auto n = g.num_vertices();
  if (n > 16) throw std::invalid_argument("walk_oracle is limited to n <= 16");
  const auto sgn = sign_pattern(f, zero_tol);
  const auto adj = g.adjacency();
  UnionFind uf(n);
  std::vector<Vertex> nonzero;
  for (std::size_t x = 0; x < n; ++x) {
    if (sgn[x] == 0) continue;
    nonzero.push_back(static_cast<Vertex>(x));
    // visited[v][0] for accumulated +1, [1] for -1; only zero vertices are expanded.
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::queue<std::pair<Vertex, int>> q;
    q.push({static_cast<Vertex>(x), sgn[x]});
    while (!q.empty()) {
      const auto [v, acc] = q.front();
      q.pop();
      for (const auto& [y, sig] : adj[v]) {
        const int t = acc * sig;
        if (sgn[y] != 0) {
          if (t * sgn[y] > 0) uf.unite(x, y);
          continue;
        }
        if (kind == WalkKind::Strong) continue;
        auto& seen = visited[y][t > 0 ? 0 : 1];
        if (seen) continue;
        seen = true;
        q.push({y, t});
      }
    }
  }
  OracleResult out;
  out.classes = detail::classes_of(uf, nonzero);
  if (kind == WalkKind::Strong) {
    out.domains = out.classes;
    return out;
  }
  // A zero joins W_i when some walk through zeros reaches a first nonzero in W_i.
  std::vector<int> class_of(n, -1);
  for (std::size_t i = 0; i < out.classes.size(); ++i)
    for (Vertex v : out.classes[i]) class_of[v] = static_cast<int>(i);
  out.domains = out.classes;
  for (std::size_t z = 0; z < n; ++z) {
    if (sgn[z] != 0) continue;
    std::vector<bool> seen(n, false);
    std::vector<bool> joined(out.classes.size(), false);
    std::queue<Vertex> q;
    q.push(static_cast<Vertex>(z));
    seen[z] = true;
    while (!q.empty()) {
      const Vertex v = q.front();
      q.pop();
      for (const auto& nb : adj[v]) {
        if (seen[nb.vertex]) continue;
        seen[nb.vertex] = true;
        if (sgn[nb.vertex] != 0) joined[class_of[nb.vertex]] = true;
        else q.push(nb.vertex);
      }
    }
    for (std::size_t i = 0; i < joined.size(); ++i)
      if (joined[i]) out.domains[i].push_back(static_cast<Vertex>(z));
  }
  for (auto& d : out.domains) std::sort(d.begin(), d.end());
  return out;
}

} // namespace sgnodal
