#pragma once

// Independent reference implementations used only by the tests. None of
// these share code paths with the library beyond the basic containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgnodal/sgnodal.hpp"

#ifndef SGNODAL_DATA_DIR
#define SGNODAL_DATA_DIR "data"
#endif

namespace oracle {

using sgnodal::Partition;
using sgnodal::SignedGraph;
using sgnodal::SymMatrix;
using sgnodal::Vertex;

inline std::string data_path(const std::string& name) { return std::string(SGNODAL_DATA_DIR) + "/" + name; }

inline SymMatrix load_matrix(const std::string& name) {
  std::ifstream in(data_path(name));
  return sgnodal::read_matrix(in);
}

inline SignedGraph load_graph(const std::string& name) {
  std::ifstream in(data_path(name));
  return sgnodal::read_signed_graph(in);
}

/// The six-vertex example matrix, typed in directly.
inline SymMatrix fig1_matrix() {
  return SymMatrix::from_rows({{0, -1, 0, -1, 0, 0},
                               {-1, 0, -1, 1, 0, 0},
                               {0, -1, 0, -1, -1, -1},
                               {-1, 1, -1, 0, 0, 0},
                               {0, 0, -1, 0, 0, 1},
                               {0, 0, -1, 0, 1, 0}});
}

inline SignedGraph fig1_graph() {
  return SignedGraph(6, {{0, 1, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, -1}, {2, 3, 1}, {2, 4, 1}, {2, 5, 1}, {4, 5, -1}});
}

/// Signs of every simple cycle, by exhaustive DFS from each smallest vertex.
/// Each cycle is reported twice (once per direction), which is harmless here.
inline std::vector<std::pair<int, std::size_t>> all_cycles(const SignedGraph& g) {
  const auto n = g.num_vertices();
  std::vector<std::vector<int>> sign(n, std::vector<int>(n, 0));
  for (const auto& e : g.edges()) sign[e.u][e.v] = sign[e.v][e.u] = e.sign;
  std::vector<std::pair<int, std::size_t>> out;  // (sign, length)
  std::vector<bool> used(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    std::function<void(std::size_t, int, std::size_t)> dfs = [&](std::size_t u, int acc, std::size_t len) {
      for (std::size_t v = s; v < n; ++v) {
        if (!sign[u][v]) continue;
        if (v == s && len >= 3) out.emplace_back(acc * sign[u][v], len);
        if (v > s && !used[v]) {
          used[v] = true;
          dfs(v, acc * sign[u][v], len + 1);
          used[v] = false;
        }
      }
    };
    used[s] = true;
    dfs(s, 1, 1);
    used[s] = false;
  }
  return out;
}

inline bool all_positive(const SignedGraph& g) {
  return std::all_of(g.edges().begin(), g.edges().end(), [](const auto& e) { return e.sign == 1; });
}

inline bool balanced_by_cycles(const SignedGraph& g) {
  for (auto [s, len] : all_cycles(g))
    if (s < 0) return false;
  return true;
}

inline bool antibalanced_by_cycles(const SignedGraph& g) {
  for (auto [s, len] : all_cycles(g))
    if (s * (len % 2 ? -1 : 1) < 0) return false;
  return true;
}

inline std::size_t count_components(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                                    const std::vector<bool>& removed) {
  std::vector<int> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [u, v] : edges)
    if (!removed[u] && !removed[v]) parent[find(u)] = find(v);
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i] && find(static_cast<int>(i)) == static_cast<int>(i)) ++c;
  return c;
}

/// x is tree-like when deleting it raises the component count by deg(x) - 1.
inline std::vector<bool> tree_like_by_deletion(const SignedGraph& g) {
  const auto n = g.num_vertices();
  std::vector<std::pair<int, int>> edges;
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : g.edges()) {
    edges.emplace_back(e.u, e.v);
    ++deg[e.u];
    ++deg[e.v];
  }
  std::vector<bool> none(n, false);
  const auto base = count_components(n, edges, none);
  std::vector<bool> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    auto removed = none;
    removed[x] = true;
    const auto after = count_components(n, edges, removed);
    // deleting an isolated vertex lowers the count by one: deg - 1 = -1
    out[x] = static_cast<long long>(after) - static_cast<long long>(base) == static_cast<long long>(deg[x]) - 1;
  }
  return out;
}

/// Classical sign domains for an all-positive graph: strong domains are the
/// components of {f > 0} and {f < 0}; weak domains are the components of
/// {f >= 0} containing a positive vertex and of {f <= 0} containing a
/// negative vertex.
struct ClassicalDomains {
  Partition strong;
  Partition weak;  // full vertex sets, zeros included
};

inline ClassicalDomains classical_domains(const SignedGraph& g, const std::vector<int>& sgn) {
  const auto n = g.num_vertices();
  auto comps = [&](auto keep) {
    std::vector<std::pair<int, int>> edges;
    std::vector<bool> removed(n);
    for (std::size_t v = 0; v < n; ++v) removed[v] = !keep(sgn[v]);
    for (const auto& e : g.edges()) edges.emplace_back(e.u, e.v);
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [u, v] : edges)
      if (!removed[u] && !removed[v]) parent[find(u)] = find(v);
    std::map<int, std::vector<Vertex>> groups;
    for (std::size_t v = 0; v < n; ++v)
      if (!removed[v]) groups[find(static_cast<int>(v))].push_back(static_cast<Vertex>(v));
    Partition out;
    for (auto& [r, vs] : groups) out.push_back(vs);
    return out;
  };
  ClassicalDomains d;
  for (auto& s : comps([](int s) { return s > 0; })) d.strong.push_back(s);
  for (auto& s : comps([](int s) { return s < 0; })) d.strong.push_back(s);
  for (auto& s : comps([](int s) { return s >= 0; }))
    if (std::any_of(s.begin(), s.end(), [&](Vertex v) { return sgn[v] > 0; })) d.weak.push_back(s);
  for (auto& s : comps([](int s) { return s <= 0; }))
    if (std::any_of(s.begin(), s.end(), [&](Vertex v) { return sgn[v] < 0; })) d.weak.push_back(s);
  d.strong = sgnodal::canonical(d.strong);
  d.weak = sgnodal::canonical(d.weak);
  return d;
}

/// Nonzero parts of a family of vertex sets.
inline Partition nonzero_parts(const Partition& p, const std::vector<int>& sgn) {
  Partition out;
  for (const auto& s : p) {
    std::vector<Vertex> t;
    for (Vertex v : s)
      if (sgn[v] != 0) t.push_back(v);
    out.push_back(t);
  }
  return sgnodal::canonical(out);
}

inline Eigen::MatrixXd to_eigen(const SymMatrix& m) {
  Eigen::MatrixXd a(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) a(i, j) = m(i, j);
  return a;
}

inline std::vector<double> reference_eigenvalues(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

/// Dimension of {g in span(basis) : g vanishes outside `allowed`}.
inline std::size_t restricted_dim(const std::vector<std::vector<double>>& basis, const std::vector<bool>& allowed) {
  const auto r = basis.size();
  const auto n = basis.front().size();
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < n; ++i)
    if (!allowed[i]) outside.push_back(i);
  if (outside.empty()) return r;
  Eigen::MatrixXd a(outside.size(), r);
  for (std::size_t i = 0; i < outside.size(); ++i)
    for (std::size_t j = 0; j < r; ++j) a(i, j) = basis[j][outside[i]];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-9);
  return r - static_cast<std::size_t>(lu.rank());
}

/// Exhaustive minimality: no nonzero member of the span has support strictly
/// inside supp(f). Tries every proper subset of the support.
inline bool minimal_by_subsets(const std::vector<double>& f, const std::vector<std::vector<double>>& basis,
                               double zero_tol) {
  const auto mask = sgnodal::zero_mask(f, zero_tol);
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!mask[i]) supp.push_back(i);
  const std::uint64_t full = (std::uint64_t{1} << supp.size()) - 1;
  for (std::uint64_t s = 1; s < full; ++s) {
    std::vector<bool> allowed(f.size(), false);
    for (std::size_t b = 0; b < supp.size(); ++b)
      if (s >> b & 1) allowed[supp[b]] = true;
    if (restricted_dim(basis, allowed) > 0) return false;
  }
  return true;
}

inline SymMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), c(0.0, 1.0);
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (i == j || c(rng) < density) m.set(i, j, u(rng));
  return m;
}

inline SignedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::uniform_real_distribution<double> c(0.0, 1.0);
  std::vector<sgnodal::SignedEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (c(rng) < p) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), c(rng) < 0.5 ? 1 : -1});
  return SignedGraph(n, std::move(edges));
}

inline sgnodal::SwitchingFunction random_switch(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> tau(n);
  for (auto& t : tau) t = rng() % 2 ? 1 : -1;
  return sgnodal::SwitchingFunction(std::move(tau));
}

} // namespace oracle
