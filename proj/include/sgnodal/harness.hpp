#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgnodal/errors.hpp"
#include "sgnodal/nodal.hpp"
#include "sgnodal/signed_graph.hpp"
#include "sgnodal/spectral.hpp"
#include "sgnodal/sym_matrix.hpp"
#include "sgnodal/theorems.hpp"

namespace sgnodal {

inline constexpr std::array<std::string_view, 8> kFamilies = {
    "gnp-random-sign", "random-tree",         "random-forest",       "balanced-gnp",
    "antibalanced-gnp", "generalized-laplacian", "bipartite-laplacian", "star-with-leaves"};

inline constexpr std::array<std::string_view, 12> kSuites = {
    "upper-bounds",       "duality-forest",  "switching-invariance", "fiedler-acyclic",
    "lower-bound-cycles", "lower-bound-leaves", "antibalance-top",   "oracle-equivalence",
    "inertia-bounds",     "nowhere-zero-multiplicity", "unique-continuation", "constructions"};

struct GeneratorSpec {
  std::string family = "gnp-random-sign";
  std::size_t n = 8;
  std::size_t n_min = 0;  // when nonzero, each trial draws its size from [n_min, n]
  double p = 0.4;
  std::pair<double, double> weight_range{0.5, 2.0};
  std::pair<double, double> diagonal_range{-1.0, 1.0};
  std::uint64_t seed = 1;
  bool force_connected = false;  // start from a random spanning tree
  bool mixed_unit = false;       // odd trials use unit weights and zero diagonal
};

inline void validate(const GeneratorSpec& s) {
  if (std::find(kFamilies.begin(), kFamilies.end(), s.family) == kFamilies.end())
    throw std::invalid_argument("unknown generator family '" + s.family + "'");
  if (s.n < 1) throw std::invalid_argument("n must be at least 1");
  if (s.n_min > s.n) throw std::invalid_argument("n_min must not exceed n");
  if (!(s.p >= 0.0 && s.p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(s.weight_range.first > 0.0) || s.weight_range.second < s.weight_range.first)
    throw std::invalid_argument("weight range must satisfy 0 < lo <= hi");
  if (s.diagonal_range.second < s.diagonal_range.first) throw std::invalid_argument("diagonal range must satisfy lo <= hi");
}

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of one trial; depends only on (seed, trial).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return mix64(mix64(seed) ^ mix64(~trial)); }

using Rng = std::mt19937_64;

struct GeneratedInstance {
  SignedGraph graph;
  SymMatrix matrix;
};

namespace detail {

inline double uniform(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

inline int random_sign(Rng& rng) { return coin(rng, 0.5) ? 1 : -1; }

/// Random recursive tree on n vertices relabelled by a random permutation.
inline std::vector<std::pair<Vertex, Vertex>> random_tree_edges(Rng& rng, std::size_t n, double attach = 1.0) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<Vertex, Vertex>> out;
  for (std::size_t v = 1; v < n; ++v) {
    if (!coin(rng, attach)) continue;
    const auto parent = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    out.emplace_back(std::min(perm[v], perm[parent]), std::max(perm[v], perm[parent]));
  }
  return out;
}

/// Union of an optional spanning tree and G(n, p) on the allowed pairs.
template <class Allowed>
std::vector<std::pair<Vertex, Vertex>> gnp_edges(Rng& rng, std::size_t n, double p, bool connected, Allowed allowed) {
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  std::vector<std::pair<Vertex, Vertex>> out;
  if (connected) {
    for (auto [u, v] : random_tree_edges(rng, n)) {
      has[u][v] = true;
      out.emplace_back(u, v);
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool take = coin(rng, p);
      if (take && !has[u][v] && allowed(u, v)) out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

/// Deterministic instance for (spec, trial). The matrix is compatible with
/// the graph: M_uv = -sigma_uv * w_uv with w_uv drawn from the weight range.
inline GeneratedInstance generate(const GeneratorSpec& spec, std::uint64_t trial) {
  validate(spec);
  Rng rng(trial_seed(spec.seed, trial));
  const std::size_t n =
      spec.n_min ? std::uniform_int_distribution<std::size_t>(spec.n_min, spec.n)(rng) : spec.n;
  const bool unit = spec.mixed_unit && (trial % 2 == 1);
  const std::string& fam = spec.family;
  auto all = [](std::size_t, std::size_t) { return true; };

  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<int> signs;
  bool switch_after = false;
  if (fam == "gnp-random-sign" || fam == "balanced-gnp" || fam == "antibalanced-gnp" ||
      fam == "generalized-laplacian") {
    pairs = detail::gnp_edges(rng, n, spec.p, spec.force_connected, all);
    const int fixed = fam == "antibalanced-gnp" ? -1 : 1;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      signs.push_back(fam == "gnp-random-sign" ? detail::random_sign(rng) : fixed);
    switch_after = fam == "balanced-gnp" || fam == "antibalanced-gnp";
  } else if (fam == "random-tree" || fam == "random-forest") {
    pairs = detail::random_tree_edges(rng, n, fam == "random-tree" ? 1.0 : std::max(spec.p, 0.5));
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size(); ++i) signs.push_back(detail::random_sign(rng));
  } else if (fam == "bipartite-laplacian") {
    std::vector<int> side(n);
    for (auto& s : side) s = detail::coin(rng, 0.5) ? 0 : 1;
    std::vector<std::pair<Vertex, Vertex>> tree;
    if (spec.force_connected) {
      // A random spanning tree, 2-coloured; the colouring is the bipartition.
      tree = detail::random_tree_edges(rng, n);
      std::vector<std::vector<Vertex>> adj(n);
      for (auto [u, v] : tree) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
      std::vector<Vertex> stack{0};
      side.assign(n, -1);
      side[0] = 0;
      while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex v : adj[u])
          if (side[v] < 0) {
            side[v] = 1 - side[u];
            stack.push_back(v);
          }
      }
    }
    pairs = detail::gnp_edges(rng, n, spec.p, false, [&](std::size_t u, std::size_t v) { return side[u] != side[v]; });
    pairs.insert(pairs.end(), tree.begin(), tree.end());
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    signs.assign(pairs.size(), 1);
  } else {  // star-with-leaves
    const std::size_t core = std::max<std::size_t>(1, (n + 1) / 2);
    for (std::size_t u = 0; u < core; ++u)
      for (std::size_t v = u + 1; v < core; ++v)
        if (detail::coin(rng, std::max(spec.p, 0.5))) pairs.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    for (std::size_t leaf = core; leaf < n; ++leaf) {
      const auto hub = std::uniform_int_distribution<std::size_t>(0, core - 1)(rng);
      pairs.emplace_back(static_cast<Vertex>(hub), static_cast<Vertex>(leaf));
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size(); ++i) signs.push_back(detail::random_sign(rng));
  }

  std::vector<SignedEdge> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) edges.push_back({pairs[i].first, pairs[i].second, signs[i]});
  SignedGraph g(n, std::move(edges));
  if (switch_after) {
    std::vector<int> tau(n);
    for (auto& t : tau) t = detail::random_sign(rng);
    g = switched(g, SwitchingFunction(std::move(tau)));
  }

  SymMatrix m(n);
  for (const auto& e : g.edges()) {
    const double w = unit ? 1.0 : detail::uniform(rng, spec.weight_range.first, spec.weight_range.second);
    m.set(e.u, e.v, -e.sign * w);
  }
  for (std::size_t i = 0; i < n; ++i)
    m.set(i, i, unit ? 0.0 : detail::uniform(rng, spec.diagonal_range.first, spec.diagonal_range.second));
  return {std::move(g), std::move(m)};
}

/// Each entry is 0 with probability 0.3, otherwise a random sign times a
/// uniform magnitude in [0.05, 1].
inline Vector random_function(Rng& rng, std::size_t n) {
  Vector f(n);
  for (double& x : f) x = detail::coin(rng, 0.3) ? 0.0 : detail::random_sign(rng) * detail::uniform(rng, 0.05, 1.0);
  return f;
}

/// Random function that is not identically zero.
inline Vector random_nonzero_function(Rng& rng, std::size_t n) {
  for (;;) {
    auto f = random_function(rng, n);
    if (norm_inf(f) > 0.0) return f;
  }
}

struct SuiteFailure {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;  // trial seed, reproduces the instance
  TheoremReport report;
};

struct SuiteResult {
  std::string suite;
  GeneratorSpec spec;
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::size_t not_applicable = 0;
  std::size_t sensitive = 0;
  std::vector<SuiteFailure> failures;
  double wall_seconds = 0.0;

  bool ok() const noexcept { return failures.empty(); }
};

inline bool is_suite(std::string_view name) {
  return std::find(kSuites.begin(), kSuites.end(), name) != kSuites.end();
}

/// Generator defaults used when a suite is run without an explicit family.
inline GeneratorSpec default_spec(std::string_view suite) {
  GeneratorSpec s;
  s.n = 12;
  s.n_min = 2;
  s.mixed_unit = true;
  if (suite == "duality-forest") s.family = "random-forest";
  else if (suite == "fiedler-acyclic") s.family = "random-tree";
  else if (suite == "lower-bound-leaves") s.family = "star-with-leaves";
  else if (suite == "antibalance-top" || suite == "unique-continuation" || suite == "constructions") s.force_connected = true;
  if (suite == "oracle-equivalence") s.n = 8;
  if (suite == "constructions") {
    s.n = 10;
    s.n_min = 3;
  }
  return s;
}

namespace detail {

inline TheoremReport function_report(const char* name, const SignedGraph& g, std::span<const double> f,
                                     const Tolerances& tol) {
  TheoremReport r;
  r.theorem = name;
  r.tolerances = tol;
  r.hypothesis_satisfied = true;
  r.digest = fnv_hex(f, g.num_vertices());
  r.sensitive = norm_inf(f) > 0.0 && zero_mask(f, tol.zero_tol / 10) != zero_mask(f, tol.zero_tol * 10);
  return r;
}

inline void close(TheoremReport& r, bool ok, const std::string& what, const SignedGraph& g, std::span<const double> f) {
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  if (!ok) {
    r.detail = "violated: " + what;
    r.counterexample = Counterexample{signed_adjacency_matrix(g), 0, Vector(f.begin(), f.end())};
  }
}

inline bool same_weak(const WeakDomains& a, const WeakDomains& b) {
  return canonical(a.classes) == canonical(b.classes) && canonical(a.domains) == canonical(b.domains) &&
         a.unassigned == b.unassigned;
}

inline TheoremReport switching_report(const SignedGraph& g, const Vector& f, Rng& rng, const Tolerances& tol) {
  auto r = function_report("switching-invariance", g, f, tol);
  std::vector<int> t(g.num_vertices());
  for (auto& x : t) x = random_sign(rng);
  const SwitchingFunction tau(t);
  const auto gt = switched(g, tau);
  const auto tf = tau.apply(f);
  const bool strong_ok =
      canonical(strong_domains(g, f, tol.zero_tol).domains) == canonical(strong_domains(gt, tf, tol.zero_tol).domains);
  const bool weak_ok = same_weak(weak_domains(g, f, tol.zero_tol), weak_domains(gt, tf, tol.zero_tol));
  r.quantities["strong_equal"] = strong_ok;
  r.quantities["weak_equal"] = weak_ok;
  close(r, strong_ok && weak_ok, "domain partitions of f on G equal those of tau f on G^tau", g, f);
  return r;
}

inline TheoremReport oracle_report(const SignedGraph& g, const Vector& f, const Tolerances& tol) {
  auto r = function_report("oracle-equivalence", g, f, tol);
  const auto s = strong_domains(g, f, tol.zero_tol);
  const auto w = weak_domains(g, f, tol.zero_tol);
  const auto os = walk_oracle(g, f, tol.zero_tol, WalkKind::Strong);
  const auto ow = walk_oracle(g, f, tol.zero_tol, WalkKind::Weak);
  const bool strong_ok = canonical(s.domains) == os.classes;
  const bool weak_ok = canonical(w.classes) == ow.classes && canonical(w.domains) == canonical(ow.domains);
  r.quantities["S"] = static_cast<double>(s.count());
  r.quantities["W"] = static_cast<double>(w.count());
  r.quantities["strong_equal"] = strong_ok;
  r.quantities["weak_equal"] = weak_ok;
  close(r, strong_ok && weak_ok, "main algorithms agree with the walk oracle", g, f);
  return r;
}

/// Connected balanced graph on n - 1 vertices plus a vertex z with at least
/// two neighbours, signed so that the whole graph is not balanced.
inline std::pair<SignedGraph, Vertex> zero_at_instance(Rng& rng, std::size_t n, double p) {
  const std::size_t m = n - 1;
  auto pairs = gnp_edges(rng, m, p, true, [](std::size_t, std::size_t) { return true; });
  std::vector<int> tau(n);
  for (auto& t : tau) t = random_sign(rng);
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const Vertex z = perm[m];
  std::vector<Vertex> nbrs(m);
  std::iota(nbrs.begin(), nbrs.end(), 0);
  std::shuffle(nbrs.begin(), nbrs.end(), rng);
  const auto deg = std::uniform_int_distribution<std::size_t>(2, m)(rng);
  nbrs.resize(deg);

  std::vector<SignedEdge> edges;
  auto add = [&](Vertex a, Vertex b, int s) {
    edges.push_back({std::min(a, b), std::max(a, b), s * tau[a] * tau[b]});
  };
  for (auto [u, v] : pairs) add(perm[u], perm[v], 1);
  for (std::size_t i = 0; i < nbrs.size(); ++i) add(z, perm[nbrs[i]], i == 0 ? -1 : 1);
  std::sort(edges.begin(), edges.end());
  return {SignedGraph(n, std::move(edges)), z};
}

inline TheoremReport nowhere_zero_report(const SignedGraph& g, const Tolerances& tol) {
  auto r = function_report("construct-nowhere-zero", g, {}, tol);
  r.digest = fnv_hex({}, g.num_edges() * 1000003ULL + g.num_vertices());
  bool ok = false;
  std::string what = "construction succeeded";
  try {
    const auto c = construct_nowhere_zero_first(g, tol);
    const auto& f1 = c.eigen.vectors.front();
    const auto mask = zero_mask(f1, tol.zero_tol);
    const bool compatible = is_compatible(c.matrix, g);
    const bool simple = c.eigen.clusters.front().r == 1;
    const bool nowhere_zero = std::none_of(mask.begin(), mask.end(), [](bool b) { return b; });
    const auto S = strong_domains(g, f1, tol.zero_tol).count();
    r.quantities = {{"epsilon", c.epsilon},        {"halvings", static_cast<double>(c.halvings)},
                    {"compatible", compatible},    {"simple", simple},
                    {"nowhere_zero", nowhere_zero}, {"S", static_cast<double>(S)}};
    ok = compatible && simple && nowhere_zero && S == 1;
    what = "compatible, simple lambda_1, nowhere-zero f_1 with S = 1";
    if (!ok) {
      r.verdict = Verdict::Fail;
      r.detail = "violated: " + what;
      r.counterexample = Counterexample{c.matrix, 1, f1};
      return r;
    }
  } catch (const std::exception& e) {
    what = e.what();
  }
  close(r, ok, what, g, {});
  return r;
}

inline TheoremReport zero_at_report(const SignedGraph& g, Vertex z, const Tolerances& tol) {
  auto r = function_report("construct-zero-at", g, {}, tol);
  r.digest = fnv_hex({}, g.num_edges() * 1000003ULL + g.num_vertices() * 131ULL + static_cast<std::uint64_t>(z));
  r.quantities["vertex"] = z;
  try {
    const auto c = construct_zero_at_vertex(g, z, tol);
    auto mf = c.matrix.apply(c.f);
    double res = 0.0;
    for (std::size_t i = 0; i < mf.size(); ++i) res = std::max(res, std::abs(mf[i] - c.lambda * c.f[i]));
    const double rel = res / std::max(1.0, c.matrix.norm_inf());
    bool nonzero_elsewhere = true;
    for (std::size_t i = 0; i < c.f.size(); ++i)
      if (static_cast<Vertex>(i) != z && std::abs(c.f[i]) <= tol.zero_tol * norm_inf(c.f)) nonzero_elsewhere = false;
    const double lowest = eigenvalues(c.matrix).front();
    const bool first = lowest >= c.lambda - tol.cluster_tol * std::max(1.0, std::abs(c.lambda));
    const bool compatible = is_compatible(c.matrix, g);
    r.quantities["residual"] = rel;
    r.quantities["epsilon"] = c.epsilon;
    r.quantities["k_plus"] = static_cast<double>(c.k_plus);
    r.quantities["k_minus"] = static_cast<double>(c.k_minus);
    r.quantities["ill_conditioned"] = c.ill_conditioned;
    const bool ok = rel <= 1e-9 && c.f[z] == 0.0 && nonzero_elsewhere && first && compatible;
    r.verdict = ok ? Verdict::Pass : Verdict::Fail;
    if (!ok) {
      r.detail = "violated: residual <= 1e-9, f(z) = 0 exactly, nonzero elsewhere, lambda smallest, compatible";
      r.counterexample = Counterexample{c.matrix, 1, c.f};
    }
  } catch (const std::exception& e) {
    close(r, false, e.what(), g, {});
  }
  return r;
}

} // namespace detail

/// Runs one named suite. Theorem checks run on every eigenpair of every
/// instance, using the minimal-support basis inside degenerate clusters.
inline SuiteResult run_suite(std::string_view suite, const GeneratorSpec& spec, std::size_t trials,
                             const Tolerances& tol = {}) {
  if (!is_suite(suite)) throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  validate(spec);
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult res;
  res.suite = suite;
  res.spec = spec;
  res.trials = trials;

  auto record = [&](std::uint64_t trial, TheoremReport rep) {
    ++res.checks;
    if (rep.verdict == Verdict::NotApplicable) ++res.not_applicable;
    if (rep.sensitive) ++res.sensitive;
    if (rep.verdict == Verdict::Fail) res.failures.push_back({trial, trial_seed(spec.seed, trial), std::move(rep)});
  };

  static const std::array<std::string_view, 4> antibalance_families = {"balanced-gnp", "antibalanced-gnp",
                                                                         "gnp-random-sign", "bipartite-laplacian"};

  for (std::uint64_t t = 0; t < trials; ++t) {
    GeneratorSpec s = spec;
    if (suite == "antibalance-top") s.family = antibalance_families[t % antibalance_families.size()];
    Rng frng(trial_seed(spec.seed, t) ^ 0xf00dULL);

    if (suite == "duality-forest" || suite == "switching-invariance" || suite == "oracle-equivalence") {
      const auto inst = generate(s, t);
      const auto f = random_nonzero_function(frng, inst.graph.num_vertices());
      if (suite == "duality-forest") record(t, check_duality_forest(inst.graph, f, tol.zero_tol));
      else if (suite == "switching-invariance") record(t, detail::switching_report(inst.graph, f, frng, tol));
      else record(t, detail::oracle_report(inst.graph, f, tol));
      continue;
    }
    if (suite == "constructions") {
      const auto inst = generate(s, t);
      record(t, detail::nowhere_zero_report(inst.graph, tol));
      const std::size_t n = std::max<std::size_t>(3, inst.graph.num_vertices());
      const auto [g, z] = detail::zero_at_instance(frng, n, s.p);
      record(t, detail::zero_at_report(g, z, tol));
      continue;
    }

    const auto inst = generate(s, t);
    Instance in;
    try {
      in = make_instance(inst.matrix, tol);
    } catch (const std::exception& e) {
      TheoremReport r;
      r.theorem = std::string(suite);
      r.digest = inst.matrix.digest();
      r.tolerances = tol;
      r.hypothesis_satisfied = true;
      r.verdict = Verdict::Fail;
      r.detail = std::string("eigendecomposition failed: ") + e.what();
      r.counterexample = Counterexample{inst.matrix, 0, {}};
      record(t, std::move(r));
      continue;
    }
    if (suite == "antibalance-top") {
      record(t, check_antibalance_top(in));
      continue;
    }
    for (const auto& ep : eigenpairs(in, Basis::MinimalSupport)) {
      if (suite == "upper-bounds") record(t, check_upper_bounds(in, ep));
      else if (suite == "fiedler-acyclic") record(t, check_fiedler_acyclic(in, ep));
      else if (suite == "lower-bound-cycles") record(t, check_lower_bound_cycles(in, ep));
      else if (suite == "lower-bound-leaves") record(t, check_lower_bound_leaves(in, ep));
      else if (suite == "inertia-bounds") record(t, check_inertia_edge_bounds(in, ep));
      else if (suite == "nowhere-zero-multiplicity") record(t, check_nowhere_zero_multiplicity(in, ep));
      else if (suite == "unique-continuation") record(t, check_unique_continuation(in, ep));
    }
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

} // namespace sgnodal
