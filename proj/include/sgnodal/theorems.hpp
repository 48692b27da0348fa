#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgnodal/errors.hpp"
#include "sgnodal/nodal.hpp"
#include "sgnodal/signed_graph.hpp"
#include "sgnodal/spectral.hpp"
#include "sgnodal/sym_matrix.hpp"

namespace sgnodal {

enum class Verdict { Pass, Fail, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "?";
}

/// Which eigenbasis an eigenpair was drawn from. The two differ only inside
/// degenerate clusters.
enum class Basis { Raw, MinimalSupport };

inline const char* to_string(Basis b) { return b == Basis::Raw ? "raw" : "minimal-support"; }

struct Counterexample {
  SymMatrix matrix;
  std::size_t index = 0;  // 1-based eigen index, 0 for function-level checks
  Vector f;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct TheoremReport {
  std::string theorem;
  std::string digest;
  bool hypothesis_satisfied = false;
  std::map<std::string, double> quantities;
  Verdict verdict = Verdict::NotApplicable;
  Tolerances tolerances;
  bool sensitive = false;
  std::string basis = "raw";
  std::string detail;  // first violated assertion, or why the check does not apply
  std::optional<Counterexample> counterexample;

  bool failed() const noexcept { return verdict == Verdict::Fail; }

  friend bool operator==(const TheoremReport&, const TheoremReport&) = default;
};

/// Matrix, induced graph and eigensystem shared by every check on one input.
struct Instance {
  SymMatrix matrix;
  SignedGraph graph;
  EigenSystem eigen;
  Tolerances tol;
  CycleSpaceInfo cycles;
  std::string digest;
};

inline Instance make_instance(SymMatrix m, const Tolerances& tol = {}) {
  Instance in;
  in.graph = from_matrix(m, tol.entry_tol);
  in.eigen = eigendecompose(m, tol);
  in.tol = tol;
  in.cycles = cycle_space(in.graph);
  in.digest = m.digest();
  in.matrix = std::move(m);
  return in;
}

struct Eigenpair {
  std::size_t index = 1;  // 1-based
  double value = 0.0;
  Vector f;
  Cluster cluster;
  Basis basis = Basis::Raw;
};

/// All n eigenpairs. With Basis::MinimalSupport each degenerate cluster is
/// replaced by its row-reduced basis.
inline std::vector<Eigenpair> eigenpairs(const Instance& in, Basis basis = Basis::Raw) {
  std::vector<Eigenpair> out;
  for (const auto& c : in.eigen.clusters) {
    std::vector<Vector> vecs = in.eigen.eigenspace(c);
    const Basis used = (basis == Basis::MinimalSupport && c.r > 1) ? Basis::MinimalSupport : Basis::Raw;
    if (used == Basis::MinimalSupport) vecs = minimal_support_basis(vecs, in.tol.rref_pivot_tol);
    for (std::size_t j = 0; j < c.r; ++j)
      out.push_back({c.k + j, in.eigen.values[c.k - 1 + j], std::move(vecs[j]), c, used});
  }
  return out;
}

/// Matrix with entry -sigma on every edge and zero diagonal; compatible with g.
inline SymMatrix signed_adjacency_matrix(const SignedGraph& g) {
  SymMatrix m(g.num_vertices());
  for (const auto& e : g.edges()) m.set(e.u, e.v, -static_cast<double>(e.sign));
  return m;
}

/// Cycle-space dimension of the S-edge subgraph on all vertices.
inline std::size_t ell_plus(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  const auto sgn = sign_pattern(f, zero_tol);
  const auto h = edge_subgraph(g, [&](const SignedEdge& e) { return sgn[e.u] * e.sign * sgn[e.v] > 0; });
  return cycle_space(h).ell;
}

namespace detail {

inline TheoremReport start(const char* theorem, const Instance& in, const Eigenpair& ep) {
  TheoremReport r;
  r.theorem = theorem;
  r.digest = in.digest;
  r.tolerances = in.tol;
  r.basis = to_string(ep.basis);
  r.sensitive = classify_zeros(in.graph, ep.f, in.tol.zero_tol).sensitive;
  r.quantities["index"] = static_cast<double>(ep.index);
  r.quantities["lambda"] = ep.value;
  r.quantities["k"] = static_cast<double>(ep.cluster.k);
  r.quantities["r"] = static_cast<double>(ep.cluster.r);
  return r;
}

inline TheoremReport not_applicable(TheoremReport r, std::string why) {
  r.hypothesis_satisfied = false;
  r.verdict = Verdict::NotApplicable;
  r.detail = std::move(why);
  return r;
}

/// Collects assertions; the first violated one becomes the report detail.
class Asserter {
public:
  explicit Asserter(TheoremReport& r) : r_(r) {}

  void expect(bool ok, const std::string& what) {
    if (!ok && ok_) {
      ok_ = false;
      r_.detail = "violated: " + what;
    }
  }

  void finish(const SymMatrix& m, std::size_t index, std::span<const double> f) {
    r_.hypothesis_satisfied = true;
    r_.verdict = ok_ ? Verdict::Pass : Verdict::Fail;
    if (!ok_) r_.counterexample = Counterexample{m, index, Vector(f.begin(), f.end())};
  }

private:
  TheoremReport& r_;
  bool ok_ = true;
};

inline double as_q(std::size_t v) { return static_cast<double>(v); }
inline long long as_i(std::size_t v) { return static_cast<long long>(v); }

inline std::string fnv_hex(std::span<const double> values, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (double v : values) {
    const double canon = v == 0.0 ? 0.0 : v;
    const auto* b = reinterpret_cast<const unsigned char*>(&canon);
    for (std::size_t i = 0; i < sizeof canon; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Number of eigenvalues of a matrix equal to lambda within the cluster tolerance.
inline std::size_t multiplicity_of(const Vector& eigs, double lambda, double tol) {
  return static_cast<std::size_t>(
      std::count_if(eigs.begin(), eigs.end(), [&](double mu) { return std::abs(mu - lambda) <= tol; }));
}

} // namespace detail

/// Strong and weak upper bounds; adds S <= k when f has minimal support in its eigenspace.
inline TheoremReport check_upper_bounds(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("upper-bounds", in, ep);
  const double zt = in.tol.zero_tol;
  const auto S = strong_domains(in.graph, ep.f, zt).count();
  const auto W = weak_domains(in.graph, ep.f, zt).count();
  const auto k = ep.cluster.k, r = ep.cluster.r, c = in.cycles.num_components;
  const bool minimal = has_minimal_support(ep.f, in.eigen.eigenspace(ep.cluster), zt);
  rep.quantities["S"] = detail::as_q(S);
  rep.quantities["W"] = detail::as_q(W);
  rep.quantities["c"] = detail::as_q(c);
  rep.quantities["minimal_support"] = minimal ? 1.0 : 0.0;
  detail::Asserter a(rep);
  a.expect(S <= k + r - 1, "S <= k + r - 1");
  a.expect(W <= k + c - 1, "W <= k + c - 1");
  if (minimal) a.expect(S <= k, "S <= k for a minimal-support eigenfunction");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// S + S-bar = n + c - 2z + e0 for any function on a forest.
inline TheoremReport check_duality_forest(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  TheoremReport rep;
  rep.theorem = "duality-forest";
  rep.tolerances.zero_tol = zero_tol;
  rep.digest = detail::fnv_hex(f, g.num_vertices());
  const auto cs = cycle_space(g);
  if (cs.ell != 0) return detail::not_applicable(std::move(rep), "graph has a cycle");
  if (norm_inf(f) == 0.0) return detail::not_applicable(std::move(rep), "function is identically zero");
  const auto zp = classify_zeros(g, f, zero_tol);
  rep.sensitive = zp.sensitive;
  const auto S = strong_domains(g, f, zero_tol).count();
  const auto Sbar = dual_strong_domains(g, f, zero_tol).count();
  const long long rhs = detail::as_i(cs.num_vertices + cs.num_components + zp.e0) - 2 * detail::as_i(zp.z);
  rep.quantities = {{"S", detail::as_q(S)},       {"S_bar", detail::as_q(Sbar)},
                    {"n", detail::as_q(cs.num_vertices)}, {"c", detail::as_q(cs.num_components)},
                    {"z", detail::as_q(zp.z)},    {"e0", detail::as_q(zp.e0)}};
  detail::Asserter a(rep);
  a.expect(detail::as_i(S + Sbar) == rhs, "S + S_bar = n + c - 2z + e0");
  a.finish(signed_adjacency_matrix(g), 0, f);
  return rep;
}

/// Connected induced graph: antibalanced iff S(f_n) = W(f_n) = n, and then
/// lambda_n is simple. Records whether the bipartite all-positive case applies.
inline TheoremReport check_antibalance_top(const Instance& in) {
  const auto n = in.graph.num_vertices();
  const auto& top = in.eigen.cluster_of(n);
  const Eigenpair ep{n, in.eigen.values[n - 1], in.eigen.vectors[n - 1], top, Basis::Raw};
  auto rep = detail::start("antibalance-top", in, ep);
  if (in.cycles.num_components != 1) return detail::not_applicable(std::move(rep), "induced graph is disconnected");
  const double zt = in.tol.zero_tol;
  const auto S = strong_domains(in.graph, ep.f, zt).count();
  const auto W = weak_domains(in.graph, ep.f, zt).count();
  const bool anti = is_antibalanced(in.graph);
  const bool all_positive = std::all_of(in.graph.edges().begin(), in.graph.edges().end(),
                                        [](const SignedEdge& e) { return e.sign > 0; });
  const bool roth = all_positive && is_bipartite(in.graph);
  rep.quantities["S"] = detail::as_q(S);
  rep.quantities["W"] = detail::as_q(W);
  rep.quantities["n"] = detail::as_q(n);
  rep.quantities["antibalanced"] = anti ? 1.0 : 0.0;
  rep.quantities["roth_case"] = roth ? 1.0 : 0.0;
  detail::Asserter a(rep);
  a.expect(anti == (S == n && W == n), "antibalanced iff S(f_n) = W(f_n) = n");
  if (anti) a.expect(top.r == 1, "lambda_n simple when antibalanced");
  if (roth) a.expect(anti, "bipartite all-positive graph is antibalanced");
  a.finish(in.matrix, n, ep.f);
  return rep;
}

/// Tree with a nowhere-zero eigenfunction: lambda_k simple and S = k.
inline TheoremReport check_tree_nowhere_zero(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("tree-nowhere-zero", in, ep);
  if (in.cycles.num_components != 1 || in.cycles.ell != 0)
    return detail::not_applicable(std::move(rep), "induced graph is not a tree");
  const auto zp = classify_zeros(in.graph, ep.f, in.tol.zero_tol);
  if (zp.z != 0) return detail::not_applicable(std::move(rep), "eigenfunction has a zero");
  const auto S = strong_domains(in.graph, ep.f, in.tol.zero_tol).count();
  rep.quantities["S"] = detail::as_q(S);
  detail::Asserter a(rep);
  a.expect(ep.cluster.r == 1, "lambda_k simple");
  a.expect(S == ep.cluster.k, "S = k");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// Acyclic matrices: exact strong counts in terms of the isolated zeros F,
/// the multiplicity r~ of lambda_k after deleting F, and r~ = e0 - 2z + c + |F|.
inline TheoremReport check_fiedler_acyclic(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("fiedler-acyclic", in, ep);
  if (in.cycles.ell != 0) return detail::not_applicable(std::move(rep), "induced graph has a cycle");
  const double zt = in.tol.zero_tol;
  const auto n = in.graph.num_vertices();
  const auto zp = classify_zeros(in.graph, ep.f, zt);
  const auto S = strong_domains(in.graph, ep.f, zt).count();
  const auto Sbar = dual_strong_domains(in.graph, ep.f, zt).count();
  const auto k = ep.cluster.k, r = ep.cluster.r, c = in.cycles.num_components;
  const auto F = zp.fiedler_set.size();

  std::vector<std::size_t> keep;
  std::vector<bool> in_F(n, false);
  for (Vertex v : zp.fiedler_set) in_F[v] = true;
  for (std::size_t v = 0; v < n; ++v)
    if (!in_F[v]) keep.push_back(v);
  std::size_t r_tilde = 0;
  if (!keep.empty()) {
    const auto mu = eigenvalues(in.matrix.principal(keep));
    r_tilde = detail::multiplicity_of(mu, ep.value, in.tol.cluster_tol * in.eigen.scale());
  }

  const long long c1 = detail::as_i(S) - (detail::as_i(k + r) - 1 - detail::as_i(F));
  const long long c2 = detail::as_i(Sbar) - (detail::as_i(n + 1) - detail::as_i(k) - detail::as_i(F));
  const long long formula = detail::as_i(zp.e0 + c + F) - 2 * detail::as_i(zp.z);
  rep.quantities["S"] = detail::as_q(S);
  rep.quantities["S_bar"] = detail::as_q(Sbar);
  rep.quantities["n"] = detail::as_q(n);
  rep.quantities["c"] = detail::as_q(c);
  rep.quantities["z"] = detail::as_q(zp.z);
  rep.quantities["e0"] = detail::as_q(zp.e0);
  rep.quantities["F"] = detail::as_q(F);
  rep.quantities["r_tilde"] = detail::as_q(r_tilde);
  rep.quantities["c1"] = static_cast<double>(c1);
  rep.quantities["c2"] = static_cast<double>(c2);

  detail::Asserter a(rep);
  a.expect(r >= r_tilde, "r >= r~");
  a.expect(c1 >= 0, "c1 >= 0");
  a.expect(c2 >= 0, "c2 >= 0");
  a.expect(c1 + c2 + (detail::as_i(r) - detail::as_i(r_tilde)) == detail::as_i(F), "c1 + c2 + (r - r~) = |F|");
  a.expect(detail::as_i(r_tilde) == formula, "r~ = e0 - 2z + c + |F|");
  a.expect(S <= k + r - 1 && detail::as_i(S) >= detail::as_i(k + r) - 1 - detail::as_i(F),
           "k + r - 1 - |F| <= S <= k + r - 1");
  a.expect(detail::as_i(Sbar) <= detail::as_i(n + 1 - k) &&
               detail::as_i(Sbar) >= detail::as_i(n + 1 - k) - detail::as_i(F),
           "n - k + 1 - |F| <= S_bar <= n - k + 1");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// S >= k + r - 1 - l' + l+ - |F| for any symmetric matrix.
inline TheoremReport check_lower_bound_cycles(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("lower-bound-cycles", in, ep);
  const double zt = in.tol.zero_tol;
  const auto zp = classify_zeros(in.graph, ep.f, zt);
  const auto S = strong_domains(in.graph, ep.f, zt).count();
  const auto lp = ell_plus(in.graph, ep.f, zt);
  const auto l_prime = cycle_space(induced_subgraph(in.graph, zp.support).graph).ell;
  const auto F = zp.fiedler_set.size();
  const long long bound = detail::as_i(ep.cluster.k + ep.cluster.r) - 1 - detail::as_i(l_prime) + detail::as_i(lp) -
                          detail::as_i(F);
  rep.quantities["S"] = detail::as_q(S);
  rep.quantities["ell"] = detail::as_q(in.cycles.ell);
  rep.quantities["ell_prime"] = detail::as_q(l_prime);
  rep.quantities["ell_plus"] = detail::as_q(lp);
  rep.quantities["F"] = detail::as_q(F);
  rep.quantities["bound"] = static_cast<double>(bound);
  detail::Asserter a(rep);
  a.expect(detail::as_i(S) >= bound, "S >= k + r - 1 - l' + l+ - |F|");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// S >= k + v_l - 1 - n - z_l + z_r with k the first index of the cluster,
/// together with S + S-bar >= v_l - z_l + z_r.
inline TheoremReport check_lower_bound_leaves(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("lower-bound-leaves", in, ep);
  const double zt = in.tol.zero_tol;
  const auto n = in.graph.num_vertices();
  const auto zp = classify_zeros(in.graph, ep.f, zt);
  const auto S = strong_domains(in.graph, ep.f, zt).count();
  const auto Sbar = dual_strong_domains(in.graph, ep.f, zt).count();
  const auto& L = zp.leaves;
  const long long bound = detail::as_i(ep.cluster.k + L.v_l + L.z_r) - 1 - detail::as_i(n) - detail::as_i(L.z_l);
  const long long dual_bound = detail::as_i(L.v_l + L.z_r) - detail::as_i(L.z_l);
  rep.quantities["S"] = detail::as_q(S);
  rep.quantities["S_bar"] = detail::as_q(Sbar);
  rep.quantities["n"] = detail::as_q(n);
  rep.quantities["v_l"] = detail::as_q(L.v_l);
  rep.quantities["z_l"] = detail::as_q(L.z_l);
  rep.quantities["z_r"] = detail::as_q(L.z_r);
  rep.quantities["bound"] = static_cast<double>(bound);
  detail::Asserter a(rep);
  a.expect(detail::as_i(S + Sbar) >= dual_bound, "S + S_bar >= v_l - z_l + z_r");
  a.expect(detail::as_i(S) >= bound, "S >= k + v_l - 1 - n - z_l + z_r");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// Nowhere-zero eigenfunction: c <= r <= c + l.
inline TheoremReport check_nowhere_zero_multiplicity(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("nowhere-zero-multiplicity", in, ep);
  const auto zp = classify_zeros(in.graph, ep.f, in.tol.zero_tol);
  if (zp.z != 0) return detail::not_applicable(std::move(rep), "eigenfunction has a zero");
  const auto c = in.cycles.num_components, l = in.cycles.ell, r = ep.cluster.r;
  rep.quantities["c"] = detail::as_q(c);
  rep.quantities["ell"] = detail::as_q(l);
  detail::Asserter a(rep);
  a.expect(c <= r, "c <= r");
  a.expect(r <= c + l, "r <= c + l");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// Nowhere-zero eigenfunction g: p <= |E(T)| <= |E(H)| <= p + l with
/// p = #{lambda_i > lambda_k}, plus the quadratic-form identity
/// <f, D(g)(M - lambda I)D(g) f> = sum (-M_xy) g_x g_y (f_x - f_y)^2 on random f.
inline TheoremReport check_inertia_edge_bounds(const Instance& in, const Eigenpair& ep, std::size_t samples = 10) {
  auto rep = detail::start("inertia-bounds", in, ep);
  const auto zp = classify_zeros(in.graph, ep.f, in.tol.zero_tol);
  if (zp.z != 0) return detail::not_applicable(std::move(rep), "eigenfunction has a zero");
  const auto n = in.graph.num_vertices();
  const auto& g = ep.f;
  const auto& M = in.matrix;
  const auto sgn = sign_pattern(g, in.tol.zero_tol);
  const auto H = edge_subgraph(in.graph, [&](const SignedEdge& e) { return sgn[e.u] * e.sign * sgn[e.v] > 0; });
  const auto hc = cycle_space(H);
  const std::size_t eH = hc.num_edges;
  const std::size_t eT = n - hc.num_components;
  const std::size_t p = n - (ep.cluster.k + ep.cluster.r - 1);

  std::mt19937_64 rng(0x5eed0000ULL + ep.index);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector f(n);
    for (double& x : f) x = unif(rng);
    Vector dgf(n);
    for (std::size_t i = 0; i < n; ++i) dgf[i] = g[i] * f[i];
    auto mdgf = M.apply(dgf);
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs += dgf[i] * (mdgf[i] - ep.value * dgf[i]);
    double rhs = 0.0;
    for (const auto& e : in.graph.edges()) {
      const double d = f[e.u] - f[e.v];
      rhs += -M(e.u, e.v) * g[e.u] * g[e.v] * d * d;
    }
    const double scale = (M.norm_inf() + std::abs(ep.value)) * norm_inf(g) * norm_inf(g) * dot(f, f);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-300));
  }
  rep.quantities["p"] = detail::as_q(p);
  rep.quantities["E_T"] = detail::as_q(eT);
  rep.quantities["E_H"] = detail::as_q(eH);
  rep.quantities["ell"] = detail::as_q(in.cycles.ell);
  rep.quantities["identity_rel_error"] = worst;
  detail::Asserter a(rep);
  a.expect(p <= eT, "p <= |E(T)|");
  a.expect(eT <= eH, "|E(T)| <= |E(H)|");
  a.expect(eH <= p + in.cycles.ell, "|E(H)| <= p + l");
  a.expect(worst <= 1e-8, "quadratic-form identity within 1e-8 relative");
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// Connected induced graph: among combinations sum a_i g_i of f restricted to
/// its weak domains, only multiples of f are eigenfunctions. Checked as
/// rank((M - lambda I) G) = m - 1 with (M - lambda I) G 1 ~ 0.
inline TheoremReport check_unique_continuation(const Instance& in, const Eigenpair& ep) {
  auto rep = detail::start("unique-continuation", in, ep);
  if (in.cycles.num_components != 1) return detail::not_applicable(std::move(rep), "induced graph is disconnected");
  const auto n = in.graph.num_vertices();
  const auto wd = weak_domains(in.graph, ep.f, in.tol.zero_tol);
  const auto m = wd.count();
  rep.quantities["m"] = detail::as_q(m);
  detail::Asserter a(rep);
  if (m >= 2) {
    const double mscale = std::max(1.0, in.matrix.norm_inf());
    std::vector<Vector> cols;  // (M - lambda I) g_i / |g_i|
    Vector combo(n, 0.0);      // (M - lambda I) sum g_i
    for (const auto& cls : wd.classes) {
      Vector gi(n, 0.0);
      for (Vertex v : cls) gi[v] = ep.f[v];
      const double ni = norm2(gi);
      auto bi = in.matrix.apply(gi);
      for (std::size_t x = 0; x < n; ++x) bi[x] -= ep.value * gi[x];
      for (std::size_t x = 0; x < n; ++x) combo[x] += bi[x];
      for (double& v : bi) v /= ni;
      cols.push_back(std::move(bi));
    }
    const auto sv = singular_values(cols);
    const double cut = 1e-7 * mscale;
    const auto rank = static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cut; }));
    rep.quantities["intersection_dim"] = detail::as_q(m - rank);
    rep.quantities["smallest_nonnull_sv"] = rank > 0 ? sv[rank - 1] : 0.0;
    a.expect(norm2(combo) <= cut, "f itself lies in the eigenspace");
    a.expect(m - rank == 1, "span{g_i} meets the eigenspace in one dimension");
  } else {
    rep.quantities["intersection_dim"] = 1.0;
  }
  a.finish(in.matrix, ep.index, ep.f);
  return rep;
}

/// Every applicable check for one eigenpair, in a fixed order.
inline std::vector<TheoremReport> check_all(const Instance& in, const Eigenpair& ep) {
  std::vector<TheoremReport> out;
  out.push_back(check_upper_bounds(in, ep));
  out.push_back(check_tree_nowhere_zero(in, ep));
  out.push_back(check_fiedler_acyclic(in, ep));
  out.push_back(check_lower_bound_cycles(in, ep));
  out.push_back(check_lower_bound_leaves(in, ep));
  out.push_back(check_nowhere_zero_multiplicity(in, ep));
  out.push_back(check_inertia_edge_bounds(in, ep));
  out.push_back(check_unique_continuation(in, ep));
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

struct NowhereZeroConstruction {
  SymMatrix matrix;
  EigenSystem eigen;
  SwitchingFunction tau;
  double epsilon = 1.0;
  std::size_t halvings = 0;
};

/// Compatible matrix whose first eigenvalue is simple with a nowhere-zero
/// eigenfunction: D(tau)(M+ + eps M-)D(tau) where tau makes a spanning tree
/// positive, M+ has -1 on positive edges and M- has +1 on negative edges.
inline NowhereZeroConstruction construct_nowhere_zero_first(const SignedGraph& g, const Tolerances& tol = {},
                                                            std::size_t max_halvings = 60) {
  if (g.num_vertices() == 0) throw PreconditionError("graph must have at least one vertex");
  if (components(g).count() != 1) throw PreconditionError("precondition: graph must be connected");
  auto sw = spanning_tree_positive_switch(g);
  const auto gs = switched(g, sw.tau);
  double eps = 1.0;
  Vector last;
  for (std::size_t h = 0; h <= max_halvings; ++h, eps *= 0.5) {
    SymMatrix m(g.num_vertices());
    for (const auto& e : gs.edges()) m.set(e.u, e.v, e.sign > 0 ? -1.0 : eps);
    m = m.conjugated(sw.tau.values());
    auto es = eigendecompose(m, tol);
    last = es.values;
    const bool simple = es.clusters.front().r == 1;
    const auto mask = zero_mask(es.vectors.front(), tol.zero_tol);
    const bool nowhere_zero = std::none_of(mask.begin(), mask.end(), [](bool b) { return b; });
    if (simple && nowhere_zero) return {std::move(m), std::move(es), sw.tau, eps, h};
  }
  std::string values;
  for (double v : last) values += " " + std::to_string(v);
  throw ConvergenceError("no nowhere-zero simple first eigenfunction after " + std::to_string(max_halvings) +
                         " halvings; last spectrum:" + values);
}

struct ZeroAtConstruction {
  SymMatrix matrix;
  Vector f;  // unit 2-norm, exactly zero at the chosen vertex
  double lambda = 0.0;
  double epsilon = 1.0;
  std::size_t halvings = 0;
  std::size_t k_plus = 0;   // positive edges at the vertex after switching the remainder positive
  std::size_t k_minus = 0;
  double min_ratio = 1.0;   // min |f(x)| / max |f| over x != vertex
  bool ill_conditioned = false;  // min_ratio < 1e-6
};

/// Compatible matrix whose first eigenfunction vanishes exactly at `z` and
/// nowhere else. Requires g non-balanced and g - z balanced and connected.
inline ZeroAtConstruction construct_zero_at_vertex(const SignedGraph& g, Vertex z, const Tolerances& tol = {},
                                                   std::size_t max_halvings = 60) {
  const auto n = g.num_vertices();
  if (z < 0 || static_cast<std::size_t>(z) >= n) throw PreconditionError("precondition: vertex out of range");
  if (n < 2) throw PreconditionError("precondition: graph needs at least two vertices");
  if (is_balanced(g).balanced) throw PreconditionError("precondition: graph must be non-balanced");
  std::vector<Vertex> rest;
  for (std::size_t v = 0; v < n; ++v)
    if (static_cast<Vertex>(v) != z) rest.push_back(static_cast<Vertex>(v));
  const auto sub = induced_subgraph(g, rest);
  if (components(sub.graph).count() != 1)
    throw PreconditionError("precondition: graph minus the vertex must be connected");
  const auto bal = is_balanced(sub.graph);
  if (!bal.balanced) throw PreconditionError("precondition: graph minus the vertex must be balanced");

  std::vector<int> tau(n, 1);
  for (std::size_t i = 0; i < rest.size(); ++i) tau[rest[i]] = (*bal.certificate)[i];
  const SwitchingFunction T(tau);
  const auto gs = switched(g, T);

  // Remainder: -1 per edge; Perron vector is positive.
  SymMatrix mp(rest.size());
  for (const auto& e : sub.graph.edges()) mp.set(e.u, e.v, -1.0);
  const auto es = eigendecompose(mp, tol);
  const double lambda = es.values.front();
  Vector fr = es.vectors.front();
  if (fr[0] < 0)
    for (double& x : fr) x = -x;

  ZeroAtConstruction out;
  out.lambda = lambda;
  std::vector<std::pair<std::size_t, int>> inc;  // (index in rest, switched sign)
  for (const auto& e : gs.edges()) {
    if (e.u != z && e.v != z) continue;
    const Vertex other = e.u == z ? e.v : e.u;
    const auto pos = static_cast<std::size_t>(std::lower_bound(rest.begin(), rest.end(), other) - rest.begin());
    inc.push_back({pos, e.sign});
    (e.sign > 0 ? out.k_plus : out.k_minus) += 1;
  }

  Vector f(n, 0.0);
  for (std::size_t i = 0; i < rest.size(); ++i) f[rest[i]] = fr[i];
  const double fmax = norm_inf(fr);
  out.min_ratio = *std::min_element(fr.begin(), fr.end()) / fmax;
  out.ill_conditioned = out.min_ratio < 1e-6;

  const double scale = std::max(1.0, std::abs(lambda));
  double eps = 1.0;
  for (std::size_t h = 0; h <= max_halvings; ++h, eps *= 0.5) {
    SymMatrix m(n);
    for (const auto& e : sub.graph.edges()) m.set(rest[e.u], rest[e.v], -1.0);
    m.set(z, z, lambda + 1.0);
    for (const auto& [pos, s] : inc) {
      const double w = s > 0 ? -eps * static_cast<double>(out.k_minus) / fr[pos]
                             : eps * static_cast<double>(out.k_plus) / fr[pos];
      m.set(rest[pos], z, w);
    }
    const double lowest = eigenvalues(m).front();
    if (lowest >= lambda - tol.cluster_tol * scale) {
      out.matrix = m.conjugated(T.values());
      out.f = T.apply(f);
      const double nf = norm2(out.f);
      for (double& x : out.f) x /= nf;
      out.f[z] = 0.0;
      out.epsilon = eps;
      out.halvings = h;
      return out;
    }
  }
  throw ConvergenceError("first eigenvalue not recovered after " + std::to_string(max_halvings) + " halvings");
}

} // namespace sgnodal
