#pragma once

#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgnodal/harness.hpp"
#include "sgnodal/nodal.hpp"
#include "sgnodal/signed_graph.hpp"
#include "sgnodal/spectral.hpp"
#include "sgnodal/theorems.hpp"

namespace sgnodal {

using json = nlohmann::json;

struct EigenpairReport {
  std::size_t index = 1;
  double lambda = 0.0;
  std::size_t k = 1;
  std::size_t r = 1;
  std::string basis = "raw";
  Vector f;
  std::vector<Vertex> zeros;
  std::vector<Vertex> fiedler_set;
  std::size_t e0 = 0;
  LeafStats leaves;
  bool sensitive = false;
  Partition strong_domains;
  Partition weak_classes;
  Partition weak_domains;
  std::vector<Vertex> unassigned;
  std::size_t S = 0;
  std::size_t W = 0;
  std::size_t S_bar = 0;
  std::size_t ell_plus = 0;
  std::vector<TheoremReport> checks;

  friend bool operator==(const EigenpairReport&, const EigenpairReport&) = default;
};

struct AnalysisReport {
  std::string digest;
  std::size_t n = 0;
  Tolerances tolerances;
  Vector eigenvalues;
  std::vector<Cluster> clusters;
  std::vector<SignedEdge> edges;
  std::size_t components = 0;
  std::size_t ell = 0;
  bool balanced = false;
  bool antibalanced = false;
  double max_residual = 0.0;
  double ortho_error = 0.0;
  std::vector<EigenpairReport> eigenpairs;
  std::vector<TheoremReport> global_checks;
  std::vector<std::string> warnings;

  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& c : global_checks) f += c.failed();
    for (const auto& ep : eigenpairs)
      for (const auto& c : ep.checks) f += c.failed();
    return f;
  }

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Full pipeline on one matrix. Simple eigenvalues are reported once; every
/// degenerate cluster is reported in the raw solver basis and again in the
/// minimal-support basis. `only_index` restricts the per-eigenpair section.
inline AnalysisReport analyze(const SymMatrix& m, const Tolerances& tol = {},
                              std::optional<std::size_t> only_index = std::nullopt) {
  if (only_index && (*only_index < 1 || *only_index > m.size()))
    throw std::invalid_argument("eigen index must lie in [1, " + std::to_string(m.size()) + "]");
  const auto in = make_instance(m, tol);
  AnalysisReport rep;
  rep.digest = in.digest;
  rep.n = m.size();
  rep.tolerances = tol;
  rep.eigenvalues = in.eigen.values;
  rep.clusters = in.eigen.clusters;
  rep.edges = in.graph.edges();
  rep.components = in.cycles.num_components;
  rep.ell = in.cycles.ell;
  rep.balanced = is_balanced(in.graph).balanced;
  rep.antibalanced = is_antibalanced(in.graph);
  rep.max_residual = in.eigen.max_residual;
  rep.ortho_error = in.eigen.ortho_error;
  rep.global_checks.push_back(check_antibalance_top(in));

  auto pairs = eigenpairs(in, Basis::Raw);
  for (auto& ep : eigenpairs(in, Basis::MinimalSupport))
    if (ep.basis == Basis::MinimalSupport) pairs.push_back(std::move(ep));
  std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.index < b.index; });

  for (const auto& ep : pairs) {
    if (only_index && ep.index != *only_index) continue;
    EigenpairReport e;
    e.index = ep.index;
    e.lambda = ep.value;
    e.k = ep.cluster.k;
    e.r = ep.cluster.r;
    e.basis = to_string(ep.basis);
    e.f = ep.f;
    const auto zp = classify_zeros(in.graph, ep.f, tol.zero_tol);
    for (std::size_t v = 0; v < rep.n; ++v)
      if (zp.zero_mask[v]) e.zeros.push_back(static_cast<Vertex>(v));
    e.fiedler_set = zp.fiedler_set;
    e.e0 = zp.e0;
    e.leaves = zp.leaves;
    e.sensitive = zp.sensitive;
    const auto sd = strong_domains(in.graph, ep.f, tol.zero_tol);
    const auto wd = weak_domains(in.graph, ep.f, tol.zero_tol);
    e.strong_domains = sd.domains;
    e.weak_classes = wd.classes;
    e.weak_domains = wd.domains;
    e.unassigned = wd.unassigned;
    e.S = sd.count();
    e.W = wd.count();
    e.S_bar = dual_strong_domains(in.graph, ep.f, tol.zero_tol).count();
    e.ell_plus = ell_plus(in.graph, ep.f, tol.zero_tol);
    e.checks = check_all(in, ep);
    if (e.sensitive)
      rep.warnings.push_back("eigenpair " + std::to_string(e.index) + " (" + e.basis +
                             "): zero pattern changes between zero_tol/10 and zero_tol*10");
    rep.eigenpairs.push_back(std::move(e));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(json& j, const Tolerances& t) {
  j = json{{"zero_tol", t.zero_tol},         {"cluster_tol", t.cluster_tol}, {"residual_tol", t.residual_tol},
           {"ortho_tol", t.ortho_tol},       {"rref_pivot_tol", t.rref_pivot_tol}, {"entry_tol", t.entry_tol}};
}

inline void from_json(const json& j, Tolerances& t) {
  j.at("zero_tol").get_to(t.zero_tol);
  j.at("cluster_tol").get_to(t.cluster_tol);
  j.at("residual_tol").get_to(t.residual_tol);
  j.at("ortho_tol").get_to(t.ortho_tol);
  j.at("rref_pivot_tol").get_to(t.rref_pivot_tol);
  j.at("entry_tol").get_to(t.entry_tol);
}

inline void to_json(json& j, const SymMatrix& m) {
  std::vector<std::vector<double>> rows(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
  j = rows;
}

inline void from_json(const json& j, SymMatrix& m) {
  m = SymMatrix::from_rows(j.get<std::vector<std::vector<double>>>(), 0.0);
}

inline void to_json(json& j, const Verdict& v) { j = to_string(v); }

inline void from_json(const json& j, Verdict& v) {
  const auto s = j.get<std::string>();
  if (s == "pass") v = Verdict::Pass;
  else if (s == "fail") v = Verdict::Fail;
  else if (s == "not-applicable") v = Verdict::NotApplicable;
  else throw std::invalid_argument("unknown verdict '" + s + "'");
}

inline void to_json(json& j, const TheoremReport& r) {
  j = json{{"theorem", r.theorem},
           {"digest", r.digest},
           {"verdict", r.verdict},
           {"hypothesis_satisfied", r.hypothesis_satisfied},
           {"quantities", r.quantities},
           {"tolerances", r.tolerances},
           {"sensitive", r.sensitive},
           {"basis", r.basis},
           {"detail", r.detail}};
  if (r.counterexample)
    j["counterexample"] = json{{"matrix", r.counterexample->matrix},
                               {"index", r.counterexample->index},
                               {"f", r.counterexample->f}};
}

inline void from_json(const json& j, TheoremReport& r) {
  j.at("theorem").get_to(r.theorem);
  j.at("digest").get_to(r.digest);
  j.at("verdict").get_to(r.verdict);
  j.at("hypothesis_satisfied").get_to(r.hypothesis_satisfied);
  j.at("quantities").get_to(r.quantities);
  j.at("tolerances").get_to(r.tolerances);
  j.at("sensitive").get_to(r.sensitive);
  j.at("basis").get_to(r.basis);
  j.at("detail").get_to(r.detail);
  r.counterexample.reset();
  if (j.contains("counterexample")) {
    const auto& c = j.at("counterexample");
    r.counterexample = Counterexample{c.at("matrix").get<SymMatrix>(), c.at("index").get<std::size_t>(),
                                      c.at("f").get<Vector>()};
  }
}

inline void to_json(json& j, const SignedEdge& e) { j = json::array({e.u, e.v, e.sign}); }

inline void from_json(const json& j, SignedEdge& e) {
  e.u = j.at(0).get<Vertex>();
  e.v = j.at(1).get<Vertex>();
  e.sign = j.at(2).get<int>();
}

inline void to_json(json& j, const Cluster& c) { j = json{{"k", c.k}, {"r", c.r}}; }

inline void from_json(const json& j, Cluster& c) {
  j.at("k").get_to(c.k);
  j.at("r").get_to(c.r);
}

inline void to_json(json& j, const LeafStats& l) { j = json{{"v_l", l.v_l}, {"z_l", l.z_l}, {"z_r", l.z_r}}; }

inline void from_json(const json& j, LeafStats& l) {
  j.at("v_l").get_to(l.v_l);
  j.at("z_l").get_to(l.z_l);
  j.at("z_r").get_to(l.z_r);
}

inline void to_json(json& j, const EigenpairReport& e) {
  j = json{{"index", e.index},
           {"lambda", e.lambda},
           {"k", e.k},
           {"r", e.r},
           {"basis", e.basis},
           {"f", e.f},
           {"zeros", e.zeros},
           {"fiedler_set", e.fiedler_set},
           {"e0", e.e0},
           {"leaves", e.leaves},
           {"sensitive", e.sensitive},
           {"strong_domains", e.strong_domains},
           {"weak_classes", e.weak_classes},
           {"weak_domains", e.weak_domains},
           {"unassigned_zeros", e.unassigned},
           {"S", e.S},
           {"W", e.W},
           {"S_bar", e.S_bar},
           {"ell_plus", e.ell_plus},
           {"checks", e.checks}};
}

inline void from_json(const json& j, EigenpairReport& e) {
  j.at("index").get_to(e.index);
  j.at("lambda").get_to(e.lambda);
  j.at("k").get_to(e.k);
  j.at("r").get_to(e.r);
  j.at("basis").get_to(e.basis);
  j.at("f").get_to(e.f);
  j.at("zeros").get_to(e.zeros);
  j.at("fiedler_set").get_to(e.fiedler_set);
  j.at("e0").get_to(e.e0);
  j.at("leaves").get_to(e.leaves);
  j.at("sensitive").get_to(e.sensitive);
  j.at("strong_domains").get_to(e.strong_domains);
  j.at("weak_classes").get_to(e.weak_classes);
  j.at("weak_domains").get_to(e.weak_domains);
  j.at("unassigned_zeros").get_to(e.unassigned);
  j.at("S").get_to(e.S);
  j.at("W").get_to(e.W);
  j.at("S_bar").get_to(e.S_bar);
  j.at("ell_plus").get_to(e.ell_plus);
  j.at("checks").get_to(e.checks);
}

inline void to_json(json& j, const AnalysisReport& r) {
  j = json{{"digest", r.digest},
           {"n", r.n},
           {"tolerances", r.tolerances},
           {"eigenvalues", r.eigenvalues},
           {"clusters", r.clusters},
           {"edges", r.edges},
           {"components", r.components},
           {"ell", r.ell},
           {"balanced", r.balanced},
           {"antibalanced", r.antibalanced},
           {"max_residual", r.max_residual},
           {"ortho_error", r.ortho_error},
           {"eigenpairs", r.eigenpairs},
           {"global_checks", r.global_checks},
           {"warnings", r.warnings}};
}

inline void from_json(const json& j, AnalysisReport& r) {
  j.at("digest").get_to(r.digest);
  j.at("n").get_to(r.n);
  j.at("tolerances").get_to(r.tolerances);
  j.at("eigenvalues").get_to(r.eigenvalues);
  j.at("clusters").get_to(r.clusters);
  j.at("edges").get_to(r.edges);
  j.at("components").get_to(r.components);
  j.at("ell").get_to(r.ell);
  j.at("balanced").get_to(r.balanced);
  j.at("antibalanced").get_to(r.antibalanced);
  j.at("max_residual").get_to(r.max_residual);
  j.at("ortho_error").get_to(r.ortho_error);
  j.at("eigenpairs").get_to(r.eigenpairs);
  j.at("global_checks").get_to(r.global_checks);
  j.at("warnings").get_to(r.warnings);
}

inline void to_json(json& j, const GeneratorSpec& s) {
  j = json{{"family", s.family},
           {"n", s.n},
           {"n_min", s.n_min},
           {"p", s.p},
           {"weight_range", {s.weight_range.first, s.weight_range.second}},
           {"diagonal_range", {s.diagonal_range.first, s.diagonal_range.second}},
           {"seed", s.seed},
           {"force_connected", s.force_connected},
           {"mixed_unit", s.mixed_unit}};
}

inline void to_json(json& j, const SuiteResult& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"trial", f.trial}, {"seed", f.seed}, {"report", f.report}});
  j = json{{"suite", r.suite},
           {"spec", r.spec},
           {"trials", r.trials},
           {"checks", r.checks},
           {"not_applicable", r.not_applicable},
           {"sensitive", r.sensitive},
           {"failures", failures},
           {"wall_seconds", r.wall_seconds},
           {"ok", r.ok()}};
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline std::string fmt(double v, const char* f = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string set_str(const std::vector<Vertex>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

inline std::string partition_str(const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + set_str(p[i]);
  return out.empty() ? "-" : out;
}

inline void write_check(std::ostream& os, const TheoremReport& c) {
  os << "    [" << to_string(c.verdict) << "] " << c.theorem;
  if (c.verdict != Verdict::NotApplicable) {
    os << ":";
    for (const auto& [k, v] : c.quantities) os << " " << k << "=" << fmt(v, "%.10g");
  }
  if (!c.detail.empty()) os << " (" << c.detail << ")";
  os << '\n';
}

} // namespace detail

inline void write_text(std::ostream& os, const AnalysisReport& r) {
  const auto& t = r.tolerances;
  os << "matrix " << r.digest << "  n=" << r.n << '\n';
  os << "tolerances zero_tol=" << detail::fmt(t.zero_tol) << " cluster_tol=" << detail::fmt(t.cluster_tol)
     << " residual_tol=" << detail::fmt(t.residual_tol) << " ortho_tol=" << detail::fmt(t.ortho_tol)
     << " rref_pivot_tol=" << detail::fmt(t.rref_pivot_tol) << " entry_tol=" << detail::fmt(t.entry_tol) << '\n';
  os << "graph edges=" << r.edges.size() << " components=" << r.components << " ell=" << r.ell
     << " balanced=" << (r.balanced ? "yes" : "no") << " antibalanced=" << (r.antibalanced ? "yes" : "no") << '\n';
  os << "signs";
  for (const auto& e : r.edges) os << " " << e.u << "-" << e.v << (e.sign > 0 ? "+" : "-");
  os << '\n';
  os << "eigenvalues";
  for (double v : r.eigenvalues) os << " " << detail::fmt(v, "%.10g");
  os << '\n';
  os << "clusters";
  for (const auto& c : r.clusters) os << " (k=" << c.k << ",r=" << c.r << ")";
  os << '\n';
  os << "solver max_residual=" << detail::fmt(r.max_residual) << " ortho_error=" << detail::fmt(r.ortho_error) << '\n';
  for (const auto& c : r.global_checks) detail::write_check(os, c);
  for (const auto& e : r.eigenpairs) {
    os << "\neigenpair " << e.index << " lambda=" << detail::fmt(e.lambda, "%.10g") << " k=" << e.k << " r=" << e.r
       << " basis=" << e.basis << '\n';
    os << "  f";
    for (double v : e.f) os << " " << detail::fmt(v, "%.6g");
    os << '\n';
    os << "  zeros=" << detail::set_str(e.zeros) << " fiedler_set=" << detail::set_str(e.fiedler_set)
       << " e0=" << e.e0 << " v_l=" << e.leaves.v_l << " z_l=" << e.leaves.z_l << " z_r=" << e.leaves.z_r
       << (e.sensitive ? " SENSITIVE" : "") << '\n';
    os << "  S=" << e.S << " W=" << e.W << " S_bar=" << e.S_bar << " ell_plus=" << e.ell_plus << '\n';
    os << "  strong " << detail::partition_str(e.strong_domains) << '\n';
    os << "  weak classes " << detail::partition_str(e.weak_classes) << '\n';
    os << "  weak domains " << detail::partition_str(e.weak_domains) << '\n';
    if (!e.unassigned.empty()) os << "  unassigned zeros " << detail::set_str(e.unassigned) << '\n';
    for (const auto& c : e.checks) detail::write_check(os, c);
  }
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  os << "failures " << r.failures() << '\n';
}

inline void write_text(std::ostream& os, const SuiteResult& r) {
  os << "suite " << r.suite << " family=" << r.spec.family << " n=" << r.spec.n;
  if (r.spec.n_min) os << " n_min=" << r.spec.n_min;
  os << " p=" << r.spec.p << " seed=" << r.spec.seed << '\n';
  os << "trials " << r.trials << " checks " << r.checks << " not_applicable " << r.not_applicable << " sensitive "
     << r.sensitive << " failures " << r.failures.size() << " wall " << detail::fmt(r.wall_seconds, "%.3f") << "s\n";
  for (const auto& f : r.failures) {
    os << "  trial " << f.trial << " seed " << f.seed << '\n';
    detail::write_check(os, f.report);
  }
  os << (r.ok() ? "OK" : "FAILED") << '\n';
}

} // namespace sgnodal
