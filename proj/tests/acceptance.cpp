// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>

#include "support.hpp"

using namespace sgnodal;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_residual(const SymMatrix& m, const Vector& f, double lambda) {
  const auto mf = m.apply(f);
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) r = std::max(r, std::abs(mf[i] - lambda * f[i]));
  return r / std::max(1.0, m.norm_inf());
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Outcome ac1_six_vertex_example() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto in = make_instance(oracle::fig1_matrix());
  const std::vector<double> expected{-1.84, -1, -1, -0.51, 1.51, 2.84};
  for (std::size_t i = 0; i < 6; ++i)
    o.require(std::abs(in.eigen.values[i] - expected[i]) <= 0.01, "eigenvalue " + std::to_string(i + 1));

  const std::vector<Partition> strong = {
      {{0, 1, 2, 3, 4, 5}}, {{1, 3}}, {{4, 5}}, {{0, 1, 3}, {2, 4, 5}}, {{0}, {1, 2, 3}, {4}, {5}},
      {{0}, {1}, {2}, {3}, {4}, {5}}};
  const std::vector<Partition> weak = {
      {{0, 1, 2, 3, 4, 5}}, {{0, 1, 2, 3, 4, 5}}, {{0, 1, 2, 3, 4, 5}}, {{0, 1, 3}, {2, 4, 5}},
      {{0}, {1, 2, 3}, {4}, {5}}, {{0}, {1}, {2}, {3}, {4}, {5}}};
  const auto eps = eigenpairs(in, Basis::MinimalSupport);
  o.require(eps.size() == 6, "expected six eigenpairs");
  for (std::size_t i = 0; i < eps.size() && i < 6; ++i) {
    const auto zt = in.tol.zero_tol;
    o.require(canonical(strong_domains(in.graph, eps[i].f, zt).domains) == strong[i],
              "strong domains of f" + std::to_string(i + 1));
    o.require(canonical(weak_domains(in.graph, eps[i].f, zt).domains) == weak[i],
              "weak domains of f" + std::to_string(i + 1));
  }
  const auto top = check_antibalance_top(in);
  o.require(top.quantities.at("S") == 6 && top.quantities.at("W") == 6, "top eigenfunction domain counts");
  o.require(is_antibalanced(in.graph), "graph should be antibalanced");
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime " + num(dt) + " s");
  if (o.ok) o.detail = "spectrum, domain sets and antibalance in " + num(dt) + " s";
  return o;
}

Outcome ac2_leafy_complete_graphs() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Case {
    const char* file;
    std::size_t index;
    double lambda;
    double S, ell, ell_plus, v_l, cycle_bound, leaf_bound;
  };
  const Case cases[] = {{"k7_leaves.mat", 14, 3.05, 9, 15, 10, 7, 9, 6},
                        {"k8_staircase.mat", 41, 2.69, 38, 21, 6, 36, 26, 32}};
  for (const auto& c : cases) {
    const auto in = make_instance(oracle::load_matrix(c.file));
    const auto ep = eigenpairs(in).at(c.index - 1);
    const auto cyc = check_lower_bound_cycles(in, ep);
    const auto leaf = check_lower_bound_leaves(in, ep);
    const std::string tag = std::string(c.file) + ": ";
    o.require(std::abs(ep.value - c.lambda) <= 0.02, tag + "eigenvalue " + num(ep.value));
    o.require(cyc.quantities.at("S") == c.S, tag + "S = " + num(cyc.quantities.at("S")));
    o.require(cyc.quantities.at("ell") == c.ell, tag + "ell");
    o.require(cyc.quantities.at("ell_plus") == c.ell_plus, tag + "ell_plus");
    o.require(cyc.quantities.at("bound") == c.cycle_bound, tag + "cycle bound");
    o.require(leaf.quantities.at("v_l") == c.v_l, tag + "v_l");
    o.require(leaf.quantities.at("bound") == c.leaf_bound, tag + "leaf bound");
    o.require(cyc.verdict == Verdict::Pass && leaf.verdict == Verdict::Pass, tag + "bound check failed");
  }
  const double dt = seconds_since(t0);
  o.require(dt < 5.0, "runtime " + num(dt) + " s");
  if (o.ok) o.detail = "both examples match in " + num(dt) + " s";
  return o;
}

Outcome ac3_oracle_equivalence() {
  Outcome o;
  auto spec = default_spec("oracle-equivalence");
  spec.n = 8;
  const auto r = run_suite("oracle-equivalence", spec, 200);
  o.require(r.trials == 200, "trial count");
  o.require(r.ok(), std::to_string(r.failures.size()) + " disagreements, first at trial " +
                        (r.failures.empty() ? std::string("-") : std::to_string(r.failures.front().trial)));
  if (o.ok) o.detail = "200 graphs, " + std::to_string(r.checks) + " function checks, 0 disagreements";
  return o;
}

Outcome ac4_property_suites() {
  Outcome o;
  const char* suites[] = {"upper-bounds",       "duality-forest",     "switching-invariance",
                          "fiedler-acyclic",    "lower-bound-cycles", "lower-bound-leaves",
                          "antibalance-top",    "nowhere-zero-multiplicity", "inertia-bounds",
                          "unique-continuation"};
  const auto t0 = Clock::now();
  std::size_t checks = 0;
  for (const char* s : suites) {
    auto spec = default_spec(s);
    o.require(spec.n <= 12, std::string(s) + ": n above 12");
    const auto r = run_suite(s, spec, 500);
    checks += r.checks;
    o.require(r.ok(), std::string(s) + ": " + std::to_string(r.failures.size()) + " failures, seed " +
                          (r.failures.empty() ? std::string("-") : std::to_string(r.failures.front().seed)));
    std::printf("  %-26s trials=%zu checks=%zu n/a=%zu sensitive=%zu failures=%zu %.2fs\n", s, r.trials, r.checks,
                r.not_applicable, r.sensitive, r.failures.size(), r.wall_seconds);
  }
  const double dt = seconds_since(t0);
  o.require(dt < 120.0, "runtime " + num(dt) + " s");
  if (o.ok) o.detail = "10 suites x 500 trials, " + std::to_string(checks) + " checks in " + num(dt) + " s";
  return o;
}

Outcome ac5_constructions() {
  Outcome o;
  GeneratorSpec spec;
  spec.n = 10;
  spec.n_min = 1;
  spec.force_connected = true;
  spec.seed = 2024;
  for (std::uint64_t t = 0; t < 100 && o.ok; ++t) {
    const auto g = generate(spec, t).graph;
    try {
      const auto c = construct_nowhere_zero_first(g);
      // verify independently of the construction's own eigensolve
      const auto ref = oracle::reference_eigenvalues(c.matrix);
      const auto& f = c.eigen.vectors.front();
      const auto mask = zero_mask(f, 1e-8);
      o.require(is_compatible(c.matrix, g), "nowhere-zero trial " + std::to_string(t) + ": incompatible");
      o.require(ref.size() < 2 || ref[1] - ref[0] > 1e-7, "nowhere-zero trial " + std::to_string(t) + ": not simple");
      o.require(std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }),
                "nowhere-zero trial " + std::to_string(t) + ": zero entry");
      o.require(relative_residual(c.matrix, f, ref[0]) <= 1e-9, "nowhere-zero trial " + std::to_string(t) + ": residual");
    } catch (const std::exception& e) {
      o.require(false, "nowhere-zero trial " + std::to_string(t) + ": " + e.what());
    }
  }
  Rng rng(trial_seed(2024, 1));
  std::size_t ill = 0;
  for (int t = 0; t < 50 && o.ok; ++t) {
    const auto n = 3 + rng() % 8;
    const auto [g, z] = detail::zero_at_instance(rng, n, 0.4);
    try {
      const auto c = construct_zero_at_vertex(g, z);
      ill += c.ill_conditioned;
      const auto ref = oracle::reference_eigenvalues(c.matrix);
      o.require(is_compatible(c.matrix, g), "zero-at trial " + std::to_string(t) + ": incompatible");
      o.require(c.f[z] == 0.0, "zero-at trial " + std::to_string(t) + ": value at z is not exactly zero");
      o.require(relative_residual(c.matrix, c.f, c.lambda) <= 1e-9, "zero-at trial " + std::to_string(t) + ": residual");
      o.require(std::abs(ref[0] - c.lambda) <= 1e-7 * std::max(1.0, std::abs(c.lambda)),
                "zero-at trial " + std::to_string(t) + ": not the first eigenvalue");
    } catch (const std::exception& e) {
      o.require(false, "zero-at trial " + std::to_string(t) + ": " + e.what());
    }
  }
  if (o.ok) o.detail = "100 nowhere-zero and 50 zero-at constructions verified (" + std::to_string(ill) + " ill-conditioned)";
  return o;
}

Outcome ac6_eigensolver() {
  Outcome o;
  std::mt19937_64 rng(606);
  double worst_res = 0.0, worst_orth = 0.0;
  for (std::size_t n = 1; n <= 50; ++n) {
    for (int rep = 0; rep < 2; ++rep) {
      const auto m = oracle::random_symmetric(rng, n, rep ? 0.3 : 1.0);
      Tolerances loose;
      loose.residual_tol = loose.ortho_tol = 1.0;
      const auto es = eigendecompose(m, loose);
      for (std::size_t i = 0; i < n; ++i) {
        worst_res = std::max(worst_res, relative_residual(m, es.vectors[i], es.values[i]));
        for (std::size_t j = i; j < n; ++j) {
          double d = 0.0;
          for (std::size_t k = 0; k < n; ++k) d += es.vectors[i][k] * es.vectors[j][k];
          worst_orth = std::max(worst_orth, std::abs(d - (i == j ? 1.0 : 0.0)));
        }
      }
    }
  }
  o.require(worst_res <= 1e-9, "residual " + num(worst_res));
  o.require(worst_orth <= 1e-9, "orthonormality " + num(worst_orth));
  for (int t = 0; t < 100; ++t) {
    const auto n = 2 + rng() % 11;
    const auto m = oracle::random_symmetric(rng, n);
    const auto lam = eigenvalues(m);
    const std::size_t drop = rng() % n;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
      if (i != drop) keep.push_back(i);
    const auto mu = eigenvalues(m.principal(keep));
    const double slack = 1e-10 * std::max(1.0, m.norm_inf());
    for (std::size_t i = 0; i < mu.size(); ++i)
      o.require(lam[i] <= mu[i] + slack && mu[i] <= lam[i + 1] + slack, "interlacing trial " + std::to_string(t));
  }
  if (o.ok) o.detail = "max residual " + num(worst_res) + ", max orthonormality error " + num(worst_orth) + ", 100 interlacing instances";
  return o;
}

} // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1 six-vertex example", ac1_six_vertex_example},
      {"AC2 leafy complete graphs", ac2_leafy_complete_graphs},
      {"AC3 walk-oracle equivalence", ac3_oracle_equivalence},
      {"AC4 property suites", ac4_property_suites},
      {"AC5 constructions", ac5_constructions},
      {"AC6 eigensolver quality", ac6_eigensolver},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
