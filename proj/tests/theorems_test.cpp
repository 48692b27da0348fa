#include <gtest/gtest.h>

#include "support.hpp"

using namespace sgnodal;

namespace {

const TheoremReport& find(const std::vector<TheoremReport>& reps, const std::string& name) {
  for (const auto& r : reps)
    if (r.theorem == name) return r;
  throw std::runtime_error("no report " + name);
}

Eigenpair pair_at(const Instance& in, std::size_t index, Basis b = Basis::Raw) {
  return eigenpairs(in, b).at(index - 1);
}

double residual(const SymMatrix& m, const Vector& f, double lambda) {
  const auto mf = m.apply(f);
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) r = std::max(r, std::abs(mf[i] - lambda * f[i]));
  return r;
}

} // namespace

TEST(SixVertexExample, EveryCheckPasses) {
  const auto in = make_instance(oracle::fig1_matrix());
  for (auto basis : {Basis::Raw, Basis::MinimalSupport})
    for (const auto& ep : eigenpairs(in, basis))
      for (const auto& r : check_all(in, ep)) EXPECT_FALSE(r.failed()) << r.theorem << " " << r.detail;
  const auto top = check_antibalance_top(in);
  EXPECT_EQ(top.verdict, Verdict::Pass);
  EXPECT_EQ(top.quantities.at("S"), 6.0);
  EXPECT_EQ(top.quantities.at("W"), 6.0);
  EXPECT_EQ(top.quantities.at("antibalanced"), 1.0);
}

TEST(SixVertexExample, FifthEigenfunctionQuantities) {
  // l = 3 for the eight-edge graph; l' = 3 and l+ = 0 for the nowhere-zero f5.
  const auto in = make_instance(oracle::fig1_matrix());
  const auto reps = check_all(in, pair_at(in, 5));
  const auto& cyc = find(reps, "lower-bound-cycles");
  EXPECT_EQ(cyc.quantities.at("bound"), 2.0);
  EXPECT_EQ(cyc.quantities.at("S"), 4.0);
  const auto& inertia = find(reps, "inertia-bounds");
  EXPECT_EQ(inertia.verdict, Verdict::Pass);
  EXPECT_EQ(inertia.quantities.at("p"), 1.0);
  EXPECT_EQ(inertia.quantities.at("E_T"), 2.0);
  EXPECT_EQ(inertia.quantities.at("E_H"), 2.0);
  EXPECT_EQ(inertia.quantities.at("ell"), 3.0);
  EXPECT_LE(inertia.quantities.at("identity_rel_error"), 1e-12);
  const auto& mult = find(reps, "nowhere-zero-multiplicity");
  EXPECT_EQ(mult.verdict, Verdict::Pass);
  EXPECT_EQ(mult.quantities.at("c"), 1.0);
}

TEST(SixVertexExample, MinimalSupportPairsMeetTheSharperBound) {
  const auto in = make_instance(oracle::fig1_matrix());
  for (std::size_t idx : {2, 3}) {
    const auto ep = pair_at(in, idx, Basis::MinimalSupport);
    const auto r = check_upper_bounds(in, ep);
    EXPECT_EQ(r.quantities.at("minimal_support"), 1.0);
    EXPECT_EQ(r.quantities.at("S"), 1.0);
    EXPECT_EQ(r.verdict, Verdict::Pass);
  }
}

TEST(LeafyCompleteGraphs, SevenLeavesOnK7) {
  const auto in = make_instance(oracle::load_matrix("k7_leaves.mat"));
  const auto ep = pair_at(in, 14);
  EXPECT_NEAR(ep.value, 3.05, 0.02);
  EXPECT_EQ(ep.cluster.r, 1u);
  const auto cyc = check_lower_bound_cycles(in, ep);
  const auto leaf = check_lower_bound_leaves(in, ep);
  EXPECT_EQ(cyc.quantities.at("S"), 9.0);
  EXPECT_EQ(cyc.quantities.at("ell"), 15.0);
  EXPECT_EQ(cyc.quantities.at("ell_plus"), 10.0);
  EXPECT_EQ(cyc.quantities.at("bound"), 9.0);
  EXPECT_EQ(leaf.quantities.at("v_l"), 7.0);
  EXPECT_EQ(leaf.quantities.at("bound"), 6.0);
  EXPECT_EQ(cyc.verdict, Verdict::Pass);
  EXPECT_EQ(leaf.verdict, Verdict::Pass);
}

TEST(LeafyCompleteGraphs, StaircaseLeavesOnK8) {
  const auto in = make_instance(oracle::load_matrix("k8_staircase.mat"));
  ASSERT_EQ(in.graph.num_vertices(), 44u);
  const auto ep = pair_at(in, 41);
  EXPECT_NEAR(ep.value, 2.69, 0.02);
  EXPECT_EQ(ep.cluster.r, 1u);
  const auto cyc = check_lower_bound_cycles(in, ep);
  const auto leaf = check_lower_bound_leaves(in, ep);
  EXPECT_EQ(cyc.quantities.at("S"), 38.0);
  EXPECT_EQ(cyc.quantities.at("ell"), 21.0);
  EXPECT_EQ(cyc.quantities.at("ell_plus"), 6.0);
  EXPECT_EQ(cyc.quantities.at("bound"), 26.0);
  EXPECT_EQ(leaf.quantities.at("v_l"), 36.0);
  EXPECT_EQ(leaf.quantities.at("bound"), 32.0);
}

TEST(Trees, PathLaplacianEigenfunctions) {
  // Path Laplacian on 5 vertices: simple spectrum; eigenfunctions with no
  // zero have exactly k strong domains.
  SymMatrix m(5);
  for (std::size_t i = 0; i + 1 < 5; ++i) m.set(i, i + 1, -1.0);
  for (std::size_t i = 0; i < 5; ++i) m.set(i, i, (i == 0 || i == 4) ? 1.0 : 2.0);
  const auto in = make_instance(m);
  std::size_t applied = 0;
  for (const auto& ep : eigenpairs(in)) {
    const auto r = check_tree_nowhere_zero(in, ep);
    if (r.verdict == Verdict::NotApplicable) continue;
    ++applied;
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(r.quantities.at("S"), static_cast<double>(ep.index));
    EXPECT_EQ(check_fiedler_acyclic(in, ep).verdict, Verdict::Pass);
  }
  EXPECT_GE(applied, 3u);
}

TEST(Trees, StarLaplacianDegenerateEigenvalue) {
  // K_{1,3} Laplacian: eigenvalue 1 has multiplicity 2, every eigenvector vanishes at the centre.
  SymMatrix m(4);
  m.set(0, 0, 3.0);
  for (std::size_t i = 1; i < 4; ++i) {
    m.set(0, i, -1.0);
    m.set(i, i, 1.0);
  }
  const auto in = make_instance(m);
  ASSERT_EQ(in.eigen.clusters[1], (Cluster{2, 2}));
  for (auto basis : {Basis::Raw, Basis::MinimalSupport}) {
    for (const auto& ep : eigenpairs(in, basis)) {
      const auto r = check_fiedler_acyclic(in, ep);
      EXPECT_EQ(r.verdict, Verdict::Pass) << r.detail;
      // minimal-support vectors such as (0,1,-1,0) also vanish on a leaf
      // whose only neighbour is zero
      if (ep.cluster.r == 2 && basis == Basis::MinimalSupport) {
        EXPECT_EQ(r.quantities.at("z"), 2.0);
        EXPECT_EQ(r.quantities.at("F"), 1.0);
        EXPECT_EQ(r.quantities.at("r_tilde"), 1.0);
      }
    }
  }
}

TEST(Duality, PathWithZero) {
  const SignedGraph p3(3, {{0, 1, 1}, {1, 2, 1}});
  const auto r = check_duality_forest(p3, Vector{1, 0, -1}, 1e-8);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  // S + S_bar = 2 + 2 = n + c - 2z + e0 = 3 + 1 - 2 + 2
  EXPECT_EQ(r.quantities.at("S") + r.quantities.at("S_bar"), 4.0);
  EXPECT_EQ(check_duality_forest(oracle::fig1_graph(), Vector(6, 1.0), 1e-8).verdict, Verdict::NotApplicable);
}

TEST(Antibalance, GenericGraphTopEigenfunction) {
  // Positive triangle: not antibalanced, top eigenfunction has fewer than n domains.
  const auto in = make_instance(signed_adjacency_matrix(SignedGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}})));
  const auto r = check_antibalance_top(in);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.quantities.at("antibalanced"), 0.0);
  EXPECT_LT(r.quantities.at("S"), 3.0);
}

TEST(Antibalance, BipartitePositiveIsTheRothCase) {
  const auto in = make_instance(signed_adjacency_matrix(SignedGraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}})));
  const auto r = check_antibalance_top(in);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.quantities.at("roth_case"), 1.0);
  EXPECT_EQ(r.quantities.at("S"), 4.0);
}

// ---------------------------------------------------------------------------
// The checkers must reject false claims.

TEST(Rejection, UpperBoundWithWrongIndex) {
  const auto in = make_instance(oracle::fig1_matrix());
  auto ep = pair_at(in, 6);
  ep.index = 1;
  ep.cluster = {1, 1};
  const auto r = check_upper_bounds(in, ep);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->index, 1u);
  EXPECT_EQ(r.counterexample->f, ep.f);
  EXPECT_NE(r.detail.find("S <= k + r - 1"), std::string::npos);
}

TEST(Rejection, QuadraticIdentityWithWrongEigenvalue) {
  const auto in = make_instance(oracle::fig1_matrix());
  auto ep = pair_at(in, 5);
  ep.value += 0.1;
  const auto r = check_inertia_edge_bounds(in, ep);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_GT(r.quantities.at("identity_rel_error"), 1e-4);
}

TEST(Rejection, UniqueContinuationWithNonEigenfunction) {
  const auto in = make_instance(oracle::fig1_matrix());
  auto ep = pair_at(in, 5);
  ep.f = Vector{0.5, -0.3, -0.2, -0.7, 1, 1};
  EXPECT_EQ(check_unique_continuation(in, ep).verdict, Verdict::Fail);
}

// ---------------------------------------------------------------------------
// Randomized identities

class RandomInstances : public ::testing::TestWithParam<int> {};

TEST_P(RandomInstances, InertiaBoundsOnDenseRandomMatrices) {
  std::mt19937_64 rng(11000 + GetParam());
  for (int t = 0; t < 10; ++t) {
    const auto n = 2 + rng() % 9;
    const auto in = make_instance(oracle::random_symmetric(rng, n, 0.6));
    for (const auto& ep : eigenpairs(in)) {
      const auto r = check_inertia_edge_bounds(in, ep, 4);
      if (r.verdict == Verdict::NotApplicable) continue;
      EXPECT_EQ(r.verdict, Verdict::Pass) << r.detail;
    }
  }
}

TEST_P(RandomInstances, FiedlerMultiplicityFormulaOnTrees) {
  GeneratorSpec spec;
  spec.family = "random-tree";
  spec.n = 10;
  spec.n_min = 2;
  spec.mixed_unit = true;
  spec.seed = 900 + GetParam();
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto inst = generate(spec, t);
    const auto in = make_instance(inst.matrix);
    for (const auto& ep : eigenpairs(in, Basis::MinimalSupport)) {
      const auto r = check_fiedler_acyclic(in, ep);
      EXPECT_EQ(r.verdict, Verdict::Pass) << r.detail;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomInstances, ::testing::Range(0, 4));

// ---------------------------------------------------------------------------
// Constructions

TEST(NowhereZeroConstruction, SixVertexGraph) {
  const auto g = oracle::fig1_graph();
  const auto c = construct_nowhere_zero_first(g);
  EXPECT_TRUE(is_compatible(c.matrix, g));
  EXPECT_EQ(c.eigen.clusters.front().r, 1u);
  const auto f = c.eigen.vectors.front();
  for (double x : f) EXPECT_GT(std::abs(x), 1e-8);
  EXPECT_EQ(strong_domains(g, f, 1e-8).count(), 1u);
}

TEST(NowhereZeroConstruction, RejectsDisconnectedGraph) {
  EXPECT_THROW(construct_nowhere_zero_first(SignedGraph(3, {{0, 1, 1}})), PreconditionError);
}

TEST(NowhereZeroConstruction, RandomConnectedGraphs) {
  GeneratorSpec spec;
  spec.n = 10;
  spec.n_min = 1;
  spec.force_connected = true;
  spec.seed = 77;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto g = generate(spec, t).graph;
    const auto c = construct_nowhere_zero_first(g);
    EXPECT_TRUE(is_compatible(c.matrix, g));
    EXPECT_EQ(c.eigen.clusters.front().r, 1u);
    const auto mask = zero_mask(c.eigen.vectors.front(), 1e-8);
    EXPECT_TRUE(std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }));
  }
}

TEST(ZeroAtConstruction, NegativeTriangle) {
  const SignedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, -1}});
  const auto c = construct_zero_at_vertex(g, 0);
  EXPECT_TRUE(is_compatible(c.matrix, g));
  EXPECT_EQ(c.f[0], 0.0);
  EXPECT_GT(std::abs(c.f[1]), 1e-8);
  EXPECT_GT(std::abs(c.f[2]), 1e-8);
  EXPECT_LE(residual(c.matrix, c.f, c.lambda), 1e-9 * std::max(1.0, c.matrix.norm_inf()));
  const auto eigs = oracle::reference_eigenvalues(c.matrix);
  EXPECT_GE(eigs.front(), c.lambda - 1e-7 * std::max(1.0, std::abs(c.lambda)));
  EXPECT_EQ(c.k_plus, 1u);
  EXPECT_EQ(c.k_minus, 1u);
}

TEST(ZeroAtConstruction, Preconditions) {
  // balanced graph
  EXPECT_THROW(construct_zero_at_vertex(SignedGraph(3, {{0, 1, 1}, {1, 2, 1}}), 1), PreconditionError);
  // the six-vertex graph minus vertex 2 is disconnected and keeps a negative triangle
  EXPECT_THROW(construct_zero_at_vertex(oracle::fig1_graph(), 2), PreconditionError);
  EXPECT_THROW(construct_zero_at_vertex(oracle::fig1_graph(), 9), PreconditionError);
}

TEST(ZeroAtConstruction, GeneratedInstances) {
  Rng rng(5150);
  for (int t = 0; t < 30; ++t) {
    const auto n = 3 + rng() % 8;
    const auto [g, z] = detail::zero_at_instance(rng, n, 0.4);
    const auto c = construct_zero_at_vertex(g, z);
    EXPECT_TRUE(is_compatible(c.matrix, g));
    EXPECT_EQ(c.f[z], 0.0);
    const auto mask = zero_mask(c.f, 1e-8);
    for (std::size_t v = 0; v < n; ++v) EXPECT_EQ(mask[v], static_cast<Vertex>(v) == z);
    EXPECT_LE(residual(c.matrix, c.f, c.lambda), 1e-9 * std::max(1.0, c.matrix.norm_inf()));
  }
}
