// sgnodal: nodal domains of symmetric matrices through their induced signed graphs.
//
//   sgnodal analyze <matrix-file> [--k i] [--format text|json] [--out file]
//   sgnodal analyze --graph <graph-file> [--weight w] ...
//   sgnodal verify --suite <name> [--n N] [--n-min N] [--p P] [--trials T] [--seed S]
//   sgnodal construct nowhere-zero|zero-at --graph <graph-file> [--vertex z] [--out matrix-file]
//
// Exit status: 0 success, 1 a check or suite failed, 2 usage or precondition
// error, 3 unreadable or malformed input, 4 numerical failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sgnodal/sgnodal.hpp"

namespace {

using namespace sgnodal;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kNumerical = 4;

struct CommonOptions {
  std::string format = "text";
  std::string out;
  double zero_tol = Tolerances{}.zero_tol;
  double cluster_tol = Tolerances{}.cluster_tol;

  Tolerances tolerances() const {
    Tolerances t;
    t.zero_tol = zero_tol;
    t.cluster_tol = cluster_tol;
    return t;
  }
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
  cmd->add_option("--zero-tol", o.zero_tol, "Relative threshold for eigenfunction zeros")->check(CLI::NonNegativeNumber);
  cmd->add_option("--cluster-tol", o.cluster_tol, "Relative eigenvalue equality threshold")
      ->check(CLI::NonNegativeNumber);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

/// Sends text to --out or stdout.
void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write '" + out + "'");
  f << text;
}

std::uint64_t seed_fallback() {
  if (const char* s = std::getenv("SGNODAL_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw CLI::ValidationError("SGNODAL_SEED", std::string("not an unsigned integer: ") + s);
    }
  }
  return 1;
}

SymMatrix matrix_from_graph(const SignedGraph& g, double weight) {
  SymMatrix m(g.num_vertices());
  for (const auto& e : g.edges()) m.set(e.u, e.v, -e.sign * weight);
  return m;
}

int run_analyze(const std::string& matrix_path, const std::string& graph_path, double weight,
                std::optional<std::size_t> k, const CommonOptions& o) {
  SymMatrix m;
  if (!graph_path.empty()) {
    auto in = open_input(graph_path);
    m = matrix_from_graph(read_signed_graph(in), weight);
  } else {
    auto in = open_input(matrix_path);
    m = read_matrix(in);
  }
  const auto rep = analyze(m, o.tolerances(), k);
  std::ostringstream os;
  if (o.format == "json") os << json(rep).dump(2) << '\n';
  else write_text(os, rep);
  emit(os.str(), o.out);
  return rep.failures() ? kFailed : kOk;
}

struct VerifyOverrides {
  std::optional<std::string> family;
  std::optional<std::size_t> n;
  std::optional<std::size_t> n_min;
  std::optional<double> p;
  std::optional<std::uint64_t> seed;
  bool connected = false;
};

int run_verify(const std::string& suite, const VerifyOverrides& v, std::size_t trials, const CommonOptions& o) {
  if (!is_suite(suite)) {
    std::cerr << "unknown suite '" << suite << "'; available suites:\n";
    for (auto s : kSuites) std::cerr << "  " << s << '\n';
    return kUsage;
  }
  GeneratorSpec spec = default_spec(suite);
  if (v.family) spec.family = *v.family;
  if (v.n) spec.n = *v.n;
  if (v.n_min) spec.n_min = *v.n_min;
  if (spec.n_min > spec.n) spec.n_min = spec.n;
  if (v.p) spec.p = *v.p;
  if (v.connected) spec.force_connected = true;
  spec.seed = v.seed ? *v.seed : seed_fallback();
  const auto res = run_suite(suite, spec, trials, o.tolerances());
  std::ostringstream os;
  if (o.format == "json") os << json(res).dump(2) << '\n';
  else write_text(os, res);
  emit(os.str(), o.out);
  return res.ok() ? kOk : kFailed;
}

int run_construct(const std::string& kind, const std::string& graph_path, std::optional<int> vertex,
                  const CommonOptions& o) {
  auto in = open_input(graph_path);
  const auto g = read_signed_graph(in);
  const auto tol = o.tolerances();
  SymMatrix m;
  Vector f;
  double lambda = 0.0;
  json summary;
  if (kind == "nowhere-zero") {
    auto c = construct_nowhere_zero_first(g, tol);
    m = c.matrix;
    f = c.eigen.vectors.front();
    lambda = c.eigen.values.front();
    summary["epsilon"] = c.epsilon;
    summary["halvings"] = c.halvings;
    summary["lambda_1_simple"] = c.eigen.clusters.front().r == 1;
  } else {
    if (!vertex) throw PreconditionError("zero-at requires --vertex");
    auto c = construct_zero_at_vertex(g, *vertex, tol);
    m = c.matrix;
    f = c.f;
    lambda = c.lambda;
    summary["vertex"] = *vertex;
    summary["epsilon"] = c.epsilon;
    summary["halvings"] = c.halvings;
    summary["k_plus"] = c.k_plus;
    summary["k_minus"] = c.k_minus;
    summary["min_ratio"] = c.min_ratio;
    if (c.ill_conditioned) summary["warning"] = "min |f| below 1e-6 of max |f|; entries at the vertex are large";
  }
  const auto mf = m.apply(f);
  double res = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) res = std::max(res, std::abs(mf[i] - lambda * f[i]));
  const auto eigs = eigenvalues(m);
  const auto zeros = zero_mask(f, tol.zero_tol);
  std::vector<Vertex> zero_list;
  for (std::size_t i = 0; i < zeros.size(); ++i)
    if (zeros[i]) zero_list.push_back(static_cast<Vertex>(i));
  summary["construction"] = kind;
  summary["compatible"] = is_compatible(m, g);
  summary["lambda"] = lambda;
  summary["spectrum"] = eigs;
  summary["lambda_is_smallest"] = eigs.front() >= lambda - tol.cluster_tol * std::max(1.0, std::abs(lambda));
  summary["residual"] = res / std::max(1.0, m.norm_inf());
  summary["f"] = f;
  summary["zeros"] = zero_list;
  summary["S"] = strong_domains(g, f, tol.zero_tol).count();

  std::ostringstream ms;
  write_matrix(ms, m);
  std::ostringstream os;
  if (!o.out.empty()) emit(ms.str(), o.out);
  if (o.format == "json") {
    if (o.out.empty()) summary["matrix"] = m;
    os << summary.dump(2) << '\n';
  } else {
    if (o.out.empty()) os << ms.str();
    for (const auto& [key, val] : summary.items()) os << "# " << key << ": " << val.dump() << '\n';
  }
  std::cout << os.str();
  return summary["compatible"].get<bool>() ? kOk : kFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nodal domains of symmetric matrices via induced signed graphs"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, verify_opts, construct_opts;

  auto* analyze_cmd = app.add_subcommand("analyze", "Eigenpairs, nodal domains and theorem checks for one matrix");
  std::string matrix_path, graph_path;
  double weight = 1.0;
  std::optional<std::size_t> k;
  analyze_cmd->add_option("matrix", matrix_path, "Matrix file");
  analyze_cmd->add_option("--graph", graph_path, "Signed-graph file; the matrix gets -sign * weight per edge");
  analyze_cmd->add_option("--weight", weight, "Edge weight used with --graph")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--k", k, "Restrict to eigen index k (1-based)");
  add_common(analyze_cmd, analyze_opts);

  auto* verify_cmd = app.add_subcommand("verify", "Run a randomized theorem suite");
  std::string suite;
  VerifyOverrides over;
  std::size_t trials = 500;
  verify_cmd->add_option("--suite", suite, "Suite name")->required();
  verify_cmd->add_option("--family", over.family, "Generator family");
  verify_cmd->add_option("--n", over.n, "Largest instance size")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--n-min", over.n_min, "Smallest instance size (0 keeps n fixed)");
  verify_cmd->add_option("--p", over.p, "Edge probability")->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--trials", trials, "Number of trials");
  verify_cmd->add_option("--seed", over.seed, "Base seed (falls back to SGNODAL_SEED, then 1)");
  verify_cmd->add_flag("--connected", over.connected, "Force connected instances");
  add_common(verify_cmd, verify_opts);

  auto* construct_cmd = app.add_subcommand("construct", "Build a matrix with a prescribed first eigenfunction");
  std::string kind, construct_graph;
  std::optional<int> vertex;
  construct_cmd->add_option("kind", kind, "nowhere-zero or zero-at")
      ->required()
      ->check(CLI::IsMember({"nowhere-zero", "zero-at"}));
  construct_cmd->add_option("--graph", construct_graph, "Signed-graph file")->required();
  construct_cmd->add_option("--vertex", vertex, "Vertex (0-based) where f_1 must vanish");
  add_common(construct_cmd, construct_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze_cmd) {
      if (matrix_path.empty() == graph_path.empty()) {
        std::cerr << "analyze needs exactly one of a matrix file or --graph\n";
        return kUsage;
      }
      return run_analyze(matrix_path, graph_path, weight, k, analyze_opts);
    }
    if (*verify_cmd) return run_verify(suite, over, trials, verify_opts);
    return run_construct(kind, construct_graph, vertex, construct_opts);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}
