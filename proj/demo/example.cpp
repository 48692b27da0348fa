// Builds a matrix whose first eigenfunction vanishes at a chosen vertex, then
// counts its nodal domains and runs the theorem checks on it.

#include <iostream>

#include "sgnodal/sgnodal.hpp"

using namespace sgnodal;

namespace {

void print_partition(const char* label, const Partition& p) {
  std::cout << "  " << label << ':';
  for (const auto& d : p) {
    std::cout << " {";
    for (std::size_t i = 0; i < d.size(); ++i) std::cout << (i ? "," : "") << d[i];
    std::cout << '}';
  }
  std::cout << '\n';
}

} // namespace

int main() {
  // A 4-cycle with one negative edge plus a pendant vertex; removing vertex 0
  // leaves the path 1-2-3-4, which is balanced and connected.
  const SignedGraph g(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, -1}, {3, 4, 1}});
  std::cout << "balanced: " << std::boolalpha << is_balanced(g).balanced << '\n';

  const auto c = construct_zero_at_vertex(g, 0);
  std::cout << "lambda_1 = " << c.lambda << ", f_1 =";
  for (double x : c.f) std::cout << ' ' << x;
  std::cout << '\n';

  const auto in = make_instance(c.matrix);
  for (const auto& ep : eigenpairs(in, Basis::MinimalSupport)) {
    const auto sd = strong_domains(in.graph, ep.f, in.tol.zero_tol);
    const auto wd = weak_domains(in.graph, ep.f, in.tol.zero_tol);
    std::cout << "k=" << ep.index << " lambda=" << ep.value << " S=" << sd.count() << " W=" << wd.count() << '\n';
    print_partition("strong", sd.domains);
    print_partition("weak", wd.domains);
    for (const auto& r : check_all(in, ep))
      if (r.verdict == Verdict::Fail) std::cout << "  FAILED " << r.theorem << ": " << r.detail << '\n';
  }

  // Random counterexample hunt: zero failures expected.
  const auto res = run_suite("lower-bound-cycles", default_spec("lower-bound-cycles"), 200);
  std::cout << "lower-bound-cycles: " << res.checks << " checks, " << res.failures.size() << " failures\n";
  return res.ok() ? 0 : 1;
}
