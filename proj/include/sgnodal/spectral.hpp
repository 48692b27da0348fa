#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnodal/errors.hpp"
#include "sgnodal/signed_graph.hpp"
#include "sgnodal/sym_matrix.hpp"

namespace sgnodal {

/// Numerical thresholds. Nodal counts jump by integers when a threshold moves
/// across a value, so every report carries the set it used.
struct Tolerances {
  double zero_tol = 1e-8;        // |f(x)| <= zero_tol * ||f||_inf counts as a zero
  double cluster_tol = 1e-7;     // eigenvalue gaps <= cluster_tol * max(1, spread) are equalities
  double residual_tol = 1e-9;    // ||M v - lambda v||_inf <= residual_tol * ||M||_inf
  double ortho_tol = 1e-9;       // ||V^T V - I||_max
  double rref_pivot_tol = 1e-9;  // relative pivot threshold in row reduction
  double entry_tol = 0.0;        // |M_ij| > entry_tol makes {i, j} an edge

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

using Vector = std::vector<double>;

inline double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Flips the sign of v so that its first entry of largest magnitude is positive.
inline void normalize_sign(Vector& v) {
  const double m = norm_inf(v);
  if (m == 0.0) return;
  for (double x : v) {
    if (std::abs(x) >= m * (1.0 - 1e-9)) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

/// A maximal run of equal eigenvalues; `k` is the 1-based index of its first member.
struct Cluster {
  std::size_t k = 1;
  std::size_t r = 1;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Greedy gap clustering of ascending eigenvalues: a new cluster starts
/// whenever the gap to the previous value exceeds cluster_tol * max(1, spread).
inline std::vector<Cluster> cluster_eigenvalues(std::span<const double> eigs, double cluster_tol) {
  std::vector<Cluster> out;
  if (eigs.empty()) return out;
  const double scale = std::max(1.0, eigs.back() - eigs.front());
  out.push_back({1, 1});
  for (std::size_t i = 1; i < eigs.size(); ++i) {
    if (eigs[i] - eigs[i - 1] > cluster_tol * scale) out.push_back({i + 1, 1});
    else ++out.back().r;
  }
  return out;
}

struct EigenSystem {
  Vector values;               // ascending
  std::vector<Vector> vectors; // vectors[i] pairs with values[i], unit 2-norm
  std::vector<Cluster> clusters;
  double max_residual = 0.0;   // max_i ||M v_i - lambda_i v_i||_inf / ||M||_inf
  double ortho_error = 0.0;
  std::size_t sweeps = 0;

  std::size_t size() const noexcept { return values.size(); }

  /// Cluster containing the 1-based eigen index.
  const Cluster& cluster_of(std::size_t index) const {
    for (const auto& c : clusters)
      if (index >= c.k && index < c.k + c.r) return c;
    throw std::out_of_range("eigen index out of range");
  }

  /// Raw solver basis of the cluster's eigenspace.
  std::vector<Vector> eigenspace(const Cluster& c) const {
    return {vectors.begin() + static_cast<std::ptrdiff_t>(c.k - 1),
            vectors.begin() + static_cast<std::ptrdiff_t>(c.k - 1 + c.r)};
  }

  /// Scale used for eigenvalue equality decisions.
  double scale() const { return values.empty() ? 1.0 : std::max(1.0, values.back() - values.front()); }
};

namespace detail {

/// Cyclic Jacobi on a dense symmetric copy; fixed row-major (p, q) sweep order.
/// Returns unsorted eigenvalues and eigenvectors as columns of `v`.
struct JacobiResult {
  Vector values;
  std::vector<double> v;  // n x n row-major, columns are eigenvectors
  std::size_t sweeps = 0;
};

inline JacobiResult jacobi(const SymMatrix& m, std::size_t max_sweeps = 100) {
  const std::size_t n = m.size();
  std::vector<double> a(m.data().begin(), m.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  std::size_t sweep = 0;
  double off = off_norm();
  while (off > 1e-14 * frob && off > 0.0) {
    if (sweep == max_sweeps)
      throw ConvergenceError("Jacobi did not converge after " + std::to_string(max_sweeps) +
                             " sweeps; off-diagonal norm " + std::to_string(off));
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
    const double next = off_norm();
    // Rounding floor reached: further sweeps cannot reduce the off-diagonal part.
    if (next >= off && next <= 1e-12 * frob) break;
    off = next;
  }
  JacobiResult r;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.values[i] = A(i, i);
  r.v = std::move(v);
  r.sweeps = sweep;
  return r;
}

} // namespace detail

/// Eigenvalues only, ascending.
inline Vector eigenvalues(const SymMatrix& m) {
  auto r = detail::jacobi(m);
  std::sort(r.values.begin(), r.values.end());
  return r.values;
}

/// Full ordered eigendecomposition with multiplicity clusters. Throws
/// ConvergenceError when Jacobi stalls or the residual/orthonormality bounds fail.
inline EigenSystem eigendecompose(const SymMatrix& m, const Tolerances& tol = {}) {
  const std::size_t n = m.size();
  auto jr = detail::jacobi(m);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return jr.values[a] < jr.values[b]; });

  EigenSystem es;
  es.sweeps = jr.sweeps;
  for (std::size_t idx : order) {
    es.values.push_back(jr.values[idx]);
    Vector vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = jr.v[k * n + idx];
    normalize_sign(vec);
    es.vectors.push_back(std::move(vec));
  }
  es.clusters = cluster_eigenvalues(es.values, tol.cluster_tol);

  const double mnorm = std::max(m.norm_inf(), 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    const auto mv = m.apply(es.vectors[i]);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) res = std::max(res, std::abs(mv[k] - es.values[i] * es.vectors[i][k]));
    es.max_residual = std::max(es.max_residual, m.norm_inf() == 0.0 ? res : res / mnorm);
    for (std::size_t j = i; j < n; ++j) {
      const double d = dot(es.vectors[i], es.vectors[j]) - (i == j ? 1.0 : 0.0);
      es.ortho_error = std::max(es.ortho_error, std::abs(d));
    }
  }
  if (es.max_residual > tol.residual_tol)
    throw ConvergenceError("eigen residual " + std::to_string(es.max_residual) + " exceeds tolerance");
  if (es.ortho_error > tol.ortho_tol)
    throw ConvergenceError("eigenvector orthonormality error " + std::to_string(es.ortho_error) + " exceeds tolerance");
  return es;
}

/// Singular values of a dense row-major rows x cols matrix (one-sided Jacobi),
/// descending.
inline Vector singular_values(std::vector<Vector> a) {
  if (a.empty() || a[0].empty()) return {};
  const std::size_t rows = a.size(), cols = a[0].size();
  // Work on columns of a.
  for (std::size_t sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += a[i][p] * a[i][p];
          beta += a[i][q] * a[i][q];
          gamma += a[i][p] * a[i][q];
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double x = a[i][p], y = a[i][q];
          a[i][p] = c * x - s * y;
          a[i][q] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  Vector sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += a[i][j] * a[i][j];
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

/// Numerical rank: singular values above rel_tol * max(1, largest).
inline std::size_t numerical_rank(const std::vector<Vector>& a, double rel_tol) {
  const auto sv = singular_values(a);
  if (sv.empty()) return 0;
  const double cut = rel_tol * std::max(1.0, sv.front());
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

/// Basis of one eigenspace made of minimal-support vectors: the rows of the
/// reduced row-echelon form of the input basis (stacked as rows), with
/// partial pivoting down each column. Entries below the pivot threshold are
/// set to zero; each output is scaled to unit 2-norm with the sign convention.
inline std::vector<Vector> minimal_support_basis(const std::vector<Vector>& basis, double rref_pivot_tol = 1e-9) {
  const std::size_t r = basis.size();
  if (r == 0) return {};
  const std::size_t n = basis[0].size();
  std::vector<Vector> a = basis;
  double scale = 0.0;
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("basis vectors must have equal length");
    scale = std::max(scale, norm_inf(row));
  }
  const double cut = rref_pivot_tol * std::max(scale, 1e-300);

  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < r; ++col) {
    std::size_t piv = row;
    for (std::size_t i = row + 1; i < r; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (std::abs(a[piv][col]) <= cut) continue;
    std::swap(a[piv], a[row]);
    const double p = a[row][col];
    for (double& x : a[row]) x /= p;
    a[row][col] = 1.0;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row) continue;
      const double factor = a[i][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= factor * a[row][j];
      a[i][col] = 0.0;
    }
    ++row;
  }
  if (row < r)
    throw std::invalid_argument("eigenspace basis is numerically rank deficient (rank " + std::to_string(row) +
                                " < " + std::to_string(r) + ")");
  for (auto& v : a) {
    const double m = norm_inf(v);
    for (double& x : v)
      if (std::abs(x) <= rref_pivot_tol * m) x = 0.0;
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    normalize_sign(v);
  }
  return a;
}

/// Zero classification relative to the sup norm. An all-zero f yields an all-true mask.
inline std::vector<bool> zero_mask(std::span<const double> f, double zero_tol) {
  const double m = norm_inf(f);
  std::vector<bool> mask(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mask[i] = std::abs(f[i]) <= zero_tol * m;
  return mask;
}

/// Per-vertex sign in {-1, 0, +1} after zero classification.
inline std::vector<int> sign_pattern(std::span<const double> f, double zero_tol) {
  const auto mask = zero_mask(f, zero_tol);
  std::vector<int> s(f.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!mask[i]) s[i] = f[i] > 0.0 ? 1 : -1;
  return s;
}

/// Decides whether f has minimal support within the eigenspace spanned by
/// `eigenspace` (orthonormal). The subspace vanishing off supp(f) has
/// dimension r - rank(rows of the basis outside supp(f)); f is minimal exactly
/// when that dimension is one.
inline bool has_minimal_support(std::span<const double> f, const std::vector<Vector>& eigenspace, double zero_tol) {
  const std::size_t r = eigenspace.size();
  if (r == 1) return true;
  const auto mask = zero_mask(f, zero_tol);
  std::vector<Vector> outside;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) continue;
    Vector row(r);
    for (std::size_t j = 0; j < r; ++j) row[j] = eigenspace[j][i];
    outside.push_back(std::move(row));
  }
  const std::size_t rank = outside.empty() ? 0 : numerical_rank(outside, std::max(zero_tol, 1e-12));
  return r - rank == 1;
}

struct LeafStats {
  std::size_t v_l = 0;  // vertices of degree 1
  std::size_t z_l = 0;  // zero leaves
  std::size_t z_r = 0;  // nonzero leaves whose neighbour is zero
  friend bool operator==(const LeafStats&, const LeafStats&) = default;
};

struct ZeroPattern {
  std::vector<bool> zero_mask;
  std::size_t z = 0;
  std::vector<Vertex> support;
  std::size_t e0 = 0;                    // edges with at least one zero endpoint
  std::vector<Vertex> fiedler_set;       // zeros with all-zero neighbourhood or not tree-like
  std::vector<Vertex> fiedler_complement;
  LeafStats leaves;
  bool sensitive = false;  // mask differs under zero_tol / 10 versus zero_tol * 10
};

inline ZeroPattern classify_zeros(const SignedGraph& g, std::span<const double> f, double zero_tol) {
  const auto n = g.num_vertices();
  if (f.size() != n) throw std::invalid_argument("function length does not match vertex count");
  if (norm_inf(f) == 0.0) throw std::invalid_argument("classify_zeros: function is identically zero");
  ZeroPattern zp;
  zp.zero_mask = zero_mask(f, zero_tol);
  zp.sensitive = zero_mask(f, zero_tol / 10.0) != zero_mask(f, zero_tol * 10.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (zp.zero_mask[v]) ++zp.z;
    else zp.support.push_back(static_cast<Vertex>(v));
  }
  for (const auto& e : g.edges())
    if (zp.zero_mask[e.u] || zp.zero_mask[e.v]) ++zp.e0;

  const auto adj = g.adjacency();
  const auto tree_like = tree_like_mask(g);
  for (std::size_t v = 0; v < n; ++v) {
    if (adj[v].size() == 1) {
      ++zp.leaves.v_l;
      if (zp.zero_mask[v]) ++zp.leaves.z_l;
      else if (zp.zero_mask[adj[v][0].vertex]) ++zp.leaves.z_r;
    }
    if (!zp.zero_mask[v]) continue;
    const bool all_zero_nbhd =
        std::all_of(adj[v].begin(), adj[v].end(), [&](const Neighbor& nb) { return zp.zero_mask[nb.vertex]; });
    if (all_zero_nbhd || !tree_like[v]) zp.fiedler_set.push_back(static_cast<Vertex>(v));
    else zp.fiedler_complement.push_back(static_cast<Vertex>(v));
  }
  return zp;
}

} // namespace sgnodal
