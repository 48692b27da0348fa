#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sgnodal/errors.hpp"

namespace sgnodal {

/// Dense real symmetric matrix, row-major. Writes go to both (i, j) and (j, i)
/// so the stored entries are always exactly symmetric.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  /// Builds from full rows. Rejects input whose asymmetry exceeds
  /// `sym_tol * max|entry|`; accepted input is symmetrized by averaging.
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows, double sym_tol = 1e-12) {
    const std::size_t n = rows.size();
    SymMatrix m(n);
    double scale = 0.0;
    for (const auto& r : rows) {
      if (r.size() != n) throw std::invalid_argument("matrix rows must have length " + std::to_string(n));
      for (double v : r) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double asym = std::abs(rows[i][j] - rows[j][i]);
        if (asym > sym_tol * scale) {
          throw std::invalid_argument("matrix is not symmetric: |M(" + std::to_string(i) + "," + std::to_string(j) +
                                      ") - M(" + std::to_string(j) + "," + std::to_string(i) + ")| = " +
                                      std::to_string(asym));
        }
        m.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
      }
    }
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  std::span<const double> row(std::size_t i) const { return {a_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return a_; }

  /// Max absolute row sum.
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (double v : row(i)) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
      y[i] = s;
    }
    return y;
  }

  /// Principal submatrix on the kept indices (in the given order).
  SymMatrix principal(std::span<const std::size_t> keep) const {
    SymMatrix s(keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = a; b < keep.size(); ++b) s.set(a, b, (*this)(keep[a], keep[b]));
    return s;
  }

  SymMatrix negated() const {
    SymMatrix s = *this;
    for (double& v : s.a_) v = -v;
    return s;
  }

  /// D M D for a diagonal matrix D given by its diagonal.
  SymMatrix conjugated(std::span<const int> d) const {
    SymMatrix s = *this;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) s.a_[i * n_ + j] *= static_cast<double>(d[i] * d[j]);
    return s;
  }

  /// FNV-1a over the raw entry bytes, rendered as 16 hex digits.
  std::string digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t len) {
      const auto* b = static_cast<const unsigned char*>(p);
      for (std::size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 1099511628211ULL;
      }
    };
    const std::uint64_t n64 = n_;
    mix(&n64, sizeof n64);
    for (double v : a_) {
      const double canon = v == 0.0 ? 0.0 : v;  // fold -0.0 into 0.0
      mix(&canon, sizeof canon);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline double parse_real(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a real number, got '" + tok + "'");
  }
}

inline long long parse_int(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
}

struct DataLine {
  std::size_t number;
  std::vector<std::string> tokens;
};

} // namespace detail

/// Reads the matrix text format. First data line is `n`; the rest is either n
/// dense rows of n reals, or 0-based coordinate triples `i j value` giving one
/// triangle (missing entries are zero). A comment `# format: dense` or
/// `# format: coordinate` forces the layout; otherwise exactly n rows of n
/// tokens are read as dense.
inline SymMatrix read_matrix(std::istream& in, double sym_tol = 1e-12) {
  std::vector<detail::DataLine> lines;
  std::string forced;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) {
      const auto t = detail::tokens(raw.substr(hash + 1));
      if (t.size() == 2 && t[0] == "format:") {
        if (t[1] != "dense" && t[1] != "coordinate") throw ParseError(lineno, "unknown format directive '" + t[1] + "'");
        forced = t[1];
      }
    }
    auto t = detail::tokens(detail::strip_comment(raw));
    if (!t.empty()) lines.push_back({lineno, std::move(t)});
  }
  if (lines.empty()) throw ParseError(lineno, "empty matrix file");
  if (lines[0].tokens.size() != 1) throw ParseError(lines[0].number, "first line must contain only the size n");
  const long long nn = detail::parse_int(lines[0].tokens[0], lines[0].number);
  if (nn < 1) throw ParseError(lines[0].number, "matrix size must be positive");
  const auto n = static_cast<std::size_t>(nn);

  bool dense = false;
  if (forced == "dense") {
    dense = true;
  } else if (forced.empty()) {
    dense = lines.size() == n + 1 &&
            std::all_of(lines.begin() + 1, lines.end(), [n](const auto& l) { return l.tokens.size() == n; });
  }

  if (dense) {
    if (lines.size() != n + 1) throw ParseError(lines.back().number, "dense matrix needs exactly n rows");
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& l = lines[i + 1];
      if (l.tokens.size() != n) throw ParseError(l.number, "dense row must have " + std::to_string(n) + " entries");
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = detail::parse_real(l.tokens[j], l.number);
    }
    try {
      return SymMatrix::from_rows(rows, sym_tol);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lines[0].number, e.what());
    }
  }

  SymMatrix m(n);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.tokens.size() != 3) throw ParseError(l.number, "coordinate line must be 'i j value'");
    const long long i = detail::parse_int(l.tokens[0], l.number);
    const long long j = detail::parse_int(l.tokens[1], l.number);
    if (i < 0 || j < 0 || i >= nn || j >= nn) throw ParseError(l.number, "index out of range [0, n)");
    const double v = detail::parse_real(l.tokens[2], l.number);
    const std::pair<std::size_t, std::size_t> key = std::minmax(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (auto it = seen.find(key); it != seen.end()) {
      throw ParseError(l.number, "entry (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                     ") already given on line " + std::to_string(it->second));
    }
    seen.emplace(key, l.number);
    m.set(key.first, key.second, v);
  }
  return m;
}

/// Writes the dense layout with round-trip precision.
inline void write_matrix(std::ostream& out, const SymMatrix& m) {
  out << m.size() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

} // namespace sgnodal
