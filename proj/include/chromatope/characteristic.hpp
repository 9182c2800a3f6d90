#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "chromatope/errors.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope {

/// n x m integer matrix; `columns[j]` is the vector attached to facet j.
struct CharacteristicMatrix {
  int n = 0;
  std::vector<std::vector<std::int64_t>> columns;

  std::size_t m() const { return columns.size(); }
  std::int64_t at(int row, int col) const {
    return columns[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)];
  }
  bool operator==(const CharacteristicMatrix&) const = default;
};

/// Vector of signs in {-1, +1}^n.
class SignVector {
 public:
  explicit SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_)
      if (s != 1 && s != -1) throw InvalidInput("sign vector entries must be +1 or -1");
  }
  /// (-1, ..., -1).
  static SignVector preferred(int n) { return SignVector(std::vector<int>(static_cast<std::size_t>(n), -1)); }

  const std::vector<int>& signs() const { return signs_; }
  std::size_t size() const { return signs_.size(); }

 private:
  std::vector<int> signs_;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in multiplication");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in addition");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in subtraction");
  return r;
}

}  // namespace detail

/// Exact determinant by fraction-free (Bareiss) elimination.
inline std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = detail::checked_sub(detail::checked_mul(a[i][j], a[k][k]),
                                      detail::checked_mul(a[i][k], a[k][j])) /
                  prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

struct CharacteristicReport {
  bool valid = true;
  std::vector<int> bad_vertices;  // |det| != 1 (or wrong number of facets)
};

/// Vertexwise unimodularity: the columns of the facets at each vertex form
/// a Z^n-basis.
inline CharacteristicReport validate_characteristic(const CombinatorialPolytope& p,
                                                    const CharacteristicMatrix& lambda) {
  if (lambda.n != p.dim || lambda.m() != p.num_facets())
    throw InvalidInput("characteristic matrix is " + std::to_string(lambda.n) + "x" +
                       std::to_string(lambda.m()) + ", polytope needs " + std::to_string(p.dim) + "x" +
                       std::to_string(p.num_facets()));
  for (const auto& col : lambda.columns)
    if (col.size() != static_cast<std::size_t>(lambda.n)) throw InvalidInput("characteristic column of wrong length");
  CharacteristicReport r;
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    const auto& fs = p.vertex_facets[v];
    bool ok = fs.size() == static_cast<std::size_t>(lambda.n);
    if (ok) {
      std::vector<std::vector<std::int64_t>> a(fs.size(), std::vector<std::int64_t>(fs.size()));
      for (std::size_t r2 = 0; r2 < fs.size(); ++r2)
        for (std::size_t c = 0; c < fs.size(); ++c) a[r2][c] = lambda.at(static_cast<int>(r2), fs[c]);
      ok = std::llabs(integer_determinant(std::move(a))) == 1;
    }
    if (!ok) r.bad_vertices.push_back(static_cast<int>(v));
  }
  r.valid = r.bad_vertices.empty();
  return r;
}

/// Column j is e_{h(j)}.
inline CharacteristicMatrix canonical_characteristic(const CombinatorialPolytope& p, const Coloring& h) {
  if (h.num_colors != p.dim)
    throw HypothesisViolation("canonical characteristic needs exactly " + std::to_string(p.dim) +
                              " colors, got " + std::to_string(h.num_colors));
  if (!is_proper(p, h)) throw HypothesisViolation("canonical characteristic: coloring is not proper");
  CharacteristicMatrix lambda{p.dim, {}};
  for (int c : h.color) {
    std::vector<std::int64_t> col(static_cast<std::size_t>(p.dim), 0);
    col[static_cast<std::size_t>(c)] = 1;
    lambda.columns.push_back(std::move(col));
  }
  return lambda;
}

/// A facet of an n-polytope is an (n-1)-simplex iff it has exactly n vertices.
inline bool is_simplex_facet(const CombinatorialPolytope& p, int facet) {
  return common_vertices(p, {facet}).size() == static_cast<std::size_t>(p.dim);
}

/// Throws unless h is a proper (n+1)-coloring whose last color class
/// consists of simplices.
inline void require_special_coloring(const CombinatorialPolytope& p, const Coloring& h) {
  if (h.num_colors != p.dim + 1)
    throw HypothesisViolation("special coloring needs " + std::to_string(p.dim + 1) + " colors, got " +
                              std::to_string(h.num_colors));
  if (!is_proper(p, h)) throw HypothesisViolation("special coloring is not proper");
  for (int f : h.facets_of_color(p.dim))
    if (!is_simplex_facet(p, f))
      throw HypothesisViolation("facet " + std::to_string(f) + " has the distinguished color but is not a simplex");
}

/// Column j is e_{h(j)} for h(j) < n and the sign vector for h(j) = n.
inline CharacteristicMatrix special_characteristic(const CombinatorialPolytope& p, const Coloring& h,
                                                   const SignVector& eps) {
  require_special_coloring(p, h);
  if (eps.size() != static_cast<std::size_t>(p.dim)) throw InvalidInput("sign vector has wrong length");
  CharacteristicMatrix lambda{p.dim, {}};
  for (int c : h.color) {
    std::vector<std::int64_t> col(static_cast<std::size_t>(p.dim), 0);
    if (c < p.dim)
      col[static_cast<std::size_t>(c)] = 1;
    else
      for (std::size_t i = 0; i < col.size(); ++i) col[i] = eps.signs()[i];
    lambda.columns.push_back(std::move(col));
  }
  return lambda;
}

inline CharacteristicMatrix special_characteristic(const CombinatorialPolytope& p, const Coloring& h) {
  return special_characteristic(p, h, SignVector::preferred(p.dim));
}

}  // namespace chromatope
