#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <vector>

#include "chromatope/characteristic.hpp"

namespace chromatope {

/// Sparse integer vector: column -> nonzero coefficient.
using SparseVector = std::map<int, std::int64_t>;

namespace detail {

inline void axpy(SparseVector& x, std::int64_t q, const SparseVector& row) {
  for (const auto& [c, v] : row) {
    auto [it, inserted] = x.try_emplace(c, 0);
    it->second = checked_sub(it->second, checked_mul(q, v));
    if (it->second == 0) x.erase(it);
  }
}

inline SparseVector combine(std::int64_t a, const SparseVector& x, std::int64_t b, const SparseVector& y) {
  SparseVector out;
  for (const auto& [c, v] : x) out[c] = checked_mul(a, v);
  for (const auto& [c, v] : y) {
    auto& slot = out[c];
    slot = checked_add(slot, checked_mul(b, v));
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// g = s*a + t*b with g = gcd(a, b) > 0.
inline void extended_gcd(std::int64_t a, std::int64_t b, std::int64_t& g, std::int64_t& s, std::int64_t& t) {
  std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  g = r0;
  s = s0;
  t = t0;
}

}  // namespace detail

/// Row echelon basis of an integer lattice, built incrementally with
/// unimodular row operations (Hermite style, positive pivots, no reduction
/// above pivots). Cosets get a unique representative whose entries in pivot
/// columns lie in [0, pivot).
class IntegerEchelon {
 public:
  explicit IntegerEchelon(std::size_t columns = 0) : columns_(columns) {}

  void add(SparseVector row) {
    std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
    while (!row.empty()) {
      const int c = row.begin()->first;
      const std::int64_t a = row.begin()->second;
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        if (a < 0)
          for (auto& kv : row) kv.second = -kv.second;
        rows_.emplace(c, std::move(row));
        return;
      }
      SparseVector& e = it->second;
      const std::int64_t p = e.begin()->second;
      if (a % p == 0) {
        detail::axpy(row, a / p, e);
        continue;
      }
      std::int64_t g, s, t;
      detail::extended_gcd(p, a, g, s, t);
      SparseVector new_e = detail::combine(s, e, t, row);
      SparseVector rest = detail::combine(p / g, row, -(a / g), e);
      e = std::move(new_e);
      row = std::move(rest);
    }
  }

  /// Canonical representative of x modulo the lattice.
  SparseVector reduce(SparseVector x) const {
    std::erase_if(x, [](const auto& kv) { return kv.second == 0; });
    auto it = x.begin();
    while (it != x.end()) {
      const int c = it->first;
      auto r = rows_.find(c);
      if (r != rows_.end()) {
        const std::int64_t p = r->second.begin()->second;
        const std::int64_t q = detail::floor_div(it->second, p);
        if (q != 0) detail::axpy(x, q, r->second);
      }
      it = x.upper_bound(c);
    }
    return x;
  }

  bool contains(const SparseVector& x) const { return reduce(x).empty(); }

  std::size_t columns() const { return columns_; }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(int col) const { return rows_.count(col) != 0; }
  std::int64_t pivot(int col) const {
    auto it = rows_.find(col);
    return it == rows_.end() ? 0 : it->second.begin()->second;
  }

  std::vector<int> free_columns() const {
    std::vector<int> out;
    for (std::size_t c = 0; c < columns_; ++c)
      if (!is_pivot(static_cast<int>(c))) out.push_back(static_cast<int>(c));
    return out;
  }

  /// Rational functional phi with phi(row) = 0 for every lattice row,
  /// phi = 1 on `free_col` and 0 on the other free columns.
  std::vector<boost::rational<std::int64_t>> kernel_functional(int free_col) const {
    using Q = boost::rational<std::int64_t>;
    std::vector<Q> phi(columns_, Q(0));
    phi[static_cast<std::size_t>(free_col)] = 1;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      const int c = it->first;
      Q acc(0);
      for (const auto& [j, v] : it->second)
        if (j != c) acc += Q(v) * phi[static_cast<std::size_t>(j)];
      phi[static_cast<std::size_t>(c)] = -acc / Q(it->second.begin()->second);
    }
    return phi;
  }

 private:
  std::size_t columns_;
  std::map<int, SparseVector> rows_;
};

}  // namespace chromatope
