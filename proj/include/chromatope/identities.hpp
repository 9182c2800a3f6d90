#pragma once

#include <string>
#include <vector>

#include "chromatope/characteristic.hpp"
#include "chromatope/polytope.hpp"
#include "chromatope/ring.hpp"

namespace chromatope {

struct IdentityCheck {
  std::string name;
  bool holds = true;
  std::size_t instances = 0;
  std::string counterexample;  // first failing instance
};

namespace detail {

class IdentityRecorder {
 public:
  explicit IdentityRecorder(const CohomologyRing& ring) : ring_(ring) {}

  IdentityCheck& open(std::string name) {
    out_.push_back({std::move(name), true, 0, {}});
    return out_.back();
  }

  // Records whether lhs == rhs in the ring.
  void equal(const RingElement& lhs, const RingElement& rhs, const std::string& what) {
    auto& c = out_.back();
    ++c.instances;
    const auto a = ring_.reduce(lhs);
    const auto b = ring_.reduce(rhs);
    max_depth_ = std::max({max_depth_, a.max_depth, b.max_depth});
    if (!(a.value == b.value)) fail(what);
  }

  void truth(bool ok, const std::string& what) {
    ++out_.back().instances;
    if (!ok) fail(what);
  }

  int max_depth() const { return max_depth_; }
  std::vector<IdentityCheck> take() { return std::move(out_); }

 private:
  void fail(const std::string& what) {
    auto& c = out_.back();
    if (c.holds) c.counterexample = what;
    c.holds = false;
  }

  const CohomologyRing& ring_;
  std::vector<IdentityCheck> out_;
  int max_depth_ = 0;
};

inline std::int64_t factorial(int k) {
  std::int64_t r = 1;
  for (int i = 2; i <= k; ++i) r = checked_mul(r, i);
  return r;
}

}  // namespace detail

/// Relations of the ring for a proper n-coloring with the canonical matrix:
/// same-color products and squares vanish, color-class sums vanish, the
/// vertex class has the expected powers, and a generator may be replaced by
/// minus the other generators of its color inside any face monomial.
inline std::vector<IdentityCheck> canonical_identities(const CombinatorialPolytope& p, const Coloring& h) {
  const CohomologyRing ring(p, canonical_characteristic(p, h));
  const VariableNames names(p.num_facets());
  const int n = p.dim;
  const auto m = static_cast<int>(p.num_facets());
  detail::IdentityRecorder rec(ring);
  const RingElement zero(p.num_facets());
  auto var = [&](int j) { return ring.variable(j); };
  auto color = [&](int j) { return h.color[static_cast<std::size_t>(j)]; };

  rec.open("same_color_products_vanish");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (color(i) == color(j)) rec.equal(var(i) * var(j), zero, names.name(i) + "*" + names.name(j));

  rec.open("color_class_sums_vanish");
  for (int c = 0; c < h.num_colors; ++c) {
    RingElement s(p.num_facets());
    for (int j : h.facets_of_color(c)) s += var(j);
    rec.equal(s, zero, "color " + std::to_string(c));
  }

  rec.open("squares_vanish");
  for (int i = 0; i < m; ++i) rec.equal(var(i) * var(i), zero, names.name(i) + "^2");

  rec.open("vertex_class_top_power");
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    const auto w = vertex_class(p, static_cast<int>(v));
    rec.truth(ring.integrate(ring.power(w, n), static_cast<int>(v)) == detail::factorial(n),
              "vertex " + std::to_string(v));
  }

  rec.open("vertex_class_power_expansion");
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    const auto w = vertex_class(p, static_cast<int>(v));
    const auto& fs = p.vertex_facets[v];
    for (int k = 1; k <= n; ++k) {
      RingElement elem(p.num_facets());
      detail::for_each_subset(fs, static_cast<std::size_t>(k), [&](const std::vector<int>& sub) {
        Monomial mono(p.num_facets(), 0);
        for (int f : sub) mono[static_cast<std::size_t>(f)] = 1;
        elem.add_term(mono, 1);
      });
      const auto lhs = ring.power(w, k);
      const std::string what = "vertex " + std::to_string(v) + ", k=" + std::to_string(k);
      rec.equal(lhs, elem * detail::factorial(k), what);
      rec.truth(!ring.normal_form(lhs).is_zero(), what + " (nonzero)");
    }
  }

  rec.open("same_color_replacement");
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    const auto& fs = p.vertex_facets[v];
    for (int j1 : fs) {
      std::vector<int> others;
      for (int f : fs)
        if (f != j1) others.push_back(f);
      RingElement replacement(p.num_facets());
      for (int j : h.facets_of_color(color(j1)))
        if (j != j1) replacement -= var(j);
      for (std::size_t s = 0; s <= others.size(); ++s)
        detail::for_each_subset(others, s, [&](const std::vector<int>& sub) {
          Monomial mono(p.num_facets(), 0);
          for (int f : sub) mono[static_cast<std::size_t>(f)] = 1;
          const auto mu = RingElement::monomial(mono);
          rec.equal(var(j1) * mu, replacement * mu, names.name(j1) + " * " + names.format(mu));
        });
    }
  }

  rec.open("square_elimination_depth_at_most_2");
  rec.truth(rec.max_depth() <= 2, "max depth " + std::to_string(rec.max_depth()));
  return rec.take();
}

/// Relations for a special (n+1)-coloring with the sign-vector matrix
/// (preferred signs by default). `t` denotes the sum of the simplex facet
/// variables t_1..t_k.
inline std::vector<IdentityCheck> special_identities(const CombinatorialPolytope& p, const Coloring& h,
                                                     const SignVector& eps) {
  const CohomologyRing ring(p, special_characteristic(p, h, eps));
  const auto book = simplex_bookkeeping(p, h);
  const VariableNames names(p.num_facets(), book.simplices);
  const int n = p.dim;
  const auto m = static_cast<int>(p.num_facets());
  const auto k = static_cast<std::int64_t>(book.simplices.size());
  detail::IdentityRecorder rec(ring);
  const RingElement zero(p.num_facets());
  auto var = [&](int j) { return ring.variable(j); };
  auto color = [&](int j) { return h.color[static_cast<std::size_t>(j)]; };
  const bool preferred = eps.signs() == SignVector::preferred(n).signs();

  rec.open("same_color_products_vanish");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (color(i) == color(j)) rec.equal(var(i) * var(j), zero, names.name(i) + "*" + names.name(j));

  const auto t = simplicial_class(p, h);
  if (preferred) {
    rec.open("simplex_sum_equals_color_class");
    for (int c = 0; c < n; ++c) {
      RingElement s(p.num_facets());
      for (int j : h.facets_of_color(c)) s += var(j);
      rec.equal(t, s, "color " + std::to_string(c));
    }

    rec.open("simplex_square_rule");
    for (std::size_t j = 0; j < book.simplices.size(); ++j)
      for (int c = 0; c < n; ++c) {
        const auto tj = var(book.simplices[j]);
        const auto vij = var(book.neighbour[j][static_cast<std::size_t>(c)]);
        rec.equal(tj * tj, tj * vij, names.name(book.simplices[j]) + ", color " + std::to_string(c));
      }
  }

  rec.open("simplex_power_chain");
  for (std::size_t j = 0; j < book.simplices.size(); ++j) {
    const auto tj = var(book.simplices[j]);
    // t_j^n = v_1j t_j^(n-1) = v_1j v_2j t_j^(n-2) = ... = v_1j ... v_(n-1)j t_j
    RingElement prefix = RingElement::constant(p.num_facets(), 1);
    RingElement prev = ring.power(tj, n);
    for (int c = 0; c < n - 1; ++c) {
      prefix = prefix * var(book.neighbour[j][static_cast<std::size_t>(c)]);
      const auto next = prefix * ring.power(tj, n - 1 - c);
      rec.equal(prev, next, names.name(book.simplices[j]) + ", step " + std::to_string(c + 1));
      prev = next;
    }
  }

  rec.open("simplex_power_is_fundamental");
  for (std::size_t j = 0; j < book.simplices.size(); ++j)
    rec.truth(ring.integrate(ring.power(var(book.simplices[j]), n), book.anchor_vertex[j]) == 1,
              names.name(book.simplices[j]));

  rec.open("simplicial_class_top_power");
  {
    const auto tn = ring.power(t, n);
    rec.equal(tn, ring.power(var(book.simplices.front()), n) * k, "t^n vs k*t1^n");
    rec.truth(ring.integrate(tn, book.anchor_vertex.front()) == k, "integral of t^n");
  }
  return rec.take();
}

inline std::vector<IdentityCheck> special_identities(const CombinatorialPolytope& p, const Coloring& h) {
  return special_identities(p, h, SignVector::preferred(p.dim));
}

inline bool all_hold(const std::vector<IdentityCheck>& checks) {
  for (const auto& c : checks)
    if (!c.holds) return false;
  return true;
}

}  // namespace chromatope
