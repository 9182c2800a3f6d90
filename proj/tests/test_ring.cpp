#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "chromatope/builders.hpp"
#include "chromatope/characteristic.hpp"
#include "chromatope/identities.hpp"
#include "chromatope/ring.hpp"

using namespace chromatope;

namespace {

double det_real(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a[r][k]) > std::abs(a[piv][k])) piv = r;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      d = -d;
    }
    d *= a[k][k];
    if (a[k][k] == 0.0) return 0.0;
    for (std::size_t r = k + 1; r < n; ++r) {
      const double q = a[r][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[r][c] -= q * a[k][c];
    }
  }
  return d;
}

// Sign of a vertex: det of its characteristic columns times the
// orientation of its facet normals, both in facet-index order. The top
// class pairs with a vertex monomial as sign(v) / sign(ref).
int vertex_sign(const Polytope& p, const CharacteristicMatrix& l, int v) {
  const auto& fs = p.comb.vertex_facets[static_cast<std::size_t>(v)];
  const std::size_t n = fs.size();
  std::vector<std::vector<double>> lam(n, std::vector<double>(n)), nor(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) {
      lam[r][c] = static_cast<double>(l.at(static_cast<int>(r), fs[c]));
      nor[r][c] = p.geom->halfspaces[static_cast<std::size_t>(fs[c])].normal[r];
    }
  return (det_real(lam) > 0) == (det_real(nor) > 0) ? 1 : -1;
}

CharacteristicMatrix natural_matrix(const BuiltPolytope& b) {
  const auto& p = b.polytope.comb;
  return b.coloring->num_colors == p.dim ? canonical_characteristic(p, *b.coloring)
                                         : special_characteristic(p, *b.coloring);
}

RingElement random_element(const CombinatorialPolytope& p, int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> var(0, static_cast<int>(p.num_facets()) - 1), coef(-3, 3);
  RingElement x(p.num_facets());
  for (int t = 0; t < 4; ++t) {
    Monomial mono(p.num_facets(), 0);
    for (int d = 0; d < degree; ++d) ++mono[static_cast<std::size_t>(var(rng))];
    x.add_term(mono, coef(rng));
  }
  return x;
}

}  // namespace

TEST_CASE("golden values") {
  for (int n = 2; n <= 4; ++n) {
    const auto c = cube(n);
    const CohomologyRing ring(c.polytope.comb, canonical_characteristic(c.polytope.comb, *c.coloring));
    const auto w = vertex_class(c.polytope.comb, 0);
    CHECK(ring.integrate(ring.power(w, n), 0) == detail::factorial(n));
  }
  for (const auto* d : {"truncate(cube:3,0)", "truncate(cube:3,0,3,5)"}) {
    const auto b = build(d);
    const auto& p = b.polytope.comb;
    const CohomologyRing ring(p, special_characteristic(p, *b.coloring));
    const auto book = simplex_bookkeeping(p, *b.coloring);
    const auto t = simplicial_class(p, *b.coloring);
    INFO(d);
    CHECK(ring.integrate(ring.power(t, 3), book.anchor_vertex[0]) == static_cast<std::int64_t>(book.simplices.size()));
    for (std::size_t j = 0; j < book.simplices.size(); ++j)
      CHECK(ring.integrate(ring.power(ring.variable(book.simplices[j]), 3), book.anchor_vertex[j]) == 1);
  }
}

TEST_CASE("truncations at vertices of both parities cancel in t^n") {
  // vertices 0 and 7 of the cube have opposite orientation, so t1^3 and
  // t2^3 integrate to opposite signs against a common reference
  const auto b = build("truncate(cube:3,0,7)");
  const auto& p = b.polytope.comb;
  const CohomologyRing ring(p, special_characteristic(p, *b.coloring));
  const auto book = simplex_bookkeeping(p, *b.coloring);
  const int ref = book.anchor_vertex[0];
  CHECK(ring.integrate(ring.power(ring.variable(book.simplices[0]), 3), ref) == 1);
  CHECK(ring.integrate(ring.power(ring.variable(book.simplices[1]), 3), ref) == -1);
  CHECK(ring.integrate(ring.power(simplicial_class(p, *b.coloring), 3), ref) == 0);
}

TEST_CASE("relation suite on the catalog") {
  for (const auto* d : {"cube:2", "cube:3", "cube:4", "prism:4", "prism:6", "total(simplex:3)", "hexagon"}) {
    const auto b = build(d);
    INFO(d);
    for (const auto& c : canonical_identities(b.polytope.comb, *b.coloring)) {
      INFO(c.name << " " << c.counterexample);
      CHECK(c.holds);
      CHECK(c.instances > 0);
    }
  }
  for (const auto* d : {"simplex:2", "simplex:3", "truncate(cube:3,0)", "truncate(cube:3,0,3,5)"}) {
    const auto b = build(d);
    INFO(d);
    for (const auto& c : special_identities(b.polytope.comb, *b.coloring)) {
      INFO(c.name << " " << c.counterexample);
      CHECK(c.holds);
    }
  }
}

TEST_CASE("integration matches vertex signs") {
  std::mt19937_64 rng(3);
  for (const auto* d : {"cube:3", "prism:6", "truncate(cube:3,0,7)", "total(simplex:3)", "simplex:3"}) {
    const auto b = build(d);
    const auto& p = b.polytope;
    const auto l = natural_matrix(b);
    const CohomologyRing ring(p.comb, l);
    INFO(d);
    const int ref = static_cast<int>(rng() % p.num_vertices());
    std::vector<int> sign(p.num_vertices());
    for (std::size_t v = 0; v < p.num_vertices(); ++v) sign[v] = vertex_sign(p, l, static_cast<int>(v));
    for (int trial = 0; trial < 20; ++trial) {
      RingElement x(p.num_facets());
      std::int64_t expect = 0;
      for (int t = 0; t < 3; ++t) {
        const auto v = static_cast<int>(rng() % p.num_vertices());
        const std::int64_t c = static_cast<std::int64_t>(rng() % 7) - 3;
        x.add_term(ring.vertex_monomial(v), c);
        expect += c * sign[static_cast<std::size_t>(v)] * sign[static_cast<std::size_t>(ref)];
      }
      CHECK(ring.integrate(x, ref) == expect);
    }
  }
}

TEST_CASE("rewriting and lattice routes agree") {
  std::mt19937_64 rng(19);
  for (const auto* d : {"cube:3", "prism:6", "truncate(cube:3,0)", "simplex:3", "total(simplex:3)"}) {
    const auto b = build(d);
    const auto& p = b.polytope.comb;
    const CohomologyRing ring(p, natural_matrix(b));
    INFO(d);
    for (int deg = 1; deg <= p.dim; ++deg)
      for (int trial = 0; trial < 15; ++trial) {
        const auto x = random_element(p, deg, rng);
        const auto nf = ring.normal_form(x);
        CHECK(nf == ring.normal_form_by_lattice(x));
        for (const auto& [mono, c] : nf.terms()) {
          CHECK(is_square_free(mono));
          CHECK(ring.is_face(mono));
        }
        CHECK(ring.normal_form(nf) == nf);
      }
  }
}

TEST_CASE("normal form is a ring map") {
  std::mt19937_64 rng(23);
  const auto b = build("prism:6");
  const CohomologyRing ring(b.polytope.comb, natural_matrix(b));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_element(b.polytope.comb, 1, rng);
    const auto y = random_element(b.polytope.comb, 2, rng);
    CHECK(ring.normal_form(x * y) == ring.normal_form(ring.normal_form(x) * ring.normal_form(y)));
    CHECK(ring.normal_form(x + x * 2) == ring.normal_form(x) * 3);
  }
}

TEST_CASE("small identities by hand") {
  const auto c = cube(3);
  const auto& p = c.polytope.comb;
  const CohomologyRing ring(p, canonical_characteristic(p, *c.coloring));
  const VariableNames names(p.num_facets());
  auto parse = [&](const char* s) { return parse_ring_element(s, names); };
  CHECK(ring.is_zero_in_degree(parse("v1*v4")));
  CHECK(ring.is_zero_in_degree(parse("v2^2")));
  CHECK(ring.is_zero_in_degree(parse("v1+v4")));
  const auto w2 = parse("(v1+v2+v3)^2");
  CHECK_FALSE(ring.is_zero_in_degree(w2));
  CHECK(ring.equal_in_ring(w2, parse("2*(v1*v2+v1*v3+v2*v3)")));
  CHECK(ring.integrate(parse("v1*v2*v3"), 0) == 1);
  CHECK(ring.integrate(parse("(v1+v2+v3)^3"), 0) == 6);
  CHECK(ring.rank_in_degree(0) == 1);
  CHECK(ring.rank_in_degree(1) == 3);
  CHECK(ring.rank_in_degree(3) == 1);
  CHECK_THROWS_AS(ring.integrate(parse("v1*v2"), 0), InvalidInput);
  CHECK_THROWS_AS(ring.integrate(parse("v1*v2*v3"), 8), InvalidInput);
  CHECK_THROWS_AS(ring.is_zero_in_degree(parse("v1 + v1*v2")), InvalidInput);
}

TEST_CASE("square rule for simplex facets") {
  const auto b = truncate_vertex(cube(3), 0);
  const auto& p = b.polytope.comb;
  const CohomologyRing ring(p, special_characteristic(p, *b.coloring));
  const auto book = simplex_bookkeeping(p, *b.coloring);
  const VariableNames names(p.num_facets(), book.simplices);
  CHECK(names.name(6) == "t1");
  const auto t1 = parse_ring_element("t1", names);
  for (int c = 0; c < 3; ++c) {
    const auto vij = ring.variable(book.neighbour[0][static_cast<std::size_t>(c)]);
    CHECK(ring.equal_in_ring(t1 * t1, t1 * vij));
  }
  CHECK_FALSE(ring.is_zero_in_degree(t1 * t1));
}

TEST_CASE("parser and formatter") {
  const VariableNames names(4, {3});
  const auto x = parse_ring_element(" 3*v1*v2 - t1^2 + (v1 - v2)^2 ", names);
  CHECK(x.coefficient({1, 1, 0, 0}) == 1);
  CHECK(x.coefficient({2, 0, 0, 0}) == 1);
  CHECK(x.coefficient({0, 0, 0, 2}) == -1);
  CHECK(parse_ring_element(names.format(x), names) == x);
  CHECK(names.format(RingElement(4)) == "0");
  // the plain name stays usable as an alias
  CHECK(parse_ring_element("v4", names) == parse_ring_element("t1", names));
  for (const auto* bad : {"v9", "v1 +", "(v1", "v1^", "x2", "2**v1"})
    CHECK_THROWS_AS(parse_ring_element(bad, names), InvalidInput);
}

TEST_CASE("general matrices are rejected for reduction") {
  const auto c = cube(2);
  CharacteristicMatrix l{2, {{1, 0}, {0, 1}, {1, 2}, {0, 1}}};
  REQUIRE(validate_characteristic(c.polytope.comb, l).valid);
  const CohomologyRing ring(c.polytope.comb, l);
  CHECK_THROWS_AS(ring.normal_form(ring.variable(0)), UnsupportedMatrix);
  CHECK_THROWS_AS(ring.integrate(ring.variable(0) * ring.variable(1), 0), UnsupportedMatrix);
  CHECK_THROWS_AS(CohomologyRing(square_pyramid().polytope.comb, CharacteristicMatrix{3, {}}), InvalidInput);
}

TEST_CASE("integration is linear and normalized") {
  std::mt19937_64 rng(29);
  const auto b = build("prism:6");
  const auto& p = b.polytope.comb;
  const CohomologyRing ring(p, natural_matrix(b));
  for (std::size_t v = 0; v < p.num_vertices(); ++v)
    CHECK(ring.integrate(RingElement::monomial(ring.vertex_monomial(static_cast<int>(v))), static_cast<int>(v)) == 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_element(p, 3, rng), y = random_element(p, 3, rng);
    CHECK(ring.integrate(x * 2 - y, 0) == 2 * ring.integrate(x, 0) - ring.integrate(y, 0));
    CHECK(ring.integrate(x, 0) == ring.integrate(ring.normal_form(x), 0));
  }
}
