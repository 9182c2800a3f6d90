#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "chromatope/builders.hpp"
#include "chromatope/characteristic.hpp"

using namespace chromatope;

namespace {

// Cofactor expansion; slow but obviously right for n <= 4.
std::int64_t det_oracle(const std::vector<std::vector<std::int64_t>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  std::int64_t s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<std::int64_t>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    s += (c % 2 ? -1 : 1) * a[0][c] * det_oracle(minor);
  }
  return s;
}

std::vector<int> bad_vertices_oracle(const CombinatorialPolytope& p, const CharacteristicMatrix& l) {
  std::vector<int> out;
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    const auto& fs = p.vertex_facets[v];
    std::vector<std::vector<std::int64_t>> a(fs.size(), std::vector<std::int64_t>(fs.size()));
    for (std::size_t r = 0; r < fs.size(); ++r)
      for (std::size_t c = 0; c < fs.size(); ++c) a[r][c] = l.at(static_cast<int>(r), fs[c]);
    const auto d = det_oracle(a);
    if (d != 1 && d != -1) out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace

TEST_CASE("determinant agrees with cofactor expansion") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> e(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
    for (auto& row : a)
      for (auto& x : row) x = e(rng);
    CHECK(integer_determinant(a) == det_oracle(a));
  }
  CHECK(integer_determinant({}) == 1);
}

TEST_CASE("canonical matrices") {
  const auto c = cube(3);
  const auto l = canonical_characteristic(c.polytope.comb, *c.coloring);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 3; ++i) CHECK(l.at(i, j) == (i == j % 3 ? 1 : 0));
  CHECK(validate_characteristic(c.polytope.comb, l).valid);

  const auto sq = polygon(4);
  const auto ls = canonical_characteristic(sq.polytope.comb, *sq.coloring);
  CHECK(ls.columns == std::vector<std::vector<std::int64_t>>{{1, 0}, {0, 1}, {1, 0}, {0, 1}});

  const auto tt = total_truncation(simplex(3));
  CHECK(validate_characteristic(tt.polytope.comb, canonical_characteristic(tt.polytope.comb, *tt.coloring)).valid);
}

TEST_CASE("special matrices") {
  const auto s = simplex(2);
  const auto l = special_characteristic(s.polytope.comb, *s.coloring);
  std::vector<std::vector<std::int64_t>> cols = l.columns;
  std::sort(cols.begin(), cols.end());
  CHECK(cols == std::vector<std::vector<std::int64_t>>{{-1, -1}, {0, 1}, {1, 0}});
  CHECK(validate_characteristic(s.polytope.comb, l).valid);

  const auto t = truncate_vertex(cube(3), 0);
  const auto lt = special_characteristic(t.polytope.comb, *t.coloring);
  CHECK(lt.n == 3);
  CHECK(lt.m() == 7);
  CHECK(lt.columns.back() == std::vector<std::int64_t>{-1, -1, -1});
  CHECK(validate_characteristic(t.polytope.comb, lt).valid);

  // other sign vectors are also characteristic
  for (const auto& eps : {SignVector({1, -1, 1}), SignVector({1, 1, 1})})
    CHECK(validate_characteristic(t.polytope.comb, special_characteristic(t.polytope.comb, *t.coloring, eps)).valid);
  CHECK_THROWS_AS(SignVector({1, 0}), InvalidInput);
  CHECK_THROWS_AS(special_characteristic(t.polytope.comb, *t.coloring, SignVector({1, 1})), InvalidInput);
}

TEST_CASE("special coloring hypotheses") {
  const auto c = cube(3);
  CHECK_THROWS_AS(special_characteristic(c.polytope.comb, *c.coloring), HypothesisViolation);
  // four colors but color 3 on a square facet
  Coloring h{{0, 1, 2, 3, 1, 2}, 4};
  CHECK_THROWS_AS(special_characteristic(c.polytope.comb, h), HypothesisViolation);
  CHECK_THROWS_AS(canonical_characteristic(c.polytope.comb, h), HypothesisViolation);
  Coloring improper{{0, 0, 2, 0, 1, 2}, 3};
  CHECK_THROWS_AS(canonical_characteristic(c.polytope.comb, improper), HypothesisViolation);
  CHECK_THROWS_AS(validate_characteristic(c.polytope.comb, CharacteristicMatrix{3, {{1, 0, 0}}}), InvalidInput);
}

TEST_CASE("a zeroed column fails at every vertex of that facet") {
  const auto c = cube(3);
  auto l = canonical_characteristic(c.polytope.comb, *c.coloring);
  l.columns[4] = {0, 0, 0};
  const auto rep = validate_characteristic(c.polytope.comb, l);
  CHECK_FALSE(rep.valid);
  CHECK(rep.bad_vertices == common_vertices(c.polytope.comb, {4}));
}

TEST_CASE("single-entry mutations agree with the recomputed determinants") {
  std::mt19937_64 rng(5);
  for (const auto* d : {"cube:3", "prism:6", "truncate(cube:3,0)", "total(simplex:3)", "simplex:3"}) {
    const auto b = build(d);
    const auto& p = b.polytope.comb;
    const auto base = b.coloring->num_colors == p.dim ? canonical_characteristic(p, *b.coloring)
                                                      : special_characteristic(p, *b.coloring);
    INFO(d);
    for (int trial = 0; trial < 50; ++trial) {
      auto l = base;
      std::uniform_int_distribution<std::size_t> col(0, l.m() - 1);
      std::uniform_int_distribution<int> row(0, l.n - 1);
      const auto j = col(rng);
      const auto i = static_cast<std::size_t>(row(rng));
      l.columns[j][i] += (rng() & 1) ? 1 : -1;
      const auto rep = validate_characteristic(p, l);
      CHECK(rep.bad_vertices == bad_vertices_oracle(p, l));
    }
  }
}

TEST_CASE("overflow is reported") {
  const std::int64_t big = std::int64_t{1} << 62;
  CHECK_THROWS_AS(integer_determinant({{big, big}, {-big, big}}), ArithmeticOverflow);
}
