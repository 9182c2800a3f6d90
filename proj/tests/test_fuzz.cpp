#include <catch2/catch_amalgamated.hpp>

#include "chromatope/builders.hpp"
#include "chromatope/fuzz.hpp"
#include "chromatope/io.hpp"

using namespace chromatope;

namespace {

const FuzzProfile kProfiles[] = {FuzzProfile::partition, FuzzProfile::shifted_bricks, FuzzProfile::voronoi_merge,
                                 FuzzProfile::random_growth};

}  // namespace

TEST_CASE("profiles name round trip") {
  for (auto p : kProfiles) CHECK(parse_profile(to_string(p)) == p);
  for (auto c : {FuzzChecker::lebesgue, FuzzChecker::kkm, FuzzChecker::karasev, FuzzChecker::general})
    CHECK(parse_checker(to_string(c)) == c);
  CHECK_THROWS_AS(parse_profile("bricks"), InvalidInput);
  CHECK_THROWS_AS(parse_checker("lebesgue2"), InvalidInput);
}

TEST_CASE("random covers cover and respect the multiplicity bound") {
  for (const auto* d : {"cube:2", "hexagon", "cube:3", "simplex:3"}) {
    const auto b = build(d);
    const int n = b.polytope.dim();
    const auto cx = std::make_shared<const CellComplex>(grid_complex(b.polytope, 8));
    std::mt19937_64 rng(17);
    INFO(d);
    for (auto prof : kProfiles)
      for (int t = 0; t < 6; ++t) {
        const auto c = random_cover(cx, prof, n, rng);
        CHECK_NOTHROW(validate_cover(c));
        CHECK(multiplicity(c) <= n);
        for (const auto& s : c.sets) CHECK_FALSE(s.empty());
      }
  }
}

TEST_CASE("shifted bricks are sometimes redrawn") {
  const auto b = cube(3);
  const auto cx = std::make_shared<const CellComplex>(grid_complex(b.polytope, 16));
  std::mt19937_64 rng(21);
  int rejected = 0;
  for (int t = 0; t < 40; ++t) random_cover(cx, FuzzProfile::shifted_bricks, 3, rng, &rejected);
  CHECK(rejected > 0);
  // a bound nothing can meet exhausts the attempts
  CHECK_THROWS_AS(random_cover(cx, FuzzProfile::partition, 0, rng, nullptr, 5), Error);
}

TEST_CASE("fuzz reports are deterministic and independent of threads") {
  const auto b = cube(2);
  FuzzOptions opt;
  opt.profile = FuzzProfile::voronoi_merge;
  const auto one = fuzz_covers(b, b.coloring, 99, 40, opt);
  opt.threads = 3;
  const auto three = fuzz_covers(b, b.coloring, 99, 40, opt);
  CHECK(to_json(one) == to_json(three));
  CHECK(one.clean());
  CHECK(one.checker == "lebesgue");
  CHECK(one.witnesses.at("same_color_pair") == 40);
  const auto other = fuzz_covers(b, b.coloring, 100, 40, opt);
  CHECK(other.clean());

  const auto none = fuzz_covers(b, b.coloring, 1, 0, opt);
  CHECK(none.trials == 0);
  CHECK(none.witnesses.empty());
}

TEST_CASE("checker follows the coloring") {
  FuzzOptions opt;
  opt.grid = 8;
  CHECK(fuzz_covers(simplex(2), simplex(2).coloring, 1, 3, opt).checker == "kkm");
  CHECK(fuzz_covers(cube(3), std::nullopt, 1, 3, opt).checker == "karasev");
  const auto g = fuzz_covers(square_pyramid(), std::nullopt, 1, 3, opt);
  CHECK(g.checker == "general");
  CHECK(g.witnesses.at("two_k_faces") == 3);
  opt.checker = FuzzChecker::lebesgue;
  CHECK_THROWS_AS(fuzz_covers(cube(3), std::nullopt, 1, 3, opt), InvalidInput);
}

TEST_CASE("repro files reload to the same cover") {
  const auto b = build("hexagon");
  const auto cx = std::make_shared<const CellComplex>(grid_complex(b.polytope, 8));
  std::mt19937_64 rng(3);
  const auto c = random_cover(cx, FuzzProfile::random_growth, 2, rng);
  const auto path = std::filesystem::path("fuzz-test") / "cover.json";
  io::write_file(path, io::dump(io::cover_to_json("hexagon", c)));
  const auto back = io::cover_from_json(io::parse(io::read_file(path), "cover"));
  CHECK(back.cover.labels == c.labels);
  CHECK(back.cover.sets == c.sets);
  CHECK(back.cover.complex->size() == cx->size());
  const auto w1 = check_colorful_lebesgue(b.polytope.comb, *b.coloring, c);
  const auto w2 = check_colorful_lebesgue(back.polytope.polytope.comb, *back.polytope.coloring, back.cover);
  REQUIRE(w1);
  REQUIRE(w2);
  CHECK(io::to_json(*w1) == io::to_json(*w2));
  std::filesystem::remove_all("fuzz-test");
}
