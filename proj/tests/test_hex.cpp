#include <catch2/catch_amalgamated.hpp>

#include <deque>

#include "chromatope/builders.hpp"
#include "chromatope/hex.hpp"

using namespace chromatope;
using namespace chromatope::hex;

namespace {

std::shared_ptr<const Board> shared(Board b) { return std::make_shared<const Board>(std::move(b)); }

int nearest(const std::vector<Point>& sites, const Point& x) {
  int best = 0;
  for (std::size_t i = 1; i < sites.size(); ++i)
    if (geom::distance(sites[i], x) < geom::distance(sites[static_cast<std::size_t>(best)], x)) best = static_cast<int>(i);
  return best;
}

// x inside the ordered convex polygon (with slack for the boundary).
bool in_polygon(const std::vector<Point>& poly, const Point& x) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    if ((b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) < -1e-9) return false;
  }
  return true;
}

std::vector<Point> sites_of(const Board& b) {
  std::vector<Point> s;
  for (const auto& c : b.cells) s.push_back(c.site);
  return s;
}

}  // namespace

TEST_CASE("hexagon targets and partners") {
  const auto b = random_board(polygon(6), 20, 1);
  REQUIRE(b.players() == 2);
  CHECK(b.targets == std::vector<int>{0, 5});  // AB for red, FA for blue
  CHECK(b.polytope.polytope.comb.facets[0] == "AB");
  CHECK(b.polytope.polytope.comb.facets[5] == "FA");
  CHECK(b.coloring.facets_of_color(0) == std::vector<int>{0, 2, 4});  // AB, CD, EF
  CHECK(b.coloring.facets_of_color(1) == std::vector<int>{1, 3, 5});  // BC, DE, FA
}

TEST_CASE("symmetric sites on the square give quadrants") {
  const auto b = build_board(cube(2), *cube(2).coloring, 0, {{.25, .25}, {.75, .25}, {.25, .75}, {.75, .75}});
  REQUIRE(b.size() == 4);
  for (const auto& c : b.cells) {
    CHECK(c.vertices.size() == 4);
    CHECK(c.facets.size() == 2);
    CHECK(c.neighbours.size() == 2);
    CHECK(geom::polygon_area(c.vertices) == Catch::Approx(.25));
  }
  CHECK(b.cells[0].facets == std::vector<int>{0, 1});
  CHECK(b.cells[3].facets == std::vector<int>{2, 3});
  // diagonal quadrants meet in a point only
  CHECK(std::find(b.cells[0].neighbours.begin(), b.cells[0].neighbours.end(), 3) == b.cells[0].neighbours.end());
}

TEST_CASE("a single site owns everything") {
  const auto b = build_board(polygon(6), *polygon(6).coloring, 0, {{0.1, -0.2}});
  REQUIRE(b.size() == 1);
  CHECK(b.cells[0].facets == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(b.cells[0].vertices.size() == 6);
  // one move connects AB to CD
  GameState st(shared(b));
  st.apply({0, 0});
  CHECK(st.status() == Status::won);
  CHECK(st.winner()->other == 2);
}

TEST_CASE("cells match nearest-site sampling") {
  const auto b = random_board(polygon(6), 20, 7);
  const auto sites = sites_of(b);
  const auto& g = *b.polytope.polytope.geom;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int inside = 0;
  double area = 0.0;
  for (const auto& c : b.cells) area += geom::polygon_area(c.vertices);
  CHECK(area == Catch::Approx(3.0 * std::sqrt(3.0) / 2.0));
  while (inside < 10000) {
    const Point x{u(rng), u(rng)};
    bool in = true;
    for (const auto& h : g.halfspaces) in = in && geom::slack(h, x) > 0;
    if (!in) continue;
    ++inside;
    CHECK(in_polygon(b.cells[static_cast<std::size_t>(nearest(sites, x))].vertices, x));
  }
  // sampled boundary points: the owner's cell lists the facet
  for (std::size_t f = 0; f < 6; ++f) {
    const auto& a = g.coords[f];
    const auto& e = g.coords[(f + 1) % 6];
    for (int s = 1; s < 200; ++s) {
      const double t = s / 200.0;
      const Point x{a[0] + t * (e[0] - a[0]), a[1] + t * (e[1] - a[1])};
      const auto& fs = b.cells[static_cast<std::size_t>(nearest(sites, x))].facets;
      CHECK(std::count(fs.begin(), fs.end(), static_cast<int>(f)) == 1);
    }
  }
  // equidistant midpoints with a clear margin sit on a shared wall
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      const Point m{(sites[i][0] + sites[j][0]) / 2, (sites[i][1] + sites[j][1]) / 2};
      const double d = geom::distance(sites[i], m);
      bool clear = true;
      for (std::size_t k = 0; k < sites.size(); ++k)
        if (k != i && k != j) clear = clear && geom::distance(sites[k], m) > d + 1e-6;
      for (const auto& h : g.halfspaces) clear = clear && geom::slack(h, m) > 1e-6;
      if (!clear) continue;
      const auto& nb = b.cells[i].neighbours;
      CHECK(std::count(nb.begin(), nb.end(), static_cast<int>(j)) == 1);
    }
}

TEST_CASE("three dimensional boards") {
  const auto b = random_board(cube(3), 32, 3);
  CHECK(b.players() == 3);
  CHECK(b.targets == std::vector<int>{0, 1, 2});
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int j : b.cells[i].neighbours) {
      const auto& back = b.cells[static_cast<std::size_t>(j)].neighbours;
      CHECK(std::count(back.begin(), back.end(), static_cast<int>(i)) == 1);
    }
  std::set<int> touched;
  for (const auto& c : b.cells) touched.insert(c.facets.begin(), c.facets.end());
  CHECK(touched.size() == 6);
  CHECK_THROWS_AS(random_board(cube(4), 10, 1), InvalidInput);
}

TEST_CASE("board hypotheses") {
  const auto sq = cube(2);
  CHECK_THROWS_AS(build_board(sq, *sq.coloring, 0, {{0.0, 0.5}}), InvalidInput);
  CHECK_THROWS_AS(build_board(sq, *sq.coloring, 0, {{0.5, 0.5}, {0.5, 0.5}}), InvalidInput);
  CHECK_THROWS_AS(build_board(sq, *sq.coloring, 9, {{0.5, 0.5}}), InvalidInput);
  CHECK_THROWS_AS(build_board(sq, Coloring{{0, 0, 1, 1}, 2}, 0, {{0.5, 0.5}}), HypothesisViolation);
  CHECK_THROWS_AS(random_board(simplex(2), 5, 1), HypothesisViolation);
}

TEST_CASE("moves and errors") {
  GameState st(shared(random_board(polygon(6), 20, 1)));
  CHECK(st.legal_moves().size() == 20);
  st.apply({0, 4});
  CHECK(st.legal_moves().size() == 19);
  CHECK(st.turn() == 1);
  CHECK(st.version() == 1);
  auto reason = [&](const Move& m) {
    try {
      st.apply(m);
    } catch (const GameError& e) {
      return e.reason();
    }
    return std::string("none");
  };
  CHECK(reason({1, 4}) == "cell_claimed");
  CHECK(reason({0, 5}) == "wrong_player");
  CHECK(reason({1, 20}) == "unknown_cell");
  CHECK(reason({1, -1}) == "unknown_cell");
  CHECK(st.version() == 1);
}

TEST_CASE("a red path from AB to another red edge wins") {
  const auto board = shared(random_board(polygon(6), 20, 5));
  const auto& b = *board;
  // shortest cell path from AB to CD or EF
  std::vector<int> prev(b.size(), -2);
  std::deque<int> q;
  for (std::size_t c = 0; c < b.size(); ++c)
    if (std::count(b.cells[c].facets.begin(), b.cells[c].facets.end(), 0)) {
      prev[c] = -1;
      q.push_back(static_cast<int>(c));
    }
  int end = -1;
  while (!q.empty() && end < 0) {
    const int c = q.front();
    q.pop_front();
    for (int f : b.cells[static_cast<std::size_t>(c)].facets)
      if (f == 2 || f == 4) end = c;
    for (int nb : b.cells[static_cast<std::size_t>(c)].neighbours)
      if (prev[static_cast<std::size_t>(nb)] == -2) {
        prev[static_cast<std::size_t>(nb)] = c;
        q.push_back(nb);
      }
  }
  REQUIRE(end >= 0);
  std::vector<int> path;
  for (int c = end; c >= 0; c = prev[static_cast<std::size_t>(c)]) path.push_back(c);

  // blue stays away from FA, so blue cannot win
  std::vector<int> blue;
  for (std::size_t c = 0; c < b.size(); ++c)
    if (!std::count(path.begin(), path.end(), static_cast<int>(c)) &&
        !std::count(b.cells[c].facets.begin(), b.cells[c].facets.end(), 5))
      blue.push_back(static_cast<int>(c));
  REQUIRE(blue.size() + 1 >= path.size());
  GameState st(board);
  for (std::size_t i = 0; i < path.size() && st.status() == Status::ongoing; ++i) {
    st.apply({0, path[i]});
    if (st.status() == Status::ongoing) st.apply({1, blue[i]});
  }
  REQUIRE(st.status() == Status::won);
  CHECK(st.winner()->player == 0);
  CHECK(st.winner()->target == 0);
  CHECK((st.winner()->other == 2 || st.winner()->other == 4));
  CHECK(batch_winner(b, st.owner()) == st.winner());
  CHECK_THROWS_AS(st.apply({1, blue.back()}), GameError);
  CHECK(st.legal_moves().empty());
}

TEST_CASE("incremental winner equals the batch scan") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto board = shared(s % 2 ? random_board(cube(3), 32, s) : random_board(polygon(6), 24, s));
    CHECK_NOTHROW(random_playout(board, s, {Policy::uniform_random}, true));
    CHECK_NOTHROW(random_playout(board, s, {Policy::connectivity_greedy, Policy::uniform_random}, true));
  }
}

TEST_CASE("no ties") {
  const auto hexb = shared(random_board(polygon(6), 20, 11));
  const auto r = no_tie_check(hexb, 200, 4, "hex-test");
  CHECK(r.ties == 0);
  CHECK(r.wins[0] + r.wins[1] == 200);
  CHECK(r.max_moves <= 20);
  const auto r2 = no_tie_check(hexb, 200, 4, "hex-test", 3);
  CHECK(to_json(r) == to_json(r2));
  const auto cube3 = shared(random_board(cube(3), 32, 11));
  const auto r3 = no_tie_check(cube3, 100, 4, "hex-test");
  CHECK(r3.ties == 0);
  CHECK(r3.wins.size() == 3);
}

TEST_CASE("greedy beats random") {
  int greedy = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto board = shared(random_board(polygon(6), 20, 1000 + s));
    const auto pols = s % 2 ? std::vector<Policy>{Policy::connectivity_greedy, Policy::uniform_random}
                            : std::vector<Policy>{Policy::uniform_random, Policy::connectivity_greedy};
    const auto st = random_playout(board, s, pols);
    greedy += st.winner()->player == static_cast<int>(s % 2 ? 0 : 1);
  }
  CHECK(greedy > 100);
  CHECK(parse_policy("greedy") == Policy::connectivity_greedy);
  CHECK_THROWS_AS(parse_policy("minimax"), InvalidInput);
}

TEST_CASE("state snapshots") {
  GameState st(shared(random_board(polygon(6), 20, 1)));
  st.apply({0, 3});
  const auto j = state_json(st);
  CHECK(j["version"] == 1);
  CHECK(j["turn"] == 1);
  CHECK(j["status"] == "ongoing");
  CHECK(j["cells"].size() == 20);
  CHECK(j["cells"][3]["owner"] == 0);
  CHECK(j["cells"][4]["owner"].is_null());
  CHECK(j["facets"][5]["name"] == "FA");
  CHECK(j["winner"].is_null());
}
