// Acceptance run: one PASS/FAIL line per criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "chromatope/chromatope.hpp"

using namespace chromatope;

namespace {

using Clock = std::chrono::steady_clock;

const FuzzProfile kProfiles[] = {FuzzProfile::partition, FuzzProfile::shifted_bricks, FuzzProfile::voronoi_merge,
                                 FuzzProfile::random_growth};

const std::filesystem::path kRepro = "acceptance-repro";

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void fail(const std::string& why) {
    if (ok) note << "first failure: " << why << "; ";
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && s >= limit_s) o.fail("took " + std::to_string(s) + " s, limit " + std::to_string(limit_s) + " s");
  if (!o.ok) ++failures;
  std::printf("%s %2d %s (%.2f s) %s\n", o.ok ? "PASS" : "FAIL", id, title, s, o.note.str().c_str());
  std::fflush(stdout);
}

CharacteristicMatrix natural_matrix(const CombinatorialPolytope& p, const Coloring& h) {
  return h.num_colors == p.dim ? canonical_characteristic(p, h) : special_characteristic(p, h);
}

// Runs `total` seeded covers split evenly over the four profiles.
void fuzz_all_profiles(Outcome& o, const char* spec, const std::optional<Coloring>& h, int total, FuzzChecker checker,
                       const char* want) {
  const auto b = build(spec);
  int found = 0;
  for (auto prof : kProfiles) {
    FuzzOptions opt;
    opt.profile = prof;
    opt.checker = checker;
    opt.repro_dir = kRepro;
    opt.polytope_spec = spec;
    const auto r = fuzz_covers(b, h, 20260101, total / 4, opt);
    found += r.witnesses.count(want) ? r.witnesses.at(want) : 0;
    for (const auto& a : r.absences) o.fail(std::string(spec) + " absence, repro " + a.repro);
    for (const auto& f : r.failures) o.fail(std::string(spec) + " re-check: " + f);
  }
  o.note << spec << " " << found << "/" << total << "; ";
  if (found != total) o.fail(std::string(spec) + " witnesses " + std::to_string(found));
}

const std::vector<std::string> kCatalog = {
    "cube:2",  "cube:3",  "cube:4",  "simplex:2", "simplex:3", "simplex:4", "prism:3", "prism:4",
    "prism:5", "prism:6", "prism:7", "prism:8",   "truncate(cube:3,0)", "truncate(cube:3,0,3,5)",
    "truncate(simplex:3,0)", "truncate(prism:6,0)", "total(simplex:3)", "total(cube:3)"};

}  // namespace

int main() {
  criterion(1, "ring golden values", 10.0, [](Outcome& o) {
    for (int n = 2; n <= 4; ++n) {
      const auto c = cube(n);
      const CohomologyRing ring(c.polytope.comb, canonical_characteristic(c.polytope.comb, *c.coloring));
      const auto got = ring.integrate(ring.power(vertex_class(c.polytope.comb, 0), n), 0);
      o.note << "cube(" << n << ") w^n=" << got << "; ";
      if (got != detail::factorial(n)) o.fail("cube " + std::to_string(n));
    }
    for (const auto* d : {"truncate(cube:3,0)", "truncate(cube:3,0,3,5)"}) {
      const auto b = build(d);
      const auto& p = b.polytope.comb;
      const CohomologyRing ring(p, special_characteristic(p, *b.coloring));
      const auto book = simplex_bookkeeping(p, *b.coloring);
      const auto k = static_cast<std::int64_t>(book.simplices.size());
      const auto tn = ring.integrate(ring.power(simplicial_class(p, *b.coloring), 3), book.anchor_vertex[0]);
      o.note << d << " t^n=" << tn << "; ";
      if (tn != k) o.fail(d);
      for (std::size_t j = 0; j < book.simplices.size(); ++j)
        if (ring.integrate(ring.power(ring.variable(book.simplices[j]), 3), book.anchor_vertex[j]) != 1)
          o.fail(std::string(d) + " t_j^n");
    }
  });

  criterion(2, "relation suite", 0, [](Outcome& o) {
    std::size_t instances = 0;
    for (int n = 2; n <= 4; ++n) {
      const auto c = cube(n);
      for (const auto& chk : canonical_identities(c.polytope.comb, *c.coloring)) {
        instances += chk.instances;
        if (!chk.holds) o.fail("cube(" + std::to_string(n) + ") " + chk.name + ": " + chk.counterexample);
      }
    }
    for (const auto* d : {"prism:6", "total(simplex:3)"}) {
      const auto b = build(d);
      for (const auto& chk : canonical_identities(b.polytope.comb, *b.coloring)) {
        instances += chk.instances;
        if (!chk.holds) o.fail(std::string(d) + " " + chk.name);
      }
    }
    for (const auto* d : {"simplex:2", "simplex:3", "simplex:4", "truncate(cube:3,0)", "truncate(cube:3,0,3,5)"}) {
      const auto b = build(d);
      for (const auto& chk : special_identities(b.polytope.comb, *b.coloring)) {
        instances += chk.instances;
        if (!chk.holds) o.fail(std::string(d) + " " + chk.name + ": " + chk.counterexample);
      }
    }
    o.note << instances << " instances";
  });

  criterion(3, "parity criterion vs exhaustive coloring", 30.0, [](Outcome& o) {
    int agree = 0;
    for (const auto& d : kCatalog) {
      const auto p = build(d).polytope.comb;
      const bool a = joswig_colorable(p).colorable;
      const bool b = find_coloring(p, p.dim).has_value();
      if (a == b)
        ++agree;
      else
        o.fail(d);
    }
    o.note << agree << "/" << kCatalog.size() << " agree";
  });

  criterion(4, "characteristic validation and mutations", 0, [](Outcome& o) {
    std::mt19937_64 rng(4);
    int matrices = 0, rejected = 0, mutations = 0;
    for (const auto& d : kCatalog) {
      const auto b = build(d);
      const auto& p = b.polytope.comb;
      std::vector<Coloring> colorings;
      if (auto h = find_coloring(p, p.dim)) colorings.push_back(*h);
      if (b.coloring && b.coloring->num_colors == p.dim + 1) {
        bool special = true;
        try {
          require_special_coloring(p, *b.coloring);
        } catch (const HypothesisViolation&) {
          special = false;
        }
        if (special) colorings.push_back(*b.coloring);
      }
      for (const auto& h : colorings) {
        const auto l = natural_matrix(p, h);
        ++matrices;
        if (!validate_characteristic(p, l).valid) o.fail(d + " base matrix");
        std::vector<std::pair<std::size_t, std::size_t>> support;
        for (std::size_t j = 0; j < l.m(); ++j)
          for (std::size_t i = 0; i < static_cast<std::size_t>(l.n); ++i)
            if (l.columns[j][i] != 0) support.emplace_back(j, i);
        for (int t = 0; t < 50; ++t) {
          auto m = l;
          const auto [j, i] = support[rng() % support.size()];
          m.columns[j][i] += (rng() & 1) ? 1 : -1;
          ++mutations;
          if (!validate_characteristic(p, m).valid)
            ++rejected;
          else
            o.fail(d + " mutation kept unimodularity");
        }
      }
    }
    o.note << matrices << " matrices valid, " << rejected << "/" << mutations << " mutations rejected";
  });

  criterion(5, "colorful Lebesgue fuzz", 60.0, [](Outcome& o) {
    for (const auto* d : {"cube:2", "cube:3", "hexagon"})
      fuzz_all_profiles(o, d, build(d).coloring, 500, FuzzChecker::lebesgue, "same_color_pair");
  });

  criterion(6, "colorful KKM fuzz", 0, [](Outcome& o) {
    for (const auto* d : {"simplex:2", "simplex:3", "truncate(cube:3,0)"})
      fuzz_all_profiles(o, d, build(d).coloring, 300, FuzzChecker::kkm, "all_colors");
  });

  criterion(7, "Karasev fuzz", 0, [](Outcome& o) {
    for (const auto* d : {"cube:3", "hexagon"}) fuzz_all_profiles(o, d, std::nullopt, 300, FuzzChecker::karasev, "many_facets");
  });

  criterion(8, "quantitative checks on cube(3)", 0, [](Outcome& o) {
    const auto b = cube(3);
    const auto& p = b.polytope.comb;
    const auto& h = *b.coloring;
    const auto cx = std::make_shared<const CellComplex>(grid_complex(b.polytope, 8));
    auto box = [&](double x0, double x1, double y0, double y1, double z0, double z1) {
      std::vector<int> out;
      for (std::size_t c = 0; c < cx->size(); ++c) {
        const auto& m = cx->cells[c].centroid;
        if (m[0] > x0 && m[0] < x1 && m[1] > y0 && m[1] < y1 && m[2] > z0 && m[2] < z1) out.push_back(static_cast<int>(c));
      }
      return out;
    };
    // k = 1: four disjoint corner boxes on the bottom face, each touching
    // one facet of every color; k = 2: two boxes sharing a wall
    const double a = 3.0 / 8.0;
    const CoverInstance corners{cx, {"A", "B", "C", "D"},
                                {box(0, a, 0, a, 0, a), box(1 - a, 1, 0, a, 0, a), box(0, a, 1 - a, 1, 0, a),
                                 box(1 - a, 1, 1 - a, 1, 0, a)}};
    const CoverInstance pair{cx, {"L", "R"}, {box(0, .5, 0, .5, 0, .5), box(.5, 1, 0, .5, 0, .5)}};
    // expected number of k-faces met in the witness class, all 8 vertices
    const std::size_t expect[3] = {0, 4, 2};
    for (int k = 1; k <= 2; ++k) {
      const auto& fam = k == 1 ? corners : pair;
      if (multiplicity(fam) != k) o.fail("family multiplicity for k=" + std::to_string(k));
      for (int v = 0; v < 8; ++v) {
        const auto w = check_quantitative_lebesgue(p, h, fam, k, v);
        const std::string tag = "k=" + std::to_string(k) + " V=" + std::to_string(v);
        if (!w) {
          o.fail(tag + " no witness");
          continue;
        }
        if (w->faces.size() < (std::size_t{1} << (3 - k))) o.fail(tag + " too few faces");
        if (w->faces.size() != expect[k]) o.fail(tag + " face count " + std::to_string(w->faces.size()));
        const auto chk = verify_complement_witness(p, h, fam, *w, v);
        if (!chk.ok) o.fail(tag + " re-check: " + chk.reason);
      }
      o.note << "k=" << k << ": " << expect[k] << " faces at each of 8 vertices; ";
    }
  });

  criterion(9, "general polytopes via total truncation", 0, [](Outcome& o) {
    for (const auto* d : {"pyramid", "octahedron"}) fuzz_all_profiles(o, d, std::nullopt, 100, FuzzChecker::general, "two_k_faces");
    // cube: the general route and the Lebesgue checker see the same covers
    const auto b = cube(3);
    const auto cx = std::make_shared<const CellComplex>(grid_complex(b.polytope, 16));
    const auto tg = truncate_for_grid(b.polytope, *cx);
    int agree = 0;
    for (int t = 0; t < 100; ++t) {
      std::seed_seq ss{9u, static_cast<unsigned>(t)};
      std::mt19937_64 rng(ss);
      const auto c = random_cover(cx, kProfiles[t % 4], 3, rng);
      const auto wl = check_colorful_lebesgue(b.polytope.comb, *b.coloring, c);
      const auto wg = check_general_polytope(b.polytope, c, tg);
      if (wl && wg && verify_witness(b.polytope.comb, &*b.coloring, c, *wl).ok &&
          verify_general_witness(b.polytope, c, tg, *wg).ok)
        ++agree;
      else
        o.fail("cube consistency trial " + std::to_string(t));
    }
    o.note << "cube consistency " << agree << "/100";
  });

  criterion(10, "hex has no ties", 0, [](Outcome& o) {
    int hex_games = 0, cube_games = 0, ties = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const auto board = std::make_shared<const hex::Board>(hex::random_board(polygon(6), 20, s));
      const auto r = hex::no_tie_check(board, 100, s, kRepro);
      hex_games += r.trials;
      ties += r.ties;
      for (const auto& f : r.repro) o.fail("tie, repro " + f);
    }
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto board = std::make_shared<const hex::Board>(hex::random_board(cube(3), 32, s));
      const auto r = hex::no_tie_check(board, 100, s, kRepro);
      cube_games += r.trials;
      ties += r.ties;
      for (const auto& f : r.repro) o.fail("tie, repro " + f);
    }
    int instrumented = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto board = std::make_shared<const hex::Board>(s % 2 ? hex::random_board(cube(3), 32, 100 + s)
                                                                  : hex::random_board(polygon(6), 20, 100 + s));
      const auto pols = s % 3 ? std::vector<hex::Policy>{hex::Policy::uniform_random}
                              : std::vector<hex::Policy>{hex::Policy::connectivity_greedy, hex::Policy::uniform_random};
      const auto st = hex::random_playout(board, s, pols, true);  // throws on any mismatch
      if (!st.winner()) o.fail("instrumented game without winner");
      ++instrumented;
    }
    o.note << hex_games << " hexagon + " << cube_games << " cube playouts, " << ties << " ties; " << instrumented
           << " instrumented games agree";
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
