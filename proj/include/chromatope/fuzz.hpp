#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "chromatope/cover.hpp"
#include "chromatope/io.hpp"

namespace chromatope {

enum class FuzzProfile { partition, shifted_bricks, voronoi_merge, random_growth };
enum class FuzzChecker { lebesgue, kkm, karasev, general };

inline const char* to_string(FuzzProfile p) {
  switch (p) {
    case FuzzProfile::partition: return "partition";
    case FuzzProfile::shifted_bricks: return "shifted-bricks";
    case FuzzProfile::voronoi_merge: return "voronoi-merge";
    case FuzzProfile::random_growth: return "random-growth";
  }
  return "?";
}

inline const char* to_string(FuzzChecker c) {
  switch (c) {
    case FuzzChecker::lebesgue: return "lebesgue";
    case FuzzChecker::kkm: return "kkm";
    case FuzzChecker::karasev: return "karasev";
    case FuzzChecker::general: return "general";
  }
  return "?";
}

inline FuzzProfile parse_profile(const std::string& s) {
  for (auto p : {FuzzProfile::partition, FuzzProfile::shifted_bricks, FuzzProfile::voronoi_merge,
                 FuzzProfile::random_growth})
    if (s == to_string(p)) return p;
  throw InvalidInput("unknown fuzz profile '" + s + "'");
}

inline FuzzChecker parse_checker(const std::string& s) {
  for (auto c : {FuzzChecker::lebesgue, FuzzChecker::kkm, FuzzChecker::karasev, FuzzChecker::general})
    if (s == to_string(c)) return c;
  throw InvalidInput("unknown checker '" + s + "'");
}

namespace detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

// Cell partition -> cover with one closed set per label (empty labels dropped).
inline CoverInstance from_partition(std::shared_ptr<const CellComplex> cx, const std::vector<int>& part) {
  std::map<int, std::vector<int>> by;
  for (std::size_t c = 0; c < part.size(); ++c) by[part[c]].push_back(static_cast<int>(c));
  CoverInstance out{std::move(cx), {}, {}};
  for (auto& [l, cells] : by) {
    out.labels.push_back("L" + std::to_string(out.sets.size()));
    out.sets.push_back(std::move(cells));
  }
  return out;
}

// One pass over subdivision vertices; where more than n labels meet, the
// surplus labels are merged into one. Merging never raises a count, so
// every vertex ends at <= n.
inline void merge_repair(const CellComplex& cx, std::vector<int>& part, int n) {
  std::vector<int> parent(part.empty() ? 0 : static_cast<std::size_t>(*std::max_element(part.begin(), part.end())) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  std::vector<int> ls;
  for (const auto& inc : cx.vertex_cells) {
    ls.clear();
    for (int c : inc) ls.push_back(find(part[static_cast<std::size_t>(c)]));
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    for (std::size_t i = static_cast<std::size_t>(n); i < ls.size(); ++i)
      parent[static_cast<std::size_t>(ls[i])] = ls[static_cast<std::size_t>(n) - 1];
  }
  for (auto& l : part) l = find(l);
}

inline std::vector<int> level_bands(const CellComplex& cx, Rng& rng) {
  const auto n = static_cast<std::size_t>(cx.dim);
  const int labels = uniform_int(rng, 2, 5);
  const int waves = uniform_int(rng, 1, 3);
  std::vector<std::vector<double>> k(static_cast<std::size_t>(waves), std::vector<double>(n));
  std::vector<double> amp(static_cast<std::size_t>(waves)), phase(static_cast<std::size_t>(waves)), lin(n);
  double span = 0.0;
  for (std::size_t i = 0; i < n; ++i) span = std::max(span, cx.box.hi[i] - cx.box.lo[i]);
  for (int w = 0; w < waves; ++w) {
    for (auto& x : k[static_cast<std::size_t>(w)]) x = uniform(rng, -6.0, 6.0) / span;
    amp[static_cast<std::size_t>(w)] = uniform(rng, 0.0, 0.5);
    phase[static_cast<std::size_t>(w)] = uniform(rng, 0.0, 6.283185307179586);
  }
  for (auto& x : lin) x = uniform(rng, -1.0, 1.0) / span;
  const double scale = uniform(rng, 1.5, 6.0);
  std::vector<int> part;
  for (const auto& cell : cx.cells) {
    double f = geom::dot(lin, cell.centroid);
    for (int w = 0; w < waves; ++w)
      f += amp[static_cast<std::size_t>(w)] * std::sin(geom::dot(k[static_cast<std::size_t>(w)], cell.centroid) + phase[static_cast<std::size_t>(w)]);
    const auto band = static_cast<long long>(std::floor(f * scale));
    part.push_back(static_cast<int>(((band % labels) + labels) % labels));
  }
  return part;
}

inline std::vector<int> shifted_bricks(const CellComplex& cx, Rng& rng, int n) {
  const auto d = static_cast<std::size_t>(cx.dim);
  const int labels = uniform_int(rng, 2, n + 1);
  std::vector<int> size(d);
  for (auto& s : size) s = uniform_int(rng, 1, std::max(1, cx.grid / 2));
  const int layers = cx.grid / size[d - 1] + 1;
  std::vector<std::vector<int>> shift(static_cast<std::size_t>(layers), std::vector<int>(d - 1));
  for (auto& row : shift)
    for (std::size_t i = 0; i + 1 < d; ++i) row[i] = uniform_int(rng, 0, size[i] - 1);
  std::map<std::vector<int>, int> brick_label;
  std::vector<int> part;
  for (const auto& cell : cx.cells) {
    const auto& g = cell.grid_index;
    const int layer = g[d - 1] / size[d - 1];
    std::vector<int> key{layer};
    for (std::size_t i = 0; i + 1 < d; ++i)
      key.push_back((g[i] + shift[static_cast<std::size_t>(layer)][i]) / size[i]);
    auto it = brick_label.find(key);
    if (it == brick_label.end()) it = brick_label.emplace(key, uniform_int(rng, 0, labels - 1)).first;
    part.push_back(it->second);
  }
  return part;
}

inline std::vector<int> voronoi_sites(const CellComplex& cx, Rng& rng, int n) {
  const int sites = uniform_int(rng, n + 1, 12);
  std::vector<Point> s;
  for (int i = 0; i < sites; ++i) {
    const auto& c = cx.cells[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(cx.size()) - 1))];
    s.push_back(c.centroid);
  }
  std::vector<int> part;
  for (const auto& cell : cx.cells) {
    int best = 0;
    for (int i = 1; i < sites; ++i)
      if (geom::distance(cell.centroid, s[static_cast<std::size_t>(i)]) <
          geom::distance(cell.centroid, s[static_cast<std::size_t>(best)]))
        best = i;
    part.push_back(best);
  }
  return part;
}

inline std::vector<int> random_growth(const CellComplex& cx, Rng& rng, int n) {
  const int seeds = uniform_int(rng, 2, 10);
  std::vector<int> part(cx.size(), -1);
  std::vector<int> frontier;
  for (int s = 0; s < seeds; ++s) {
    const int c = uniform_int(rng, 0, static_cast<int>(cx.size()) - 1);
    if (part[static_cast<std::size_t>(c)] >= 0) continue;
    part[static_cast<std::size_t>(c)] = s;
    frontier.push_back(c);
  }
  while (!frontier.empty()) {
    const auto i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(frontier.size()) - 1));
    const int c = frontier[i];
    std::vector<int> open;
    for (int b : cx.wall_adjacency[static_cast<std::size_t>(c)])
      if (part[static_cast<std::size_t>(b)] < 0) open.push_back(b);
    if (open.empty()) {
      frontier[i] = frontier.back();
      frontier.pop_back();
      continue;
    }
    const int b = open[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(open.size()) - 1))];
    part[static_cast<std::size_t>(b)] = part[static_cast<std::size_t>(c)];
    frontier.push_back(b);
  }
  merge_repair(cx, part, n);
  return part;
}

// Grows sets into neighbouring cells where that keeps every vertex at <= n
// labels, turning a partition into an overlapping cover.
inline void thicken(CoverInstance& cover, Rng& rng, int n) {
  const auto& cx = *cover.complex;
  auto lab = cell_labels(cover);
  const int steps = static_cast<int>(cx.size()) / 8;
  std::vector<int> ls;
  for (int s = 0; s < steps; ++s) {
    const int c = uniform_int(rng, 0, static_cast<int>(cx.size()) - 1);
    const auto& nb = cx.wall_adjacency[static_cast<std::size_t>(c)];
    if (nb.empty()) continue;
    const int from = nb[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(nb.size()) - 1))];
    for (int l : lab[static_cast<std::size_t>(from)]) {
      auto& mine = lab[static_cast<std::size_t>(c)];
      if (std::find(mine.begin(), mine.end(), l) != mine.end()) continue;
      bool ok = true;
      for (int v : cx.cells[static_cast<std::size_t>(c)].vertices) {
        ls.assign(1, l);
        for (int o : cx.vertex_cells[static_cast<std::size_t>(v)]) {
          const auto& ol = lab[static_cast<std::size_t>(o)];
          ls.insert(ls.end(), ol.begin(), ol.end());
        }
        std::sort(ls.begin(), ls.end());
        if (std::unique(ls.begin(), ls.end()) - ls.begin() > n) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      mine.push_back(l);
      std::sort(mine.begin(), mine.end());
      cover.sets[static_cast<std::size_t>(l)].push_back(c);
    }
  }
  for (auto& set : cover.sets) std::sort(set.begin(), set.end());
}

}  // namespace detail

/// One random cover with multiplicity <= n (n = the multiplicity bound),
/// drawn from `profile`. Level-band and brick covers are rejected and
/// redrawn when they exceed the bound; the other two are repaired by label
/// merging. Throws if no acceptable cover appears within `max_attempts`.
inline CoverInstance random_cover(std::shared_ptr<const CellComplex> cx, FuzzProfile profile, int n,
                                  detail::Rng& rng, int* rejected = nullptr, int max_attempts = 1000) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<int> part;
    switch (profile) {
      case FuzzProfile::partition: part = detail::level_bands(*cx, rng); break;
      case FuzzProfile::shifted_bricks: part = detail::shifted_bricks(*cx, rng, n); break;
      case FuzzProfile::voronoi_merge:
        part = detail::voronoi_sites(*cx, rng, n);
        detail::merge_repair(*cx, part, n);
        break;
      case FuzzProfile::random_growth: part = detail::random_growth(*cx, rng, n); break;
    }
    auto cover = detail::from_partition(cx, part);
    if (profile == FuzzProfile::random_growth) detail::thicken(cover, rng, n);
    if (multiplicity(cover) <= n) return cover;
    if (rejected) ++*rejected;
  }
  throw Error("random_cover: no cover with multiplicity <= " + std::to_string(n) + " after " +
              std::to_string(max_attempts) + " attempts");
}

struct FuzzOptions {
  FuzzProfile profile = FuzzProfile::partition;
  std::optional<FuzzChecker> checker;  // default: from the coloring
  int grid = 0;                        // 0: 16 per axis for n <= 3, 8 above
  unsigned threads = 1;
  std::filesystem::path repro_dir = "fuzz-repro";
  nlohmann::json polytope_spec;  // written into repro files
};

struct FuzzAbsence {
  int trial = 0;
  std::string repro;
};

struct FuzzReport {
  std::string profile, checker;
  int trials = 0;
  int rejected = 0;
  std::map<std::string, int> witnesses;  // by witness kind
  std::vector<FuzzAbsence> absences;
  std::vector<std::string> failures;  // witness returned but failed re-check

  bool clean() const { return absences.empty() && failures.empty(); }
};

inline int default_grid(int dim) { return dim <= 3 ? 16 : 8; }

inline nlohmann::json to_json(const FuzzReport& r) {
  nlohmann::json abs = nlohmann::json::array();
  for (const auto& a : r.absences) abs.push_back({{"trial", a.trial}, {"repro", a.repro}});
  return {{"profile", r.profile},   {"checker", r.checker},     {"trials", r.trials},
          {"rejected", r.rejected}, {"witnesses", r.witnesses}, {"absences", std::move(abs)},
          {"failures", r.failures}};
}

/// Runs `trials` seeded random covers through a checker. Trial t draws from
/// mt19937_64 seeded with seed_seq{seed, t}, so results do not depend on
/// the thread count.
inline FuzzReport fuzz_covers(const BuiltPolytope& built, const std::optional<Coloring>& coloring,
                              std::uint64_t seed, int trials, const FuzzOptions& opt = {}) {
  const auto& p = built.polytope;
  const int n = p.dim();
  FuzzChecker checker = FuzzChecker::general;
  if (opt.checker) {
    checker = *opt.checker;
  } else if (coloring) {
    checker = coloring->num_colors == n ? FuzzChecker::lebesgue : FuzzChecker::kkm;
  } else if (validate_simple(p.comb).ok()) {
    checker = FuzzChecker::karasev;
  }
  if ((checker == FuzzChecker::lebesgue || checker == FuzzChecker::kkm) && !coloring)
    throw InvalidInput("fuzz: checker '" + std::string(to_string(checker)) + "' needs a coloring");

  FuzzReport report;
  report.profile = to_string(opt.profile);
  report.checker = to_string(checker);
  report.trials = std::max(trials, 0);
  if (trials <= 0) return report;

  const int grid = opt.grid > 0 ? opt.grid : default_grid(n);
  auto cx = std::make_shared<const CellComplex>(grid_complex(p, grid));
  std::optional<TruncatedGrid> tg;
  if (checker == FuzzChecker::general) tg = truncate_for_grid(p, *cx);

  struct Outcome {
    int rejected = 0;
    std::optional<Witness> witness;
    std::string failure;
    std::optional<CoverInstance> cover;  // kept only on absence
  };
  std::vector<Outcome> out(static_cast<std::size_t>(trials));

  auto run = [&](int t) {
    auto& o = out[static_cast<std::size_t>(t)];
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(t)};
    detail::Rng rng(ss);
    auto cover = random_cover(cx, opt.profile, n, rng, &o.rejected);
    WitnessCheck chk;
    switch (checker) {
      case FuzzChecker::lebesgue:
        o.witness = check_colorful_lebesgue(p.comb, *coloring, cover);
        if (o.witness) chk = verify_witness(p.comb, &*coloring, cover, *o.witness);
        break;
      case FuzzChecker::kkm:
        o.witness = check_colorful_kkm(p.comb, *coloring, cover);
        if (o.witness) chk = verify_witness(p.comb, &*coloring, cover, *o.witness);
        break;
      case FuzzChecker::karasev:
        o.witness = check_karasev(p.comb, cover);
        if (o.witness) chk = verify_witness(p.comb, nullptr, cover, *o.witness);
        break;
      case FuzzChecker::general:
        o.witness = check_general_polytope(p, cover, *tg);
        if (o.witness) chk = verify_general_witness(p, cover, *tg, *o.witness);
        break;
    }
    if (!o.witness) o.cover = std::move(cover);
    if (!chk.ok) o.failure = "trial " + std::to_string(t) + ": " + chk.reason;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) run(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(workers)) run(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (int t = 0; t < trials; ++t) {
    auto& o = out[static_cast<std::size_t>(t)];
    report.rejected += o.rejected;
    if (o.witness) ++report.witnesses[to_string(o.witness->kind)];
    if (!o.failure.empty()) report.failures.push_back(o.failure);
    if (o.cover) {
      const auto path = opt.repro_dir / ("absence-" + report.profile + "-" + std::to_string(seed) + "-" +
                                         std::to_string(t) + ".json");
      const auto spec = opt.polytope_spec.is_null() ? io::to_json(built) : opt.polytope_spec;
      io::write_file(path, io::dump(io::cover_to_json(spec, *o.cover)));
      report.absences.push_back({t, path.string()});
    }
  }
  return report;
}

}  // namespace chromatope
