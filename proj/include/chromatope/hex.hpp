#pragma once

#include <algorithm>
#include <deque>
#include <iterator>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromatope/builders.hpp"
#include "chromatope/errors.hpp"
#include "chromatope/geometry.hpp"
#include "chromatope/io.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope::hex {

/// Walls whose measure is below this fraction of scale^(n-1) are ignored.
inline constexpr double kWallTolerance = 1e-9;

struct BoardCell {
  Point site;
  std::vector<Point> vertices;  // ordered counter-clockwise when n = 2
  std::vector<int> facets;      // polytope facets met by the closed cell
  std::vector<int> neighbours;  // cells sharing an (n-1)-wall
};

/// Voronoi board on an n-colored polytope. Player i (0-based) owns color i
/// and must connect targets[i], the color-i facet through the distinguished
/// vertex, with another facet of color i.
struct Board {
  BuiltPolytope polytope;
  Coloring coloring;
  int vertex = 0;
  std::vector<int> targets;
  std::vector<BoardCell> cells;
  double scale = 1.0;

  int players() const { return coloring.num_colors; }
  std::size_t size() const { return cells.size(); }
  std::size_t num_facets() const { return coloring.color.size(); }
};

namespace detail {

inline double board_scale(const GeometricRealization& g) {
  double s = 0.0;
  for (const auto& a : g.coords)
    for (const auto& b : g.coords) s = std::max(s, geom::distance(a, b));
  return s > 0.0 ? s : 1.0;
}

inline Halfspace bisector(const Point& own, const Point& other) {
  Halfspace h;
  double off = 0.0;
  for (std::size_t i = 0; i < own.size(); ++i) {
    h.normal.push_back(other[i] - own[i]);
    off += (other[i] * other[i] - own[i] * own[i]) / 2.0;
  }
  h.offset = off;
  return geom::normalized(std::move(h));
}

}  // namespace detail

/// Builds the board. Sites must be distinct interior points; the coloring
/// must be a proper n-coloring; `vertex` must lie on n distinctly colored
/// facets.
inline Board build_board(const BuiltPolytope& built, const Coloring& h, int vertex, std::vector<Point> sites) {
  const auto& p = built.polytope;
  const auto& g = chromatope::detail::require_geometry(p, "build_board");
  const int n = p.dim();
  if (n < 2 || n > 3) throw InvalidInput("build_board: only dimensions 2 and 3 are supported");
  if (h.num_colors != n || !is_proper(p.comb, h)) throw HypothesisViolation("build_board: needs a proper n-coloring");
  if (vertex < 0 || static_cast<std::size_t>(vertex) >= p.num_vertices())
    throw InvalidInput("build_board: vertex out of range");
  if (sites.empty()) throw InvalidInput("build_board: no sites");

  Board b{built, h, vertex, std::vector<int>(static_cast<std::size_t>(n), -1), {}, detail::board_scale(g)};
  for (int f : p.comb.vertex_facets[static_cast<std::size_t>(vertex)]) {
    auto& t = b.targets[static_cast<std::size_t>(h.color[static_cast<std::size_t>(f)])];
    if (t >= 0) throw HypothesisViolation("build_board: vertex lies on two facets of one color");
    t = f;
  }
  for (int t : b.targets)
    if (t < 0) throw HypothesisViolation("build_board: vertex misses a color");

  const double tol = 1e-9 * b.scale;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].size() != static_cast<std::size_t>(n)) throw InvalidInput("build_board: site of wrong dimension");
    for (const auto& hs : g.halfspaces)
      if (geom::slack(hs, sites[i]) <= tol) throw InvalidInput("build_board: site " + std::to_string(i) + " is not interior");
    for (std::size_t j = 0; j < i; ++j)
      if (geom::distance(sites[i], sites[j]) <= tol) throw InvalidInput("build_board: duplicate sites");
  }

  const std::size_t k = sites.size();
  for (std::size_t i = 0; i < k; ++i) {
    BoardCell cell;
    cell.site = sites[i];
    std::vector<Halfspace> hs = g.halfspaces;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) hs.push_back(detail::bisector(sites[i], sites[j]));
    for (auto& v : geom::enumerate_vertices(hs, static_cast<std::size_t>(n))) cell.vertices.push_back(std::move(v.x));
    if (n == 2) cell.vertices = geom::order_polygon(std::move(cell.vertices));
    for (std::size_t f = 0; f < g.halfspaces.size(); ++f)
      for (const auto& x : cell.vertices)
        if (geom::slack(g.halfspaces[f], x) <= tol) {
          cell.facets.push_back(static_cast<int>(f));
          break;
        }
    b.cells.push_back(std::move(cell));
  }

  const double min_wall = kWallTolerance * std::pow(b.scale, n - 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto hs = detail::bisector(sites[i], sites[j]);
      std::vector<Point> wall;
      for (const auto& x : b.cells[i].vertices)
        if (std::abs(geom::slack(hs, x)) <= tol) wall.push_back(x);
      if (geom::wall_measure(wall, hs.normal) > min_wall) {
        b.cells[i].neighbours.push_back(static_cast<int>(j));
        b.cells[j].neighbours.push_back(static_cast<int>(i));
      }
    }
  return b;
}

/// `count` uniform random interior sites drawn by rejection from the
/// bounding box.
inline std::vector<Point> random_sites(const Polytope& p, int count, std::uint64_t seed) {
  const auto& g = chromatope::detail::require_geometry(p, "random_sites");
  if (count < 1) throw InvalidInput("random_sites: count must be >= 1");
  std::vector<double> lo = g.coords.front();
  std::vector<double> hi = lo;
  for (const auto& x : g.coords)
    for (std::size_t i = 0; i < x.size(); ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  const double margin = 1e-6 * detail::board_scale(g);
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    Point x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    bool ok = true;
    for (const auto& hs : g.halfspaces) ok = ok && geom::slack(hs, x) > margin;
    for (const auto& s : out) ok = ok && geom::distance(s, x) > margin;
    if (ok) out.push_back(std::move(x));
  }
  return out;
}

/// Board from a builder descriptor (or any loaded polytope) with its
/// natural coloring and random sites.
inline Board random_board(const BuiltPolytope& built, int sites, std::uint64_t seed, int vertex = 0) {
  if (!built.coloring) throw InvalidInput("random_board: polytope has no coloring; supply one");
  return build_board(built, *built.coloring, vertex, random_sites(built.polytope, sites, seed));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)]) ++rank_[static_cast<std::size_t>(a)];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

/// Winning component and the facet pair it connects.
struct Win {
  int player = -1;
  std::vector<int> cells;
  int target = -1;  // the player's facet through the distinguished vertex
  int other = -1;   // another facet of the same color
  bool operator==(const Win&) const = default;
};

enum class Status { ongoing, won, exhausted };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::ongoing: return "ongoing";
    case Status::won: return "won";
    case Status::exhausted: return "exhausted";
  }
  return "?";
}

struct Move {
  int player = 0;
  int cell = 0;
};

/// Game position with incremental win detection: a union-find over cells
/// whose roots carry the facets of the owner's color met by the component.
/// Facets are labels on components, never links between them.
class GameState {
 public:
  explicit GameState(std::shared_ptr<const Board> board)
      : board_(std::move(board)), owner_(board_->size(), -1), uf_(board_->size()), reach_(board_->size()) {}

  const Board& board() const { return *board_; }
  std::shared_ptr<const Board> board_ptr() const { return board_; }
  const std::vector<int>& owner() const { return owner_; }
  int turn() const { return turn_; }
  Status status() const { return status_; }
  const std::optional<Win>& winner() const { return win_; }
  const std::vector<Move>& history() const { return history_; }
  std::uint64_t version() const { return history_.size(); }

  std::vector<int> legal_moves() const {
    std::vector<int> out;
    if (status_ != Status::ongoing) return out;
    for (std::size_t c = 0; c < owner_.size(); ++c)
      if (owner_[c] < 0) out.push_back(static_cast<int>(c));
    return out;
  }

  void apply(const Move& m) {
    if (status_ != Status::ongoing) throw GameError("game_over", "the game is over");
    if (m.player != turn_)
      throw GameError("wrong_player", "it is player " + std::to_string(turn_) + "'s turn, not " + std::to_string(m.player));
    if (m.cell < 0 || static_cast<std::size_t>(m.cell) >= owner_.size())
      throw GameError("unknown_cell", "cell " + std::to_string(m.cell) + " does not exist");
    if (owner_[static_cast<std::size_t>(m.cell)] >= 0)
      throw GameError("cell_claimed", "cell " + std::to_string(m.cell) + " is already claimed");

    const auto& b = *board_;
    const auto cell = static_cast<std::size_t>(m.cell);
    owner_[cell] = m.player;
    history_.push_back(m);
    for (int f : b.cells[cell].facets)
      if (b.coloring.color[static_cast<std::size_t>(f)] == m.player) reach_[cell].push_back(f);
    for (int nb : b.cells[cell].neighbours)
      if (owner_[static_cast<std::size_t>(nb)] == m.player) join(m.cell, nb);

    const int target = b.targets[static_cast<std::size_t>(m.player)];
    const int root = uf_.find(m.cell);
    const auto& r = reach_[static_cast<std::size_t>(root)];
    if (std::binary_search(r.begin(), r.end(), target))
      for (int f : r)
        if (f != target) {
          Win w{m.player, {}, target, f};
          for (std::size_t c = 0; c < owner_.size(); ++c)
            if (owner_[c] == m.player && uf_.find(static_cast<int>(c)) == root) w.cells.push_back(static_cast<int>(c));
          win_ = std::move(w);
          status_ = Status::won;
          return;
        }
    turn_ = (turn_ + 1) % b.players();
    if (history_.size() == owner_.size()) status_ = Status::exhausted;
  }

 private:
  void join(int a, int b) {
    a = uf_.find(a);
    b = uf_.find(b);
    if (a == b) return;
    std::vector<int> merged;
    const auto& ra = reach_[static_cast<std::size_t>(a)];
    const auto& rb = reach_[static_cast<std::size_t>(b)];
    std::set_union(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(merged));
    uf_.unite(a, b);
    reach_[static_cast<std::size_t>(uf_.find(a))] = std::move(merged);
  }

  std::shared_ptr<const Board> board_;
  std::vector<int> owner_;
  UnionFind uf_;
  std::vector<std::vector<int>> reach_;  // valid at roots; sorted
  int turn_ = 0;
  Status status_ = Status::ongoing;
  std::optional<Win> win_;
  std::vector<Move> history_;
};

/// From-scratch scan: the first player (by index) with a connected set of
/// own cells meeting their target facet and another facet of their color.
inline std::optional<Win> batch_winner(const Board& b, const std::vector<int>& owner) {
  for (int pl = 0; pl < b.players(); ++pl) {
    const int target = b.targets[static_cast<std::size_t>(pl)];
    std::vector<char> seen(b.size(), 0);
    for (std::size_t s = 0; s < b.size(); ++s) {
      if (owner[s] != pl || seen[s]) continue;
      std::vector<int> comp;
      std::deque<int> q{static_cast<int>(s)};
      seen[s] = 1;
      while (!q.empty()) {
        const int c = q.front();
        q.pop_front();
        comp.push_back(c);
        for (int nb : b.cells[static_cast<std::size_t>(c)].neighbours)
          if (owner[static_cast<std::size_t>(nb)] == pl && !seen[static_cast<std::size_t>(nb)]) {
            seen[static_cast<std::size_t>(nb)] = 1;
            q.push_back(nb);
          }
      }
      std::set<int> touched;
      for (int c : comp)
        for (int f : b.cells[static_cast<std::size_t>(c)].facets) touched.insert(f);
      if (!touched.count(target)) continue;
      for (int f : touched)
        if (f != target && b.coloring.color[static_cast<std::size_t>(f)] == pl) {
          std::sort(comp.begin(), comp.end());
          return Win{pl, comp, target, f};
        }
    }
  }
  return std::nullopt;
}

enum class Policy { uniform_random, connectivity_greedy };

inline const char* to_string(Policy p) {
  return p == Policy::uniform_random ? "uniform-random" : "connectivity-greedy";
}

inline Policy parse_policy(const std::string& s) {
  if (s == "uniform-random" || s == "random") return Policy::uniform_random;
  if (s == "connectivity-greedy" || s == "greedy") return Policy::connectivity_greedy;
  throw InvalidInput("unknown bot policy '" + s + "'");
}

namespace detail {

// 0-1 BFS over cells not owned by opponents: own cells cost 0, empty cells 1.
// Sources are the cells meeting any facet in `from`.
inline std::vector<int> connection_cost(const GameState& st, int pl, const std::vector<int>& from) {
  const auto& b = st.board();
  constexpr int inf = 1 << 29;
  std::vector<int> d(b.size(), inf);
  std::deque<int> q;
  auto cost = [&](std::size_t c) { return st.owner()[c] == pl ? 0 : 1; };
  for (std::size_t c = 0; c < b.size(); ++c) {
    if (st.owner()[c] >= 0 && st.owner()[c] != pl) continue;
    for (int f : b.cells[c].facets)
      if (std::find(from.begin(), from.end(), f) != from.end()) {
        d[c] = cost(c);
        if (d[c] == 0)
          q.push_front(static_cast<int>(c));
        else
          q.push_back(static_cast<int>(c));
        break;
      }
  }
  while (!q.empty()) {
    const auto c = static_cast<std::size_t>(q.front());
    q.pop_front();
    for (int nb : b.cells[c].neighbours) {
      const auto u = static_cast<std::size_t>(nb);
      if (st.owner()[u] >= 0 && st.owner()[u] != pl) continue;
      const int nd = d[c] + cost(u);
      if (nd < d[u]) {
        d[u] = nd;
        if (cost(u) == 0)
          q.push_front(nb);
        else
          q.push_back(nb);
      }
    }
  }
  return d;
}

}  // namespace detail

/// Chooses a move for the player to move.
inline Move bot_move(const GameState& st, Policy policy, std::mt19937_64& rng) {
  const auto legal = st.legal_moves();
  if (legal.empty()) throw GameError("no_legal_moves", "no legal moves");
  const int pl = st.turn();
  auto pick = [&](const std::vector<int>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  if (policy == Policy::uniform_random) return {pl, pick(legal)};

  // Empty cell on a cheapest completion of a target-to-partner path.
  const auto& b = st.board();
  const int target = b.targets[static_cast<std::size_t>(pl)];
  std::vector<int> partners;
  for (int f : b.coloring.facets_of_color(pl))
    if (f != target) partners.push_back(f);
  const auto d1 = detail::connection_cost(st, pl, {target});
  const auto d2 = detail::connection_cost(st, pl, partners);
  int best = 1 << 30;
  std::vector<int> choice;
  for (int c : legal) {
    const auto u = static_cast<std::size_t>(c);
    if (d1[u] >= (1 << 29) || d2[u] >= (1 << 29)) continue;
    const int through = d1[u] + d2[u] - 1;
    if (through < best) {
      best = through;
      choice.clear();
    }
    if (through == best) choice.push_back(c);
  }
  return {pl, pick(choice.empty() ? legal : choice)};
}

/// Plays to the end with one policy per player (a single policy is reused
/// for everyone). When `check` is set the incremental winner is compared
/// with the batch scan after every move and a mismatch throws.
inline GameState random_playout(std::shared_ptr<const Board> board, std::uint64_t seed,
                                std::vector<Policy> policies = {Policy::uniform_random}, bool check = false) {
  GameState st(std::move(board));
  std::mt19937_64 rng(seed);
  while (st.status() == Status::ongoing) {
    const auto pol = policies[static_cast<std::size_t>(st.turn()) % policies.size()];
    st.apply(bot_move(st, pol, rng));
    if (check) {
      const auto batch = batch_winner(st.board(), st.owner());
      const bool agree = batch.has_value() == st.winner().has_value() &&
                         (!batch || (batch->player == st.winner()->player && batch->cells == st.winner()->cells));
      if (!agree) throw Error("incremental and batch winners disagree after move " + std::to_string(st.version()));
    }
  }
  return st;
}

struct NoTieReport {
  int trials = 0;
  std::vector<int> wins;  // per player
  int ties = 0;
  std::size_t max_moves = 0;
  std::vector<std::string> repro;
};

inline nlohmann::json board_json(const Board& b);

/// Random complete playouts; a full board with no winner is exported.
inline NoTieReport no_tie_check(std::shared_ptr<const Board> board, int trials, std::uint64_t seed,
                                const std::filesystem::path& repro_dir = "hex-repro", unsigned threads = 1) {
  NoTieReport r;
  r.trials = std::max(trials, 0);
  r.wins.assign(static_cast<std::size_t>(board->players()), 0);
  if (trials <= 0) return r;
  std::vector<std::optional<GameState>> out(static_cast<std::size_t>(trials));
  auto run = [&](int t) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(t)};
    std::mt19937_64 mix(ss);
    out[static_cast<std::size_t>(t)] = random_playout(board, mix());
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(workers)) run(t);
    });
  for (int t = 0; t < trials; t += static_cast<int>(workers)) run(t);
  for (auto& th : pool) th.join();

  for (int t = 0; t < trials; ++t) {
    const auto& st = *out[static_cast<std::size_t>(t)];
    r.max_moves = std::max(r.max_moves, st.history().size());
    if (st.winner()) {
      ++r.wins[static_cast<std::size_t>(st.winner()->player)];
      continue;
    }
    ++r.ties;
    nlohmann::json moves = nlohmann::json::array();
    for (const auto& m : st.history()) moves.push_back({m.player, m.cell});
    const auto path = repro_dir / ("tie-" + std::to_string(seed) + "-" + std::to_string(t) + ".json");
    io::write_file(path, io::dump({{"board", board_json(*board)}, {"moves", moves}}));
    r.repro.push_back(path.string());
  }
  return r;
}

inline nlohmann::json to_json(const NoTieReport& r) {
  return {{"trials", r.trials}, {"wins", r.wins}, {"ties", r.ties}, {"max_moves", r.max_moves}, {"repro", r.repro}};
}

inline nlohmann::json to_json(const Win& w) {
  return {{"player", w.player}, {"cells", w.cells}, {"facet_pair", {w.target, w.other}}};
}

inline nlohmann::json board_json(const Board& b) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& c : b.cells) sites.push_back(c.site);
  return {{"polytope", io::to_json(b.polytope.polytope)},
          {"coloring", io::to_json(b.coloring)},
          {"vertex", b.vertex},
          {"targets", b.targets},
          {"sites", sites}};
}

/// Snapshot for clients. For n = 2 `polygon` is the ordered cell outline;
/// for n = 3 it is the unordered vertex list.
inline nlohmann::json state_json(const GameState& st) {
  const auto& b = st.board();
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < b.size(); ++c) {
    const int o = st.owner()[c];
    cells.push_back({{"id", c},
                     {"site", b.cells[c].site},
                     {"polygon", b.cells[c].vertices},
                     {"owner", o < 0 ? nlohmann::json(nullptr) : nlohmann::json(o)},
                     {"facet_contacts", b.cells[c].facets},
                     {"neighbours", b.cells[c].neighbours}});
  }
  nlohmann::json facets = nlohmann::json::array();
  for (std::size_t f = 0; f < b.num_facets(); ++f)
    facets.push_back({{"id", f}, {"name", b.polytope.polytope.comb.facets[f]}, {"color", b.coloring.color[f]}});
  return {{"version", st.version()},
          {"dim", b.polytope.polytope.dim()},
          {"players", b.players()},
          {"turn", st.turn()},
          {"status", to_string(st.status())},
          {"targets", b.targets},
          {"facets", facets},
          {"cells", cells},
          {"winner", st.winner() ? to_json(*st.winner()) : nlohmann::json(nullptr)}};
}

}  // namespace chromatope::hex
