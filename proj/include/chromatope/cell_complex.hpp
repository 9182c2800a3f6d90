#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "chromatope/errors.hpp"
#include "chromatope/geometry.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope {

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo, hi;
};

inline Box bounding_box(const GeometricRealization& g) {
  Box b{g.coords.at(0), g.coords.at(0)};
  for (const auto& x : g.coords)
    for (std::size_t i = 0; i < x.size(); ++i) {
      b.lo[i] = std::min(b.lo[i], x[i]);
      b.hi[i] = std::max(b.hi[i], x[i]);
    }
  return b;
}

struct Cell {
  std::vector<int> grid_index;
  std::vector<int> vertices;  // sorted subdivision vertex ids
  Point centroid;
  std::vector<int> facets;  // polytope facets within delta of the cell
};

/// Cells of a regular grid clipped to a realized polytope. Subdivision
/// vertices are shared between cells, so two cells meet iff they share a
/// vertex, and a cell contains a face of another iff it contains all of
/// that face's vertices.
struct CellComplex {
  int dim = 0;
  int grid = 0;
  Box box;
  Point width;  // cell width per axis
  double delta = 0.0;
  std::vector<Cell> cells;
  std::vector<Point> vertices;
  std::vector<std::vector<int>> vertex_cells;   // incident cells per vertex
  std::vector<std::vector<int>> vertex_facets;  // facet hyperplanes through each vertex (exact)
  std::vector<std::vector<int>> wall_adjacency;     // shared (n-1)-wall
  std::vector<std::vector<int>> closure_adjacency;  // shared point
  std::map<std::vector<int>, int> by_grid_index;
  std::vector<Halfspace> halfspaces;  // of the polytope, for re-checks

  std::size_t num_facets() const { return halfspaces.size(); }

  std::size_t size() const { return cells.size(); }

  std::optional<int> cell_at(const std::vector<int>& g) const {
    auto it = by_grid_index.find(g);
    if (it == by_grid_index.end()) return std::nullopt;
    return it->second;
  }

  /// Cell whose box contains x (nullopt outside the clipped grid).
  std::optional<int> locate(std::span<const double> x) const {
    std::vector<int> g(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int k = static_cast<int>(std::floor((x[i] - box.lo[i]) / width[i]));
      g[i] = std::clamp(k, 0, grid - 1);
    }
    return cell_at(g);
  }
};

namespace detail {

class VertexPool {
 public:
  VertexPool(double quantum, std::size_t dim) : q_(quantum), dim_(dim) {}

  int intern(const Point& x, std::vector<Point>& store) {
    const auto key = cell_key(x);
    // look in the 3^n neighbouring buckets so rounding never splits a vertex
    std::vector<long long> probe(dim_);
    const std::size_t combos = static_cast<std::size_t>(std::pow(3, dim_));
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t r = c;
      for (std::size_t i = 0; i < dim_; ++i) {
        probe[i] = key[i] + static_cast<long long>(r % 3) - 1;
        r /= 3;
      }
      auto it = buckets_.find(hash(probe));
      if (it == buckets_.end()) continue;
      for (int id : it->second)
        if (geom::distance(store[static_cast<std::size_t>(id)], x) <= q_) return id;
    }
    const int id = static_cast<int>(store.size());
    store.push_back(x);
    buckets_[hash(key)].push_back(id);
    return id;
  }

 private:
  std::vector<long long> cell_key(const Point& x) const {
    std::vector<long long> k(dim_);
    for (std::size_t i = 0; i < dim_; ++i) k[i] = static_cast<long long>(std::floor(x[i] / (4 * q_)));
    return k;
  }
  static std::size_t hash(const std::vector<long long>& k) {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }

  double q_;
  std::size_t dim_;
  std::unordered_map<std::size_t, std::vector<int>> buckets_;
};

}  // namespace detail

/// Grid with `r` cells per axis over `box` (default: the bounding box of
/// P), each cell clipped to P. Cells that are not full-dimensional are
/// dropped. Facet contact uses delta = half the smallest cell width.
inline CellComplex grid_complex(const Polytope& p, int r, std::optional<Box> box = std::nullopt) {
  if (!p.geom) throw InvalidInput("grid_complex needs a geometric realization");
  if (r < 1) throw InvalidInput("grid_complex: resolution must be >= 1");
  const auto& g = *p.geom;
  const auto n = static_cast<std::size_t>(p.dim());
  CellComplex cx;
  cx.dim = p.dim();
  cx.grid = r;
  cx.box = box.value_or(bounding_box(g));
  cx.halfspaces = g.halfspaces;
  cx.width.resize(n);
  double min_width = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx.width[i] = (cx.box.hi[i] - cx.box.lo[i]) / r;
    min_width = std::min(min_width, cx.width[i]);
    scale = std::max(scale, cx.box.hi[i] - cx.box.lo[i]);
  }
  cx.delta = min_width / 2;
  detail::VertexPool pool(scale * 1e-9, n);

  auto coord = [&](std::size_t axis, int k) {
    return k == r ? cx.box.hi[axis] : cx.box.lo[axis] + (cx.box.hi[axis] - cx.box.lo[axis]) * k / r;
  };

  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(r);
  std::vector<int> gi(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < n; ++i) {
      gi[i] = static_cast<int>(rem % static_cast<std::size_t>(r));
      rem /= static_cast<std::size_t>(r);
    }
    std::vector<Point> corners;
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = coord(i, gi[i] + static_cast<int>((c >> i) & 1));
      corners.push_back(std::move(x));
    }
    std::vector<int> cutting;
    for (std::size_t f = 0; f < g.halfspaces.size(); ++f) {
      bool cuts = false, all_out = true;
      for (const auto& x : corners) {
        const double s = geom::slack(g.halfspaces[f], x);
        if (s < -geom::kTolerance * scale) cuts = true;
        if (s > geom::kTolerance * scale) all_out = false;
      }
      if (all_out) {
        cutting.assign(1, -1);
        break;
      }
      if (cuts) cutting.push_back(static_cast<int>(f));
    }
    if (!cutting.empty() && cutting.front() == -1) continue;
    std::vector<Point> pts;
    if (cutting.empty()) {
      pts = std::move(corners);
    } else {
      std::vector<Halfspace> hs;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> a(n, 0.0);
        a[i] = -1.0;
        hs.push_back({a, -coord(i, gi[i])});
        a[i] = 1.0;
        hs.push_back({a, coord(i, gi[i] + 1)});
      }
      for (int f : cutting) hs.push_back(g.halfspaces[static_cast<std::size_t>(f)]);
      for (auto& v : geom::enumerate_vertices(hs, n, geom::kTolerance * scale)) pts.push_back(std::move(v.x));
    }
    if (pts.size() <= n) continue;
    if (geom::affine_rank(pts, 1e-7) < static_cast<int>(n)) continue;
    Cell cell;
    cell.grid_index = gi;
    cell.centroid.assign(n, 0.0);
    for (const auto& x : pts) {
      for (std::size_t i = 0; i < n; ++i) cell.centroid[i] += x[i] / static_cast<double>(pts.size());
      cell.vertices.push_back(pool.intern(x, cx.vertices));
    }
    std::sort(cell.vertices.begin(), cell.vertices.end());
    cell.vertices.erase(std::unique(cell.vertices.begin(), cell.vertices.end()), cell.vertices.end());
    for (std::size_t f = 0; f < g.halfspaces.size(); ++f)
      for (const auto& x : pts)
        if (geom::slack(g.halfspaces[f], x) <= cx.delta) {
          cell.facets.push_back(static_cast<int>(f));
          break;
        }
    cx.by_grid_index.emplace(gi, static_cast<int>(cx.cells.size()));
    cx.cells.push_back(std::move(cell));
  }

  cx.vertex_cells.assign(cx.vertices.size(), {});
  for (std::size_t c = 0; c < cx.cells.size(); ++c)
    for (int v : cx.cells[c].vertices) cx.vertex_cells[static_cast<std::size_t>(v)].push_back(static_cast<int>(c));
  cx.vertex_facets.assign(cx.vertices.size(), {});
  for (std::size_t v = 0; v < cx.vertices.size(); ++v)
    for (std::size_t f = 0; f < g.halfspaces.size(); ++f)
      if (std::abs(geom::slack(g.halfspaces[f], cx.vertices[v])) <= geom::kTolerance * std::max(1.0, scale))
        cx.vertex_facets[v].push_back(static_cast<int>(f));

  cx.closure_adjacency.assign(cx.cells.size(), {});
  for (const auto& inc : cx.vertex_cells)
    for (int a : inc)
      for (int b : inc)
        if (a != b) cx.closure_adjacency[static_cast<std::size_t>(a)].push_back(b);
  for (auto& adj : cx.closure_adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  cx.wall_adjacency.assign(cx.cells.size(), {});
  for (std::size_t a = 0; a < cx.cells.size(); ++a)
    for (int b : cx.closure_adjacency[a]) {
      const auto& ga = cx.cells[a].grid_index;
      const auto& gb = cx.cells[static_cast<std::size_t>(b)].grid_index;
      int diff = 0;
      for (std::size_t i = 0; i < n; ++i) diff += std::abs(ga[i] - gb[i]);
      if (diff != 1) continue;
      const auto shared = detail::intersect_sorted(cx.cells[a].vertices, cx.cells[static_cast<std::size_t>(b)].vertices);
      std::vector<Point> pts;
      for (int v : shared) pts.push_back(cx.vertices[static_cast<std::size_t>(v)]);
      if (geom::affine_rank(pts, 1e-7) == static_cast<int>(n) - 1) cx.wall_adjacency[a].push_back(b);
    }
  return cx;
}

enum class Connectivity { wall, closure };

/// Connected components of `cells` (any order) under the chosen adjacency,
/// each sorted, ordered by smallest cell.
inline std::vector<std::vector<int>> cell_components(const CellComplex& cx, const std::vector<int>& cells,
                                                     Connectivity conn) {
  std::vector<char> in(cx.size(), 0), seen(cx.size(), 0);
  for (int c : cells) in[static_cast<std::size_t>(c)] = 1;
  const auto& adj = conn == Connectivity::wall ? cx.wall_adjacency : cx.closure_adjacency;
  std::vector<int> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<int>> out;
  for (int s : sorted) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[static_cast<std::size_t>(s)] = 1;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      comp.push_back(c);
      for (int d : adj[static_cast<std::size_t>(c)])
        if (in[static_cast<std::size_t>(d)] && !seen[static_cast<std::size_t>(d)]) {
          seen[static_cast<std::size_t>(d)] = 1;
          q.push(d);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace chromatope
