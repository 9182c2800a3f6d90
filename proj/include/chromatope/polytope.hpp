#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chromatope/errors.hpp"
#include "chromatope/geometry.hpp"

namespace chromatope {

/// Vertex-facet incidence of a convex polytope. Facets and vertices are
/// addressed by 0-based index; `vertex_facets[v]` is sorted.
struct CombinatorialPolytope {
  int dim = 0;
  std::vector<std::string> facets;
  std::vector<std::vector<int>> vertex_facets;

  std::size_t num_facets() const { return facets.size(); }
  std::size_t num_vertices() const { return vertex_facets.size(); }

  std::vector<std::vector<int>> facet_vertices() const {
    std::vector<std::vector<int>> out(num_facets());
    for (std::size_t v = 0; v < vertex_facets.size(); ++v)
      for (int f : vertex_facets[v]) out[static_cast<std::size_t>(f)].push_back(static_cast<int>(v));
    return out;
  }

  bool operator==(const CombinatorialPolytope&) const = default;
};

/// Per-vertex coordinates and per-facet outward halfspaces.
struct GeometricRealization {
  std::vector<Point> coords;
  std::vector<Halfspace> halfspaces;

  bool operator==(const GeometricRealization& o) const {
    auto same = [](const std::vector<double>& a, const std::vector<double>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12) return false;
      return true;
    };
    if (coords.size() != o.coords.size() || halfspaces.size() != o.halfspaces.size()) return false;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (!same(coords[i], o.coords[i])) return false;
    for (std::size_t i = 0; i < halfspaces.size(); ++i)
      if (!same(halfspaces[i].normal, o.halfspaces[i].normal) ||
          std::abs(halfspaces[i].offset - o.halfspaces[i].offset) > 1e-12)
        return false;
    return true;
  }
};

struct Polytope {
  CombinatorialPolytope comb;
  std::optional<GeometricRealization> geom;

  int dim() const { return comb.dim; }
  std::size_t num_facets() const { return comb.num_facets(); }
  std::size_t num_vertices() const { return comb.num_vertices(); }
};

/// A face, identified by its vertex set. `facets` lists every facet
/// containing it.
struct Face {
  std::vector<int> facets;
  std::vector<int> vertices;
  int dim = 0;

  bool operator==(const Face&) const = default;
};

/// Facet coloring h : facets -> {0, ..., num_colors - 1}.
struct Coloring {
  std::vector<int> color;
  int num_colors = 0;

  std::vector<int> facets_of_color(int c) const {
    std::vector<int> out;
    for (std::size_t f = 0; f < color.size(); ++f)
      if (color[f] == c) out.push_back(static_cast<int>(f));
    return out;
  }

  bool operator==(const Coloring&) const = default;
};

namespace detail {

inline std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool includes_sorted(const std::vector<int>& big, const std::vector<int>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Calls fn(subset) for every k-subset of `items` in lexicographic order.
template <typename Fn>
void for_each_subset(const std::vector<int>& items, std::size_t k, Fn&& fn) {
  if (k > items.size()) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> cur(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) cur[i] = items[idx[i]];
    fn(cur);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Throws InvalidInput unless the incidence data is well formed: indices in
/// range, no repeated facet at a vertex, every facet has a vertex, and
/// distinct facets have distinct vertex sets. Sorts each vertex's list.
inline void normalize_incidence(CombinatorialPolytope& p) {
  if (p.dim < 1) throw InvalidInput("polytope dimension must be >= 1");
  const int m = static_cast<int>(p.num_facets());
  for (std::size_t v = 0; v < p.vertex_facets.size(); ++v) {
    auto& fs = p.vertex_facets[v];
    std::sort(fs.begin(), fs.end());
    if (std::adjacent_find(fs.begin(), fs.end()) != fs.end())
      throw InvalidInput("vertex " + std::to_string(v) + " lists a facet twice");
    for (int f : fs)
      if (f < 0 || f >= m)
        throw InvalidInput("vertex " + std::to_string(v) + " references facet " +
                           std::to_string(f) + " out of range");
  }
  const auto fv = p.facet_vertices();
  std::set<std::vector<int>> seen;
  for (int f = 0; f < m; ++f) {
    const auto& vs = fv[static_cast<std::size_t>(f)];
    if (vs.empty()) throw InvalidInput("facet " + std::to_string(f) + " contains no vertex");
    if (!seen.insert(vs).second)
      throw InvalidInput("facet " + std::to_string(f) + " duplicates another facet's vertex set");
  }
}

struct SimplicityReport {
  std::vector<int> bad_vertices;  // vertices not in exactly dim facets
  bool ok() const { return bad_vertices.empty(); }
};

inline SimplicityReport validate_simple(const CombinatorialPolytope& p) {
  SimplicityReport r;
  for (std::size_t v = 0; v < p.num_vertices(); ++v)
    if (p.vertex_facets[v].size() != static_cast<std::size_t>(p.dim)) r.bad_vertices.push_back(static_cast<int>(v));
  return r;
}

inline void require_simple(const CombinatorialPolytope& p, const char* op) {
  const auto r = validate_simple(p);
  if (!r.ok())
    throw InvalidInput(std::string(op) + ": polytope is not simple (vertex " +
                       std::to_string(r.bad_vertices.front()) + ")");
}

/// Facets sharing at least one vertex. For simple polytopes this is the
/// codimension-2 contact relation. Returns sorted adjacency lists.
inline std::vector<std::vector<int>> facet_adjacency(const CombinatorialPolytope& p) {
  require_simple(p, "facet_adjacency");
  std::vector<std::set<int>> adj(p.num_facets());
  for (const auto& fs : p.vertex_facets)
    for (int a : fs)
      for (int b : fs)
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
  std::vector<std::vector<int>> out;
  out.reserve(adj.size());
  for (auto& s : adj) out.emplace_back(s.begin(), s.end());
  return out;
}

/// Vertices common to all `facet_set` (all vertices if the set is empty).
inline std::vector<int> common_vertices(const CombinatorialPolytope& p,
                                        const std::vector<int>& facet_set) {
  std::vector<int> out;
  for (std::size_t v = 0; v < p.num_vertices(); ++v)
    if (detail::includes_sorted(p.vertex_facets[v], facet_set)) out.push_back(static_cast<int>(v));
  return out;
}

/// Facets containing every vertex of `vertex_set`.
inline std::vector<int> containing_facets(const CombinatorialPolytope& p,
                                          const std::vector<int>& vertex_set) {
  if (vertex_set.empty()) return {};
  std::vector<int> fs = p.vertex_facets[static_cast<std::size_t>(vertex_set.front())];
  for (int v : vertex_set) fs = detail::intersect_sorted(fs, p.vertex_facets[static_cast<std::size_t>(v)]);
  return fs;
}

/// All k-faces of a simple polytope, ordered by facet set.
inline std::vector<Face> enumerate_faces(const CombinatorialPolytope& p, int k) {
  if (k < 0 || k > p.dim - 1)
    throw InvalidInput("enumerate_faces: k=" + std::to_string(k) + " outside [0, " +
                       std::to_string(p.dim - 1) + "]");
  require_simple(p, "enumerate_faces");
  std::map<std::vector<int>, Face> by_vertices;
  for (const auto& fs : p.vertex_facets) {
    detail::for_each_subset(fs, static_cast<std::size_t>(p.dim - k), [&](const std::vector<int>& sub) {
      auto verts = common_vertices(p, sub);
      if (by_vertices.count(verts)) return;
      Face f{containing_facets(p, verts), verts, k};
      by_vertices.emplace(std::move(verts), std::move(f));
    });
  }
  std::vector<Face> out;
  for (auto& [_, f] : by_vertices) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) { return a.facets < b.facets; });
  return out;
}

/// Every proper face of an arbitrary (not necessarily simple) polytope,
/// with dimension from the rank in the face poset. Sorted by (dim, vertices).
inline std::vector<Face> face_lattice(const CombinatorialPolytope& p) {
  const auto fv = p.facet_vertices();
  std::set<std::vector<int>> faces(fv.begin(), fv.end());
  for (std::size_t v = 0; v < p.num_vertices(); ++v) faces.insert({static_cast<int>(v)});
  std::vector<std::vector<int>> frontier(faces.begin(), faces.end());
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& b : fv) {
        auto c = detail::intersect_sorted(a, b);
        if (!c.empty() && faces.insert(c).second) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<int>> list(faces.begin(), faces.end());
  std::sort(list.begin(), list.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  std::vector<int> dims(list.size(), 0);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].size() == 1) continue;
    int d = 0;
    for (std::size_t j = 0; j < i; ++j)
      if (list[j].size() < list[i].size() && detail::includes_sorted(list[i], list[j]))
        d = std::max(d, dims[j] + 1);
    dims[i] = d;
  }
  std::vector<Face> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    Face f{containing_facets(p, list[i]), list[i], dims[i]};
    if (f.facets.size() == 1 && dims[i] != p.dim - 1)
      throw InvalidInput("face_lattice: facet " + std::to_string(f.facets.front()) +
                         " has rank " + std::to_string(dims[i]) + " != dim-1");
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(),
            [](const Face& a, const Face& b) { return a.dim != b.dim ? a.dim < b.dim : a.vertices < b.vertices; });
  return out;
}

struct JoswigReport {
  bool colorable = true;
  std::vector<Face> odd_faces;  // 2-faces with an odd number of edges
};

inline int count_edges_of_2face(const CombinatorialPolytope& p, const Face& two_face) {
  std::set<std::vector<int>> edges;
  for (std::size_t f = 0; f < p.num_facets(); ++f) {
    if (std::binary_search(two_face.facets.begin(), two_face.facets.end(), static_cast<int>(f))) continue;
    auto fs = two_face.facets;
    fs.insert(std::upper_bound(fs.begin(), fs.end(), static_cast<int>(f)), static_cast<int>(f));
    auto verts = common_vertices(p, fs);
    if (verts.size() == 2) edges.insert(verts);
  }
  return static_cast<int>(edges.size());
}

/// Even-edge criterion on all 2-faces.
inline JoswigReport joswig_colorable(const CombinatorialPolytope& p) {
  if (p.dim < 2) throw InvalidInput("joswig_colorable requires dim >= 2");
  require_simple(p, "joswig_colorable");
  std::vector<Face> two_faces;
  if (p.dim == 2) {
    std::vector<int> all(p.num_vertices());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<int>(v);
    two_faces.push_back(Face{{}, all, 2});
  } else {
    two_faces = enumerate_faces(p, 2);
  }
  JoswigReport r;
  for (auto& f : two_faces)
    if (count_edges_of_2face(p, f) % 2 != 0) r.odd_faces.push_back(f);
  r.colorable = r.odd_faces.empty();
  return r;
}

/// True iff `h` assigns distinct colors to every pair of adjacent facets.
inline bool is_proper(const CombinatorialPolytope& p, const Coloring& h) {
  if (h.color.size() != p.num_facets()) return false;
  for (int c : h.color)
    if (c < 0 || c >= h.num_colors) return false;
  for (const auto& fs : p.vertex_facets)
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        if (h.color[static_cast<std::size_t>(fs[i])] == h.color[static_cast<std::size_t>(fs[j])]) return false;
  return true;
}

namespace detail {

struct ColoringSearch {
  const std::vector<std::vector<int>>& adj;
  int k;
  std::vector<int> color;

  bool available(std::size_t f, int c) const {
    for (int g : adj[f])
      if (color[static_cast<std::size_t>(g)] == c) return false;
    return true;
  }

  // Forward check: every uncolored neighbour of f keeps at least one color.
  bool forward_ok(std::size_t f) const {
    for (int g : adj[f]) {
      if (color[static_cast<std::size_t>(g)] >= 0) continue;
      bool any = false;
      for (int c = 0; c < k && !any; ++c) any = available(static_cast<std::size_t>(g), c);
      if (!any) return false;
    }
    return true;
  }

  bool run(std::size_t f, int used) {
    if (f == color.size()) return true;
    const int limit = std::min(k, used + 1);  // symmetry breaking
    for (int c = 0; c < limit; ++c) {
      if (!available(f, c)) continue;
      color[f] = c;
      if (forward_ok(f) && run(f + 1, std::max(used, c + 1))) return true;
      color[f] = -1;
    }
    return false;
  }
};

}  // namespace detail

/// Exact backtracking over the facet adjacency graph, smallest index first.
inline std::optional<Coloring> find_coloring(const CombinatorialPolytope& p, int k) {
  const auto adj = facet_adjacency(p);
  if (k <= 0) return p.num_facets() == 0 ? std::optional<Coloring>(Coloring{{}, k}) : std::nullopt;
  detail::ColoringSearch s{adj, k, std::vector<int>(p.num_facets(), -1)};
  if (!s.run(0, 0)) return std::nullopt;
  return Coloring{std::move(s.color), k};
}

inline int chromatic_number(const CombinatorialPolytope& p) {
  for (int k = std::max(p.dim, 1);; ++k)
    if (find_coloring(p, k)) return k;
}

/// Colors of the facets containing `face`.
inline std::vector<int> i_color_class(const CombinatorialPolytope& p, const Coloring& h, const Face& face) {
  if (face.vertices.empty()) throw InvalidInput("i_color_class: empty face");
  for (int v : face.vertices)
    if (v < 0 || static_cast<std::size_t>(v) >= p.num_vertices())
      throw InvalidInput("i_color_class: vertex out of range");
  auto verts = face.vertices;
  std::sort(verts.begin(), verts.end());
  const auto fs = containing_facets(p, verts);
  if (common_vertices(p, fs) != verts) throw InvalidInput("i_color_class: vertex set is not a face");
  std::set<int> colors;
  for (int f : fs) colors.insert(h.color[static_cast<std::size_t>(f)]);
  return {colors.begin(), colors.end()};
}

/// Isomorphism of incidence structures up to facet and vertex relabeling.
inline bool combinatorially_equivalent(const CombinatorialPolytope& a, const CombinatorialPolytope& b) {
  if (a.dim != b.dim || a.num_facets() != b.num_facets() || a.num_vertices() != b.num_vertices())
    return false;
  const auto fa = a.facet_vertices();
  const auto fb = b.facet_vertices();
  const std::size_t m = a.num_facets();
  std::set<std::vector<int>> target(b.vertex_facets.begin(), b.vertex_facets.end());
  std::vector<int> sigma(m, -1);
  std::vector<bool> used(m, false);
  auto check = [&]() {
    std::set<std::vector<int>> mapped;
    for (const auto& fs : a.vertex_facets) {
      std::vector<int> img;
      for (int f : fs) img.push_back(sigma[static_cast<std::size_t>(f)]);
      std::sort(img.begin(), img.end());
      mapped.insert(std::move(img));
    }
    return mapped == target;
  };
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == m) return check();
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || fa[i].size() != fb[j].size()) continue;
      used[j] = true;
      sigma[i] = static_cast<int>(j);
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    sigma[i] = -1;
    return false;
  };
  return rec(rec, 0);
}

}  // namespace chromatope
