#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chromatope/errors.hpp"
#include "chromatope/geometry.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope {

/// Output of a builder: the polytope with its realization, the builder's
/// natural coloring when it has one, and for total truncations the face of
/// the input polytope that each new facet stands for.
struct BuiltPolytope {
  Polytope polytope;
  std::optional<Coloring> coloring;
  std::vector<Face> source_faces;
};

namespace detail {

inline Polytope from_geometry(int dim, std::vector<Point> coords, std::vector<Halfspace> hs,
                              std::vector<std::string> names) {
  for (auto& h : hs) h = geom::normalized(std::move(h));
  CombinatorialPolytope c;
  c.dim = dim;
  c.facets = std::move(names);
  c.vertex_facets.resize(coords.size());
  for (std::size_t v = 0; v < coords.size(); ++v)
    for (std::size_t f = 0; f < hs.size(); ++f) {
      const double s = geom::slack(hs[f], coords[v]);
      if (s < -1e-9) throw InvalidInput("builder produced a vertex outside a facet halfspace");
      if (s <= 1e-9) c.vertex_facets[v].push_back(static_cast<int>(f));
    }
  normalize_incidence(c);
  return Polytope{std::move(c), GeometricRealization{std::move(coords), std::move(hs)}};
}

inline const GeometricRealization& require_geometry(const Polytope& p, const char* op) {
  if (!p.geom) throw InvalidInput(std::string(op) + " needs a geometric realization");
  return *p.geom;
}

}  // namespace detail

/// Unit cube [0,1]^n. Facet i < n is {x_i = 0}, facet n + i is {x_i = 1};
/// vertex b has x_i = bit i of b. Colored by axis.
inline BuiltPolytope cube(int n) {
  if (n < 1) throw InvalidInput("cube: n must be >= 1");
  std::vector<Point> coords;
  for (int b = 0; b < (1 << n); ++b) {
    Point x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (b >> i) & 1;
    coords.push_back(std::move(x));
  }
  std::vector<Halfspace> hs;
  std::vector<std::string> names;
  for (int side = 0; side < 2; ++side)
    for (int i = 0; i < n; ++i) {
      std::vector<double> a(static_cast<std::size_t>(n), 0.0);
      a[static_cast<std::size_t>(i)] = side == 0 ? -1.0 : 1.0;
      hs.push_back({a, side == 0 ? 0.0 : 1.0});
      names.push_back("x" + std::to_string(i) + "=" + std::to_string(side));
    }
  Coloring h{{}, n};
  for (int f = 0; f < 2 * n; ++f) h.color.push_back(f % n);
  return {detail::from_geometry(n, std::move(coords), std::move(hs), std::move(names)), h, {}};
}

/// Standard simplex conv(0, e_1, ..., e_n). Facet i < n is {x_i = 0},
/// facet n is {sum x = 1}; every facet gets its own color.
inline BuiltPolytope simplex(int n) {
  if (n < 1) throw InvalidInput("simplex: n must be >= 1");
  const auto sz = static_cast<std::size_t>(n);
  std::vector<Point> coords{Point(sz, 0.0)};
  for (std::size_t i = 0; i < sz; ++i) {
    Point e(sz, 0.0);
    e[i] = 1.0;
    coords.push_back(std::move(e));
  }
  std::vector<Halfspace> hs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sz; ++i) {
    std::vector<double> a(sz, 0.0);
    a[i] = -1.0;
    hs.push_back({a, 0.0});
    names.push_back("x" + std::to_string(i) + "=0");
  }
  hs.push_back({std::vector<double>(sz, 1.0), 1.0});
  names.push_back("sum=1");
  Coloring h{{}, n + 1};
  for (int f = 0; f <= n; ++f) h.color.push_back(f);
  return {detail::from_geometry(n, std::move(coords), std::move(hs), std::move(names)), h, {}};
}

/// Regular m-gon with vertex k at angle 2*pi*k/m; edge k joins vertex k and
/// k+1. Edges are named by vertex letters (AB, BC, ...) when m <= 26.
inline BuiltPolytope polygon(int m) {
  if (m < 3) throw InvalidInput("polygon: m must be >= 3");
  std::vector<Point> coords;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * k / m;
    coords.push_back({std::cos(t), std::sin(t)});
  }
  std::vector<Halfspace> hs;
  std::vector<std::string> names;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / m;
    hs.push_back({{std::cos(t), std::sin(t)}, std::cos(std::numbers::pi / m)});
    if (m <= 26)
      names.push_back(std::string{static_cast<char>('A' + k), static_cast<char>('A' + (k + 1) % m)});
    else
      names.push_back("e" + std::to_string(k));
  }
  Coloring h{{}, m % 2 == 0 ? 2 : 3};
  for (int k = 0; k < m; ++k) h.color.push_back(k % 2);
  if (m % 2 == 1) h.color.back() = 2;
  return {detail::from_geometry(2, std::move(coords), std::move(hs), std::move(names)), h, {}};
}

/// P x Q. Facets of P come first; vertex (i, j) has index i * |V(Q)| + j.
inline BuiltPolytope product(const BuiltPolytope& a, const BuiltPolytope& b) {
  const auto& pa = a.polytope;
  const auto& pb = b.polytope;
  const int ma = static_cast<int>(pa.num_facets());
  CombinatorialPolytope c;
  c.dim = pa.dim() + pb.dim();
  c.facets = pa.comb.facets;
  for (const auto& name : pb.comb.facets) {
    std::string nm = name;
    while (std::find(c.facets.begin(), c.facets.end(), nm) != c.facets.end()) nm += "'";
    c.facets.push_back(nm);
  }
  for (std::size_t i = 0; i < pa.num_vertices(); ++i)
    for (std::size_t j = 0; j < pb.num_vertices(); ++j) {
      auto fs = pa.comb.vertex_facets[i];
      for (int f : pb.comb.vertex_facets[j]) fs.push_back(f + ma);
      c.vertex_facets.push_back(std::move(fs));
    }
  normalize_incidence(c);
  std::optional<GeometricRealization> g;
  if (pa.geom && pb.geom) {
    GeometricRealization r;
    for (const auto& x : pa.geom->coords)
      for (const auto& y : pb.geom->coords) {
        Point z = x;
        z.insert(z.end(), y.begin(), y.end());
        r.coords.push_back(std::move(z));
      }
    const auto da = static_cast<std::size_t>(pa.dim());
    const auto db = static_cast<std::size_t>(pb.dim());
    for (const auto& h : pa.geom->halfspaces) {
      auto nrm = h.normal;
      nrm.resize(da + db, 0.0);
      r.halfspaces.push_back({nrm, h.offset});
    }
    for (const auto& h : pb.geom->halfspaces) {
      std::vector<double> nrm(da, 0.0);
      nrm.insert(nrm.end(), h.normal.begin(), h.normal.end());
      r.halfspaces.push_back({nrm, h.offset});
    }
    g = std::move(r);
  }
  std::optional<Coloring> h;
  if (a.coloring && b.coloring) {
    Coloring hc{a.coloring->color, a.coloring->num_colors + b.coloring->num_colors};
    for (int col : b.coloring->color) hc.color.push_back(col + a.coloring->num_colors);
    h = std::move(hc);
  }
  return {Polytope{std::move(c), std::move(g)}, std::move(h), {}};
}

/// Prism over the regular m-gon.
inline BuiltPolytope prism(int m) { return product(polygon(m), cube(1)); }

/// Square pyramid over [-1,1]^2 x {0} with apex (0,0,1). Not simple.
inline BuiltPolytope square_pyramid() {
  std::vector<Point> coords{{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}, {0, 0, 1}};
  std::vector<Halfspace> hs{{{0, 0, -1}, 0}, {{1, 0, 1}, 1}, {{-1, 0, 1}, 1}, {{0, 1, 1}, 1}, {{0, -1, 1}, 1}};
  std::vector<std::string> names{"base", "side+x", "side-x", "side+y", "side-y"};
  return {detail::from_geometry(3, std::move(coords), std::move(hs), std::move(names)), std::nullopt, {}};
}

/// Cross-polytope |x|+|y|+|z| <= 1. Not simple.
inline BuiltPolytope octahedron() {
  std::vector<Point> coords{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Halfspace> hs;
  std::vector<std::string> names;
  for (int s = 0; s < 8; ++s) {
    std::vector<double> a{(s & 1) ? -1.0 : 1.0, (s & 2) ? -1.0 : 1.0, (s & 4) ? -1.0 : 1.0};
    std::string nm = "oct";
    for (double c : a) nm += c > 0 ? '+' : '-';
    hs.push_back({a, 1.0});
    names.push_back(nm);
  }
  return {detail::from_geometry(3, std::move(coords), std::move(hs), std::move(names)), std::nullopt, {}};
}

namespace detail {

inline std::vector<double> vertex_cut_direction(const Polytope& p, int v) {
  const auto& g = *p.geom;
  std::vector<double> u(static_cast<std::size_t>(p.dim()), 0.0);
  for (int f : p.comb.vertex_facets[static_cast<std::size_t>(v)])
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += g.halfspaces[static_cast<std::size_t>(f)].normal[i];
  const double len = geom::norm(u);
  for (auto& c : u) c /= len;
  return u;
}

// Distance (along the cut direction) from v to the nearest other vertex.
inline double vertex_cut_gap(const Polytope& p, int v) {
  const auto u = vertex_cut_direction(p, v);
  const auto& g = *p.geom;
  const double top = geom::dot(u, g.coords[static_cast<std::size_t>(v)]);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < p.num_vertices(); ++w)
    if (static_cast<int>(w) != v) gap = std::min(gap, top - geom::dot(u, g.coords[w]));
  return gap;
}

}  // namespace detail

/// Cuts vertex v off a simple polytope with a hyperplane at depth `eps`
/// along the sum of the incident facet normals. Vertex v is removed (later
/// indices shift down by one); the n new vertices are appended; the new
/// simplex facet is appended last. The default depth is 1/8 of the gap to
/// the nearest other vertex.
inline BuiltPolytope truncate_vertex(const BuiltPolytope& in, int v, std::optional<double> eps = std::nullopt) {
  const auto& p = in.polytope;
  const auto& g = detail::require_geometry(p, "truncate_vertex");
  const int n = p.dim();
  if (v < 0 || static_cast<std::size_t>(v) >= p.num_vertices())
    throw InvalidInput("truncate_vertex: vertex out of range");
  const auto& vf = p.comb.vertex_facets[static_cast<std::size_t>(v)];
  if (vf.size() != static_cast<std::size_t>(n))
    throw InvalidInput("truncate_vertex: vertex " + std::to_string(v) + " is not simple");
  const double gap = detail::vertex_cut_gap(p, v);
  const double depth = eps.value_or(gap / 8.0);
  if (!(depth > 0.0) || depth >= gap)
    throw InfeasibleTruncation("truncate_vertex: depth " + std::to_string(depth) +
                               " outside (0, " + std::to_string(gap) + ")");
  const auto u = detail::vertex_cut_direction(p, v);
  const Point& xv = g.coords[static_cast<std::size_t>(v)];
  const double top = geom::dot(u, xv);
  const int new_facet = static_cast<int>(p.num_facets());

  BuiltPolytope out;
  auto& c = out.polytope.comb;
  c.dim = n;
  c.facets = p.comb.facets;
  c.facets.push_back("T" + std::to_string(v) + "(" + std::to_string(new_facet) + ")");
  GeometricRealization r;
  r.halfspaces = g.halfspaces;
  r.halfspaces.push_back({u, top - depth});
  for (std::size_t w = 0; w < p.num_vertices(); ++w) {
    if (static_cast<int>(w) == v) continue;
    c.vertex_facets.push_back(p.comb.vertex_facets[w]);
    r.coords.push_back(g.coords[w]);
  }
  detail::for_each_subset(vf, static_cast<std::size_t>(n - 1), [&](const std::vector<int>& sub) {
    int nbr = -1;
    for (std::size_t w = 0; w < p.num_vertices(); ++w)
      if (static_cast<int>(w) != v && detail::includes_sorted(p.comb.vertex_facets[w], sub)) {
        nbr = static_cast<int>(w);
        break;
      }
    if (nbr < 0) throw InvalidInput("truncate_vertex: edge without second endpoint");
    const Point& xw = g.coords[static_cast<std::size_t>(nbr)];
    const double t = depth / (top - geom::dot(u, xw));
    Point x(xv.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = xv[i] + t * (xw[i] - xv[i]);
    auto fs = sub;
    fs.push_back(new_facet);
    c.vertex_facets.push_back(std::move(fs));
    r.coords.push_back(std::move(x));
  });
  normalize_incidence(c);
  out.polytope.geom = std::move(r);
  if (in.coloring) {
    std::vector<bool> used(static_cast<std::size_t>(in.coloring->num_colors) + 1, false);
    for (int f : vf) used[static_cast<std::size_t>(in.coloring->color[static_cast<std::size_t>(f)])] = true;
    int col = 0;
    while (used[static_cast<std::size_t>(col)]) ++col;
    Coloring h = *in.coloring;
    h.color.push_back(col);
    h.num_colors = std::max(h.num_colors, col + 1);
    out.coloring = std::move(h);
  }
  return out;
}

/// Truncates several pairwise non-adjacent vertices (indices into `in`)
/// at a common depth; the default depth is 1/8 of the smallest gap.
inline BuiltPolytope truncate_vertices(const BuiltPolytope& in, std::vector<int> vs,
                                       std::optional<double> eps = std::nullopt) {
  const auto& p = in.polytope;
  detail::require_geometry(p, "truncate_vertices");
  std::sort(vs.begin(), vs.end());
  if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    throw InvalidInput("truncate_vertices: repeated vertex");
  double gap = std::numeric_limits<double>::infinity();
  for (int v : vs) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.num_vertices())
      throw InvalidInput("truncate_vertices: vertex out of range");
    gap = std::min(gap, detail::vertex_cut_gap(p, v));
  }
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const auto common = detail::intersect_sorted(p.comb.vertex_facets[static_cast<std::size_t>(vs[i])],
                                                   p.comb.vertex_facets[static_cast<std::size_t>(vs[j])]);
      if (common.size() + 1 >= static_cast<std::size_t>(p.dim()))
        throw InvalidInput("truncate_vertices: vertices " + std::to_string(vs[i]) + " and " +
                           std::to_string(vs[j]) + " are adjacent");
    }
  const double depth = eps.value_or(gap / 8.0);
  BuiltPolytope cur = in;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) cur = truncate_vertex(cur, *it, depth);
  return cur;
}

namespace detail {

inline std::string face_name(const CombinatorialPolytope& p, const Face& f) {
  std::string s;
  for (int fi : f.facets) {
    if (!s.empty()) s += "&";
    s += p.facets[static_cast<std::size_t>(fi)];
  }
  return s;
}

inline void collect_flags(const std::vector<Face>& faces, const std::vector<std::vector<int>>& up,
                          std::vector<int>& chain, int n, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(chain.size()) == n) {
    out.push_back(chain);
    return;
  }
  for (int nxt : up[static_cast<std::size_t>(chain.back())]) {
    chain.push_back(nxt);
    collect_flags(faces, up, chain, n, out);
    chain.pop_back();
  }
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// Depth ratio between truncation cuts of consecutive face dimensions.
inline constexpr double kTruncationDepthRatio = 0.3;

/// Truncation over every proper face. Facet i of the result stands for face
/// `source_faces[i]` of the input; vertices are complete flags
/// K_0 < K_1 < ... < K_{n-1}, and the returned coloring is h(F_K) = dim K.
/// The cut for a face of dimension d sits at depth eps * 0.3^d (facets are
/// kept in place). Default eps is 1/8 of the smallest vertex-to-facet gap.
inline BuiltPolytope total_truncation(const BuiltPolytope& in, std::optional<double> eps = std::nullopt) {
  const auto& p = in.polytope;
  const int n = p.dim();
  if (n < 2) throw InvalidInput("total_truncation: dimension must be >= 2");
  auto faces = face_lattice(p.comb);
  const std::size_t nf = faces.size();

  std::vector<std::vector<int>> up(nf);
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j)
      if (faces[j].dim == faces[i].dim + 1 && detail::includes_sorted(faces[j].vertices, faces[i].vertices))
        up[i].push_back(static_cast<int>(j));
  std::vector<std::vector<int>> flags;
  for (std::size_t i = 0; i < nf; ++i)
    if (faces[i].dim == 0) {
      std::vector<int> chain{static_cast<int>(i)};
      detail::collect_flags(faces, up, chain, n, flags);
    }

  BuiltPolytope out;
  auto& c = out.polytope.comb;
  c.dim = n;
  Coloring h{{}, n};
  for (const auto& f : faces) {
    c.facets.push_back(f.dim == n - 1 ? p.comb.facets[static_cast<std::size_t>(f.facets.front())]
                                      : detail::face_name(p.comb, f));
    h.color.push_back(f.dim);
  }
  for (auto fl : flags) {
    std::sort(fl.begin(), fl.end());
    c.vertex_facets.push_back(std::move(fl));
  }
  normalize_incidence(c);
  out.coloring = std::move(h);
  out.source_faces = faces;

  if (p.geom) {
    const auto& g = *p.geom;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < p.num_facets(); ++f)
      for (std::size_t v = 0; v < p.num_vertices(); ++v) {
        const double s = geom::slack(g.halfspaces[f], g.coords[v]);
        if (s > 1e-9) gap = std::min(gap, s);
      }
    const double depth0 = eps.value_or(gap / 8.0);
    if (!(depth0 > 0.0) || depth0 >= gap)
      throw InfeasibleTruncation("total_truncation: depth " + std::to_string(depth0) + " outside (0, " +
                                 std::to_string(gap) + ")");
    GeometricRealization r;
    for (const auto& f : faces) {
      std::vector<double> u(static_cast<std::size_t>(n), 0.0);
      for (int fi : f.facets)
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += g.halfspaces[static_cast<std::size_t>(fi)].normal[i];
      const double len = geom::norm(u);
      for (auto& x : u) x /= len;
      const double top = geom::dot(u, g.coords[static_cast<std::size_t>(f.vertices.front())]);
      const double depth = f.dim == n - 1 ? 0.0 : depth0 * std::pow(kTruncationDepthRatio, f.dim);
      r.halfspaces.push_back({u, top - depth});
    }
    for (const auto& fs : c.vertex_facets) {
      auto x = geom::intersect(r.halfspaces, fs, static_cast<std::size_t>(n));
      if (!x) throw InfeasibleTruncation("total_truncation: degenerate flag vertex");
      for (std::size_t k = 0; k < nf; ++k) {
        if (std::binary_search(fs.begin(), fs.end(), static_cast<int>(k))) continue;
        if (geom::slack(r.halfspaces[k], *x) <= 1e-10)
          throw InfeasibleTruncation("total_truncation: cut hyperplanes collide at depth " +
                                     std::to_string(depth0));
      }
      r.coords.push_back(std::move(*x));
    }
    if (detail::binomial(nf, static_cast<std::size_t>(n)) <= 300000) {
      const auto verts = geom::enumerate_vertices(r.halfspaces, static_cast<std::size_t>(n));
      if (verts.size() != c.num_vertices())
        throw InfeasibleTruncation("total_truncation: realization has " + std::to_string(verts.size()) +
                                   " vertices, expected " + std::to_string(c.num_vertices()));
    }
    out.polytope.geom = std::move(r);
  }
  return out;
}

namespace detail {

struct DescriptorParser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("builder descriptor '" + std::string(s) + "': " + msg + " at offset " +
                       std::to_string(pos));
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char ch) {
    skip_ws();
    if (pos < s.size() && s[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!eat(ch)) fail(std::string("expected '") + ch + "'");
  }
  std::string ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '-'))
      ++pos;
    if (start == pos) fail("expected a builder name");
    return std::string(s.substr(start, pos - start));
  }
  int integer() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected an integer");
    return std::stoi(std::string(s.substr(start, pos - start)));
  }

  BuiltPolytope parse() {
    const auto name = ident();
    if (name == "product") {
      expect('(');
      auto a = parse();
      expect(',');
      auto b = parse();
      expect(')');
      return product(a, b);
    }
    if (name == "truncate") {
      expect('(');
      auto a = parse();
      std::vector<int> vs;
      while (eat(',')) vs.push_back(integer());
      expect(')');
      if (vs.empty()) fail("truncate needs at least one vertex");
      return truncate_vertices(a, vs);
    }
    if (name == "total") {
      expect('(');
      auto a = parse();
      expect(')');
      return total_truncation(a);
    }
    if (name == "hexagon") return polygon(6);
    if (name == "pentagon") return polygon(5);
    if (name == "square") return cube(2);
    if (name == "pyramid") return square_pyramid();
    if (name == "octahedron") return octahedron();
    expect(':');
    const int k = integer();
    if (name == "cube") return cube(k);
    if (name == "simplex") return simplex(k);
    if (name == "polygon") return polygon(k);
    if (name == "prism") return prism(k);
    fail("unknown builder '" + name + "'");
  }
};

}  // namespace detail

/// Parses a builder descriptor such as `cube:3`, `polygon:6`, `prism:5`,
/// `simplex:3`, `pyramid`, `octahedron`, `product(cube:1,polygon:4)`,
/// `truncate(cube:3,0,3,5)` or `total(simplex:3)`.
inline BuiltPolytope build(std::string_view descriptor) {
  detail::DescriptorParser p{descriptor};
  auto out = p.parse();
  p.skip_ws();
  if (p.pos != descriptor.size()) p.fail("trailing characters");
  return out;
}

}  // namespace chromatope
