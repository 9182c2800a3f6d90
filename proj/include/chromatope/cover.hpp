#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "chromatope/builders.hpp"
#include "chromatope/cell_complex.hpp"
#include "chromatope/characteristic.hpp"
#include "chromatope/errors.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope {

/// Labelled closed sets on a cell complex; set i is the closed union of
/// the cells in sets[i]. A cover must use every cell; a family (for the
/// quantitative checks) need not.
struct CoverInstance {
  std::shared_ptr<const CellComplex> complex;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> sets;

  std::size_t num_labels() const { return sets.size(); }
};

inline void validate_family(const CoverInstance& c) {
  if (!c.complex) throw InvalidInput("cover has no cell complex");
  if (c.labels.size() != c.sets.size()) throw InvalidInput("cover: labels and sets differ in length");
  for (std::size_t i = 0; i < c.sets.size(); ++i) {
    if (c.sets[i].empty()) throw InvalidInput("cover: label '" + c.labels[i] + "' is empty");
    for (int cell : c.sets[i])
      if (cell < 0 || static_cast<std::size_t>(cell) >= c.complex->size())
        throw InvalidInput("cover: cell " + std::to_string(cell) + " out of range");
  }
}

inline void validate_cover(const CoverInstance& c) {
  validate_family(c);
  std::vector<char> used(c.complex->size(), 0);
  for (const auto& s : c.sets)
    for (int cell : s) used[static_cast<std::size_t>(cell)] = 1;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw InvalidInput("cover: cell " + std::to_string(i) + " is not covered");
}

/// Labels containing each cell.
inline std::vector<std::vector<int>> cell_labels(const CoverInstance& c) {
  std::vector<std::vector<int>> out(c.complex->size());
  for (std::size_t i = 0; i < c.sets.size(); ++i)
    for (int cell : c.sets[i]) out[static_cast<std::size_t>(cell)].push_back(static_cast<int>(i));
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

/// Largest number of labels whose closed sets contain a common point. Every
/// point's containing cells all contain a common subdivision vertex, so it
/// suffices to count at vertices.
inline int multiplicity(const CoverInstance& c) {
  const auto lab = cell_labels(c);
  int best = 0;
  std::vector<int> seen;
  for (const auto& inc : c.complex->vertex_cells) {
    seen.clear();
    for (int cell : inc) {
      const auto& l = lab[static_cast<std::size_t>(cell)];
      seen.insert(seen.end(), l.begin(), l.end());
    }
    std::sort(seen.begin(), seen.end());
    best = std::max(best, static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin()));
  }
  return best;
}

/// Connected components of one label. Wall adjacency by default; the
/// theorem checkers use closure adjacency (closed sets touching at a point
/// are connected).
inline std::vector<std::vector<int>> components(const CoverInstance& c, int label,
                                                Connectivity conn = Connectivity::wall) {
  if (label < 0 || static_cast<std::size_t>(label) >= c.sets.size())
    throw InvalidInput("components: unknown label index " + std::to_string(label));
  return cell_components(*c.complex, c.sets[static_cast<std::size_t>(label)], conn);
}

/// Facets (delta-contact) touched by a set of cells.
inline std::vector<int> touched_facets(const CellComplex& cx, const std::vector<int>& cells) {
  std::set<int> fs;
  for (int c : cells)
    for (int f : cx.cells[static_cast<std::size_t>(c)].facets) fs.insert(f);
  return {fs.begin(), fs.end()};
}

enum class WitnessKind { same_color_pair, all_colors, many_facets, essential_component, two_k_faces };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::same_color_pair: return "same_color_pair";
    case WitnessKind::all_colors: return "all_colors";
    case WitnessKind::many_facets: return "many_facets";
    case WitnessKind::essential_component: return "essential_component";
    case WitnessKind::two_k_faces: return "two_k_faces";
  }
  return "?";
}

struct Witness {
  WitnessKind kind = WitnessKind::same_color_pair;
  int label = -1;           // -1 for complement components
  std::vector<int> cells;   // the connected component
  std::vector<int> facets;  // touched facets named by the conclusion
  std::vector<int> colors;  // I-color class (essential_component)
  std::vector<Face> faces;  // k-faces named by the conclusion
  int face_dim = -1;
  int simplex_facet = -1;   // quantitative KKM: the simplex whose skeleton is touched
};

namespace detail {

inline void require_compatible(const CombinatorialPolytope& p, const CoverInstance& c, bool cover = false) {
  if (cover)
    validate_cover(c);
  else
    validate_family(c);
  if (c.complex->num_facets() != p.num_facets() || c.complex->dim != p.dim)
    throw InvalidInput("cover complex does not match the polytope");
}

inline void require_multiplicity(const CoverInstance& c, int bound, const char* what) {
  const int mu = multiplicity(c);
  if (mu > bound)
    throw HypothesisViolation(std::string(what) + ": covering multiplicity " + std::to_string(mu) + " exceeds " +
                              std::to_string(bound));
}

// First (label, component) in deterministic order whose touched facets satisfy pick().
template <typename Pick>
std::optional<Witness> scan_components(const CoverInstance& c, WitnessKind kind, Pick&& pick) {
  for (std::size_t l = 0; l < c.sets.size(); ++l)
    for (auto& comp : components(c, static_cast<int>(l), Connectivity::closure)) {
      const auto touched = touched_facets(*c.complex, comp);
      if (auto fs = pick(touched)) {
        Witness w;
        w.kind = kind;
        w.label = static_cast<int>(l);
        w.cells = std::move(comp);
        w.facets = std::move(*fs);
        return w;
      }
    }
  return std::nullopt;
}

inline std::optional<std::vector<int>> same_color_pair(const Coloring& h, const std::vector<int>& touched,
                                                       std::optional<int> only_color) {
  for (std::size_t a = 0; a < touched.size(); ++a)
    for (std::size_t b = a + 1; b < touched.size(); ++b) {
      const int ca = h.color[static_cast<std::size_t>(touched[a])];
      if (ca == h.color[static_cast<std::size_t>(touched[b])] && (!only_color || *only_color == ca))
        return std::vector<int>{touched[a], touched[b]};
    }
  return std::nullopt;
}

}  // namespace detail

/// A component of some set touching two distinct facets of one color.
/// Requires a proper n-coloring and multiplicity <= n. `only_color`
/// restricts the search to one color class.
inline std::optional<Witness> check_colorful_lebesgue(const CombinatorialPolytope& p, const Coloring& h,
                                                      const CoverInstance& cover,
                                                      std::optional<int> only_color = std::nullopt) {
  detail::require_compatible(p, cover, true);
  if (!is_proper(p, h)) throw HypothesisViolation("colorful Lebesgue: coloring is not proper");
  if (h.num_colors != p.dim)
    throw HypothesisViolation("colorful Lebesgue: needs an n-coloring, got " + std::to_string(h.num_colors) +
                              " colors");
  detail::require_multiplicity(cover, p.dim, "colorful Lebesgue");
  return detail::scan_components(cover, WitnessKind::same_color_pair, [&](const std::vector<int>& t) {
    return detail::same_color_pair(h, t, only_color);
  });
}

/// A component touching facets of all n+1 colors of a special coloring.
inline std::optional<Witness> check_colorful_kkm(const CombinatorialPolytope& p, const Coloring& h,
                                                 const CoverInstance& cover) {
  detail::require_compatible(p, cover, true);
  require_special_coloring(p, h);
  detail::require_multiplicity(cover, p.dim, "colorful KKM");
  return detail::scan_components(cover, WitnessKind::all_colors,
                                 [&](const std::vector<int>& t) -> std::optional<std::vector<int>> {
                                   std::vector<int> pick(static_cast<std::size_t>(h.num_colors), -1);
                                   for (int f : t) {
                                     auto& slot = pick[static_cast<std::size_t>(h.color[static_cast<std::size_t>(f)])];
                                     if (slot < 0) slot = f;
                                   }
                                   for (int f : pick)
                                     if (f < 0) return std::nullopt;
                                   return pick;
                                 });
}

/// A component touching at least n+1 distinct facets.
inline std::optional<Witness> check_karasev(const CombinatorialPolytope& p, const CoverInstance& cover) {
  detail::require_compatible(p, cover, true);
  require_simple(p, "Karasev check");
  detail::require_multiplicity(cover, p.dim, "Karasev check");
  return detail::scan_components(cover, WitnessKind::many_facets,
                                 [&](const std::vector<int>& t) -> std::optional<std::vector<int>> {
                                   if (t.size() >= static_cast<std::size_t>(p.dim) + 1) return t;
                                   return std::nullopt;
                                 });
}

namespace detail {

// True iff some family cell contains every vertex in `verts`.
inline bool covered_by_family(const CellComplex& cx, const std::vector<int>& verts, const std::vector<char>& in_family) {
  if (verts.empty()) return false;
  for (int c : cx.vertex_cells[static_cast<std::size_t>(verts.front())])
    if (in_family[static_cast<std::size_t>(c)] && includes_sorted(cx.cells[static_cast<std::size_t>(c)].vertices, verts))
      return true;
  return false;
}

inline std::vector<char> family_mask(const CoverInstance& family) {
  std::vector<char> in(family.complex->size(), 0);
  for (const auto& s : family.sets)
    for (int c : s) in[static_cast<std::size_t>(c)] = 1;
  return in;
}

}  // namespace detail

/// Connected components of P minus the family's union, as sets of free
/// cells. Two free cells are joined when their common face is not inside a
/// single family cell (its relative interior is then free).
inline std::vector<std::vector<int>> complement_components(const CoverInstance& family) {
  const auto& cx = *family.complex;
  const auto in = detail::family_mask(family);
  std::vector<char> seen(cx.size(), 0);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < cx.size(); ++s) {
    if (in[s] || seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(static_cast<int>(s));
    seen[s] = 1;
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      comp.push_back(a);
      for (int b : cx.closure_adjacency[static_cast<std::size_t>(a)]) {
        if (in[static_cast<std::size_t>(b)] || seen[static_cast<std::size_t>(b)]) continue;
        const auto shared = detail::intersect_sorted(cx.cells[static_cast<std::size_t>(a)].vertices,
                                                     cx.cells[static_cast<std::size_t>(b)].vertices);
        if (detail::covered_by_family(cx, shared, in)) continue;
        seen[static_cast<std::size_t>(b)] = 1;
        q.push(b);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Indices into `faces` met by the free part of `component` (exact
/// incidence: the cell's face lying in K is not swallowed by the family).
inline std::vector<int> complement_touched_faces(const CoverInstance& family, const std::vector<int>& component,
                                                 const std::vector<Face>& faces) {
  const auto& cx = *family.complex;
  const auto in = detail::family_mask(family);
  std::vector<int> out;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const auto& fs = faces[k].facets;
    bool hit = false;
    for (int c : component) {
      std::vector<int> on;
      for (int v : cx.cells[static_cast<std::size_t>(c)].vertices)
        if (detail::includes_sorted(cx.vertex_facets[static_cast<std::size_t>(v)], fs)) on.push_back(v);
      if (!on.empty() && !detail::covered_by_family(cx, on, in)) {
        hit = true;
        break;
      }
    }
    if (hit) out.push_back(static_cast<int>(k));
  }
  return out;
}

/// Quantitative Lebesgue check. Family members may touch at most one facet
/// per color class and the family multiplicity must be <= k. Returns a
/// complement component, a color set I with |I| = n - k and at least
/// 2^(n-k) k-faces of I-class I met by the component; when
/// `prescribed_vertex` is set, the I-face through that vertex is among them.
inline std::optional<Witness> check_quantitative_lebesgue(const CombinatorialPolytope& p, const Coloring& h,
                                                          const CoverInstance& family, int k,
                                                          std::optional<int> prescribed_vertex = std::nullopt) {
  detail::require_compatible(p, family);
  const int n = p.dim;
  if (k < 0 || k > n - 1) throw InvalidInput("quantitative Lebesgue: k out of range");
  if (!is_proper(p, h) || h.num_colors != n)
    throw HypothesisViolation("quantitative Lebesgue: needs a proper n-coloring");
  if (prescribed_vertex && (*prescribed_vertex < 0 || static_cast<std::size_t>(*prescribed_vertex) >= p.num_vertices()))
    throw InvalidInput("quantitative Lebesgue: prescribed vertex out of range");
  for (std::size_t l = 0; l < family.sets.size(); ++l) {
    const auto t = touched_facets(*family.complex, family.sets[l]);
    if (auto pair = detail::same_color_pair(h, t, std::nullopt))
      throw HypothesisViolation("quantitative Lebesgue: family member '" + family.labels[l] + "' touches facets " +
                                std::to_string((*pair)[0]) + " and " + std::to_string((*pair)[1]) +
                                " of the same color");
  }
  detail::require_multiplicity(family, k, "quantitative Lebesgue");

  const auto faces = enumerate_faces(p, k);
  std::vector<std::vector<int>> classes;
  for (const auto& f : faces) classes.push_back(i_color_class(p, h, f));
  const std::size_t need = std::size_t{1} << (n - k);

  for (auto& comp : complement_components(family)) {
    const auto touched = complement_touched_faces(family, comp, faces);
    std::map<std::vector<int>, std::vector<int>> by_class;
    for (int t : touched) by_class[classes[static_cast<std::size_t>(t)]].push_back(t);
    for (auto& [cls, members] : by_class) {
      if (members.size() < need) continue;
      if (prescribed_vertex) {
        bool has_v = false;
        for (int t : members)
          if (std::binary_search(faces[static_cast<std::size_t>(t)].vertices.begin(),
                                 faces[static_cast<std::size_t>(t)].vertices.end(), *prescribed_vertex)) {
            has_v = true;
            break;
          }
        if (!has_v) continue;
      }
      Witness w;
      w.kind = WitnessKind::essential_component;
      w.cells = comp;
      w.colors = cls;
      w.face_dim = k;
      for (int t : members) w.faces.push_back(faces[static_cast<std::size_t>(t)]);
      return w;
    }
  }
  return std::nullopt;
}

/// Quantitative KKM check on a special (n+1)-coloring. The family has
/// multiplicity <= k and no member touches facets of all n+1 colors.
/// Returns a complement component meeting every k-face of some simplex
/// facet T and at least C(n, k) k-faces not contained in T.
inline std::optional<Witness> check_quantitative_kkm(const CombinatorialPolytope& p, const Coloring& h,
                                                     const CoverInstance& family, int k) {
  detail::require_compatible(p, family);
  const int n = p.dim;
  if (k < 0 || k > n - 1) throw InvalidInput("quantitative KKM: k out of range");
  require_special_coloring(p, h);
  for (std::size_t l = 0; l < family.sets.size(); ++l) {
    std::set<int> colors;
    for (int f : touched_facets(*family.complex, family.sets[l])) colors.insert(h.color[static_cast<std::size_t>(f)]);
    if (static_cast<int>(colors.size()) == n + 1)
      throw HypothesisViolation("quantitative KKM: family member '" + family.labels[l] +
                                "' touches facets of all n+1 colors");
  }
  detail::require_multiplicity(family, k, "quantitative KKM");

  const auto faces = enumerate_faces(p, k);
  const auto simplices = h.facets_of_color(n);
  const auto need_outside = detail::binomial(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  for (auto& comp : complement_components(family)) {
    const auto touched = complement_touched_faces(family, comp, faces);
    std::vector<char> hit(faces.size(), 0);
    for (int t : touched) hit[static_cast<std::size_t>(t)] = 1;
    for (int tf : simplices) {
      bool skeleton = true;
      std::vector<int> inside, outside;
      for (std::size_t i = 0; i < faces.size(); ++i) {
        const bool in_t = std::binary_search(faces[i].facets.begin(), faces[i].facets.end(), tf);
        if (in_t && !hit[i]) skeleton = false;
        if (!hit[i]) continue;
        (in_t ? inside : outside).push_back(static_cast<int>(i));
      }
      if (!skeleton || outside.size() < need_outside) continue;
      Witness w;
      w.kind = WitnessKind::essential_component;
      w.cells = comp;
      w.face_dim = k;
      w.simplex_facet = tf;
      for (int i : inside) w.faces.push_back(faces[static_cast<std::size_t>(i)]);
      for (int i : outside) w.faces.push_back(faces[static_cast<std::size_t>(i)]);
      return w;
    }
  }
  return std::nullopt;
}

/// Total truncation of a general polytope matched to a grid complex on the
/// original: the truncation is cut at one cell width and gridded over the
/// same box, so every cell of it sits inside the original cell with the
/// same grid index.
struct TruncatedGrid {
  BuiltPolytope truncated;
  std::shared_ptr<const CellComplex> complex;
  std::vector<int> to_original;  // truncated cell -> original cell
  double eps = 0.0;
};

inline TruncatedGrid truncate_for_grid(const Polytope& p, const CellComplex& original) {
  TruncatedGrid tg;
  tg.eps = *std::min_element(original.width.begin(), original.width.end());
  tg.truncated = total_truncation(BuiltPolytope{p, std::nullopt, {}}, tg.eps);
  tg.complex = std::make_shared<const CellComplex>(grid_complex(tg.truncated.polytope, original.grid, original.box));
  for (const auto& cell : tg.complex->cells) {
    const auto o = original.cell_at(cell.grid_index);
    if (!o) throw InvalidInput("truncated grid cell has no original counterpart");
    tg.to_original.push_back(*o);
  }
  return tg;
}

/// Pulls a cover of the original back to the truncation grid.
inline CoverInstance restrict_cover(const CoverInstance& cover, const TruncatedGrid& tg) {
  const auto lab = cell_labels(cover);
  CoverInstance out{tg.complex, cover.labels, std::vector<std::vector<int>>(cover.sets.size())};
  for (std::size_t c = 0; c < tg.to_original.size(); ++c)
    for (int l : lab[static_cast<std::size_t>(tg.to_original[c])]) out.sets[static_cast<std::size_t>(l)].push_back(static_cast<int>(c));
  // labels whose cells all vanished under truncation are dropped
  CoverInstance compact{tg.complex, {}, {}};
  for (std::size_t l = 0; l < out.sets.size(); ++l)
    if (!out.sets[l].empty()) {
      compact.labels.push_back(out.labels[l]);
      compact.sets.push_back(std::move(out.sets[l]));
    }
  return compact;
}

/// Two distinct faces of one dimension met by one component, found as a
/// same-colored facet pair F_K1, F_K2 of the total truncation colored by
/// face dimension. Cells in the witness are cells of the original grid.
inline std::optional<Witness> check_general_polytope(const Polytope& p, const CoverInstance& cover,
                                                     const TruncatedGrid& tg, std::optional<int> k = std::nullopt) {
  validate_cover(cover);
  if (cover.complex->dim != p.dim() || cover.complex->num_facets() != p.num_facets())
    throw InvalidInput("cover complex does not match the polytope");
  detail::require_multiplicity(cover, p.dim(), "general polytope check");
  const auto restricted = restrict_cover(cover, tg);
  const auto& tp = tg.truncated.polytope.comb;
  auto w = check_colorful_lebesgue(tp, *tg.truncated.coloring, restricted, k);
  if (!w) return std::nullopt;
  Witness out;
  out.kind = WitnessKind::two_k_faces;
  const auto& label = restricted.labels[static_cast<std::size_t>(w->label)];
  out.label = static_cast<int>(std::find(cover.labels.begin(), cover.labels.end(), label) - cover.labels.begin());
  std::set<int> cells;
  for (int c : w->cells) cells.insert(tg.to_original[static_cast<std::size_t>(c)]);
  out.cells.assign(cells.begin(), cells.end());
  out.facets = w->facets;  // facets of the truncation
  for (int f : w->facets) out.faces.push_back(tg.truncated.source_faces[static_cast<std::size_t>(f)]);
  out.face_dim = out.faces.front().dim;
  return out;
}

inline std::optional<Witness> check_general_polytope(const Polytope& p, const CoverInstance& cover,
                                                     std::optional<int> k = std::nullopt) {
  return check_general_polytope(p, cover, truncate_for_grid(p, *cover.complex), k);
}

struct WitnessCheck {
  bool ok = true;
  std::string reason;
};

namespace detail {

inline WitnessCheck reject(std::string why) { return {false, std::move(why)}; }

// Facet contact recomputed from vertex coordinates and halfspaces.
inline bool raw_contact(const CellComplex& cx, const std::vector<int>& cells, int facet) {
  const auto& hs = cx.halfspaces[static_cast<std::size_t>(facet)];
  for (int c : cells)
    for (int v : cx.cells[static_cast<std::size_t>(c)].vertices)
      if (geom::slack(hs, cx.vertices[static_cast<std::size_t>(v)]) <= cx.delta) return true;
  return false;
}

inline bool is_connected(const CellComplex& cx, const std::vector<int>& cells) {
  return !cells.empty() && cell_components(cx, cells, Connectivity::closure).size() == 1;
}

}  // namespace detail

/// Independent re-check of a label-component witness (same_color_pair,
/// all_colors, many_facets) against the raw cover and geometry.
inline WitnessCheck verify_witness(const CombinatorialPolytope& p, const Coloring* h, const CoverInstance& cover,
                                   const Witness& w) {
  const auto& cx = *cover.complex;
  if (w.label < 0 || static_cast<std::size_t>(w.label) >= cover.sets.size()) return detail::reject("bad label");
  const auto& set = cover.sets[static_cast<std::size_t>(w.label)];
  for (int c : w.cells)
    if (!std::binary_search(set.begin(), set.end(), c) && std::find(set.begin(), set.end(), c) == set.end())
      return detail::reject("cell " + std::to_string(c) + " not in the label's set");
  if (!detail::is_connected(cx, w.cells)) return detail::reject("cells are not connected");
  for (int f : w.facets)
    if (!detail::raw_contact(cx, w.cells, f)) return detail::reject("facet " + std::to_string(f) + " not touched");
  std::set<int> distinct(w.facets.begin(), w.facets.end());
  if (distinct.size() != w.facets.size()) return detail::reject("repeated facet");
  auto col = [&](int f) { return h->color[static_cast<std::size_t>(f)]; };
  switch (w.kind) {
    case WitnessKind::same_color_pair:
      if (!h || w.facets.size() != 2 || col(w.facets[0]) != col(w.facets[1]))
        return detail::reject("facets are not a same-colored pair");
      break;
    case WitnessKind::all_colors: {
      if (!h) return detail::reject("coloring required");
      std::set<int> cs;
      for (int f : w.facets) cs.insert(col(f));
      if (static_cast<int>(cs.size()) != h->num_colors) return detail::reject("not all colors present");
      break;
    }
    case WitnessKind::many_facets:
      if (w.facets.size() < static_cast<std::size_t>(p.dim) + 1) return detail::reject("fewer than n+1 facets");
      break;
    default:
      return detail::reject("not a label-component witness");
  }
  return {};
}

/// Re-check of a complement witness from either quantitative check.
inline WitnessCheck verify_complement_witness(const CombinatorialPolytope& p, const Coloring& h,
                                              const CoverInstance& family, const Witness& w,
                                              std::optional<int> prescribed_vertex = std::nullopt) {
  const auto in = detail::family_mask(family);
  for (int c : w.cells)
    if (in[static_cast<std::size_t>(c)]) return detail::reject("cell " + std::to_string(c) + " belongs to the family");
  bool found = false;
  for (const auto& comp : complement_components(family))
    if (comp == w.cells) found = true;
  if (!found) return detail::reject("cells are not a complement component");
  const auto touched = complement_touched_faces(family, w.cells, w.faces);
  if (touched.size() != w.faces.size()) return detail::reject("a listed face is not met");
  std::set<std::vector<int>> distinct;
  for (const auto& f : w.faces) {
    if (f.dim != w.face_dim) return detail::reject("face of wrong dimension");
    distinct.insert(f.vertices);
  }
  if (distinct.size() != w.faces.size()) return detail::reject("repeated face");
  const int n = p.dim, k = w.face_dim;
  if (w.simplex_facet < 0) {
    for (const auto& f : w.faces)
      if (i_color_class(p, h, f) != w.colors) return detail::reject("face outside the I-color class");
    if (w.faces.size() < (std::size_t{1} << (n - k))) return detail::reject("fewer than 2^(n-k) faces");
    if (prescribed_vertex) {
      bool has = false;
      for (const auto& f : w.faces)
        has = has || std::binary_search(f.vertices.begin(), f.vertices.end(), *prescribed_vertex);
      if (!has) return detail::reject("no listed face contains the prescribed vertex");
    }
  } else {
    std::size_t inside = 0, outside = 0;
    for (const auto& f : w.faces)
      (std::binary_search(f.facets.begin(), f.facets.end(), w.simplex_facet) ? inside : outside)++;
    if (inside != detail::binomial(static_cast<std::size_t>(n), static_cast<std::size_t>(k + 1)))
      return detail::reject("simplex skeleton incomplete");
    if (outside < detail::binomial(static_cast<std::size_t>(n), static_cast<std::size_t>(k)))
      return detail::reject("fewer than C(n,k) faces outside the simplex");
  }
  return {};
}

/// Re-check of a general-polytope witness: the cells are connected in the
/// original grid, both faces have the stated dimension, and each face is
/// approached by some cell vertex within the truncation depth plus delta
/// (measured by the summed slack of the facets containing the face).
inline WitnessCheck verify_general_witness(const Polytope& p, const CoverInstance& cover, const TruncatedGrid& tg,
                                           const Witness& w) {
  const auto& cx = *cover.complex;
  if (w.kind != WitnessKind::two_k_faces || w.faces.size() != 2) return detail::reject("not a two-face witness");
  if (w.faces[0].vertices == w.faces[1].vertices) return detail::reject("faces coincide");
  if (w.faces[0].dim != w.faces[1].dim || w.faces[0].dim != w.face_dim) return detail::reject("dimension mismatch");
  if (w.label < 0 || static_cast<std::size_t>(w.label) >= cover.sets.size()) return detail::reject("bad label");
  const auto& set = cover.sets[static_cast<std::size_t>(w.label)];
  for (int c : w.cells)
    if (std::find(set.begin(), set.end(), c) == set.end()) return detail::reject("cell not in the label's set");
  if (!detail::is_connected(cx, w.cells)) return detail::reject("cells are not connected");
  const auto& g = *p.geom;
  const int n = p.dim();
  for (const auto& f : w.faces) {
    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    for (int fi : f.facets)
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g.halfspaces[static_cast<std::size_t>(fi)].normal[i];
    const double depth = f.dim == n - 1 ? 0.0 : tg.eps * std::pow(kTruncationDepthRatio, f.dim);
    const double bound = geom::norm(sum) * (depth + cx.delta) + 1e-9;
    bool near = false;
    for (int c : w.cells)
      for (int v : cx.cells[static_cast<std::size_t>(c)].vertices) {
        double s = 0.0;
        for (int fi : f.facets) s += geom::slack(g.halfspaces[static_cast<std::size_t>(fi)], cx.vertices[static_cast<std::size_t>(v)]);
        near = near || s <= bound;
      }
    if (!near) return detail::reject("a face is not approached by the component");
  }
  return {};
}

}  // namespace chromatope
