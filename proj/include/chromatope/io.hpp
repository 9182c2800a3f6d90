#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromatope/builders.hpp"
#include "chromatope/cell_complex.hpp"
#include "chromatope/characteristic.hpp"
#include "chromatope/cover.hpp"
#include "chromatope/errors.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope::io {

using nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

inline json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed " + what + ": " + e.what());
  }
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- polytopes --------------------------------------------------------------

inline json to_json(const Polytope& p) {
  json j;
  j["dim"] = p.dim();
  j["facets"] = p.comb.facets;
  j["vertex_facets"] = p.comb.vertex_facets;
  if (p.geom) {
    j["coords"] = p.geom->coords;
    json hs = json::array();
    for (const auto& h : p.geom->halfspaces) hs.push_back({{"normal", h.normal}, {"offset", h.offset}});
    j["halfspaces"] = std::move(hs);
  }
  return j;
}

inline json to_json(const Coloring& h) { return {{"num_colors", h.num_colors}, {"color", h.color}}; }

inline json to_json(const BuiltPolytope& b) {
  auto j = to_json(b.polytope);
  if (b.coloring) j["coloring"] = to_json(*b.coloring);
  return j;
}

inline json to_json(const Face& f) { return {{"dim", f.dim}, {"facets", f.facets}, {"vertices", f.vertices}}; }

inline json to_json(const CharacteristicMatrix& c) {
  return {{"n", c.n}, {"m", c.m()}, {"columns", c.columns}};
}

template <typename T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string(what) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string(what) + ": bad '" + key + "': " + e.what());
  }
}

inline Coloring coloring_from_json(const json& j) {
  Coloring h{field<std::vector<int>>(j, "color", "coloring"), field<int>(j, "num_colors", "coloring")};
  for (int c : h.color)
    if (c < 0 || c >= h.num_colors) throw InvalidInput("coloring: color out of range");
  return h;
}

inline BuiltPolytope polytope_from_json(const json& j) {
  BuiltPolytope out;
  auto& c = out.polytope.comb;
  c.dim = field<int>(j, "dim", "polytope");
  c.vertex_facets = field<std::vector<std::vector<int>>>(j, "vertex_facets", "polytope");
  if (j.contains("facets")) {
    c.facets = field<std::vector<std::string>>(j, "facets", "polytope");
  } else {
    int m = 0;
    for (const auto& fs : c.vertex_facets)
      for (int f : fs) m = std::max(m, f + 1);
    for (int f = 0; f < m; ++f) c.facets.push_back("F" + std::to_string(f));
  }
  if (c.dim < 1) throw InvalidInput("polytope: dim must be >= 1");
  for (const auto& fs : c.vertex_facets)
    for (int f : fs)
      if (f < 0 || static_cast<std::size_t>(f) >= c.facets.size())
        throw InvalidInput("polytope: facet index " + std::to_string(f) + " out of range");
  normalize_incidence(c);
  if (j.contains("coords") != j.contains("halfspaces"))
    throw InvalidInput("polytope: coords and halfspaces must be given together");
  if (j.contains("coords")) {
    GeometricRealization g;
    g.coords = field<std::vector<Point>>(j, "coords", "polytope");
    for (const auto& h : j.at("halfspaces"))
      g.halfspaces.push_back({field<std::vector<double>>(h, "normal", "halfspace"), field<double>(h, "offset", "halfspace")});
    if (g.coords.size() != c.num_vertices() || g.halfspaces.size() != c.num_facets())
      throw InvalidInput("polytope: realization does not match incidence sizes");
    for (const auto& x : g.coords)
      if (x.size() != static_cast<std::size_t>(c.dim)) throw InvalidInput("polytope: coordinate of wrong dimension");
    for (auto& h : g.halfspaces) {
      if (h.normal.size() != static_cast<std::size_t>(c.dim)) throw InvalidInput("polytope: normal of wrong dimension");
      // already-unit normals are kept bit for bit so files round-trip
      if (std::abs(geom::norm(h.normal) - 1.0) > 1e-12) h = geom::normalized(std::move(h));
    }
    out.polytope.geom = std::move(g);
  }
  if (j.contains("coloring")) out.coloring = coloring_from_json(j.at("coloring"));
  return out;
}

inline CharacteristicMatrix characteristic_from_json(const json& j) {
  CharacteristicMatrix c;
  c.n = field<int>(j, "n", "characteristic");
  c.columns = field<std::vector<std::vector<std::int64_t>>>(j, "columns", "characteristic");
  if (j.contains("m") && field<std::size_t>(j, "m", "characteristic") != c.columns.size())
    throw InvalidInput("characteristic: m does not match the number of columns");
  for (const auto& col : c.columns)
    if (col.size() != static_cast<std::size_t>(c.n)) throw InvalidInput("characteristic: column of wrong length");
  return c;
}

/// A builder descriptor, a path to a polytope JSON file, or an inline object.
inline BuiltPolytope load_polytope(const json& spec) {
  if (spec.is_object()) return polytope_from_json(spec);
  if (!spec.is_string()) throw InvalidInput("polytope must be a builder descriptor, file path or object");
  const auto s = spec.get<std::string>();
  if (std::filesystem::is_regular_file(s)) return polytope_from_json(parse(read_file(s), "polytope file " + s));
  return build(s);
}

// ---- covers -----------------------------------------------------------------

struct LoadedCover {
  BuiltPolytope polytope;
  json polytope_spec;
  CoverInstance cover;
};

inline json cover_to_json(const json& polytope_spec, const CoverInstance& c) {
  json sets = json::array();
  for (std::size_t i = 0; i < c.sets.size(); ++i) sets.push_back({{"label", c.labels[i]}, {"cells", c.sets[i]}});
  return {{"polytope", polytope_spec}, {"grid", c.complex->grid}, {"sets", std::move(sets)}};
}

/// Rebuilds the grid complex from the polytope and resolution.
inline LoadedCover cover_from_json(const json& j) {
  LoadedCover out;
  if (!j.is_object() || !j.contains("polytope")) throw InvalidInput("cover: missing 'polytope'");
  out.polytope_spec = j.at("polytope");
  out.polytope = load_polytope(out.polytope_spec);
  const int grid = field<int>(j, "grid", "cover");
  out.cover.complex = std::make_shared<const CellComplex>(grid_complex(out.polytope.polytope, grid));
  if (!j.contains("sets") || !j.at("sets").is_array()) throw InvalidInput("cover: 'sets' must be an array");
  for (const auto& s : j.at("sets")) {
    const auto& label = s.contains("label") ? s.at("label") : json();
    out.cover.labels.push_back(label.is_string() ? label.get<std::string>() : label.dump());
    out.cover.sets.push_back(field<std::vector<int>>(s, "cells", "cover set"));
  }
  validate_family(out.cover);
  return out;
}

inline json to_json(const Witness& w) {
  json j{{"kind", to_string(w.kind)}, {"cells", w.cells}};
  if (w.label >= 0) j["label"] = w.label;
  if (!w.facets.empty()) j["facets"] = w.facets;
  if (!w.colors.empty()) j["colors"] = w.colors;
  if (!w.faces.empty()) {
    json fs = json::array();
    for (const auto& f : w.faces) fs.push_back(to_json(f));
    j["faces"] = std::move(fs);
  }
  if (w.face_dim >= 0) j["face_dim"] = w.face_dim;
  if (w.simplex_facet >= 0) j["simplex_facet"] = w.simplex_facet;
  return j;
}

/// JSON envelope for an exception, written to stderr by the CLI.
inline json error_envelope(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  json j{{"error", {{"kind", err ? err->kind() : "internal"}, {"message", e.what()}}}};
  if (const auto* g = dynamic_cast<const GameError*>(&e)) j["error"]["reason"] = g->reason();
  return j;
}

}  // namespace chromatope::io
