// chromatope command-line tool. Results go to stdout (or --out) as JSON;
// errors go to stderr as {"error": {...}}.
// Exit codes: 0 ok, 1 theorem witness absent / identity failed, 2 usage or input error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "chromatope/chromatope.hpp"
#include "chromatope/hex_service.hpp"

using namespace chromatope;
using nlohmann::json;

namespace {

struct Source {
  std::string builder;
  std::string file;
  std::string coloring_file;

  void add(CLI::App* app) {
    auto* b = app->add_option("--builder,-b", builder, "builder descriptor, e.g. cube:3 or truncate(cube:3,0)");
    auto* f = app->add_option("--file,-f", file, "polytope JSON file");
    b->excludes(f);
    app->add_option("--coloring", coloring_file, "coloring JSON file (overrides the builder's)");
  }

  BuiltPolytope load() const {
    BuiltPolytope out;
    if (!file.empty())
      out = io::polytope_from_json(io::parse(io::read_file(file), "polytope file " + file));
    else if (!builder.empty())
      out = build(builder);
    else
      throw InvalidInput("give --builder or --file");
    if (!coloring_file.empty())
      out.coloring = io::coloring_from_json(io::parse(io::read_file(coloring_file), "coloring file"));
    return out;
  }

  json spec() const { return file.empty() ? json(builder) : json(file); }
};

std::string out_path;

void emit(const json& j) {
  if (out_path.empty())
    std::cout << io::dump(j);
  else
    io::write_file(out_path, io::dump(j));
}

const Coloring& need_coloring(const BuiltPolytope& b) {
  if (!b.coloring) throw InvalidInput("this polytope has no coloring; pass --coloring");
  return *b.coloring;
}

CharacteristicMatrix matrix_for(const BuiltPolytope& b, const std::string& which) {
  const auto& p = b.polytope.comb;
  if (which == "canonical") return canonical_characteristic(p, need_coloring(b));
  if (which == "special") return special_characteristic(p, need_coloring(b));
  if (which == "auto") {
    const auto& h = need_coloring(b);
    return h.num_colors == p.dim ? canonical_characteristic(p, h) : special_characteristic(p, h);
  }
  return io::characteristic_from_json(io::parse(io::read_file(which), "characteristic file"));
}

VariableNames names_for(const BuiltPolytope& b) {
  const auto& p = b.polytope.comb;
  if (b.coloring && b.coloring->num_colors == p.dim + 1)
    return VariableNames(p.num_facets(), b.coloring->facets_of_color(p.dim));
  return VariableNames(p.num_facets());
}

json identities_json(const std::vector<IdentityCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json j{{"name", c.name}, {"holds", c.holds}, {"instances", c.instances}};
    if (!c.holds) j["counterexample"] = c.counterexample;
    arr.push_back(std::move(j));
  }
  return arr;
}

hex::Board make_board(const BuiltPolytope& b, const std::string& sites, int vertex) {
  const auto& h = need_coloring(b);
  std::vector<Point> pts;
  if (sites.rfind("random:", 0) == 0) {
    const auto a = sites.find(':'), z = sites.rfind(':');
    if (a == z) throw InvalidInput("--sites must be random:k:seed or a JSON file");
    pts = hex::random_sites(b.polytope, std::stoi(sites.substr(a + 1, z - a - 1)), std::stoull(sites.substr(z + 1)));
  } else {
    pts = io::parse(io::read_file(sites), "sites file").get<std::vector<Point>>();
  }
  return hex::build_board(b, h, vertex, std::move(pts));
}

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_logger_mt("chromatope"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("CHROMATOPE_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Colored simple polytopes, quasitoric cohomology rings, cover checks and Voronoi Hex"};
  app.require_subcommand(1);
  app.add_option("--out,-o", out_path, "write the JSON result here instead of stdout");
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads for fuzz and no-tie runs")->check(CLI::Range(1u, 256u));

  int exit_code = 0;
  Source src;

  // ---- polytope ----
  auto* poly = app.add_subcommand("polytope", "build, validate, color and list faces");
  poly->require_subcommand(1);
  auto* p_build = poly->add_subcommand("build", "realize a builder descriptor");
  src.add(p_build);
  p_build->callback([&] { emit(io::to_json(src.load())); });

  auto* p_validate = poly->add_subcommand("validate", "simplicity, colorability and optional matrix check");
  src.add(p_validate);
  std::string char_file;
  p_validate->add_option("--characteristic", char_file, "characteristic matrix JSON to validate");
  p_validate->callback([&] {
    const auto b = src.load();
    const auto& p = b.polytope.comb;
    const auto simple = validate_simple(p);
    json j{{"dim", p.dim}, {"facets", p.num_facets()}, {"vertices", p.num_vertices()}, {"simple", simple.ok()},
           {"non_simple_vertices", simple.bad_vertices}};
    if (simple.ok()) {
      const auto jos = joswig_colorable(p);
      j["n_colorable"] = jos.colorable;
      json odd = json::array();
      for (const auto& f : jos.odd_faces) odd.push_back(io::to_json(f));
      j["odd_two_faces"] = std::move(odd);
    }
    if (b.coloring) j["coloring_proper"] = is_proper(p, *b.coloring);
    if (!char_file.empty()) {
      const auto rep = validate_characteristic(p, matrix_for(b, char_file));
      j["characteristic"] = {{"valid", rep.valid}, {"bad_vertices", rep.bad_vertices}};
    }
    emit(j);
  });

  auto* p_color = poly->add_subcommand("color", "exhaustive search for a proper k-coloring");
  src.add(p_color);
  int colors = 0;
  p_color->add_option("--colors,-k", colors, "number of colors (default: dimension)");
  p_color->callback([&] {
    const auto b = src.load();
    const int k = colors > 0 ? colors : b.polytope.dim();
    const auto h = find_coloring(b.polytope.comb, k);
    emit({{"colors", k}, {"coloring", h ? io::to_json(*h) : json(nullptr)}});
  });

  auto* p_faces = poly->add_subcommand("faces", "list faces of one dimension (or all)");
  src.add(p_faces);
  std::optional<int> face_dim;
  p_faces->add_option("--dim,-d", face_dim, "face dimension");
  p_faces->callback([&] {
    const auto b = src.load();
    const auto faces = face_dim ? enumerate_faces(b.polytope.comb, *face_dim) : face_lattice(b.polytope.comb);
    json arr = json::array();
    for (const auto& f : faces) {
      auto fj = io::to_json(f);
      fj["name"] = detail::face_name(b.polytope.comb, f);
      arr.push_back(std::move(fj));
    }
    emit({{"count", faces.size()}, {"faces", arr}});
  });

  // ---- ring ----
  auto* ring = app.add_subcommand("ring", "cohomology ring of the quasitoric manifold");
  ring->require_subcommand(1);
  std::string matrix = "auto";
  std::string klass;
  int ref_vertex = 0;

  auto* r_check = ring->add_subcommand("check-identities", "verify the ring relations used by the covering theorems");
  src.add(r_check);
  std::string kind = "auto";
  r_check->add_option("--kind", kind, "canonical, special or auto")->check(CLI::IsMember({"auto", "canonical", "special"}));
  r_check->callback([&] {
    const auto b = src.load();
    const auto& h = need_coloring(b);
    const bool special = kind == "special" || (kind == "auto" && h.num_colors == b.polytope.dim() + 1);
    const auto checks = special ? special_identities(b.polytope.comb, h) : canonical_identities(b.polytope.comb, h);
    emit({{"kind", special ? "special" : "canonical"}, {"all_hold", all_hold(checks)}, {"checks", identities_json(checks)}});
    if (!all_hold(checks)) exit_code = 1;
  });

  auto* r_int = ring->add_subcommand("integrate", "evaluate a top-degree class on the fundamental class");
  src.add(r_int);
  r_int->add_option("--class,-c", klass, "ring literal, e.g. \"(v1+v2+v3)^3\"")->required();
  r_int->add_option("--matrix", matrix, "auto, canonical, special or a matrix JSON file");
  r_int->add_option("--vertex", ref_vertex, "reference vertex fixing the orientation");
  r_int->callback([&] {
    const auto b = src.load();
    const CohomologyRing r(b.polytope.comb, matrix_for(b, matrix));
    const auto x = parse_ring_element(klass, names_for(b));
    emit({{"class", klass}, {"vertex", ref_vertex}, {"value", r.integrate(x, ref_vertex)}});
  });

  auto* r_nf = ring->add_subcommand("normal-form", "reduce a class to its normal form");
  src.add(r_nf);
  r_nf->add_option("--class,-c", klass, "ring literal")->required();
  r_nf->add_option("--matrix", matrix, "auto, canonical, special or a matrix JSON file");
  r_nf->callback([&] {
    const auto b = src.load();
    const CohomologyRing r(b.polytope.comb, matrix_for(b, matrix));
    const auto names = names_for(b);
    const auto x = parse_ring_element(klass, names);
    const auto red = r.reduce(x);
    const bool agree = red.value == r.normal_form_by_lattice(x);
    emit({{"class", klass}, {"normal_form", names.format(red.value)}, {"zero", red.value.is_zero()},
          {"rewrite_depth", red.max_depth}, {"routes_agree", agree}});
    if (!agree) exit_code = 1;
  });

  // ---- cover ----
  auto* cov = app.add_subcommand("cover", "check covering theorems on discretized covers");
  cov->require_subcommand(1);
  auto* c_verify = cov->add_subcommand("verify", "search a cover file for the theorem's witness");
  std::string cover_file, checker = "auto";
  std::optional<int> qk, qvertex, only_color;
  c_verify->add_option("--cover", cover_file, "cover JSON")->required();
  c_verify->add_option("--checker", checker, "auto, lebesgue, kkm, karasev, general, quantitative-lebesgue, quantitative-kkm");
  c_verify->add_option("--k", qk, "face dimension (quantitative checks, general)");
  c_verify->add_option("--vertex", qvertex, "prescribed vertex (quantitative Lebesgue)");
  c_verify->add_option("--color", only_color, "restrict the Lebesgue search to one color");
  c_verify->callback([&] {
    const auto lc = io::cover_from_json(io::parse(io::read_file(cover_file), "cover file"));
    const auto& b = lc.polytope;
    const auto& p = b.polytope.comb;
    std::string which = checker;
    if (which == "auto") {
      if (!validate_simple(p).ok())
        which = "general";
      else if (b.coloring)
        which = b.coloring->num_colors == p.dim ? "lebesgue" : "kkm";
      else
        which = "karasev";
    }
    std::optional<Witness> w;
    WitnessCheck chk;
    if (which == "lebesgue") {
      w = check_colorful_lebesgue(p, need_coloring(b), lc.cover, only_color);
      if (w) chk = verify_witness(p, &*b.coloring, lc.cover, *w);
    } else if (which == "kkm") {
      w = check_colorful_kkm(p, need_coloring(b), lc.cover);
      if (w) chk = verify_witness(p, &*b.coloring, lc.cover, *w);
    } else if (which == "karasev") {
      w = check_karasev(p, lc.cover);
      if (w) chk = verify_witness(p, nullptr, lc.cover, *w);
    } else if (which == "general") {
      const auto tg = truncate_for_grid(b.polytope, *lc.cover.complex);
      w = check_general_polytope(b.polytope, lc.cover, tg, qk);
      if (w) chk = verify_general_witness(b.polytope, lc.cover, tg, *w);
    } else if (which == "quantitative-lebesgue" || which == "quantitative-kkm") {
      if (!qk) throw InvalidInput(which + " needs --k");
      if (which == "quantitative-lebesgue") {
        w = check_quantitative_lebesgue(p, need_coloring(b), lc.cover, *qk, qvertex);
        if (w) chk = verify_complement_witness(p, *b.coloring, lc.cover, *w, qvertex);
      } else {
        w = check_quantitative_kkm(p, need_coloring(b), lc.cover, *qk);
        if (w) chk = verify_complement_witness(p, *b.coloring, lc.cover, *w);
      }
    } else {
      throw InvalidInput("unknown checker '" + which + "'");
    }
    json j{{"checker", which}, {"multiplicity", multiplicity(lc.cover)}, {"cells", lc.cover.complex->size()}};
    j["witness"] = w ? io::to_json(*w) : json(nullptr);
    if (w) j["recheck"] = {{"ok", chk.ok}, {"reason", chk.reason}};
    emit(j);
    if (!w) {
      spdlog::error("no witness found: the theorem guarantees one, so this is probably a bug");
      exit_code = 1;
    } else if (!chk.ok) {
      spdlog::error("witness failed the independent re-check: {}", chk.reason);
      exit_code = 1;
    }
  });

  auto* c_fuzz = cov->add_subcommand("fuzz", "run seeded random covers through a checker");
  src.add(c_fuzz);
  std::string profile = "partition", repro_dir = "fuzz-repro";
  int trials = 100, grid = 0;
  std::uint64_t seed = 1;
  c_fuzz->add_option("--profile", profile, "partition, shifted-bricks, voronoi-merge, random-growth");
  c_fuzz->add_option("--trials", trials, "number of covers")->check(CLI::NonNegativeNumber);
  c_fuzz->add_option("--seed", seed, "base seed");
  c_fuzz->add_option("--grid", grid, "cells per axis (default 16, or 8 above dimension 3)");
  c_fuzz->add_option("--checker", checker, "auto, lebesgue, kkm, karasev, general");
  c_fuzz->add_option("--repro-dir", repro_dir, "where absences are written");
  c_fuzz->callback([&] {
    const auto b = src.load();
    FuzzOptions opt;
    opt.profile = parse_profile(profile);
    if (checker != "auto") opt.checker = parse_checker(checker);
    opt.grid = grid;
    opt.threads = threads;
    opt.repro_dir = repro_dir;
    opt.polytope_spec = src.spec();
    auto coloring = b.coloring;
    if (!validate_simple(b.polytope.comb).ok()) {
      coloring.reset();
      if (!opt.checker) opt.checker = FuzzChecker::general;
    }
    const auto rep = fuzz_covers(b, coloring, seed, trials, opt);
    emit(to_json(rep));
    if (!rep.clean()) {
      spdlog::error("{} absences, {} failed re-checks", rep.absences.size(), rep.failures.size());
      exit_code = 1;
    }
  });

  // ---- hex ----
  auto* hx = app.add_subcommand("hex", "colorful Voronoi Hex");
  hx->require_subcommand(1);
  std::string sites = "random:20:1", policies = "uniform-random";
  int vertex = 0;
  auto board_opts = [&](CLI::App* a) {
    src.add(a);
    a->add_option("--sites", sites, "random:k:seed or a JSON file of points");
    a->add_option("--vertex", vertex, "distinguished vertex");
  };

  auto* h_sim = hx->add_subcommand("simulate", "play one game with bots");
  board_opts(h_sim);
  h_sim->add_option("--seed", seed, "playout seed");
  h_sim->add_option("--policies", policies, "comma-separated policy per player (uniform-random, connectivity-greedy)");
  h_sim->callback([&] {
    const auto b = src.load();
    auto board = std::make_shared<const hex::Board>(make_board(b, sites, vertex));
    std::vector<hex::Policy> pols;
    std::stringstream ss(policies);
    for (std::string p; std::getline(ss, p, ',');) pols.push_back(hex::parse_policy(p));
    const auto st = hex::random_playout(board, seed, pols, true);
    json moves = json::array();
    for (const auto& m : st.history()) moves.push_back({m.player, m.cell});
    emit({{"status", hex::to_string(st.status())},
          {"moves", moves},
          {"winner", st.winner() ? hex::to_json(*st.winner()) : json(nullptr)}});
    if (!st.winner()) exit_code = 1;
  });

  auto* h_tie = hx->add_subcommand("no-tie", "random complete playouts; any tie is exported");
  board_opts(h_tie);
  h_tie->add_option("--trials", trials, "playouts")->check(CLI::NonNegativeNumber);
  h_tie->add_option("--seed", seed, "playout seed");
  h_tie->add_option("--repro-dir", repro_dir, "where ties are written");
  h_tie->callback([&] {
    const auto b = src.load();
    auto board = std::make_shared<const hex::Board>(make_board(b, sites, vertex));
    const auto rep = hex::no_tie_check(board, trials, seed, repro_dir, threads);
    emit(hex::to_json(rep));
    if (rep.ties > 0) exit_code = 1;
  });

  auto* h_serve = hx->add_subcommand("serve", "HTTP+JSON game service");
  std::string host = "127.0.0.1";
  int port = 8080;
  h_serve->add_option("--host", host, "bind address");
  h_serve->add_option("--port", port, "port")->check(CLI::Range(1, 65535));
  h_serve->callback([&] {
    httplib::Server srv;
    hex::GameService service;
    service.mount(srv);
    spdlog::info("listening on {}:{}", host, port);
    if (!srv.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << io::error_envelope(e).dump() << "\n";
    return 2;
  }
  return exit_code;
}
