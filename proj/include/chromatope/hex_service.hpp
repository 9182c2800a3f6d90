#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "chromatope/hex.hpp"
#include "chromatope/io.hpp"

namespace chromatope::hex {

/// HTTP status plus JSON body; the transport-free result of a request.
struct Reply {
  int status = 200;
  nlohmann::json body;
};

struct Seat {
  bool human = true;
  Policy policy = Policy::uniform_random;
  bool joined = false;
};

/// In-memory game sessions. Moves on one session are serialized; state
/// reads share the lock; distinct sessions never contend beyond the map.
class GameService {
 public:
  Reply create(const nlohmann::json& req) {
    try {
      auto s = std::make_shared<Session>(make_session(req));
      std::string id;
      {
        std::unique_lock lk(map_mu_);
        id = "g" + std::to_string(++counter_);
        sessions_[id] = s;
      }
      std::unique_lock lk(s->mu);
      run_bots(*s);
      return {201, {{"game_id", id}, {"players", seats_json(*s)}}};
    } catch (const Error& e) {
      return error(400, e);
    } catch (const nlohmann::json::exception& e) {
      return {400, {{"error", {{"kind", "invalid_input"}, {"message", e.what()}}}}};
    }
  }

  Reply join(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::unique_lock lk(s->mu);
    for (std::size_t i = 0; i < s->seats.size(); ++i)
      if (s->seats[i].human && !s->seats[i].joined) {
        s->seats[i].joined = true;
        return {200, {{"player", i}, {"version", s->state.version()}}};
      }
    return {409, {{"error", {{"kind", "game_error"}, {"reason", "no_free_seat"}, {"message", "all human seats are taken"}}}}};
  }

  Reply state(const std::string& id) const {
    auto s = find(id);
    if (!s) return not_found(id);
    std::shared_lock lk(s->mu);
    auto j = state_json(s->state);
    j["game_id"] = id;
    j["seats"] = seats_json(*s);
    return {200, std::move(j)};
  }

  Reply move(const std::string& id, const nlohmann::json& req) {
    auto s = find(id);
    if (!s) return not_found(id);
    int player = 0, cell = 0;
    std::uint64_t expected = 0;
    try {
      player = req.at("player").get<int>();
      cell = req.at("cell").get<int>();
      expected = req.at("expected_version").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      return {400, {{"error", {{"kind", "invalid_input"}, {"message", std::string("move needs player, cell, expected_version: ") + e.what()}}}}};
    }
    std::unique_lock lk(s->mu);
    if (expected != s->state.version()) {
      auto j = nlohmann::json{{"error", {{"kind", "game_error"}, {"reason", "version_conflict"},
                                         {"message", "expected version " + std::to_string(expected) + ", current " +
                                                         std::to_string(s->state.version())}}}};
      j["state"] = state_json(s->state);
      return {409, std::move(j)};
    }
    if (player >= 0 && static_cast<std::size_t>(player) < s->seats.size() && !s->seats[static_cast<std::size_t>(player)].human)
      return error(422, GameError("bot_seat", "player " + std::to_string(player) + " is a bot"));
    try {
      s->state.apply({player, cell});
    } catch (const GameError& e) {
      return error(422, e);
    }
    run_bots(*s);
    auto j = state_json(s->state);
    j["game_id"] = id;
    return {200, std::move(j)};
  }

  Reply winner(const std::string& id) const {
    auto s = find(id);
    if (!s) return not_found(id);
    std::shared_lock lk(s->mu);
    const auto& w = s->state.winner();
    return {200, {{"version", s->state.version()}, {"winner", w ? to_json(*w) : nlohmann::json(nullptr)}}};
  }

  /// Registers the routes on an httplib server.
  void mount(httplib::Server& srv) {
    auto send = [](httplib::Response& res, const Reply& r) {
      res.status = r.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(r.body.dump(), "application/json");
    };
    auto body = [](const httplib::Request& req, httplib::Response& res, nlohmann::json& out) {
      try {
        out = req.body.empty() ? nlohmann::json::object() : nlohmann::json::parse(req.body);
        return true;
      } catch (const nlohmann::json::exception& e) {
        res.status = 400;
        res.set_content(nlohmann::json{{"error", {{"kind", "invalid_input"}, {"message", e.what()}}}}.dump(),
                        "application/json");
        return false;
      }
    };
    srv.Post("/games", [this, send, body](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json j;
      if (body(req, res, j)) send(res, create(j));
    });
    srv.Get("/games/:id", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, state(req.path_params.at("id")));
    });
    srv.Post("/games/:id/join", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, join(req.path_params.at("id")));
    });
    srv.Post("/games/:id/moves", [this, send, body](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json j;
      if (body(req, res, j)) send(res, move(req.path_params.at("id"), j));
    });
    srv.Get("/games/:id/winner", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, winner(req.path_params.at("id")));
    });
    srv.Options(R"(/games.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }

 private:
  struct Session {
    explicit Session(GameState st) : state(std::move(st)) {}
    Session(Session&& o) noexcept : state(std::move(o.state)), seats(std::move(o.seats)), rng(o.rng) {}
    mutable std::shared_mutex mu;
    GameState state;
    std::vector<Seat> seats;
    std::mt19937_64 rng;
  };

  static Session make_session(const nlohmann::json& req) {
    BuiltPolytope built = req.contains("polytope") ? io::load_polytope(req.at("polytope"))
                                                   : build(req.value("builder", std::string("hexagon")));
    if (req.contains("coloring")) built.coloring = io::coloring_from_json(req.at("coloring"));
    if (!built.coloring) throw InvalidInput("create: polytope has no coloring");
    const int vertex = req.value("vertex", 0);
    std::vector<Point> sites;
    const auto spec = req.contains("sites") ? req.at("sites") : nlohmann::json("random:20:1");
    if (spec.is_string()) {
      // random:k:seed
      const auto s = spec.get<std::string>();
      const auto a = s.find(':'), b = s.rfind(':');
      if (s.rfind("random:", 0) != 0 || a == b) throw InvalidInput("sites must be a point list or random:k:seed");
      sites = random_sites(built.polytope, std::stoi(s.substr(a + 1, b - a - 1)), std::stoull(s.substr(b + 1)));
    } else {
      sites = spec.get<std::vector<Point>>();
    }
    auto board = std::make_shared<const Board>(build_board(built, *built.coloring, vertex, std::move(sites)));
    Session s{GameState(board)};
    const auto players = req.contains("players") ? req.at("players").get<std::vector<std::string>>()
                                                 : std::vector<std::string>(static_cast<std::size_t>(board->players()), "human");
    if (static_cast<int>(players.size()) != board->players())
      throw InvalidInput("create: expected " + std::to_string(board->players()) + " players");
    for (const auto& p : players) {
      if (p == "human") {
        s.seats.push_back({});
      } else if (p.rfind("bot:", 0) == 0) {
        s.seats.push_back({false, parse_policy(p.substr(4)), true});
      } else {
        throw InvalidInput("player must be 'human' or 'bot:<policy>', got '" + p + "'");
      }
    }
    s.rng.seed(req.value("seed", std::uint64_t{1}));
    return s;
  }

  static void run_bots(Session& s) {
    while (s.state.status() == Status::ongoing && !s.seats[static_cast<std::size_t>(s.state.turn())].human)
      s.state.apply(bot_move(s.state, s.seats[static_cast<std::size_t>(s.state.turn())].policy, s.rng));
  }

  static nlohmann::json seats_json(const Session& s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& seat : s.seats)
      out.push_back(seat.human ? nlohmann::json("human") : nlohmann::json(std::string("bot:") + to_string(seat.policy)));
    return out;
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lk(map_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  static Reply error(int status, const Error& e) {
    auto j = io::error_envelope(e);
    return {status, std::move(j)};
  }

  static Reply not_found(const std::string& id) {
    return {404, {{"error", {{"kind", "game_error"}, {"reason", "unknown_session"}, {"message", "no game '" + id + "'"}}}}};
  }

  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace chromatope::hex
