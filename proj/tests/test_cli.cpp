#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "chromatope/io.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(const std::string& args) {
  const std::string err_file = "cli-stderr.txt";
  const std::string cmd = std::string(CHROMATOPE_CLI) + " " + args + " 2>" + err_file;
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = chromatope::io::read_file(err_file);
  return r;
}

}  // namespace

TEST_CASE("ring integrate") {
  const auto r = run("ring integrate --builder cube:3 --class '(v1+v2+v3)^3'");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["value"] == 6);
  const auto t = run("ring integrate -b 'truncate(cube:3,0,3,5)' --class '(t1+t2+t3)^3' --vertex 0");
  CHECK(t.code == 0);
}

TEST_CASE("identity checks") {
  const auto r = run("ring check-identities -b cube:3");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.dump().find("\"holds\":false") == std::string::npos);
  CHECK(run("ring check-identities -b 'truncate(cube:3,0)'").code == 0);
}

TEST_CASE("polytope build round trip") {
  const auto r = run("polytope build -b prism:5");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  chromatope::io::write_file("cli-prism.json", j.dump());
  const auto v = run("polytope validate -f cli-prism.json");
  CHECK(v.code == 0);
  const auto again = run("polytope build -f cli-prism.json");
  CHECK(json::parse(again.out) == j);
  const auto c = run("polytope color -b simplex:3 -k 3");
  CHECK(c.code == 0);
  CHECK(json::parse(c.out)["coloring"].is_null());
}

TEST_CASE("cover fuzz and verify") {
  const auto r = run("cover fuzz -b cube:2 --profile partition --trials 50 --seed 7");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["witnesses"]["same_color_pair"] == 50);
  CHECK(j["absences"].empty());

  json cover{{"polytope", "cube:2"}, {"grid", 4}, {"sets", {{{"label", "all"}, {"cells", json::array()}}}}};
  for (int c = 0; c < 16; ++c) cover["sets"][0]["cells"].push_back(c);
  chromatope::io::write_file("cli-cover.json", cover.dump());
  const auto v = run("cover verify --cover cli-cover.json");
  CHECK(v.code == 0);
  CHECK(json::parse(v.out)["witness"]["kind"] == "same_color_pair");
}

TEST_CASE("hex commands") {
  const auto s = run("hex simulate -b hexagon --sites random:20:1 --seed 2");
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["status"] == "won");
  const auto t = run("hex no-tie -b cube:3 --sites random:32:1 --trials 20 --seed 1");
  REQUIRE(t.code == 0);
  CHECK(json::parse(t.out)["ties"] == 0);
}

TEST_CASE("errors exit 2 with an envelope") {
  const auto a = run("ring integrate --builder cube:3");
  CHECK(a.code == 2);
  const auto b = run("polytope build -b sphere:3");
  CHECK(b.code == 2);
  CHECK(json::parse(b.err)["error"]["kind"] == "invalid_input");
  const auto c = run("cover fuzz -b cube:3 --checker kkm --trials 1");
  CHECK(c.code == 2);
  CHECK(json::parse(c.err)["error"]["kind"] == "hypothesis_violation");
  CHECK(run("nonsense").code == 2);
}

TEST_CASE("output file option") {
  std::filesystem::remove("cli-out.json");
  const auto r = run("--out cli-out.json ring integrate -b cube:2 --class 'v1*v2'");
  REQUIRE(r.code == 0);
  CHECK(json::parse(chromatope::io::read_file("cli-out.json"))["value"] == 1);
}
