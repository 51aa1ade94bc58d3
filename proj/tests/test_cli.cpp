#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "live_system.hpp"
#include "sdbotics/sim/world_file.hpp"
#include "support.hpp"

using nlohmann::json;
using testsupport::LiveSystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sdbotics");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sdbotics::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run with a missing file") {
  auto r = cli({"run", "missing.json", "--controller-url", "http://127.0.0.1:1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("file not found") != std::string::npos);
}

TEST_CASE("unreachable controller is a connectivity error") {
  auto r = cli({"robots", "--controller-url", "http://127.0.0.1:1"});
  CHECK(r.code == 2);
  r = cli({"run", testsupport::fixture("mission_r3.json"), "--controller-url", "http://127.0.0.1:1"});
  CHECK(r.code == 2);
}

TEST_CASE("bad arguments are validation errors") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"controller", "--mode", "mesh"}).code == 1);
  CHECK(cli({"path", "C"}).code == 1);
}

TEST_CASE("packet dump") {
  const auto path = (std::filesystem::temp_directory_path() / "sdbotics_golden.bin").string();
  {
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(testsupport::kGoldenR3On.data()),
            static_cast<std::streamsize>(testsupport::kGoldenR3On.size()));
  }
  auto r = cli({"packet", "dump", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("4f 42 01 01") != std::string::npos);
  CHECK(r.out.find("RENDEZVOUS") == std::string::npos);
  CHECK(r.out.find("\"ON\"") != std::string::npos);

  r = cli({"packet", "dump", path, "--json"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["robot_id"] == 3);
  CHECK(j["crc32"] == "0xB5E35C92");

  auto bad = testsupport::kGoldenR3On;
  bad[20] ^= 1;
  {
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bad.data()), static_cast<std::streamsize>(bad.size()));
  }
  r = cli({"packet", "dump", path, "--json"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["error"] == "CHECKSUM_MISMATCH");
  std::filesystem::remove(path);
}

TEST_CASE("run and queries against a live controller") {
  LiveSystem sys(sdbotics::sim::load_world(testsupport::fixture("world_line.json")), {});
  REQUIRE(sys.fleet.all_registered());

  auto r = cli({"run", testsupport::fixture("mission_r3.json"), "--controller-url", sys.url(), "--json"});
  CHECK(r.code == 0);
  auto report = json::parse(r.out);
  CHECK(report["robots"]["3"]["packets"] == 7);

  // The same body POSTed directly yields the same report shape, shifted sequence.
  httplib::Client client(sys.url());
  auto direct = client.Post("/api/v1/programs", read_file(testsupport::fixture("mission_r3.json")), "application/json");
  REQUIRE(direct);
  auto dj = json::parse(direct->body);
  CHECK(dj["robots"]["3"]["first_sequence"].get<int>() > report["robots"]["3"]["first_sequence"].get<int>());
  dj["robots"]["3"]["first_sequence"] = report["robots"]["3"]["first_sequence"];
  CHECK(dj.dump() == report.dump());

  r = cli({"run", testsupport::fixture("mission_r3.json"), "--controller-url", sys.url()});
  CHECK(r.code == 0);
  CHECK(r.out.find("robot 3: 7 packet(s)") != std::string::npos);

  for (const char* q : {"stats", "robots", "map", "groups"}) {
    r = cli({q, "--controller-url", sys.url(), "--json"});
    CHECK(r.code == 0);
    CHECK_FALSE(json::parse(r.out, nullptr, false).is_discarded());
  }

  const auto bad = (std::filesystem::temp_directory_path() / "sdbotics_bad_mission.json").string();
  {
    std::ofstream f(bad);
    f << R"({"target":"robot:3","rows":[["R3",2,1,999,1,1,"192.168.0.3","","ON"]]})";
  }
  r = cli({"run", bad, "--controller-url", sys.url()});
  CHECK(r.code == 1);
  CHECK(r.err.find("VALIDATION_FAILED") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("path on the triangle fixture") {
  auto world = sdbotics::sim::load_world(testsupport::fixture("world_triangle.json"));
  sdbotics::net::ServiceOptions so;
  so.config.links = world.links;
  LiveSystem sys(std::move(world), so);
  REQUIRE(sys.fleet.all_registered());

  auto r = cli({"path", "C", "1", "--controller-url", sys.url()});
  CHECK(r.code == 0);
  CHECK(r.out == "C -> 2 -> 1 (cost 2)\n");

  r = cli({"path", "C", "1", "--controller-url", sys.url(), "--json"});
  CHECK(r.out == "{\"cost\":2,\"path\":[\"C\",\"2\",\"1\"]}\n");

  r = cli({"path", "C", "9", "--controller-url", sys.url()});
  CHECK(r.code == 1);
}

TEST_CASE("local run reproduces the mission") {
  auto r = cli({"local", "--world", testsupport::fixture("world_line.json"), "--mission",
                testsupport::fixture("mission_r3.json"), "--json"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["mailbox"]["3"] == json::array({"DONE"}));
  CHECK(j["objects"]["1"] == json::array({0, 0}));
  CHECK(j["map"]["3"]["powered"] == false);
}
