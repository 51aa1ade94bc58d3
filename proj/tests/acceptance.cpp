// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "sdbotics/fabric.hpp"
#include "sdbotics/openbots/codec.hpp"
#include "sdbotics/sim/world_file.hpp"
#include "support.hpp"

using namespace sdbotics;
using nlohmann::json;

namespace {

// Limits.
constexpr std::uint64_t kMissionTickBudget = 100;
constexpr double kMissionSeconds = 5.0;
constexpr int kRoundTripPackets = 10000;
constexpr double kRoundTripSeconds = 10.0;
constexpr double kBitFlipSeconds = 5.0;
constexpr int kRoutingGraphs = 100;
constexpr int kRoutingMaxNodes = 6;
constexpr double kRoutingSeconds = 10.0;
constexpr int kIsolationFleet = 5;
constexpr std::uint64_t kIsolationSeed = 2024;
constexpr int kIsolationTicks = 40;
constexpr int kIsolationDispatchTick = 7;
constexpr int kSetAlgebraOps = 20;

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      note = what;
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json pose_of(const std::string& trace_line) {
  auto j = json::parse(trace_line);
  return {j["x"], j["y"], j["heading"]};
}

Outcome mission_reproduction() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  LocalFabric f(sim::load_world(testsupport::fixture("world_line.json")));
  const json start = {f.world().robots.at(3).pose.x, f.world().robots.at(3).pose.y, f.world().robots.at(3).pose.heading};
  f.connect_all();
  auto res = f.request("POST", "/api/v1/programs", read_file(testsupport::fixture("mission_r3.json")));
  o.require(res.status == 202, "submit returned " + std::to_string(res.status));
  auto ticks = f.run_until_idle(kMissionTickBudget);
  o.require(ticks.has_value(), "mission did not finish within the tick budget");
  const auto& r = f.world().robots.at(3);
  o.require(!r.powered, "R3 still powered");
  o.require(r.pose.x == 0 && r.pose.y == 0, "R3 not at (0,0)");
  o.require(f.world().objects.size() == 1 && f.world().object_at({0, 0}).has_value(), "object not at (0,0)");
  o.require(f.request("GET", "/api/v1/data/3").body == R"(["DONE"])", "mailbox is not [\"DONE\"]");
  o.require(f.request("GET", "/api/v1/data/3").body == "[]", "mailbox delivered twice");
  auto trace = f.trace_for(3);
  o.require(!trace.empty() && pose_of(trace.back()) == start, "trace does not return to start");
  bool left = false;
  for (const auto& line : trace) left = left || pose_of(line) != start;
  o.require(left, "trace never left the start cell");
  const double secs = seconds_since(t0);
  o.require(secs < kMissionSeconds, "took " + std::to_string(secs) + " s");
  if (o.pass) o.note = std::to_string(*ticks) + " ticks";
  return o;
}

Outcome codec_round_trip() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0x5DB07);
  int failures = 0;
  for (int i = 0; i < kRoundTripPackets; ++i) {
    auto p = testsupport::random_packet(rng);
    try {
      if (!(openbots::decode_packet(openbots::encode_packet(p)) == p)) ++failures;
    } catch (const openbots::CodecError&) {
      ++failures;
    }
  }
  o.require(failures == 0, std::to_string(failures) + " failures");
  const double secs = seconds_since(t0);
  o.require(secs < kRoundTripSeconds, "took " + std::to_string(secs) + " s");
  if (o.pass) o.note = std::to_string(kRoundTripPackets) + " packets";
  return o;
}

Outcome corruption_detection() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto& golden = testsupport::kGoldenR3On;
  o.require(openbots::decode_packet(golden) == testsupport::golden_packet(), "golden vector does not decode");
  std::size_t detected = 0;
  const std::size_t bits = golden.size() * 8;
  for (std::size_t bit = 0; bit < bits; ++bit) {
    auto b = golden;
    b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      openbots::decode_packet(b);
    } catch (const openbots::CodecError&) {
      ++detected;
    }
  }
  o.require(detected == bits, std::to_string(detected) + "/" + std::to_string(bits) + " detected");
  const double secs = seconds_since(t0);
  o.require(secs < kBitFlipSeconds, "took " + std::to_string(secs) + " s");
  if (o.pass) o.note = std::to_string(bits) + "/" + std::to_string(bits) + " bits";
  return o;
}

const char* kFleetProgram = R"({"target":"all","rows":[
  ["x",2,1,0,1,1,"10.0.0.1","","ON"],
  ["x",1,1,0,1,1,"10.0.0.1","","TOUCH"],
  ["x",1,1,0,1,1,"10.0.0.1","","GRASP"],
  ["x",1,1,0,1,1,"10.0.0.1","","SEE"],
  ["x",2,1,180,1,1,"10.0.0.1","","RENDEZVOUS"],
  ["x",1,1,0,1,1,"10.0.0.1","","DROP"],
  ["x",1,1,0,1,1,"10.0.0.1","done","SEND"],
  ["x",1,1,0,1,1,"10.0.0.1","","OFF"]]})";

const char* kGroupProgram = R"({"target":"group:evens","rows":[
  ["x",3,2,90,1,1,"10.0.0.1","","NOP"],
  ["x",1,1,0,1,1,"10.0.0.1","","SEE"],
  ["x",2,1,0,1,1,"10.0.0.1","","RENDEZVOUS"]]})";

struct FleetRun {
  std::map<std::uint32_t, std::vector<std::string>> traces;
  std::map<std::uint32_t, std::vector<openbots::Bytes>> commands;
};

FleetRun fleet_run(bool with_group_dispatch, Outcome& o) {
  LocalFabric f(sim::make_fleet_world(kIsolationSeed, kIsolationFleet));
  f.connect_all();
  o.require(f.request("POST", "/api/v1/programs", kFleetProgram).status == 202, "fleet dispatch rejected");
  for (int t = 0; t < kIsolationTicks; ++t) {
    if (with_group_dispatch && t == kIsolationDispatchTick) {
      o.require(f.request("POST", "/api/v1/groups", R"({"name":"evens","ids":[2,4]})").status == 200,
                "group definition rejected");
      o.require(f.request("POST", "/api/v1/programs", kGroupProgram).status == 202, "group dispatch rejected");
    }
    f.tick();
  }
  FleetRun run;
  for (const auto& [id, _] : f.world().robots) {
    run.traces[id] = f.trace_for(id);
    run.commands[id] = f.agent(id).command_log();
  }
  return run;
}

Outcome group_isolation() {
  Outcome o;
  auto control = fleet_run(false, o);
  auto treated = fleet_run(true, o);
  for (std::uint32_t id : {1u, 3u, 5u}) {
    o.require(control.traces[id] == treated.traces[id], "trace of robot " + std::to_string(id) + " differs");
    o.require(control.commands[id] == treated.commands[id], "buffer input of robot " + std::to_string(id) + " differs");
  }
  bool touched = false;
  for (std::uint32_t id : {2u, 4u}) touched = touched || control.commands[id] != treated.commands[id];
  o.require(touched, "group dispatch did not reach robots 2 and 4");
  if (o.pass) o.note = "robots 1,3,5 identical over " + std::to_string(kIsolationTicks) + " ticks";
  return o;
}

Outcome routing_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xD1C57);
  int pairs = 0;
  for (int g = 0; g < kRoutingGraphs; ++g) {
    const int n = 2 + static_cast<int>(rng() % (kRoutingMaxNodes - 1));
    auto graph = testsupport::random_connected_graph(rng, n);
    for (auto src : graph.nodes()) {
      for (auto dst : graph.nodes()) {
        auto route = controller::shortest_path(graph, src, dst);
        ++pairs;
        o.require(route.cost == testsupport::brute_force_cost(graph, src, dst),
                  "cost mismatch on graph " + std::to_string(g));
        o.require(testsupport::path_cost(graph, route.nodes) == route.cost, "path does not sum to its cost");
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < kRoutingSeconds, "took " + std::to_string(secs) + " s");
  if (o.pass) o.note = std::to_string(kRoutingGraphs) + " graphs, " + std::to_string(pairs) + " pairs";
  return o;
}

std::vector<std::string> mission_trace(const std::string& vendor, Outcome& o) {
  auto world = sim::load_world(testsupport::fixture("world_line.json"));
  world.robots.at(3).vendor = vendor;
  LocalFabric f(std::move(world));
  f.connect_all();
  o.require(f.request("POST", "/api/v1/programs", read_file(testsupport::fixture("mission_r3.json"))).status == 202,
            "submit rejected under " + vendor);
  for (std::uint64_t t = 0; t < kMissionTickBudget; ++t) f.tick();
  return f.trace_for(3);
}

Outcome vendor_equivalence() {
  Outcome o;
  auto a = mission_trace("VendorA", o);
  auto b = mission_trace("VendorB", o);
  o.require(!a.empty() && a == b, "trajectories differ");
  if (o.pass) o.note = std::to_string(a.size()) + " ticks identical";
  return o;
}

Outcome set_algebra() {
  Outcome o;
  LocalFabric f(sim::make_fleet_world(11, 6));
  std::set<std::uint32_t> expected;
  std::mt19937_64 rng(0x5E7);
  for (int op = 0; op < kSetAlgebraOps; ++op) {
    const auto id = static_cast<std::uint32_t>(1 + rng() % 6);
    if (op < 4 || rng() % 2 == 0) {
      f.connect(id);
      expected.insert(id);
    } else {
      auto res = f.request("DELETE", "/api/v1/robots/" + std::to_string(id));
      const int want = expected.erase(id) ? 204 : 404;
      o.require(res.status == want, "DELETE " + std::to_string(id) + " returned " + std::to_string(res.status));
    }
    f.tick();
    std::set<std::uint32_t> got;
    for (const auto& r : json::parse(f.request("GET", "/api/v1/robots").body)) got.insert(r["id"].get<std::uint32_t>());
    o.require(got == expected, "mismatch after op " + std::to_string(op));
  }
  if (o.pass) o.note = std::to_string(kSetAlgebraOps) + " ops";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"mission reproduction", mission_reproduction},
      {"codec round-trip", codec_round_trip},
      {"corruption detection", corruption_detection},
      {"group isolation", group_isolation},
      {"routing oracle", routing_oracle},
      {"vendor equivalence", vendor_equivalence},
      {"set algebra", set_algebra},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    std::printf("%s  %-22s %s\n", o.pass ? "PASS" : "FAIL", name, o.note.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
