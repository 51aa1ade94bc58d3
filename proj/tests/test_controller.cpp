#include <doctest.h>

#include "sdbotics/controller/controller.hpp"
#include "sdbotics/error.hpp"
#include "sdbotics/fabric.hpp"
#include "sdbotics/openbots/codec.hpp"
#include "sdbotics/sim/world_file.hpp"
#include "support.hpp"

using namespace sdbotics;
using namespace sdbotics::controller;
using openbots::Action;
using openbots::MsgType;
using openbots::OpenBotsPacket;

namespace {

OpenBotsPacket hello(std::uint32_t id, const std::string& vendor = "VendorA") {
  OpenBotsPacket p;
  p.msg_type = MsgType::kHello;
  p.coefficients.robot_id = id;
  p.coefficients.data = vendor;
  p.stats.sequence = 1;
  p.stats.counter = 1;
  return p;
}

std::string error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Program mission_program() {
  auto body = nlohmann::json::parse(R"({"target":"robot:3","rows":[
    ["R3",2,1,0,1,1,"192.168.0.3","","ON"],
    ["R3",1,1,0,1,1,"192.168.0.3","","TOUCH"],
    ["R3",1,1,0,1,1,"192.168.0.3","","GRASP"],
    ["R3",2,1,180,1,1,"192.168.0.3","","RENDEZVOUS"],
    ["R3",1,1,0,1,1,"192.168.0.3","","DROP"],
    ["R3",1,1,0,1,1,"192.168.0.3","DONE","SEND"],
    ["R3",1,1,0,1,1,"192.168.0.3","","OFF"]]})");
  return parse_submission(body).program;
}

ControllerCore with_robots(std::initializer_list<std::uint32_t> ids, ControllerConfig cfg = {}) {
  ControllerCore core(std::move(cfg));
  for (auto id : ids) core.register_robot(hello(id), id);
  core.take_outbox();
  return core;
}

}  // namespace

TEST_CASE("fresh controller") {
  ControllerCore core;
  auto s = core.stats_snapshot();
  CHECK(s.robot_count == 0);
  CHECK(s.uptime_ticks == 0);
  CHECK(s.sessions.empty());
  CHECK(core.global_map().empty());
}

TEST_CASE("registration and deregistration") {
  ControllerCore core;
  const auto& s = core.register_robot(hello(3), 10, "127.0.0.1:5000");
  CHECK(s.robot_id == 3);
  CHECK(s.vendor == "VendorA");
  auto out = core.take_outbox();
  REQUIRE(out.size() == 1);
  CHECK(out[0].link == 10);
  auto ack = openbots::decode_packet(out[0].bytes);
  CHECK(ack.msg_type == MsgType::kAck);
  CHECK(ack.coefficients.data == "REGISTERED");

  CHECK(error_code([&] { core.register_robot(hello(3), 11); }) == "DUPLICATE_ID");
  CHECK(error_code([&] { core.register_robot(hello(4, "Acme"), 12); }) == "UNKNOWN_VENDOR");
  CHECK(error_code([&] { core.register_robot(hello(0), 13); }) == "MALFORMED_HELLO");

  core.define_group("g", {3});
  core.deregister_robot(3);
  CHECK_FALSE(core.has_robot(3));
  CHECK(core.groups().empty());
  CHECK(error_code([&] { core.deregister_robot(3); }) == "UNKNOWN_ROBOT");
}

TEST_CASE("duplicate HELLO over the wire gets an error ACK") {
  ControllerCore core;
  core.ingest(1, openbots::encode_packet(hello(5)));
  core.take_outbox();
  core.ingest(2, openbots::encode_packet(hello(5)));
  auto out = core.take_outbox();
  REQUIRE(out.size() == 1);
  CHECK(out[0].link == 2);
  CHECK(openbots::decode_packet(out[0].bytes).coefficients.data == "ERR DUPLICATE_ID");
}

TEST_CASE("groups and target resolution") {
  auto core = with_robots({1, 2, 3, 4});
  core.define_group("left", {2, 4});
  CHECK(core.resolve_target("group:left") == std::set<std::uint32_t>{2, 4});
  CHECK(core.resolve_target("robot:3") == std::set<std::uint32_t>{3});
  CHECK(core.resolve_target("all") == std::set<std::uint32_t>{1, 2, 3, 4});

  CHECK(error_code([&] { core.define_group("x", {99}); }) == "UNKNOWN_ROBOT");
  CHECK(error_code([&] { core.define_group("x", {}); }) == "EMPTY_GROUP");
  CHECK(error_code([&] { core.resolve_target("group:nope"); }) == "UNKNOWN_GROUP");
  CHECK(error_code([&] { core.resolve_target("robot:99"); }) == "UNKNOWN_ROBOT");
  CHECK(error_code([&] { core.resolve_target("robot:"); }) == "MALFORMED_TARGET");
  CHECK(error_code([&] { core.resolve_target("fleet"); }) == "MALFORMED_TARGET");
  core.remove_group("left");
  CHECK(core.groups().empty());
  CHECK(error_code([&] { core.remove_group("left"); }) == "UNKNOWN_GROUP");
}

TEST_CASE("compile keeps row order per robot") {
  auto core = with_robots({3});
  auto compiled = core.compile_program(mission_program(), "robot:3");
  REQUIRE(compiled.size() == 1);
  const auto& pkts = compiled.at(3);
  const std::vector<Action> expect{Action::kOn,   Action::kTouch, Action::kGrasp, Action::kRendezvous,
                                   Action::kDrop, Action::kSend,  Action::kOff};
  REQUIRE(pkts.size() == expect.size());
  for (std::size_t i = 0; i < pkts.size(); ++i) {
    CHECK(pkts[i].action == expect[i]);
    CHECK(pkts[i].msg_type == MsgType::kCommand);
    CHECK(pkts[i].coefficients.robot_id == 3);
  }
  CHECK(pkts[5].coefficients.data == "DONE");
  CHECK(pkts[3].coefficients.angle == 180);
}

TEST_CASE("compile fans rows out to every target robot") {
  auto core = with_robots({1, 2, 3});
  Program p;
  p.rows = {parse_row(nlohmann::json::array({"x", 2, 1, 0, 1, 1, "10.0.0.1", "", "ON"}), 0),
            parse_row(nlohmann::json::array({"x", 1, 1, 0, 1, 1, "10.0.0.1", "", "OFF"}), 1)};
  auto compiled = core.compile_program(p, "all");
  REQUIRE(compiled.size() == 3);
  for (const auto& [id, pkts] : compiled) {
    REQUIRE(pkts.size() == 2);
    CHECK(pkts[0].coefficients.robot_id == id);
    CHECK(pkts[1].action == Action::kOff);
  }
  CHECK(error_code([&] { core.compile_program(p, "robot:9"); }) == "UNKNOWN_TARGET");
}

TEST_CASE("submit assigns strictly increasing sequences") {
  auto core = with_robots({3});
  auto r1 = core.submit(mission_program(), "robot:3");
  CHECK(r1.total_packets() == 7);
  CHECK(r1.robots.at(3).packets == 7);
  CHECK(r1.robots.at(3).delivered == 7);
  auto out = core.take_outbox();
  REQUIRE(out.size() == 7);
  std::uint32_t last = 0;
  for (const auto& o : out) {
    auto p = openbots::decode_packet(o.bytes);
    CHECK(p.stats.sequence > last);
    last = p.stats.sequence;
  }
  auto r2 = core.submit(mission_program(), "robot:3");
  CHECK(r2.robots.at(3).first_sequence == last + 1);
  CHECK(core.stats_snapshot().sessions.at(3).commands_out == 14);
}

TEST_CASE("row validation errors carry row and field") {
  auto body = nlohmann::json::parse(R"({"target":"all","rows":[
    ["R3",2,1,0,1,1,"192.168.0.3","","ON"],
    ["R3",2,1,999,1,1,"192.168.0.3","","ON"]]})");
  try {
    parse_submission(body);
    FAIL("expected VALIDATION_FAILED");
  } catch (const Error& e) {
    CHECK(e.code() == "VALIDATION_FAILED");
    CHECK(e.detail()["row"] == 1);
    CHECK(e.detail()["violations"][0]["field"] == "angle");
  }
  CHECK(error_code([] { parse_submission(nlohmann::json::parse(R"({"target":"all","rows":[]})")); }) ==
        "VALIDATION_FAILED");
  CHECK(error_code([] {
          parse_submission(nlohmann::json::parse(R"({"target":"all","rows":[["R3",1,1,0,1,1,"1.2.3.4","","JUMP"]]})"));
        }) == "VALIDATION_FAILED");

  auto obj = parse_row(nlohmann::json::parse(
                           R"({"robotID":"R3","speed":2,"dir":1,"angle":0,"sensor":1,"actuator":1,"ip-addr":"192.168.0.3","data":"","action":"ON"})"),
                       0);
  CHECK(obj.action == Action::kOn);
  CHECK(obj.coefficients.speed == 2);
}

TEST_CASE("forwarding over the triangle topology") {
  ControllerConfig cfg;
  cfg.links = {{"C", "1", 5}, {"C", "2", 1}, {"2", "1", 1}};
  auto core = with_robots({1, 2}, cfg);
  auto route = core.route_to(1);
  CHECK(format_route(route) == "C -> 2 -> 1 (cost 2)");

  Program p;
  p.rows = {parse_row(nlohmann::json::array({"x", 2, 1, 0, 1, 1, "10.0.0.1", "", "ON"}), 0)};
  auto rep = core.submit(p, "robot:1");
  CHECK(rep.robots.at(1).delivered == 1);
  auto stats = core.stats_snapshot();
  CHECK(stats.sessions.at(2).relayed == 1);
  CHECK(stats.sessions.at(1).delivered == 1);
  CHECK(stats.link_forwarded.at({NodeId::controller(), NodeId::robot(2)}) == 1);
  CHECK(stats.link_forwarded.at({NodeId::robot(1), NodeId::robot(2)}) == 1);

  // Hop conservation: hops x packets.
  std::uint64_t hops = 0;
  for (const auto& [_, n] : stats.link_forwarded) hops += n;
  CHECK(hops == route.nodes.size() - 1);
}

TEST_CASE("a dead relay drops the packet") {
  ControllerConfig cfg;
  cfg.links = {{"C", "2", 1}, {"2", "1", 1}};
  auto core = with_robots({1, 2}, cfg);
  for (int i = 0; i < 7; ++i) core.tick();
  CHECK_FALSE(core.sessions().at(2).alive);
  auto route = core.route_to(1);
  OpenBotsPacket pkt;
  pkt.coefficients.robot_id = 1;
  CHECK(error_code([&] { core.forward_packet(pkt, route, 47); }) == "HOP_DOWN");
  CHECK(core.stats_snapshot().sessions.at(1).dropped == 1);
}

TEST_CASE("unreachable robots are reported by route_to") {
  ControllerConfig cfg;
  cfg.links = {{"C", "1", 1}};
  auto core = with_robots({1, 2}, cfg);
  CHECK(error_code([&] { core.route_to(2); }) == "UNREACHABLE");
}

TEST_CASE("centralized mode roots the topology at the hub robot") {
  ControllerConfig cfg;
  cfg.mode = Mode::kCentralized;
  cfg.hub_robot = 1;
  auto core = with_robots({1, 2, 3}, cfg);
  CHECK(core.hub() == NodeId::robot(1));
  CHECK(format_route(core.route_to(3)) == "1 -> 3 (cost 1)");
  CHECK(core.route_to(1).nodes.size() == 1);
}

TEST_CASE("telemetry updates the map and keeps the newest tick") {
  auto core = with_robots({3});
  auto telem = [](int tick, int x) {
    OpenBotsPacket p;
    p.msg_type = MsgType::kTelemetry;
    p.coefficients.robot_id = 3;
    p.coefficients.data = nlohmann::json{{"tick", tick}, {"x", x}, {"y", 0}, {"heading", 90},
                                         {"holding", nullptr}, {"powered", true}}
                              .dump();
    return p;
  };
  core.record_telemetry(telem(5, 2));
  CHECK(core.global_map().at(3).x == 2);
  core.record_telemetry(telem(4, 9));
  CHECK(core.global_map().at(3).x == 2);
  core.record_telemetry(telem(6, 3));
  CHECK(core.global_map().at(3).x == 3);

  OpenBotsPacket bad = telem(7, 0);
  bad.coefficients.data = "{\"x\":1}";
  CHECK(error_code([&] { core.record_telemetry(bad); }) == "MALFORMED_POSE");
}

TEST_CASE("mailbox is FIFO, drained per robot and bounded") {
  ControllerConfig cfg;
  cfg.mailbox_capacity = 3;
  auto core = with_robots({1, 2}, cfg);
  auto send = [&](std::uint32_t id, const std::string& d) {
    OpenBotsPacket p;
    p.msg_type = MsgType::kTelemetry;
    p.action = Action::kSend;
    p.coefficients.robot_id = id;
    p.coefficients.data = d;
    core.record_telemetry(p);
  };
  send(1, "a");
  send(2, "b");
  send(1, "c");
  CHECK(core.drain_mailbox(1) == std::vector<std::string>{"a", "c"});
  CHECK(core.drain_mailbox(1).empty());
  send(2, "d");
  send(2, "e");
  send(2, "f");
  CHECK(core.drain_mailbox(2) == std::vector<std::string>{"d", "e", "f"});
  CHECK(core.stats_snapshot().mailbox_dropped == 1);
}

TEST_CASE("liveness expires after five silent ticks") {
  auto core = with_robots({1});
  for (int i = 0; i < 5; ++i) core.tick();
  CHECK(core.sessions().at(1).alive);
  core.tick();
  CHECK_FALSE(core.sessions().at(1).alive);
}

TEST_CASE("a corrupted southbound packet counts one checksum error") {
  LocalFabric fabric(sim::load_world(testsupport::fixture("world_line.json")));
  fabric.connect_all();
  fabric.tick();
  const auto before = fabric.controller().stats_snapshot().sessions.at(3).checksum_errors;
  auto bytes = testsupport::kGoldenR3On;
  bytes[0x14] ^= 0x01;
  fabric.inject_to_controller(3, bytes);
  CHECK(fabric.controller().stats_snapshot().sessions.at(3).checksum_errors == before + 1);
}

TEST_CASE("a disconnected entity is marked dead within five ticks") {
  LocalFabric fabric(sim::make_fleet_world(1, 2));
  fabric.connect_all();
  fabric.tick();
  fabric.disconnect(2);
  int ticks = 0;
  while (fabric.controller().sessions().at(2).alive && ticks < 20) {
    fabric.tick();
    ++ticks;
  }
  CHECK(ticks <= 6);
  CHECK_FALSE(fabric.controller().sessions().at(2).alive);
  CHECK(fabric.controller().sessions().at(1).alive);
}

TEST_CASE("mission through the in-process fabric") {
  LocalFabric fabric(sim::load_world(testsupport::fixture("world_line.json")));
  fabric.connect_all();
  CHECK(fabric.controller().has_robot(3));
  auto rep = fabric.controller().submit(mission_program(), "robot:3");
  CHECK(rep.robots.at(3).packets == 7);
  auto ticks = fabric.run_until_idle(100);
  REQUIRE(ticks);
  CHECK(*ticks <= 100);
  const auto& r = fabric.world().robots.at(3);
  CHECK(r.pose == sim::Pose{0, 0, 90});
  CHECK_FALSE(r.powered);
  CHECK(fabric.world().object_at({0, 0}) == 1u);
  CHECK(fabric.controller().drain_mailbox(3) == std::vector<std::string>{"DONE"});
  auto stats = fabric.controller().stats_snapshot().sessions.at(3);
  CHECK(stats.commands_out >= 7);
  CHECK(stats.acks_in >= 7);
  CHECK(stats.sequence_errors == 0);
  CHECK(fabric.agent(3).counters().sequence_errors == 0);
}
