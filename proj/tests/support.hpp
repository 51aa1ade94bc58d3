#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sdbotics/controller/topology.hpp"
#include "sdbotics/openbots/codec.hpp"

namespace testsupport {

using sdbotics::openbots::Bytes;
using sdbotics::openbots::OpenBotsPacket;

inline std::string fixture(const std::string& name) { return std::string(SDBOTICS_FIXTURE_DIR) + "/" + name; }

// R3/ON row, seq 1, counter 1, no hash. Hand-encoded byte by byte.
inline const Bytes kGoldenR3On = {
    0x4F, 0x42, 0x01, 0x01, 0x00,                                // magic, version, COMMAND, flags
    0x00, 0x00, 0x00, 0x01,                                      // seq
    0x00, 0x00, 0x00, 0x01,                                      // counter
    0x00, 0x00, 0x00, 0x03,                                      // robot id
    0x02, 0x01, 0x00, 0x00, 0x01, 0x01,                          // speed dir angle sensor actuator
    0x04,                                                        // ip version
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,  //
    0xFF, 0xFF, 0xC0, 0xA8, 0x00, 0x03,                          // ::ffff:192.168.0.3
    0x01,                                                        // ON
    0x00, 0x00,                                                  // data len
    0xB5, 0xE3, 0x5C, 0x92,                                      // crc32
};

inline OpenBotsPacket golden_packet() {
  OpenBotsPacket p;
  p.msg_type = sdbotics::openbots::MsgType::kCommand;
  p.coefficients.robot_id = 3;
  p.coefficients.speed = 2;
  p.coefficients.dir = 1;
  p.coefficients.angle = 0;
  p.coefficients.sensor = 1;
  p.coefficients.actuator = 1;
  p.coefficients.ip = sdbotics::openbots::IpAddress::v4(192, 168, 0, 3);
  p.action = sdbotics::openbots::Action::kOn;
  p.stats.sequence = 1;
  p.stats.counter = 1;
  return p;
}

// Bitwise reflected CRC-32, polynomial 0xEDB88320.
inline std::uint32_t crc32_bitwise(const std::uint8_t* data, std::size_t n) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) {
    crc ^= data[i];
    for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

inline std::string random_utf8(std::mt19937_64& rng, std::size_t max_bytes) {
  static const std::vector<std::string> pieces = {"a", "Z", "0", " ", "~", "\xC3\xA9", "\xE2\x82\xAC",
                                                  "\xF0\x9F\xA4\x96", "DONE", "\x7F"};
  std::string s;
  const std::size_t target = std::uniform_int_distribution<std::size_t>(0, max_bytes)(rng);
  while (s.size() < target) {
    const auto& p = pieces[rng() % pieces.size()];
    if (s.size() + p.size() > max_bytes) break;
    s += p;
  }
  return s;
}

inline OpenBotsPacket random_packet(std::mt19937_64& rng) {
  using namespace sdbotics::openbots;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  OpenBotsPacket p;
  p.msg_type = static_cast<MsgType>(pick(1, 6));
  p.action = static_cast<Action>(pick(0, 8));
  auto& c = p.coefficients;
  c.robot_id = static_cast<std::uint32_t>(rng());
  c.speed = static_cast<std::uint8_t>(pick(1, 5));
  c.dir = static_cast<std::uint8_t>(pick(1, 2));
  c.angle = static_cast<std::uint16_t>(pick(0, 180));
  c.sensor = static_cast<std::uint8_t>(pick(1, 3));
  c.actuator = static_cast<std::uint8_t>(pick(1, 2));
  if (pick(0, 3) == 0) {
    std::array<std::uint8_t, 16> raw{};
    for (auto& b : raw) b = static_cast<std::uint8_t>(rng());
    c.ip = IpAddress::v6(raw);
  } else {
    c.ip = IpAddress::v4(static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                         static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()));
  }
  c.data = random_utf8(rng, pick(0, 19) == 0 ? kMaxDataLen : 48);
  if (p.action == Action::kSend && c.data.empty()) c.data = "x";
  p.stats.sequence = static_cast<std::uint32_t>(rng());
  p.stats.counter = static_cast<std::uint32_t>(rng());
  p.stats.hash_present = pick(0, 1) == 1;
  return p;
}

// Connected random graph over the controller and robots 1..n-1 with integer weights.
inline sdbotics::controller::TopologyGraph random_connected_graph(std::mt19937_64& rng, int n) {
  using sdbotics::controller::NodeId;
  sdbotics::controller::TopologyGraph g;
  auto node = [](int i) { return i == 0 ? NodeId::controller() : NodeId::robot(static_cast<std::uint32_t>(i)); };
  for (int i = 0; i < n; ++i) g.add_node(node(i));
  auto weight = [&] { return static_cast<double>(std::uniform_int_distribution<int>(1, 9)(rng)); };
  for (int i = 1; i < n; ++i) g.set_edge(node(i), node(static_cast<int>(rng() % static_cast<unsigned>(i))), weight());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.edge_weight(node(i), node(j)) && rng() % 3 == 0) g.set_edge(node(i), node(j), weight());
  return g;
}

// Minimum cost over every simple path, by exhaustive DFS.
inline double brute_force_cost(const sdbotics::controller::TopologyGraph& g, sdbotics::controller::NodeId src,
                               sdbotics::controller::NodeId dst) {
  using sdbotics::controller::NodeId;
  double best = std::numeric_limits<double>::infinity();
  std::vector<NodeId> stack{src};
  std::function<void(NodeId, double)> dfs = [&](NodeId at, double cost) {
    if (at == dst) {
      best = std::min(best, cost);
      return;
    }
    for (const auto& [next, w] : g.neighbors(at)) {
      if (std::find(stack.begin(), stack.end(), next) != stack.end()) continue;
      stack.push_back(next);
      dfs(next, cost + w);
      stack.pop_back();
    }
  };
  dfs(src, 0);
  return best;
}

inline double path_cost(const sdbotics::controller::TopologyGraph& g,
                        const std::vector<sdbotics::controller::NodeId>& nodes) {
  double c = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) c += g.edge_weight(nodes[i - 1], nodes[i]).value();
  return c;
}

}  // namespace testsupport
