#include <doctest.h>

#include <random>

#include "sdbotics/controller/topology.hpp"
#include "sdbotics/error.hpp"
#include "support.hpp"

using namespace sdbotics::controller;

namespace {

const NodeId C = NodeId::controller();
NodeId R(std::uint32_t id) { return NodeId::robot(id); }

TopologyGraph triangle() {
  TopologyGraph g;
  g.set_edge(C, R(1), 5);
  g.set_edge(C, R(2), 1);
  g.set_edge(R(2), R(1), 1);
  return g;
}

}  // namespace

TEST_CASE("node ids") {
  CHECK(NodeId::parse("C") == C);
  CHECK(NodeId::parse("controller") == C);
  CHECK(NodeId::parse("R7") == R(7));
  CHECK(NodeId::parse("12") == R(12));
  CHECK_FALSE(NodeId::parse("x1"));
  CHECK_FALSE(NodeId::parse(""));
  CHECK(C < R(1));
  CHECK(R(2) < R(10));
  CHECK(R(10).to_string() == "10");
  CHECK(C.to_string() == "C");
}

TEST_CASE("triangle shortest path") {
  auto g = triangle();
  auto r = shortest_path(g, C, R(1));
  CHECK(r.nodes == std::vector<NodeId>{C, R(2), R(1)});
  CHECK(r.cost == 2);
  CHECK(format_route(r) == "C -> 2 -> 1 (cost 2)");

  auto back = shortest_path(g, R(1), C);
  CHECK(back.nodes == std::vector<NodeId>{R(1), R(2), C});
}

TEST_CASE("identity path and errors") {
  auto g = triangle();
  auto self = shortest_path(g, R(2), R(2));
  CHECK(self.nodes == std::vector<NodeId>{R(2)});
  CHECK(self.cost == 0);

  g.add_node(R(9));
  try {
    shortest_path(g, C, R(9));
    FAIL("expected UNREACHABLE");
  } catch (const sdbotics::Error& e) {
    CHECK(e.code() == "UNREACHABLE");
  }
  try {
    shortest_path(g, C, R(42));
    FAIL("expected UNKNOWN_NODE");
  } catch (const sdbotics::Error& e) {
    CHECK(e.code() == "UNKNOWN_NODE");
  }
}

TEST_CASE("graph editing") {
  auto g = triangle();
  CHECK_THROWS_AS(g.set_edge(C, C, 1), sdbotics::Error);
  CHECK_THROWS_AS(g.set_edge(C, R(1), 0), sdbotics::Error);
  CHECK_THROWS_AS(g.set_edge(C, R(1), -2), sdbotics::Error);
  g.remove_edge(C, R(2));
  CHECK(shortest_path(g, C, R(1)).cost == 5);
  g.remove_node(R(1));
  CHECK_FALSE(g.has_node(R(1)));
  CHECK(g.edges().empty());
}

TEST_CASE("equal-cost ties break toward the smaller neighbour") {
  TopologyGraph g;
  g.set_edge(C, R(3), 1);
  g.set_edge(C, R(2), 1);
  g.set_edge(R(3), R(5), 1);
  g.set_edge(R(2), R(5), 1);
  auto r = shortest_path(g, C, R(5));
  CHECK(r.nodes == std::vector<NodeId>{C, R(2), R(5)});
  for (int i = 0; i < 10; ++i) CHECK(shortest_path(g, C, R(5)).nodes == r.nodes);
}

TEST_CASE("matches exhaustive enumeration on random graphs") {
  std::mt19937_64 rng(438);
  int samples = 0;
  for (int i = 0; i < 150; ++i) {
    const int n = 2 + static_cast<int>(rng() % 5);
    auto g = testsupport::random_connected_graph(rng, n);
    for (auto src : g.nodes()) {
      for (auto dst : g.nodes()) {
        auto r = shortest_path(g, src, dst);
        REQUIRE(r.nodes.front() == src);
        REQUIRE(r.nodes.back() == dst);
        CHECK(r.cost == testsupport::brute_force_cost(g, src, dst));
        CHECK(testsupport::path_cost(g, r.nodes) == r.cost);
      }
    }
    ++samples;
  }
  CHECK(samples >= 100);
}
