#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdbotics::controller {

/// A node of the communication topology: either the controller ("C") or a
/// robot. Controller orders before every robot; robots order by id.
class NodeId {
 public:
  constexpr NodeId() = default;
  static constexpr NodeId controller() { return NodeId{0}; }
  static constexpr NodeId robot(std::uint32_t id) { return NodeId{id}; }
  /// "C" (or "c", "controller") or a decimal robot id; "R7" is accepted too.
  static std::optional<NodeId> parse(std::string_view text);

  constexpr bool is_controller() const { return value_ == 0; }
  constexpr std::uint32_t robot_id() const { return value_; }
  std::string to_string() const;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;

 private:
  constexpr explicit NodeId(std::uint32_t v) : value_(v) {}
  std::uint32_t value_ = 0;
};

/// Undirected graph with positive link costs (latency units).
class TopologyGraph {
 public:
  void add_node(NodeId n);
  /// Removes the node and every incident edge.
  void remove_node(NodeId n);
  bool has_node(NodeId n) const { return adjacency_.contains(n); }

  /// Adds or replaces the undirected edge. Both endpoints are added as nodes.
  /// Throws sdbotics::Error(INVALID_LINK) for self-loops or non-positive weight.
  void set_edge(NodeId a, NodeId b, double weight);
  void remove_edge(NodeId a, NodeId b);
  std::optional<double> edge_weight(NodeId a, NodeId b) const;

  std::vector<NodeId> nodes() const;
  const std::map<NodeId, double>& neighbors(NodeId n) const;

  struct Edge {
    NodeId a, b;  // a < b
    double weight;
  };
  std::vector<Edge> edges() const;

 private:
  std::map<NodeId, std::map<NodeId, double>> adjacency_;
};

struct Route {
  std::vector<NodeId> nodes;
  double cost = 0;
};

/// Minimum-cost path; among equal-cost paths the lexicographically smallest
/// node sequence wins. Throws sdbotics::Error with UNKNOWN_NODE or UNREACHABLE.
Route shortest_path(const TopologyGraph& g, NodeId src, NodeId dst);

std::string format_route(const Route& r);

}  // namespace sdbotics::controller
