#include "sdbotics/controller/topology.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "sdbotics/error.hpp"

namespace sdbotics::controller {

namespace {

bool same_cost(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string format_cost(double c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

}  // namespace

std::optional<NodeId> NodeId::parse(std::string_view text) {
  if (text == "C" || text == "c" || text == "controller") return controller();
  if (!text.empty() && (text.front() == 'R' || text.front() == 'r')) text.remove_prefix(1);
  std::uint32_t id = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc{} || ptr != text.data() + text.size() || id == 0) return std::nullopt;
  return robot(id);
}

std::string NodeId::to_string() const {
  return is_controller() ? std::string("C") : std::to_string(value_);
}

void TopologyGraph::add_node(NodeId n) { adjacency_.try_emplace(n); }

void TopologyGraph::remove_node(NodeId n) {
  auto it = adjacency_.find(n);
  if (it == adjacency_.end()) return;
  for (const auto& [peer, w] : it->second) adjacency_[peer].erase(n);
  adjacency_.erase(it);
}

void TopologyGraph::set_edge(NodeId a, NodeId b, double weight) {
  if (a == b) throw Error("INVALID_LINK", "self-loop on " + a.to_string());
  if (!(weight > 0) || !std::isfinite(weight)) {
    throw Error("INVALID_LINK", "link " + a.to_string() + "-" + b.to_string() +
                                    " needs a positive weight");
  }
  adjacency_[a][b] = weight;
  adjacency_[b][a] = weight;
}

void TopologyGraph::remove_edge(NodeId a, NodeId b) {
  if (auto it = adjacency_.find(a); it != adjacency_.end()) it->second.erase(b);
  if (auto it = adjacency_.find(b); it != adjacency_.end()) it->second.erase(a);
}

std::optional<double> TopologyGraph::edge_weight(NodeId a, NodeId b) const {
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return std::nullopt;
  auto jt = it->second.find(b);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::vector<NodeId> TopologyGraph::nodes() const {
  std::vector<NodeId> out;
  out.reserve(adjacency_.size());
  for (const auto& [n, _] : adjacency_) out.push_back(n);
  return out;
}

const std::map<NodeId, double>& TopologyGraph::neighbors(NodeId n) const {
  static const std::map<NodeId, double> kEmpty;
  auto it = adjacency_.find(n);
  return it == adjacency_.end() ? kEmpty : it->second;
}

std::vector<TopologyGraph::Edge> TopologyGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& [a, peers] : adjacency_) {
    for (const auto& [b, w] : peers) {
      if (a < b) out.push_back({a, b, w});
    }
  }
  return out;
}

Route shortest_path(const TopologyGraph& g, NodeId src, NodeId dst) {
  for (auto n : {src, dst}) {
    if (!g.has_node(n)) throw Error("UNKNOWN_NODE", "unknown node " + n.to_string());
  }
  if (src == dst) return Route{{src}, 0.0};

  // Distances to dst, then a greedy walk from src that always takes the
  // smallest neighbour still on some shortest path. That walk yields the
  // lexicographically smallest optimal sequence.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::map<NodeId, double> dist;
  for (auto n : g.nodes()) dist[n] = kInf;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[dst] = 0;
  pq.push({0.0, dst});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : g.neighbors(u)) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
    }
  }
  if (dist[src] == kInf) {
    throw Error("UNREACHABLE", "no path " + src.to_string() + " -> " + dst.to_string());
  }

  Route r{{src}, dist[src]};
  NodeId cur = src;
  while (cur != dst) {
    std::optional<NodeId> next;
    for (const auto& [v, w] : g.neighbors(cur)) {  // ascending node order
      if (dist[v] < dist[cur] && same_cost(w + dist[v], dist[cur])) {
        next = v;
        break;
      }
    }
    if (!next) throw std::logic_error("shortest_path: inconsistent distance labels");
    cur = *next;
    r.nodes.push_back(cur);
  }
  return r;
}

std::string format_route(const Route& r) {
  std::string s;
  for (const auto& n : r.nodes) {
    if (!s.empty()) s += " -> ";
    s += n.to_string();
  }
  return s + " (cost " + format_cost(r.cost) + ")";
}

}  // namespace sdbotics::controller
