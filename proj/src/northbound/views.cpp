#include "sdbotics/northbound/views.hpp"

#include <cmath>

namespace sdbotics::northbound {

using nlohmann::json;

json cost_json(double cost) {
  if (std::floor(cost) == cost && std::abs(cost) < 9.0e15) return json(static_cast<std::int64_t>(cost));
  return json(cost);
}

json robots_view(const controller::ControllerCore& core) {
  json out = json::array();
  for (const auto& [id, s] : core.sessions()) {
    out.push_back({{"id", id},
                   {"vendor", s.vendor},
                   {"ip", s.latest.ip.to_string()},
                   {"remote", s.remote},
                   {"alive", s.alive},
                   {"last_seen_tick", s.last_seen_tick}});
  }
  return out;
}

namespace {

json counters_json(const controller::SessionCounters& c) {
  return {{"packets_in", c.packets_in},         {"packets_out", c.packets_out},
          {"bytes_in", c.bytes_in},             {"bytes_out", c.bytes_out},
          {"commands_out", c.commands_out},     {"acks_in", c.acks_in},
          {"telemetry_in", c.telemetry_in},     {"checksum_errors", c.checksum_errors},
          {"decode_errors", c.decode_errors},   {"sequence_errors", c.sequence_errors},
          {"buffer_full", c.buffer_full},       {"relayed", c.relayed},
          {"delivered", c.delivered},           {"dropped", c.dropped}};
}

}  // namespace

json stats_view(const controller::StatsReport& stats) {
  json sessions = json::object();
  for (const auto& [id, c] : stats.sessions) {
    auto j = counters_json(c);
    j["alive"] = stats.alive.at(id);
    sessions[std::to_string(id)] = std::move(j);
  }
  json links = json::array();
  for (const auto& [ends, n] : stats.link_forwarded) {
    links.push_back({{"a", ends.first.to_string()}, {"b", ends.second.to_string()}, {"forwarded", n}});
  }
  return {{"uptime_ticks", stats.uptime_ticks},
          {"robots", stats.robot_count},
          {"sessions", sessions},
          {"links", links},
          {"unbound_errors", stats.unbound_errors},
          {"mailbox_dropped", stats.mailbox_dropped}};
}

json map_view(const controller::ControllerCore& core) {
  json out = json::object();
  for (const auto& [id, e] : core.global_map()) {
    out[std::to_string(id)] = {{"x", e.x},
                               {"y", e.y},
                               {"heading", e.heading},
                               {"holding", e.holding ? json(*e.holding) : json(nullptr)},
                               {"powered", e.powered},
                               {"tick", e.tick}};
  }
  return out;
}

json groups_view(const controller::ControllerCore& core) {
  json out = json::object();
  for (const auto& [name, ids] : core.groups()) out[name] = ids;
  return out;
}

json route_view(const controller::Route& route) {
  json path = json::array();
  for (const auto& n : route.nodes) path.push_back(n.to_string());
  return {{"path", path}, {"cost", cost_json(route.cost)}};
}

json topology_view(const controller::ControllerCore& core) {
  json nodes = json::array();
  for (const auto& n : core.topology().nodes()) nodes.push_back(n.to_string());
  json edges = json::array();
  for (const auto& e : core.topology().edges()) {
    edges.push_back({{"a", e.a.to_string()}, {"b", e.b.to_string()}, {"w", cost_json(e.weight)}});
  }
  return {{"mode", std::string(controller::to_string(core.config().mode))},
          {"hub", core.hub().to_string()},
          {"nodes", nodes},
          {"edges", edges}};
}

json report_view(const controller::DispatchReport& report) {
  json robots = json::object();
  for (const auto& [id, d] : report.robots) {
    robots[std::to_string(id)] = {{"packets", d.packets},
                                  {"first_sequence", d.first_sequence},
                                  {"delivered", d.delivered},
                                  {"dropped", d.dropped}};
  }
  return {{"target", report.target},
          {"rows", report.rows},
          {"packets", report.total_packets()},
          {"robots", robots}};
}

}  // namespace sdbotics::northbound
