#include "sdbotics/controller/controller.hpp"

#include <algorithm>
#include <charconv>

#include "sdbotics/error.hpp"
#include "sdbotics/openbots/codec.hpp"
#include "sdbotics/sim/vendor.hpp"

namespace sdbotics::controller {

using namespace sdbotics::openbots;

std::string_view to_string(Mode m) { return m == Mode::kCentralized ? "centralized" : "cloud"; }

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "centralized") return Mode::kCentralized;
  if (s == "cloud") return Mode::kCloud;
  return std::nullopt;
}

std::size_t DispatchReport::total_packets() const {
  std::size_t n = 0;
  for (const auto& [id, d] : robots) n += d.packets;
  return n;
}

namespace {

std::optional<std::uint32_t> parse_id(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

nlohmann::json ids_json(const std::vector<std::uint32_t>& ids) { return nlohmann::json(ids); }

}  // namespace

ControllerCore::ControllerCore(ControllerConfig cfg) : cfg_(std::move(cfg)) { rebuild_topology(); }

NodeId ControllerCore::hub() const {
  return cfg_.mode == Mode::kCloud ? NodeId::controller() : NodeId::robot(cfg_.hub_robot);
}

RobotSession& ControllerCore::session(std::uint32_t id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error("UNKNOWN_ROBOT", "robot " + std::to_string(id) + " is not registered",
                {{"ids", {id}}});
  }
  return it->second;
}

// --- southbound ------------------------------------------------------------

Bytes ControllerCore::send(RobotSession& s, OpenBotsPacket pkt, bool assign_sequence) {
  pkt.coefficients.robot_id = s.robot_id;
  if (assign_sequence) {
    pkt.stats.sequence = ++s.last_sequence_out;
    pkt.stats.counter = ++s.counter_out;
    pkt.stats.hash_present = cfg_.hash_trailer;
  }
  auto bytes = encode_packet(pkt);
  ++s.counters.packets_out;
  s.counters.bytes_out += bytes.size();
  return bytes;
}

void ControllerCore::reply_unbound(LinkId link, std::uint32_t robot_id, const std::string& data) {
  OpenBotsPacket ack;
  ack.msg_type = MsgType::kAck;
  ack.coefficients.robot_id = robot_id;
  ack.coefficients.data = data;
  ack.stats.sequence = 1;
  ack.stats.counter = 1;
  outbox_.push_back({link, robot_id, encode_packet(ack)});
}

void ControllerCore::count_packet_in(RobotSession& s, std::size_t bytes) {
  ++s.counters.packets_in;
  s.counters.bytes_in += bytes;
}

void ControllerCore::ingest(LinkId link, std::span<const std::uint8_t> frame,
                            const std::string& remote) {
  auto owner = link_owner_.find(link);
  RobotSession* bound = owner == link_owner_.end() ? nullptr : &sessions_.at(owner->second);

  OpenBotsPacket pkt;
  try {
    pkt = decode_packet(frame);
  } catch (const CodecError& e) {
    if (bound == nullptr) {
      ++unbound_errors_;
    } else if (e.code() == CodecErrc::kChecksumMismatch) {
      ++bound->counters.checksum_errors;
    } else {
      ++bound->counters.decode_errors;
    }
    return;
  }

  if (pkt.msg_type == MsgType::kHello) {
    if (bound != nullptr) {
      ++bound->counters.decode_errors;  // a bound link cannot re-register
      return;
    }
    try {
      register_robot(pkt, link, remote);
    } catch (const Error& e) {
      reply_unbound(link, pkt.coefficients.robot_id, "ERR " + e.code());
    }
    return;
  }

  if (bound == nullptr || bound->robot_id != pkt.coefficients.robot_id) {
    ++unbound_errors_;
    return;
  }
  RobotSession& s = *bound;
  count_packet_in(s, frame.size());
  if (pkt.stats.sequence <= s.last_sequence_in) {
    ++s.counters.sequence_errors;
    return;
  }
  s.last_sequence_in = pkt.stats.sequence;
  s.last_seen_tick = uptime_;
  s.alive = true;
  s.latest = pkt.coefficients;

  switch (pkt.msg_type) {
    case MsgType::kTelemetry:
      ++s.counters.telemetry_in;
      try {
        record_telemetry(pkt);
      } catch (const Error&) {
        ++s.counters.decode_errors;
      }
      break;
    case MsgType::kAck:
      ++s.counters.acks_in;
      if (pkt.coefficients.data.starts_with("BUFFER_FULL")) ++s.counters.buffer_full;
      break;
    default:
      break;
  }
}

void ControllerCore::link_closed(LinkId link) {
  auto it = link_owner_.find(link);
  if (it == link_owner_.end()) return;
  if (auto s = sessions_.find(it->second); s != sessions_.end()) s->second.link.reset();
  link_owner_.erase(it);
}

std::vector<Outgoing> ControllerCore::take_outbox() {
  std::vector<Outgoing> out;
  out.swap(outbox_);
  return out;
}

// --- membership --------------------------------------------------------------

const RobotSession& ControllerCore::register_robot(const OpenBotsPacket& hello, LinkId link,
                                                   const std::string& remote) {
  const auto id = hello.coefficients.robot_id;
  if (hello.msg_type != MsgType::kHello || id == kBroadcastId || hello.coefficients.data.empty()) {
    throw Error("MALFORMED_HELLO", "HELLO needs a robot id and a vendor profile name");
  }
  const auto& vendor = hello.coefficients.data;
  if (sim::find_vendor(vendor) == nullptr) {
    throw Error("UNKNOWN_VENDOR", "unknown vendor profile " + vendor);
  }
  if (sessions_.contains(id)) {
    throw Error("DUPLICATE_ID", "robot " + std::to_string(id) + " is already registered",
                {{"ids", {id}}});
  }

  RobotSession s;
  s.robot_id = id;
  s.vendor = vendor;
  s.remote = remote;
  s.link = link;
  s.last_sequence_in = hello.stats.sequence;
  s.last_seen_tick = uptime_;
  s.latest = hello.coefficients;
  s.counters.packets_in = 1;
  s.counters.bytes_in = encoded_size(hello);
  auto& stored = sessions_.emplace(id, std::move(s)).first->second;
  link_owner_[link] = id;
  rebuild_topology();

  OpenBotsPacket ack;
  ack.msg_type = MsgType::kAck;
  ack.coefficients.ip = stored.latest.ip;
  ack.coefficients.data = "REGISTERED";
  outbox_.push_back({link, id, send(stored, std::move(ack))});
  return stored;
}

void ControllerCore::deregister_robot(std::uint32_t robot_id) {
  auto& s = session(robot_id);
  if (s.link) link_owner_.erase(*s.link);
  sessions_.erase(robot_id);
  map_.erase(robot_id);
  for (auto it = groups_.begin(); it != groups_.end();) {
    it->second.erase(robot_id);
    it = it->second.empty() ? groups_.erase(it) : std::next(it);
  }
  rebuild_topology();
}

// --- groups ------------------------------------------------------------------

void ControllerCore::define_group(const std::string& name, const std::vector<std::uint32_t>& ids) {
  if (name.empty()) {
    throw Error("VALIDATION_FAILED", "group name must be non-empty",
                {{"row", nullptr}, {"violations", {{{"field", "name"}, {"code", "EMPTY_NAME"}}}}});
  }
  if (ids.empty()) throw Error("EMPTY_GROUP", "group " + name + " has no members");
  std::vector<std::uint32_t> unknown;
  for (auto id : ids) {
    if (!sessions_.contains(id)) unknown.push_back(id);
  }
  std::sort(unknown.begin(), unknown.end());
  unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
  if (!unknown.empty()) {
    std::string list;
    for (auto id : unknown) list += (list.empty() ? "" : ",") + std::to_string(id);
    throw Error("UNKNOWN_ROBOT", "unknown robot(s) " + list, {{"ids", ids_json(unknown)}});
  }
  groups_[name] = std::set<std::uint32_t>(ids.begin(), ids.end());
}

void ControllerCore::remove_group(const std::string& name) {
  if (groups_.erase(name) == 0) throw Error("UNKNOWN_GROUP", "unknown group " + name);
}

std::set<std::uint32_t> ControllerCore::resolve_target(const std::string& target) const {
  if (target == "all") {
    std::set<std::uint32_t> ids;
    for (const auto& [id, _] : sessions_) ids.insert(id);
    return ids;
  }
  if (target.starts_with("robot:")) {
    auto id = parse_id(std::string_view(target).substr(6));
    if (!id) throw Error("MALFORMED_TARGET", "bad robot target " + target);
    if (!sessions_.contains(*id)) {
      throw Error("UNKNOWN_ROBOT", "robot " + std::to_string(*id) + " is not registered",
                  {{"ids", {*id}}});
    }
    return {*id};
  }
  if (target.starts_with("group:")) {
    auto it = groups_.find(target.substr(6));
    if (it == groups_.end()) throw Error("UNKNOWN_GROUP", "unknown group " + target.substr(6));
    return it->second;
  }
  throw Error("MALFORMED_TARGET", "target must be robot:<id>, group:<name> or all");
}

// --- programs ----------------------------------------------------------------

std::map<std::uint32_t, std::vector<OpenBotsPacket>> ControllerCore::compile_program(
    const Program& p, const std::string& target) {
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    OpenBotsPacket probe;
    probe.coefficients = p.rows[i].coefficients;
    probe.action = p.rows[i].action;
    if (auto vs = validate_packet(probe); !vs.empty()) {
      nlohmann::json jv = nlohmann::json::array();
      for (const auto& v : vs) jv.push_back({{"field", v.field}, {"code", v.code}, {"allowed", v.allowed}});
      throw Error("VALIDATION_FAILED", "row " + std::to_string(i) + " fails validation",
                  {{"row", i}, {"violations", jv}});
    }
  }

  std::set<std::uint32_t> ids;
  try {
    ids = resolve_target(target);
  } catch (const Error& e) {
    if (e.code() == "MALFORMED_TARGET") throw;
    throw Error("UNKNOWN_TARGET", e.what(),
                {{"reason", e.code()}, {"target", target}, {"ids", e.detail().value("ids", nlohmann::json::array())}});
  }

  std::map<std::uint32_t, std::vector<OpenBotsPacket>> out;
  for (auto id : ids) {
    auto& s = sessions_.at(id);
    auto& list = out[id];
    for (const auto& row : p.rows) {
      OpenBotsPacket pkt;
      pkt.msg_type = MsgType::kCommand;
      pkt.coefficients = row.coefficients;
      pkt.coefficients.robot_id = id;
      pkt.action = row.action;
      pkt.stats.sequence = ++s.last_sequence_out;
      pkt.stats.counter = ++s.counter_out;
      pkt.stats.hash_present = cfg_.hash_trailer;
      list.push_back(std::move(pkt));
    }
  }
  return out;
}

DispatchReport ControllerCore::submit(const Program& p, const std::string& target) {
  auto compiled = compile_program(p, target);
  DispatchReport report;
  report.target = target;
  report.rows = p.rows.size();
  for (auto& [id, packets] : compiled) {
    auto& entry = report.robots[id];
    entry.packets = packets.size();
    entry.first_sequence = packets.empty() ? 0 : packets.front().stats.sequence;
    auto& s = sessions_.at(id);

    std::optional<Route> route;
    try {
      route = route_to(id);
    } catch (const Error&) {
      // unreachable: every packet of this robot is dropped below
    }
    for (auto& pkt : packets) {
      auto bytes = send(s, pkt, false);
      ++s.counters.commands_out;
      s.history.push_back({pkt.stats.sequence, pkt.action, uptime_});
      while (s.history.size() > cfg_.history_capacity) s.history.pop_front();
      if (!route) {
        ++s.counters.dropped;
        ++entry.dropped;
        continue;
      }
      try {
        forward_packet(pkt, *route, bytes.size());
      } catch (const Error&) {
        ++entry.dropped;
        continue;
      }
      ++entry.delivered;
      if (s.link) outbox_.push_back({*s.link, id, std::move(bytes)});
    }
  }
  return report;
}

// --- routing -----------------------------------------------------------------

void ControllerCore::rebuild_topology() {
  TopologyGraph g;
  const NodeId h = hub();
  g.add_node(h);
  for (const auto& [id, _] : sessions_) g.add_node(NodeId::robot(id));
  if (cfg_.links.empty()) {
    for (const auto& [id, _] : sessions_) {
      if (NodeId::robot(id) != h) g.set_edge(h, NodeId::robot(id), 1.0);
    }
  } else {
    for (const auto& l : cfg_.links) {
      auto a = NodeId::parse(l.a);
      auto b = NodeId::parse(l.b);
      if (!a || !b) continue;
      // In centralized mode the controller lives on the hub robot.
      if (a->is_controller()) a = h;
      if (b->is_controller()) b = h;
      if (*a != *b && g.has_node(*a) && g.has_node(*b)) g.set_edge(*a, *b, l.weight);
    }
  }
  topology_ = std::move(g);
}

bool ControllerCore::node_live(NodeId n) const {
  if (n == hub() || n.is_controller()) return true;
  auto it = sessions_.find(n.robot_id());
  return it != sessions_.end() && it->second.alive;
}

Route ControllerCore::route_to(std::uint32_t robot_id) const {
  return shortest_path(topology_, hub(), NodeId::robot(robot_id));
}

DeliveryTrace ControllerCore::forward_packet(const OpenBotsPacket& pkt, const Route& path,
                                             std::size_t wire_bytes) {
  (void)pkt;
  DeliveryTrace trace;
  if (path.nodes.empty()) return trace;
  const NodeId dst = path.nodes.back();
  auto dst_session = [&]() -> RobotSession* {
    if (dst.is_controller()) return nullptr;
    auto it = sessions_.find(dst.robot_id());
    return it == sessions_.end() ? nullptr : &it->second;
  };

  if (path.nodes.size() == 1) {
    if (auto* s = dst_session()) ++s->counters.delivered;
    return trace;
  }
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const NodeId from = path.nodes[i - 1];
    const NodeId to = path.nodes[i];
    if (!node_live(to)) {
      if (auto* s = dst_session()) ++s->counters.dropped;
      nlohmann::json hops = nlohmann::json::array();
      for (const auto& h : trace.hops) hops.push_back(h.to.to_string());
      throw Error("HOP_DOWN", "hop " + to.to_string() + " is down",
                  {{"node", to.to_string()}, {"hops", hops}});
    }
    trace.hops.push_back({from, to, uptime_, wire_bytes});
    ++link_forwarded_[std::minmax(from, to)];
    if (auto it = to.is_controller() ? sessions_.end() : sessions_.find(to.robot_id());
        it != sessions_.end()) {
      ++(to == dst ? it->second.counters.delivered : it->second.counters.relayed);
    }
  }
  return trace;
}

// --- telemetry ---------------------------------------------------------------

void ControllerCore::record_telemetry(const OpenBotsPacket& pkt) {
  const auto id = pkt.coefficients.robot_id;
  if (!sessions_.contains(id)) {
    throw Error("UNKNOWN_ROBOT", "telemetry from unregistered robot " + std::to_string(id),
                {{"ids", {id}}});
  }
  if (pkt.action == Action::kSend) {
    mailbox_.push_back({id, pkt.coefficients.data});
    while (mailbox_.size() > cfg_.mailbox_capacity) {
      mailbox_.pop_front();
      ++mailbox_dropped_;
    }
    return;
  }

  auto j = nlohmann::json::parse(pkt.coefficients.data, nullptr, false);
  auto malformed = [&] { return Error("MALFORMED_POSE", "telemetry data is not a pose record"); };
  if (!j.is_object()) throw malformed();
  auto int_field = [&](const char* k) {
    auto it = j.find(k);
    if (it == j.end() || !it->is_number_integer()) throw malformed();
    return it->get<int>();
  };
  MapEntry e;
  e.x = int_field("x");
  e.y = int_field("y");
  e.heading = int_field("heading");
  if (e.heading < 0 || e.heading > 359) throw malformed();
  if (auto it = j.find("holding"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) throw malformed();
    e.holding = it->get<std::uint32_t>();
  }
  if (auto it = j.find("powered"); it != j.end()) {
    if (!it->is_boolean()) throw malformed();
    e.powered = it->get<bool>();
  }
  bool has_tick = false;
  if (auto it = j.find("tick"); it != j.end()) {
    if (!it->is_number_unsigned()) throw malformed();
    e.tick = it->get<std::uint64_t>();
    has_tick = true;
  }

  auto cur = map_.find(id);
  if (cur == map_.end()) {
    map_.emplace(id, e);
  } else if (!has_tick) {
    e.tick = cur->second.tick;
    cur->second = e;
  } else if (e.tick > cur->second.tick) {
    cur->second = e;
  }
}

std::vector<std::string> ControllerCore::drain_mailbox(std::uint32_t robot_id) {
  std::vector<std::string> out;
  bool any = false;
  for (auto it = mailbox_.begin(); it != mailbox_.end();) {
    if (it->robot_id == robot_id) {
      any = true;
      out.push_back(std::move(it->data));
      it = mailbox_.erase(it);
    } else {
      ++it;
    }
  }
  if (!any && !sessions_.contains(robot_id)) {
    throw Error("UNKNOWN_ROBOT", "robot " + std::to_string(robot_id) + " is not registered",
                {{"ids", {robot_id}}});
  }
  return out;
}

// --- stats -------------------------------------------------------------------

StatsReport ControllerCore::stats_snapshot() const {
  StatsReport r;
  r.uptime_ticks = uptime_;
  r.robot_count = sessions_.size();
  for (const auto& [id, s] : sessions_) {
    r.sessions[id] = s.counters;
    r.alive[id] = s.alive;
  }
  r.link_forwarded = link_forwarded_;
  r.unbound_errors = unbound_errors_;
  r.mailbox_dropped = mailbox_dropped_;
  return r;
}

void ControllerCore::tick() {
  ++uptime_;
  for (auto& [id, s] : sessions_) {
    if (uptime_ - s.last_seen_tick > cfg_.liveness_ticks) s.alive = false;
  }
}

}  // namespace sdbotics::controller
