#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdbotics/controller/program.hpp"
#include "sdbotics/controller/topology.hpp"
#include "sdbotics/openbots/packet.hpp"
#include "sdbotics/sim/world.hpp"

namespace sdbotics::controller {

enum class Mode { kCentralized, kCloud };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

/// Opaque identity of one southbound connection.
using LinkId = std::uint64_t;

struct ControllerConfig {
  Mode mode = Mode::kCloud;
  /// Robot hosting the controller in centralized mode.
  std::uint32_t hub_robot = 1;
  /// Configured topology; empty means a star around the hub.
  std::vector<sim::LinkSpec> links;
  bool hash_trailer = false;
  std::size_t mailbox_capacity = 1024;
  std::uint64_t liveness_ticks = 5;
  std::size_t history_capacity = 256;
};

struct SessionCounters {
  std::uint64_t packets_in = 0;
  std::uint64_t packets_out = 0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  std::uint64_t commands_out = 0;
  std::uint64_t acks_in = 0;
  std::uint64_t telemetry_in = 0;
  std::uint64_t checksum_errors = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t sequence_errors = 0;
  std::uint64_t buffer_full = 0;
  std::uint64_t relayed = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

struct DispatchRecord {
  std::uint32_t sequence = 0;
  openbots::Action action = openbots::Action::kNop;
  std::uint64_t tick = 0;
};

struct RobotSession {
  std::uint32_t robot_id = 0;
  std::string vendor;
  std::string remote;
  std::optional<LinkId> link;
  std::uint32_t last_sequence_in = 0;
  std::uint32_t last_sequence_out = 0;
  std::uint32_t counter_out = 0;
  SessionCounters counters;
  std::uint64_t last_seen_tick = 0;
  bool alive = true;
  openbots::RobotCoefficients latest;
  std::deque<DispatchRecord> history;
};

struct MapEntry {
  int x = 0;
  int y = 0;
  int heading = 0;
  std::optional<std::uint32_t> holding;
  bool powered = false;
  std::uint64_t tick = 0;
};

struct MailboxEntry {
  std::uint32_t robot_id = 0;
  std::string data;
};

struct TraceHop {
  NodeId from;
  NodeId to;
  std::uint64_t tick = 0;
  std::size_t bytes = 0;
};

struct DeliveryTrace {
  std::vector<TraceHop> hops;
};

struct StatsReport {
  std::uint64_t uptime_ticks = 0;
  std::size_t robot_count = 0;
  std::map<std::uint32_t, SessionCounters> sessions;
  std::map<std::uint32_t, bool> alive;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> link_forwarded;
  std::uint64_t unbound_errors = 0;
  std::uint64_t mailbox_dropped = 0;
};

struct RobotDispatch {
  std::size_t packets = 0;
  std::uint32_t first_sequence = 0;
  std::size_t delivered = 0;
  std::size_t dropped = 0;
};

struct DispatchReport {
  std::string target;
  std::size_t rows = 0;
  std::map<std::uint32_t, RobotDispatch> robots;
  std::size_t total_packets() const;
};

/// A frame the controller wants written to one southbound connection.
struct Outgoing {
  LinkId link = 0;
  std::uint32_t robot_id = 0;
  openbots::Bytes bytes;
};

/// The controller layer as a single-threaded state machine. Callers that
/// share it between threads must serialise every call (see ControllerPort).
class ControllerCore {
 public:
  explicit ControllerCore(ControllerConfig cfg = {});

  const ControllerConfig& config() const { return cfg_; }
  NodeId hub() const;
  std::uint64_t uptime() const { return uptime_; }

  // --- southbound -------------------------------------------------------
  /// Decodes and handles one frame from `link`. Decode failures are counted
  /// against the session bound to the link.
  void ingest(LinkId link, std::span<const std::uint8_t> frame, const std::string& remote = {});
  void link_closed(LinkId link);
  /// Frames produced since the last call, in production order.
  std::vector<Outgoing> take_outbox();

  // --- membership (the set S) ----------------------------------------------
  const RobotSession& register_robot(const openbots::OpenBotsPacket& hello, LinkId link,
                                     const std::string& remote = {});
  void deregister_robot(std::uint32_t robot_id);
  const std::map<std::uint32_t, RobotSession>& sessions() const { return sessions_; }
  bool has_robot(std::uint32_t id) const { return sessions_.contains(id); }

  // --- groups ---------------------------------------------------------------
  void define_group(const std::string& name, const std::vector<std::uint32_t>& ids);
  void remove_group(const std::string& name);
  const std::map<std::string, std::set<std::uint32_t>>& groups() const { return groups_; }
  std::set<std::uint32_t> resolve_target(const std::string& target) const;

  // --- programs -------------------------------------------------------------
  /// One COMMAND per row per target robot, in row order, with fresh sequence
  /// numbers taken from each session.
  std::map<std::uint32_t, std::vector<openbots::OpenBotsPacket>> compile_program(
      const Program& p, const std::string& target);
  /// compile_program, then route and send each packet.
  DispatchReport submit(const Program& p, const std::string& target);

  // --- routing --------------------------------------------------------------
  const TopologyGraph& topology() const { return topology_; }
  Route route_to(std::uint32_t robot_id) const;
  /// Walks the packet hop by hop, updating relay/delivery/link counters.
  /// Throws Error(HOP_DOWN) at the first dead hop after recording the drop.
  DeliveryTrace forward_packet(const openbots::OpenBotsPacket& pkt, const Route& path,
                               std::size_t wire_bytes);

  // --- telemetry, map, mailbox ---------------------------------------------
  void record_telemetry(const openbots::OpenBotsPacket& pkt);
  const std::map<std::uint32_t, MapEntry>& global_map() const { return map_; }
  std::vector<std::string> drain_mailbox(std::uint32_t robot_id);
  const std::deque<MailboxEntry>& mailbox() const { return mailbox_; }

  // --- stats & clock --------------------------------------------------------
  StatsReport stats_snapshot() const;
  /// Advances controller time; sessions silent for more than liveness_ticks
  /// are marked dead.
  void tick();

 private:
  RobotSession& session(std::uint32_t id);
  void rebuild_topology();
  bool node_live(NodeId n) const;
  openbots::Bytes send(RobotSession& s, openbots::OpenBotsPacket pkt, bool assign_sequence = true);
  void reply_unbound(LinkId link, std::uint32_t robot_id, const std::string& data);
  void count_packet_in(RobotSession& s, std::size_t bytes);

  ControllerConfig cfg_;
  std::uint64_t uptime_ = 0;
  std::map<std::uint32_t, RobotSession> sessions_;
  std::map<LinkId, std::uint32_t> link_owner_;
  std::map<std::string, std::set<std::uint32_t>> groups_;
  TopologyGraph topology_;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> link_forwarded_;
  std::map<std::uint32_t, MapEntry> map_;
  std::deque<MailboxEntry> mailbox_;
  std::uint64_t mailbox_dropped_ = 0;
  std::uint64_t unbound_errors_ = 0;
  std::vector<Outgoing> outbox_;
};

}  // namespace sdbotics::controller
