#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdbotics/openbots/packet.hpp"
#include "sdbotics/sim/vendor.hpp"

namespace sdbotics::sim {

using ObjectId = std::uint32_t;

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Heading is in degrees, 0 = +x, 90 = +y, normalised to 0..359.
struct Pose {
  int x = 0;
  int y = 0;
  int heading = 0;
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Per-robot FIFO of received COMMAND packets.
class MnemonicBuffer {
 public:
  static constexpr std::size_t kCapacity = 256;

  /// False (and the buffer unchanged) when full.
  bool push(openbots::OpenBotsPacket pkt);
  std::optional<openbots::OpenBotsPacket> pop();
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::deque<openbots::OpenBotsPacket>& entries() const { return entries_; }

 private:
  std::deque<openbots::OpenBotsPacket> entries_;
};

/// A row in progress: its interpreted micro-ops and a cursor.
struct ActiveRow {
  std::uint32_t sequence = 0;
  openbots::Action action = openbots::Action::kNop;
  std::vector<std::string> instructions;
  std::vector<MicroOp> ops;
  std::size_t next = 0;

  const MicroOp* current() const { return next < ops.size() ? &ops[next] : nullptr; }
};

struct RobotState {
  std::uint32_t id = 0;
  std::string vendor = "generic";
  openbots::IpAddress ip;
  bool powered = false;
  Pose pose;
  Pose start_pose;
  int motion_cells = 0;  // cells per tick while powered
  bool reverse = false;
  std::optional<ObjectId> holding;
  MnemonicBuffer buffer;
  std::optional<ActiveRow> active;

  bool idle() const { return !active && buffer.empty(); }
};

struct LinkSpec {
  std::string a;
  std::string b;
  double weight = 1;
};

struct WorldState {
  int width = 16;
  int height = 16;
  std::map<std::uint32_t, RobotState> robots;
  std::map<ObjectId, Cell> objects;
  std::vector<LinkSpec> links;
  std::uint64_t tick = 0;
  std::uint64_t seed = 0;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  std::optional<ObjectId> object_at(Cell c) const;
};

/// Something a robot produced during a tick that leaves the world: sensor
/// reports, user data, or execution faults.
struct WorldEvent {
  enum class Kind { kSee, kSend, kFault };
  std::uint32_t robot = 0;
  Kind kind = Kind::kFault;
  std::string code;  // fault code for kFault
  std::string data;  // SEND payload, SEE occupancy JSON, or fault detail
};

struct TickReport {
  std::uint64_t tick = 0;
  std::vector<WorldEvent> events;
};

enum class EnqueueResult { kAck, kBufferFull, kUnknownRobot };

/// Appends a COMMAND to the robot's own buffer only.
EnqueueResult enqueue(WorldState& w, std::uint32_t robot_id, openbots::OpenBotsPacket pkt);

/// Unit grid step for a heading; headings between the axes give diagonals.
Cell heading_step(int heading);
Cell front_cell(const RobotState& r);

/// Advances the world by exactly one tick. Robots act in ascending id order.
TickReport step_world(WorldState& w);

/// Object occupancy of the 4-neighbourhood, ordered east, north, west, south.
nlohmann::json occupancy(const WorldState& w, Cell at);

/// Pose record carried in TELEMETRY data.
nlohmann::json pose_record(const WorldState& w, const RobotState& r);

/// One trajectory-trace line per robot for the current tick (JSON, no newline).
std::vector<std::string> trace_lines(const WorldState& w);
std::string trace_line(const WorldState& w, const RobotState& r);

/// Generates a fleet of `n` robots in separate columns, each with an object
/// ahead of it; layout is a pure function of (seed, n, vendor).
WorldState make_fleet_world(std::uint64_t seed, int n, const std::string& vendor = "VendorA");

}  // namespace sdbotics::sim
