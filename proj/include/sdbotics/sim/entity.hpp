#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdbotics/openbots/packet.hpp"
#include "sdbotics/sim/world.hpp"

namespace sdbotics::sim {

/// The robot end of an OpenBots session. Transport-agnostic: frames in,
/// frames out. All world access happens on the caller's clock thread.
class EntityAgent {
 public:
  struct Counters {
    std::uint64_t packets_in = 0;
    std::uint64_t packets_out = 0;
    std::uint64_t commands_enqueued = 0;
    std::uint64_t checksum_errors = 0;
    std::uint64_t decode_errors = 0;
    std::uint64_t buffer_full = 0;
    std::uint64_t misdirected = 0;
    std::uint64_t sequence_errors = 0;
  };

  EntityAgent(std::uint32_t robot_id, std::string vendor, openbots::IpAddress ip,
              bool hash_trailer = false);

  std::uint32_t robot_id() const { return robot_id_; }
  bool registered() const { return registered_; }
  const std::string& registration_error() const { return registration_error_; }
  const Counters& counters() const { return counters_; }
  /// Encoded bytes of every COMMAND accepted into the buffer, in order.
  const std::vector<openbots::Bytes>& command_log() const { return command_log_; }

  openbots::Bytes hello();

  /// Handles one frame from the controller; returns the replies (ACKs).
  std::vector<openbots::Bytes> on_frame(std::span<const std::uint8_t> frame, WorldState& w);

  /// Telemetry for the tick just stepped: SEE/SEND events, then the pose.
  std::vector<openbots::Bytes> after_tick(const WorldState& w, const TickReport& report);

 private:
  openbots::Bytes emit(openbots::MsgType type, openbots::Action action, std::string data,
                       const RobotState* state = nullptr);

  std::uint32_t robot_id_;
  std::string vendor_;
  openbots::IpAddress ip_;
  bool hash_trailer_;
  bool registered_ = false;
  std::string registration_error_;
  std::uint32_t seq_out_ = 0;
  std::uint32_t counter_out_ = 0;
  std::uint32_t last_seq_in_ = 0;
  Counters counters_;
  std::vector<openbots::Bytes> command_log_;
};

}  // namespace sdbotics::sim
