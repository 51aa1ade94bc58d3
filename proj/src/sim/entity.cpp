#include "sdbotics/sim/entity.hpp"

#include "sdbotics/openbots/codec.hpp"

namespace sdbotics::sim {

using namespace sdbotics::openbots;

EntityAgent::EntityAgent(std::uint32_t robot_id, std::string vendor, IpAddress ip,
                         bool hash_trailer)
    : robot_id_(robot_id), vendor_(std::move(vendor)), ip_(ip), hash_trailer_(hash_trailer) {}

Bytes EntityAgent::emit(MsgType type, Action action, std::string data, const RobotState* state) {
  OpenBotsPacket p;
  p.msg_type = type;
  p.action = action;
  p.coefficients.robot_id = robot_id_;
  p.coefficients.ip = ip_;
  if (data.size() > kMaxDataLen) data.resize(kMaxDataLen);
  p.coefficients.data = std::move(data);
  if (state != nullptr) {
    p.coefficients.speed = static_cast<std::uint8_t>(state->motion_cells == 0 ? 1 : state->motion_cells + 1);
    p.coefficients.dir = state->reverse ? 2 : 1;
  }
  p.stats.sequence = ++seq_out_;
  p.stats.counter = ++counter_out_;
  p.stats.hash_present = hash_trailer_;
  ++counters_.packets_out;
  return encode_packet(p);
}

Bytes EntityAgent::hello() {
  // Starts a new session.
  registered_ = false;
  registration_error_.clear();
  last_seq_in_ = 0;
  return emit(MsgType::kHello, Action::kNop, vendor_);
}

std::vector<Bytes> EntityAgent::on_frame(std::span<const std::uint8_t> frame, WorldState& w) {
  OpenBotsPacket pkt;
  try {
    pkt = decode_packet(frame);
  } catch (const CodecError& e) {
    if (e.code() == CodecErrc::kChecksumMismatch) {
      ++counters_.checksum_errors;
    } else {
      ++counters_.decode_errors;
    }
    return {};
  }
  ++counters_.packets_in;
  if (pkt.stats.sequence <= last_seq_in_) {
    ++counters_.sequence_errors;
    return {};
  }
  last_seq_in_ = pkt.stats.sequence;

  const auto target = pkt.coefficients.robot_id;
  if (target != robot_id_ && target != kBroadcastId) {
    ++counters_.misdirected;
    return {};
  }

  switch (pkt.msg_type) {
    case MsgType::kAck:
      if (pkt.coefficients.data == "REGISTERED") {
        registered_ = true;
      } else if (pkt.coefficients.data.starts_with("ERR ")) {
        registration_error_ = pkt.coefficients.data.substr(4);
      }
      return {};
    case MsgType::kCommand: {
      const auto seq = std::to_string(pkt.stats.sequence);
      auto bytes = Bytes(frame.begin(), frame.end());
      switch (enqueue(w, robot_id_, std::move(pkt))) {
        case EnqueueResult::kAck:
          ++counters_.commands_enqueued;
          command_log_.push_back(std::move(bytes));
          return {emit(MsgType::kAck, Action::kNop, seq)};
        case EnqueueResult::kBufferFull:
          ++counters_.buffer_full;
          return {emit(MsgType::kAck, Action::kNop, "BUFFER_FULL " + seq)};
        case EnqueueResult::kUnknownRobot:
          ++counters_.misdirected;
          return {};
      }
      return {};
    }
    case MsgType::kStatsReq: {
      auto it = w.robots.find(robot_id_);
      const RobotState* r = it == w.robots.end() ? nullptr : &it->second;
      nlohmann::json j{{"packets_in", counters_.packets_in},
                       {"packets_out", counters_.packets_out},
                       {"checksum_errors", counters_.checksum_errors},
                       {"buffer", r ? r->buffer.size() : 0}};
      return {emit(MsgType::kStatsRep, Action::kNop, j.dump(), r)};
    }
    default:
      return {};
  }
}

std::vector<Bytes> EntityAgent::after_tick(const WorldState& w, const TickReport& report) {
  std::vector<Bytes> out;
  if (!registered_) return out;
  auto it = w.robots.find(robot_id_);
  if (it == w.robots.end()) return out;
  const RobotState& r = it->second;
  for (const auto& ev : report.events) {
    if (ev.robot != robot_id_) continue;
    if (ev.kind == WorldEvent::Kind::kSend) {
      out.push_back(emit(MsgType::kTelemetry, Action::kSend, ev.data, &r));
    } else if (ev.kind == WorldEvent::Kind::kSee) {
      out.push_back(emit(MsgType::kTelemetry, Action::kSee, ev.data, &r));
    }
  }
  out.push_back(emit(MsgType::kTelemetry, Action::kNop, pose_record(w, r).dump(), &r));
  return out;
}

}  // namespace sdbotics::sim
