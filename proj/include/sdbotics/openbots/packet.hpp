#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdbotics::openbots {

inline constexpr std::uint8_t kMagic0 = 0x4F;  // 'O'
inline constexpr std::uint8_t kMagic1 = 0x42;  // 'B'
inline constexpr std::uint8_t kVersion = 0x01;

inline constexpr std::size_t kHeaderBodyLen = 43;  // fixed part before data
inline constexpr std::size_t kCrcLen = 4;
inline constexpr std::size_t kHashLen = 32;
inline constexpr std::size_t kMaxDataLen = 1024;

inline constexpr std::uint8_t kFlagHash = 0x01;

inline constexpr std::uint32_t kBroadcastId = 0;

enum class MsgType : std::uint8_t {
  kCommand = 1,
  kTelemetry = 2,
  kAck = 3,
  kHello = 4,
  kStatsReq = 5,
  kStatsRep = 6,
};

enum class Action : std::uint8_t {
  kNop = 0,
  kOn = 1,
  kOff = 2,
  kTouch = 3,
  kGrasp = 4,
  kDrop = 5,
  kSee = 6,
  kSend = 7,
  kRendezvous = 8,
};

inline constexpr std::uint8_t kMaxAction = 8;

std::string_view to_string(MsgType t);
std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view name);
std::optional<MsgType> parse_msg_type(std::string_view name);

/// IPv4 or IPv6 address. IPv4 is kept as the v4-mapped form (::ffff:a.b.c.d)
/// in `bytes`, which is exactly what goes on the wire.
struct IpAddress {
  std::uint8_t version = 4;
  std::array<std::uint8_t, 16> bytes{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xFF, 0xFF, 0, 0, 0, 0};

  static IpAddress v4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d);
  static IpAddress v6(const std::array<std::uint8_t, 16>& raw);
  /// Accepts dotted-quad or RFC 4291 text. Returns nullopt on malformed input.
  static std::optional<IpAddress> parse(std::string_view text);

  bool is_v4_mapped() const;
  std::string to_string() const;

  friend bool operator==(const IpAddress&, const IpAddress&) = default;
};

/// Programmable configuration of one robot.
struct RobotCoefficients {
  std::uint32_t robot_id = 0;
  std::uint8_t speed = 1;     // 1 stop, 2 normal, 3 accelerated, 4..5 reserved
  std::uint8_t dir = 1;       // 1 forward, 2 backward
  std::uint16_t angle = 0;    // degrees, 0..=180
  std::uint8_t sensor = 1;    // 1 touch, 2 proximity, 3 camera
  std::uint8_t actuator = 1;  // 1 gripper, 2 camera-mounted motor
  IpAddress ip;
  std::string data;

  friend bool operator==(const RobotCoefficients&, const RobotCoefficients&) = default;
};

struct PacketStats {
  std::uint32_t sequence = 0;
  std::uint32_t counter = 0;
  std::uint32_t checksum = 0;  // filled by decode; derived from wire bytes
  bool hash_present = false;

  // checksum is a function of the encoding, not of the packet value.
  friend bool operator==(const PacketStats& a, const PacketStats& b) {
    return a.sequence == b.sequence && a.counter == b.counter && a.hash_present == b.hash_present;
  }
};

struct OpenBotsPacket {
  MsgType msg_type = MsgType::kCommand;
  RobotCoefficients coefficients;
  Action action = Action::kNop;
  PacketStats stats;

  friend bool operator==(const OpenBotsPacket&, const OpenBotsPacket&) = default;
};

using Bytes = std::vector<std::uint8_t>;

}  // namespace sdbotics::openbots
