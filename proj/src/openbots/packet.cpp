#include "sdbotics/openbots/packet.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cstring>

namespace sdbotics::openbots {

namespace {

constexpr std::array<std::string_view, 9> kActionNames = {
    "NOP", "ON", "OFF", "TOUCH", "GRASP", "DROP", "SEE", "SEND", "RENDEZVOUS"};

constexpr std::array<std::string_view, 7> kMsgTypeNames = {
    "?", "COMMAND", "TELEMETRY", "ACK", "HELLO", "STATS_REQ", "STATS_REP"};

}  // namespace

std::string_view to_string(Action a) {
  auto idx = static_cast<std::size_t>(a);
  return idx < kActionNames.size() ? kActionNames[idx] : "?";
}

std::string_view to_string(MsgType t) {
  auto idx = static_cast<std::size_t>(t);
  return idx < kMsgTypeNames.size() ? kMsgTypeNames[idx] : "?";
}

std::optional<Action> parse_action(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<Action>(i);
  }
  return std::nullopt;
}

std::optional<MsgType> parse_msg_type(std::string_view name) {
  for (std::size_t i = 1; i < kMsgTypeNames.size(); ++i) {
    if (kMsgTypeNames[i] == name) return static_cast<MsgType>(i);
  }
  return std::nullopt;
}

IpAddress IpAddress::v4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
  IpAddress ip;
  ip.version = 4;
  ip.bytes[12] = a;
  ip.bytes[13] = b;
  ip.bytes[14] = c;
  ip.bytes[15] = d;
  return ip;
}

IpAddress IpAddress::v6(const std::array<std::uint8_t, 16>& raw) {
  IpAddress ip;
  ip.version = 6;
  ip.bytes = raw;
  return ip;
}

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
  std::string s(text);
  in_addr a4{};
  if (::inet_pton(AF_INET, s.c_str(), &a4) == 1) {
    const auto* b = reinterpret_cast<const std::uint8_t*>(&a4.s_addr);
    return v4(b[0], b[1], b[2], b[3]);
  }
  in6_addr a6{};
  if (::inet_pton(AF_INET6, s.c_str(), &a6) == 1) {
    std::array<std::uint8_t, 16> raw{};
    std::memcpy(raw.data(), &a6, 16);
    return v6(raw);
  }
  return std::nullopt;
}

bool IpAddress::is_v4_mapped() const {
  return std::all_of(bytes.begin(), bytes.begin() + 10, [](auto b) { return b == 0; }) &&
         bytes[10] == 0xFF && bytes[11] == 0xFF;
}

std::string IpAddress::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  if (version == 4) {
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", bytes[12], bytes[13], bytes[14], bytes[15]);
    return buf;
  }
  ::inet_ntop(AF_INET6, bytes.data(), buf, sizeof buf);
  return buf;
}

}  // namespace sdbotics::openbots
