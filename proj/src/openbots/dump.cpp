#include "sdbotics/openbots/dump.hpp"

#include <cctype>
#include <cstdio>

#include "sdbotics/openbots/codec.hpp"

namespace sdbotics::openbots {

std::string hexdump(std::span<const std::uint8_t> bytes) {
  std::string out;
  char buf[16];
  for (std::size_t off = 0; off < bytes.size(); off += 16) {
    std::snprintf(buf, sizeof buf, "%08zx  ", off);
    out += buf;
    std::string ascii;
    for (std::size_t i = 0; i < 16; ++i) {
      if (off + i < bytes.size()) {
        const auto b = bytes[off + i];
        std::snprintf(buf, sizeof buf, "%02x ", b);
        out += buf;
        ascii += std::isprint(b) ? static_cast<char>(b) : '.';
      } else {
        out += "   ";
      }
      if (i == 7) out += ' ';
    }
    out += " |" + ascii + "|\n";
  }
  return out;
}

nlohmann::ordered_json packet_fields(std::span<const std::uint8_t> bytes) {
  const auto p = decode_packet(bytes);
  const auto& c = p.coefficients;
  char crc[16];
  std::snprintf(crc, sizeof crc, "0x%08X", p.stats.checksum);
  nlohmann::ordered_json j;
  j["msg_type"] = std::string(to_string(p.msg_type));
  j["hash_present"] = p.stats.hash_present;
  j["sequence"] = p.stats.sequence;
  j["counter"] = p.stats.counter;
  j["robot_id"] = c.robot_id;
  j["speed"] = c.speed;
  j["dir"] = c.dir;
  j["angle"] = c.angle;
  j["sensor"] = c.sensor;
  j["actuator"] = c.actuator;
  j["ip_ver"] = c.ip.version;
  j["ip_addr"] = c.ip.to_string();
  j["action"] = std::string(to_string(p.action));
  j["data_len"] = c.data.size();
  j["data"] = c.data;
  j["crc32"] = crc;
  j["length"] = bytes.size();
  return j;
}

}  // namespace sdbotics::openbots
