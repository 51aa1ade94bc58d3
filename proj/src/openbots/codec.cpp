#include "sdbotics/openbots/codec.hpp"

#include <algorithm>
#include <cstring>

#include "sdbotics/openbots/checksum.hpp"

namespace sdbotics::openbots {

namespace {

// Field offsets of the v1 layout.
constexpr std::size_t kOffVersion = 2;
constexpr std::size_t kOffMsgType = 3;
constexpr std::size_t kOffFlags = 4;
constexpr std::size_t kOffSequence = 5;
constexpr std::size_t kOffCounter = 9;
constexpr std::size_t kOffRobotId = 13;
constexpr std::size_t kOffSpeed = 17;
constexpr std::size_t kOffDir = 18;
constexpr std::size_t kOffAngle = 19;
constexpr std::size_t kOffSensor = 21;
constexpr std::size_t kOffActuator = 22;
constexpr std::size_t kOffIpVer = 23;
constexpr std::size_t kOffIpAddr = 24;
constexpr std::size_t kOffAction = 40;
constexpr std::size_t kOffDataLen = 41;

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

std::string join(const std::vector<Violation>& vs) {
  std::string s;
  for (const auto& v : vs) {
    if (!s.empty()) s += ", ";
    s += v.field + " " + v.code + "(" + v.allowed + ")";
  }
  return s;
}

}  // namespace

std::string_view to_string(CodecErrc e) {
  switch (e) {
    case CodecErrc::kBadMagic: return "BAD_MAGIC";
    case CodecErrc::kBadVersion: return "BAD_VERSION";
    case CodecErrc::kTruncated: return "TRUNCATED";
    case CodecErrc::kChecksumMismatch: return "CHECKSUM_MISMATCH";
    case CodecErrc::kHashMismatch: return "HASH_MISMATCH";
    case CodecErrc::kInvalidField: return "INVALID_FIELD";
    case CodecErrc::kOversizeData: return "OVERSIZE_DATA";
  }
  return "?";
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  const auto n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

std::vector<Violation> validate_coefficients(const RobotCoefficients& c) {
  std::vector<Violation> out;
  if (c.speed < 1 || c.speed > 5) out.push_back({"speed", "SPEED_OUT_OF_RANGE", "1..=5"});
  if (c.dir < 1 || c.dir > 2) out.push_back({"dir", "DIR_OUT_OF_RANGE", "1..=2"});
  if (c.angle > 180) out.push_back({"angle", "ANGLE_OUT_OF_RANGE", "0..=180"});
  if (c.sensor < 1 || c.sensor > 3) out.push_back({"sensor", "SENSOR_OUT_OF_RANGE", "1..=3"});
  if (c.actuator < 1 || c.actuator > 2) {
    out.push_back({"actuator", "ACTUATOR_OUT_OF_RANGE", "1..=2"});
  }
  if (c.ip.version != 4 && c.ip.version != 6) {
    out.push_back({"ip_addr", "IP_VERSION_INVALID", "4|6"});
  } else if (c.ip.version == 4 && !c.ip.is_v4_mapped()) {
    out.push_back({"ip_addr", "IP_NOT_V4_MAPPED", "::ffff:a.b.c.d"});
  }
  if (c.data.size() > kMaxDataLen) {
    out.push_back({"data", "DATA_TOO_LONG", "0..=1024 bytes"});
  } else if (!is_valid_utf8(c.data)) {
    out.push_back({"data", "DATA_NOT_UTF8", "UTF-8"});
  }
  return out;
}

std::vector<Violation> validate_packet(const OpenBotsPacket& p) {
  std::vector<Violation> out;
  const auto mt = static_cast<std::uint8_t>(p.msg_type);
  if (mt < 1 || mt > 6) out.push_back({"msg_type", "MSG_TYPE_INVALID", "1..=6"});
  auto coeff = validate_coefficients(p.coefficients);
  out.insert(out.end(), coeff.begin(), coeff.end());
  if (static_cast<std::uint8_t>(p.action) > kMaxAction) {
    out.push_back({"action", "ACTION_INVALID", "0..=8"});
  } else if (p.action == Action::kSend && p.coefficients.data.empty()) {
    out.push_back({"data", "SEND_WITHOUT_DATA", "non-empty"});
  }
  return out;
}

std::size_t encoded_size(const OpenBotsPacket& p) {
  return kHeaderBodyLen + p.coefficients.data.size() + kCrcLen +
         (p.stats.hash_present ? kHashLen : 0);
}

Bytes encode_packet(const OpenBotsPacket& p) {
  const auto& c = p.coefficients;
  if (c.data.size() > kMaxDataLen) {
    throw CodecError(CodecErrc::kOversizeData,
                     "data is " + std::to_string(c.data.size()) + " bytes, limit 1024");
  }
  if (auto vs = validate_packet(p); !vs.empty()) {
    throw CodecError(CodecErrc::kInvalidField, join(vs));
  }

  Bytes out;
  out.reserve(encoded_size(p));
  out.push_back(kMagic0);
  out.push_back(kMagic1);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(p.msg_type));
  out.push_back(p.stats.hash_present ? kFlagHash : 0);
  put_u32(out, p.stats.sequence);
  put_u32(out, p.stats.counter);
  put_u32(out, c.robot_id);
  out.push_back(c.speed);
  out.push_back(c.dir);
  put_u16(out, c.angle);
  out.push_back(c.sensor);
  out.push_back(c.actuator);
  out.push_back(c.ip.version);
  out.insert(out.end(), c.ip.bytes.begin(), c.ip.bytes.end());
  out.push_back(static_cast<std::uint8_t>(p.action));
  put_u16(out, static_cast<std::uint16_t>(c.data.size()));
  out.insert(out.end(), c.data.begin(), c.data.end());

  put_u32(out, crc32(out));
  if (p.stats.hash_present) {
    const auto digest = sha256(out);
    out.insert(out.end(), digest.begin(), digest.end());
  }
  return out;
}

OpenBotsPacket decode_packet(std::span<const std::uint8_t> b) {
  if ((!b.empty() && b[0] != kMagic0) || (b.size() > 1 && b[1] != kMagic1)) {
    throw CodecError(CodecErrc::kBadMagic, "expected 4F 42");
  }
  if (b.size() <= kOffVersion) throw CodecError(CodecErrc::kTruncated, "no version byte");
  if (b[kOffVersion] != kVersion) {
    throw CodecError(CodecErrc::kBadVersion, "version " + std::to_string(b[kOffVersion]));
  }
  if (b.size() < kHeaderBodyLen) {
    throw CodecError(CodecErrc::kTruncated,
                     std::to_string(b.size()) + " bytes, header needs 43");
  }
  const std::uint8_t flags = b[kOffFlags];
  if ((flags & ~kFlagHash) != 0) throw CodecError(CodecErrc::kInvalidField, "reserved flag bits set");
  const bool has_hash = (flags & kFlagHash) != 0;
  const std::size_t data_len = get_u16(b, kOffDataLen);
  if (data_len > kMaxDataLen) {
    throw CodecError(CodecErrc::kInvalidField, "data_len " + std::to_string(data_len) + " > 1024");
  }
  const std::size_t crc_off = kHeaderBodyLen + data_len;
  const std::size_t total = crc_off + kCrcLen + (has_hash ? kHashLen : 0);
  if (b.size() < total) {
    throw CodecError(CodecErrc::kTruncated, std::to_string(b.size()) + " bytes, layout needs " +
                                                std::to_string(total));
  }
  if (b.size() > total) {
    throw CodecError(CodecErrc::kInvalidField,
                     std::to_string(b.size() - total) + " trailing bytes");
  }
  const std::uint32_t stored_crc = get_u32(b, crc_off);
  if (crc32(b.first(crc_off)) != stored_crc) {
    throw CodecError(CodecErrc::kChecksumMismatch, "crc32 does not match");
  }
  if (has_hash) {
    const auto digest = sha256(b.first(crc_off + kCrcLen));
    if (!std::equal(digest.begin(), digest.end(), b.begin() + static_cast<long>(crc_off + kCrcLen))) {
      throw CodecError(CodecErrc::kHashMismatch, "sha256 trailer does not match");
    }
  }

  OpenBotsPacket p;
  p.msg_type = static_cast<MsgType>(b[kOffMsgType]);
  p.stats.hash_present = has_hash;
  p.stats.sequence = get_u32(b, kOffSequence);
  p.stats.counter = get_u32(b, kOffCounter);
  p.stats.checksum = stored_crc;
  auto& c = p.coefficients;
  c.robot_id = get_u32(b, kOffRobotId);
  c.speed = b[kOffSpeed];
  c.dir = b[kOffDir];
  c.angle = get_u16(b, kOffAngle);
  c.sensor = b[kOffSensor];
  c.actuator = b[kOffActuator];
  c.ip.version = b[kOffIpVer];
  std::copy_n(b.begin() + kOffIpAddr, 16, c.ip.bytes.begin());
  p.action = static_cast<Action>(b[kOffAction]);
  c.data.assign(reinterpret_cast<const char*>(b.data()) + kHeaderBodyLen, data_len);

  if (auto vs = validate_packet(p); !vs.empty()) {
    throw CodecError(CodecErrc::kInvalidField, join(vs));
  }
  return p;
}

}  // namespace sdbotics::openbots
