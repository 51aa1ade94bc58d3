#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdbotics/openbots/packet.hpp"

namespace sdbotics::openbots {

enum class CodecErrc {
  kBadMagic,
  kBadVersion,
  kTruncated,
  kChecksumMismatch,
  kHashMismatch,
  kInvalidField,
  kOversizeData,
};

std::string_view to_string(CodecErrc e);

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  CodecErrc code() const noexcept { return code_; }

 private:
  CodecErrc code_;
};

/// A single range violation found by validate_coefficients.
struct Violation {
  std::string field;    // "speed", "angle", ...
  std::string code;     // "ANGLE_OUT_OF_RANGE", ...
  std::string allowed;  // human-readable allowed set, e.g. "0..=180"

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every range invariant of the coefficient set. Violations are
/// returned in wire field order.
std::vector<Violation> validate_coefficients(const RobotCoefficients& c);

/// Coefficient violations plus packet-level rules (action range, SEND needs data).
std::vector<Violation> validate_packet(const OpenBotsPacket& p);

/// Exact encoded size of `p`.
std::size_t encoded_size(const OpenBotsPacket& p);

/// Bit-exact OpenBots v1 encoding. Throws CodecError(kOversizeData | kInvalidField).
Bytes encode_packet(const OpenBotsPacket& p);

/// Total over arbitrary input: either returns a fully validated packet or
/// throws CodecError naming the first failed check.
OpenBotsPacket decode_packet(std::span<const std::uint8_t> bytes);

bool is_valid_utf8(std::string_view s);

}  // namespace sdbotics::openbots
