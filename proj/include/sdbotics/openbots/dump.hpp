#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "sdbotics/openbots/packet.hpp"

namespace sdbotics::openbots {

/// Classic 16-bytes-per-line hexdump with offsets and ASCII column.
std::string hexdump(std::span<const std::uint8_t> bytes);

/// Decoded fields as JSON (layout order). Throws CodecError like decode_packet.
nlohmann::ordered_json packet_fields(std::span<const std::uint8_t> bytes);

}  // namespace sdbotics::openbots
