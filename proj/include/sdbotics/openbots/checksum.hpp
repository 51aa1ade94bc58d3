#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace sdbotics::openbots {

/// IEEE CRC-32 (reflected, poly 0xEDB88320, init and final xor 0xFFFFFFFF).
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> bytes);

}  // namespace sdbotics::openbots
