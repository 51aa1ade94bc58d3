#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sdbotics::net {

using Bytes = std::vector<std::uint8_t>;

/// Southbound frames: 4-byte big-endian length, then one encoded packet.
inline constexpr std::size_t kFrameHeaderLen = 4;
inline constexpr std::size_t kMaxFrameLen = 2048;

Bytes frame(std::span<const std::uint8_t> payload);

/// Incremental decoder for a byte stream of frames.
class FrameReader {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// Next complete payload, if any. Sets failed() on an oversized length.
  std::optional<Bytes> next();
  bool failed() const { return failed_; }

 private:
  Bytes buf_;
  std::size_t pos_ = 0;
  bool failed_ = false;
};

}  // namespace sdbotics::net
