#include "sdbotics/net/framing.hpp"

namespace sdbotics::net {

Bytes frame(std::span<const std::uint8_t> payload) {
  Bytes out;
  out.reserve(kFrameHeaderLen + payload.size());
  const auto n = static_cast<std::uint32_t>(payload.size());
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(n >> shift));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

void FrameReader::feed(std::span<const std::uint8_t> bytes) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Bytes> FrameReader::next() {
  if (failed_ || buf_.size() - pos_ < kFrameHeaderLen) return std::nullopt;
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < kFrameHeaderLen; ++i) n = (n << 8) | buf_[pos_ + i];
  if (n > kMaxFrameLen) {
    failed_ = true;
    return std::nullopt;
  }
  if (buf_.size() - pos_ - kFrameHeaderLen < n) return std::nullopt;
  const auto begin = buf_.begin() + static_cast<long>(pos_ + kFrameHeaderLen);
  Bytes out(begin, begin + n);
  pos_ += kFrameHeaderLen + n;
  if (pos_ > 4096) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(pos_));
    pos_ = 0;
  }
  return out;
}

}  // namespace sdbotics::net
