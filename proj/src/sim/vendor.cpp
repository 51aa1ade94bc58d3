#include "sdbotics/sim/vendor.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>

#include "sdbotics/error.hpp"

namespace sdbotics::sim {

using openbots::Action;
using openbots::OpenBotsPacket;
using Kind = MicroOp::Kind;

int cells_per_tick(std::uint8_t speed) {
  if (speed <= 1) return 0;
  return speed == 2 ? 1 : 2;
}

namespace {

[[noreturn]] void untranslatable(std::string_view vendor, std::string_view what) {
  throw Error("UNTRANSLATABLE", std::string(vendor) + ": cannot handle '" + std::string(what) + "'");
}

// Vendor-neutral meaning of one unified-mnemonic row. The row's angle is a
// clockwise turn applied as the row starts; speed/dir set the motion.
std::vector<MicroOp> plan_row(const OpenBotsPacket& pkt) {
  const auto& c = pkt.coefficients;
  std::vector<MicroOp> ops;
  const MicroOp motion{Kind::kMotion, cells_per_tick(c.speed), c.dir == 2 ? 1 : 0, {}};
  auto rotate = [&] {
    if (c.angle != 0) ops.push_back({Kind::kRotate, c.angle, 0, {}});
  };
  switch (pkt.action) {
    case Action::kNop:
      rotate();
      ops.push_back(motion);
      break;
    case Action::kOn:
      ops.push_back({Kind::kPowerOn});
      rotate();
      if (motion.arg0 != 0) ops.push_back(motion);
      break;
    case Action::kOff:
      rotate();
      ops.push_back({Kind::kPowerOff});
      break;
    case Action::kTouch:
      rotate();
      ops.push_back({Kind::kAwaitSensor, c.sensor});
      ops.push_back(motion);
      break;
    case Action::kGrasp:
      rotate();
      ops.push_back(motion);
      ops.push_back({Kind::kGrip, c.actuator});
      break;
    case Action::kDrop:
      rotate();
      ops.push_back(motion);
      ops.push_back({Kind::kRelease, c.actuator});
      break;
    case Action::kSee:
      rotate();
      ops.push_back(motion);
      ops.push_back({Kind::kSense});
      break;
    case Action::kSend:
      rotate();
      ops.push_back(motion);
      ops.push_back({Kind::kSend, 0, 0, c.data});
      break;
    case Action::kRendezvous:
      rotate();
      ops.push_back({Kind::kReturnHome, std::max(1, motion.arg0)});
      break;
    default:
      untranslatable("unified", "action " + std::to_string(static_cast<int>(pkt.action)));
  }
  return ops;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::optional<int> to_int(std::string_view s, int base = 10) {
  if (base == 16) {
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return std::nullopt;
    s.remove_prefix(2);
  }
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string hex_byte(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", v & 0xFF);
  return buf;
}

// Shared plumbing: a profile only supplies render() and parse() for single
// instructions.
class TableProfile : public VendorProfile {
 public:
  std::vector<std::string> translate(const OpenBotsPacket& pkt) const override {
    std::vector<std::string> out;
    for (const auto& op : plan_row(pkt)) out.push_back(render(op));
    return out;
  }

  std::vector<MicroOp> interpret(const std::vector<std::string>& instructions) const override {
    std::vector<MicroOp> out;
    out.reserve(instructions.size());
    for (const auto& ins : instructions) {
      auto op = parse(ins);
      if (!op) untranslatable(name(), ins);
      out.push_back(std::move(*op));
    }
    return out;
  }

 protected:
  virtual std::string render(const MicroOp& op) const = 0;
  virtual std::optional<MicroOp> parse(std::string_view ins) const = 0;
};

// Textual mnemonics, e.g. "PWR 1", "MOV F 1", "GRP CLOSE".
class VendorA final : public TableProfile {
 public:
  std::string_view name() const override { return "VendorA"; }

 protected:
  std::string render(const MicroOp& op) const override {
    switch (op.kind) {
      case Kind::kPowerOn: return "PWR 1";
      case Kind::kPowerOff: return "PWR 0";
      case Kind::kRotate: return "ROT CW " + std::to_string(op.arg0);
      case Kind::kMotion:
        if (op.arg0 == 0) return "MOV S";
        return std::string("MOV ") + (op.arg1 ? "B " : "F ") + std::to_string(op.arg0);
      case Kind::kAwaitSensor: return "SNS " + std::to_string(op.arg0) + " WAIT";
      case Kind::kGrip:
        return op.arg0 == 1 ? "GRP CLOSE" : "ACT " + std::to_string(op.arg0) + " CLOSE";
      case Kind::kRelease:
        return op.arg0 == 1 ? "GRP OPEN" : "ACT " + std::to_string(op.arg0) + " OPEN";
      case Kind::kReturnHome: return "RTB " + std::to_string(op.arg0);
      case Kind::kSense: return "CAM SNAP";
      case Kind::kSend: return "TX " + op.text;
    }
    untranslatable(name(), "micro-op");
  }

  std::optional<MicroOp> parse(std::string_view ins) const override {
    if (ins.starts_with("TX ")) return MicroOp{Kind::kSend, 0, 0, std::string(ins.substr(3))};
    const auto t = split_ws(ins);
    if (t.empty()) return std::nullopt;
    if (t.size() == 2 && t[0] == "PWR" && (t[1] == "1" || t[1] == "0")) {
      return MicroOp{t[1] == "1" ? Kind::kPowerOn : Kind::kPowerOff};
    }
    if (t.size() == 3 && t[0] == "ROT" && t[1] == "CW") {
      if (auto a = to_int(t[2])) return MicroOp{Kind::kRotate, *a};
    }
    if (t.size() == 2 && t[0] == "MOV" && t[1] == "S") return MicroOp{Kind::kMotion, 0, 0};
    if (t.size() == 3 && t[0] == "MOV" && (t[1] == "F" || t[1] == "B")) {
      if (auto n = to_int(t[2])) return MicroOp{Kind::kMotion, *n, t[1] == "B" ? 1 : 0};
    }
    if (t.size() == 3 && t[0] == "SNS" && t[2] == "WAIT") {
      if (auto s = to_int(t[1])) return MicroOp{Kind::kAwaitSensor, *s};
    }
    if (t.size() == 2 && t[0] == "GRP") {
      if (t[1] == "CLOSE") return MicroOp{Kind::kGrip, 1};
      if (t[1] == "OPEN") return MicroOp{Kind::kRelease, 1};
    }
    if (t.size() == 3 && t[0] == "ACT") {
      if (auto a = to_int(t[1])) {
        if (t[2] == "CLOSE") return MicroOp{Kind::kGrip, *a};
        if (t[2] == "OPEN") return MicroOp{Kind::kRelease, *a};
      }
    }
    if (t.size() == 2 && t[0] == "RTB") {
      if (auto n = to_int(t[1])) return MicroOp{Kind::kReturnHome, *n};
    }
    if (t.size() == 2 && t[0] == "CAM" && t[1] == "SNAP") return MicroOp{Kind::kSense};
    return std::nullopt;
  }
};

// Compact byte opcodes rendered as hex tokens, e.g. "0x10 0x01".
class VendorB final : public TableProfile {
 public:
  std::string_view name() const override { return "VendorB"; }

 protected:
  std::string render(const MicroOp& op) const override {
    switch (op.kind) {
      case Kind::kPowerOn: return "0x10 0x01";
      case Kind::kPowerOff: return "0x10 0x00";
      case Kind::kRotate: return "0x21 " + hex_byte(op.arg0 >> 8) + " " + hex_byte(op.arg0);
      case Kind::kMotion:
        if (op.arg0 == 0) return "0x20 0x00 0x00";
        return "0x20 " + hex_byte(op.arg1 ? 2 : 1) + " " + hex_byte(op.arg0);
      case Kind::kAwaitSensor: return "0x30 " + hex_byte(op.arg0);
      case Kind::kGrip: return "0x40 " + hex_byte(op.arg0) + " 0x01";
      case Kind::kRelease: return "0x40 " + hex_byte(op.arg0) + " 0x00";
      case Kind::kReturnHome: return "0x50 " + hex_byte(op.arg0);
      case Kind::kSense: return "0x60 0x01";
      case Kind::kSend: {
        std::string s = "0x70";
        for (unsigned char ch : op.text) s += " " + hex_byte(ch);
        return s;
      }
    }
    untranslatable(name(), "micro-op");
  }

  std::optional<MicroOp> parse(std::string_view ins) const override {
    std::vector<int> b;
    for (const auto& tok : split_ws(ins)) {
      auto v = to_int(tok, 16);
      if (!v || *v < 0 || *v > 0xFF) return std::nullopt;
      b.push_back(*v);
    }
    if (b.empty()) return std::nullopt;
    const auto n = b.size();
    switch (b[0]) {
      case 0x10:
        if (n == 2 && b[1] <= 1) return MicroOp{b[1] ? Kind::kPowerOn : Kind::kPowerOff};
        break;
      case 0x21:
        if (n == 3) return MicroOp{Kind::kRotate, (b[1] << 8) | b[2]};
        break;
      case 0x20:
        if (n == 3 && b[1] == 0 && b[2] == 0) return MicroOp{Kind::kMotion, 0, 0};
        if (n == 3 && (b[1] == 1 || b[1] == 2)) return MicroOp{Kind::kMotion, b[2], b[1] == 2 ? 1 : 0};
        break;
      case 0x30:
        if (n == 2) return MicroOp{Kind::kAwaitSensor, b[1]};
        break;
      case 0x40:
        if (n == 3 && b[2] <= 1) return MicroOp{b[2] ? Kind::kGrip : Kind::kRelease, b[1]};
        break;
      case 0x50:
        if (n == 2) return MicroOp{Kind::kReturnHome, b[1]};
        break;
      case 0x60:
        if (n == 2 && b[1] == 1) return MicroOp{Kind::kSense};
        break;
      case 0x70: {
        std::string text;
        for (std::size_t i = 1; i < n; ++i) text.push_back(static_cast<char>(b[i]));
        return MicroOp{Kind::kSend, 0, 0, std::move(text)};
      }
      default:
        break;
    }
    return std::nullopt;
  }
};

// Unified mnemonics spelled out, for robots without a vendor layer.
class GenericProfile final : public TableProfile {
 public:
  std::string_view name() const override { return "generic"; }

 protected:
  std::string render(const MicroOp& op) const override {
    switch (op.kind) {
      case Kind::kPowerOn: return "POWER ON";
      case Kind::kPowerOff: return "POWER OFF";
      case Kind::kRotate: return "ROTATE " + std::to_string(op.arg0);
      case Kind::kMotion:
        if (op.arg0 == 0) return "STOP";
        return std::string(op.arg1 ? "MOVE BACKWARD " : "MOVE FORWARD ") + std::to_string(op.arg0);
      case Kind::kAwaitSensor: return "AWAIT SENSOR " + std::to_string(op.arg0);
      case Kind::kGrip: return "GRIP " + std::to_string(op.arg0);
      case Kind::kRelease: return "RELEASE " + std::to_string(op.arg0);
      case Kind::kReturnHome: return "RETURN " + std::to_string(op.arg0);
      case Kind::kSense: return "SEE";
      case Kind::kSend: return "SEND " + op.text;
    }
    untranslatable(name(), "micro-op");
  }

  std::optional<MicroOp> parse(std::string_view ins) const override {
    if (ins.starts_with("SEND ")) return MicroOp{Kind::kSend, 0, 0, std::string(ins.substr(5))};
    const auto t = split_ws(ins);
    if (t.size() == 2 && t[0] == "POWER") {
      if (t[1] == "ON") return MicroOp{Kind::kPowerOn};
      if (t[1] == "OFF") return MicroOp{Kind::kPowerOff};
    }
    if (t.size() == 1 && t[0] == "STOP") return MicroOp{Kind::kMotion, 0, 0};
    if (t.size() == 1 && t[0] == "SEE") return MicroOp{Kind::kSense};
    if (t.size() == 3 && t[0] == "MOVE" && (t[1] == "FORWARD" || t[1] == "BACKWARD")) {
      if (auto n = to_int(t[2])) return MicroOp{Kind::kMotion, *n, t[1] == "BACKWARD" ? 1 : 0};
    }
    if (t.size() == 3 && t[0] == "AWAIT" && t[1] == "SENSOR") {
      if (auto s = to_int(t[2])) return MicroOp{Kind::kAwaitSensor, *s};
    }
    if (t.size() == 2) {
      auto v = to_int(t[1]);
      if (!v) return std::nullopt;
      if (t[0] == "ROTATE") return MicroOp{Kind::kRotate, *v};
      if (t[0] == "GRIP") return MicroOp{Kind::kGrip, *v};
      if (t[0] == "RELEASE") return MicroOp{Kind::kRelease, *v};
      if (t[0] == "RETURN") return MicroOp{Kind::kReturnHome, *v};
    }
    return std::nullopt;
  }
};

}  // namespace

const VendorProfile* find_vendor(std::string_view name) {
  static const VendorA kA;
  static const VendorB kB;
  static const GenericProfile kGeneric;
  static const std::array<const VendorProfile*, 3> kAll{&kA, &kB, &kGeneric};
  for (const auto* p : kAll) {
    if (p->name() == name) return p;
  }
  return nullptr;
}

std::vector<std::string> vendor_names() { return {"VendorA", "VendorB", "generic"}; }

}  // namespace sdbotics::sim
