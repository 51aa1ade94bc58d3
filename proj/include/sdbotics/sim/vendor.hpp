#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sdbotics/openbots/packet.hpp"

namespace sdbotics::sim {

/// Vendor-neutral primitive the simulator executes. Every vendor instruction
/// stream is interpreted back into these.
struct MicroOp {
  enum class Kind {
    kPowerOn,
    kPowerOff,
    kRotate,       // arg0 = clockwise degrees
    kMotion,       // arg0 = cells per tick (0 = stop), arg1 = 1 reverse
    kAwaitSensor,  // arg0 = sensor id; blocks until triggered
    kGrip,         // arg0 = actuator id
    kRelease,      // arg0 = actuator id
    kReturnHome,   // arg0 = cells per tick; blocks until start pose reached
    kSense,
    kSend,         // text = payload
  };

  Kind kind;
  int arg0 = 0;
  int arg1 = 0;
  std::string text;

  friend bool operator==(const MicroOp&, const MicroOp&) = default;
};

/// Cells per tick for a speed code: 1 -> 0, 2 -> 1, 3..5 -> 2.
int cells_per_tick(std::uint8_t speed);

/// Translates unified mnemonics into one manufacturer's instruction set, and
/// interprets that instruction set on the simulated robot.
class VendorProfile {
 public:
  virtual ~VendorProfile() = default;

  virtual std::string_view name() const = 0;

  /// Deterministic instruction list for one COMMAND packet.
  /// Throws sdbotics::Error(UNTRANSLATABLE) on a table gap.
  virtual std::vector<std::string> translate(const openbots::OpenBotsPacket& pkt) const = 0;

  /// Parses this vendor's instruction strings. Throws Error(UNTRANSLATABLE)
  /// on an instruction the vendor does not understand.
  virtual std::vector<MicroOp> interpret(const std::vector<std::string>& instructions) const = 0;
};

/// Built-in profiles: "VendorA", "VendorB", "generic". Returns nullptr if unknown.
const VendorProfile* find_vendor(std::string_view name);
std::vector<std::string> vendor_names();

}  // namespace sdbotics::sim
