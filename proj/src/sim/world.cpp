#include "sdbotics/sim/world.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sdbotics/error.hpp"

namespace sdbotics::sim {

using openbots::Action;
using Kind = MicroOp::Kind;

bool MnemonicBuffer::push(openbots::OpenBotsPacket pkt) {
  if (entries_.size() >= kCapacity) return false;
  entries_.push_back(std::move(pkt));
  return true;
}

std::optional<openbots::OpenBotsPacket> MnemonicBuffer::pop() {
  if (entries_.empty()) return std::nullopt;
  auto p = std::move(entries_.front());
  entries_.pop_front();
  return p;
}

std::optional<ObjectId> WorldState::object_at(Cell c) const {
  for (const auto& [id, cell] : objects) {
    if (cell == c) return id;
  }
  return std::nullopt;
}

EnqueueResult enqueue(WorldState& w, std::uint32_t robot_id, openbots::OpenBotsPacket pkt) {
  auto it = w.robots.find(robot_id);
  if (it == w.robots.end()) return EnqueueResult::kUnknownRobot;
  return it->second.buffer.push(std::move(pkt)) ? EnqueueResult::kAck : EnqueueResult::kBufferFull;
}

Cell heading_step(int heading) {
  const double rad = heading * std::numbers::pi / 180.0;
  return {static_cast<int>(std::lround(std::cos(rad))), static_cast<int>(std::lround(std::sin(rad)))};
}

Cell front_cell(const RobotState& r) {
  const auto s = heading_step(r.pose.heading);
  return {r.pose.x + s.x, r.pose.y + s.y};
}

nlohmann::json occupancy(const WorldState& w, Cell at) {
  auto json = nlohmann::json::array();
  for (Cell d : {Cell{1, 0}, Cell{0, 1}, Cell{-1, 0}, Cell{0, -1}}) {
    json.push_back(w.object_at({at.x + d.x, at.y + d.y}).has_value());
  }
  return json;
}

nlohmann::json pose_record(const WorldState& w, const RobotState& r) {
  nlohmann::json j;
  j["tick"] = w.tick;
  j["x"] = r.pose.x;
  j["y"] = r.pose.y;
  j["heading"] = r.pose.heading;
  j["holding"] = r.holding ? nlohmann::json(*r.holding) : nlohmann::json(nullptr);
  j["powered"] = r.powered;
  return j;
}

std::string trace_line(const WorldState& w, const RobotState& r) {
  nlohmann::ordered_json j;
  j["tick"] = w.tick;
  j["id"] = r.id;
  j["x"] = r.pose.x;
  j["y"] = r.pose.y;
  j["heading"] = r.pose.heading;
  j["holding"] = r.holding ? nlohmann::ordered_json(*r.holding) : nlohmann::ordered_json(nullptr);
  j["powered"] = r.powered;
  return j.dump();
}

std::vector<std::string> trace_lines(const WorldState& w) {
  std::vector<std::string> out;
  out.reserve(w.robots.size());
  for (const auto& [id, r] : w.robots) out.push_back(trace_line(w, r));
  return out;
}

namespace {

int normalise_heading(int h) { return ((h % 360) + 360) % 360; }

class Executor {
 public:
  Executor(WorldState& w, TickReport& report) : w_(w), report_(report) {}

  void row_phase(RobotState& r) {
    if (r.active) {
      run_ops(r);
      return;
    }
    auto pkt = r.buffer.pop();
    if (!pkt) return;
    if (!r.powered && pkt->action != Action::kOn) {
      fault(r, "EXEC_WHILE_OFF", std::string(openbots::to_string(pkt->action)));
      return;
    }
    const auto* profile = find_vendor(r.vendor);
    if (profile == nullptr) {
      fault(r, "UNTRANSLATABLE", "unknown vendor " + r.vendor);
      return;
    }
    ActiveRow row;
    row.sequence = pkt->stats.sequence;
    row.action = pkt->action;
    try {
      row.instructions = profile->translate(*pkt);
      row.ops = profile->interpret(row.instructions);
    } catch (const Error& e) {
      fault(r, e.code(), e.what());
      return;
    }
    r.active = std::move(row);
    run_ops(r);
  }

  void motion_phase(RobotState& r) {
    if (!r.powered) return;
    const MicroOp* op = r.active ? r.active->current() : nullptr;
    if (op != nullptr && op->kind == Kind::kReturnHome) {
      walk_home(r, op->arg0);
      run_ops(r);
      return;
    }
    if (r.motion_cells == 0) return;
    Cell step = heading_step(r.pose.heading);
    if (r.reverse) step = {-step.x, -step.y};
    for (int k = 0; k < r.motion_cells; ++k) {
      if (touch_pending(r)) break;
      const Cell next{r.pose.x + step.x, r.pose.y + step.y};
      if (!w_.in_bounds(next)) break;
      r.pose.x = next.x;
      r.pose.y = next.y;
    }
    if (touch_pending(r)) run_ops(r);
  }

 private:
  bool awaiting_touch(const RobotState& r) const {
    const MicroOp* op = r.active ? r.active->current() : nullptr;
    return op != nullptr && op->kind == Kind::kAwaitSensor;
  }

  bool touch_pending(const RobotState& r) const {
    return awaiting_touch(r) && w_.object_at(front_cell(r)).has_value();
  }

  void walk_home(RobotState& r, int cells) {
    for (int k = 0; k < cells; ++k) {
      const auto& home = r.start_pose;
      if (r.pose.x != home.x) {
        const int dx = home.x > r.pose.x ? 1 : -1;
        r.pose.x += dx;
        r.pose.heading = dx > 0 ? 0 : 180;
      } else if (r.pose.y != home.y) {
        const int dy = home.y > r.pose.y ? 1 : -1;
        r.pose.y += dy;
        r.pose.heading = dy > 0 ? 90 : 270;
      } else {
        break;
      }
    }
  }

  void fault(const RobotState& r, const std::string& code, std::string detail) {
    report_.events.push_back({r.id, WorldEvent::Kind::kFault, code, std::move(detail)});
  }

  void abort_row(RobotState& r, const std::string& code, std::string detail) {
    fault(r, code, std::move(detail));
    r.active.reset();
  }

  // Executes micro-ops until the row blocks or completes.
  void run_ops(RobotState& r) {
    while (r.active) {
      const MicroOp* op = r.active->current();
      if (op == nullptr) {
        r.active.reset();
        return;
      }
      switch (op->kind) {
        case Kind::kPowerOn:
          r.powered = true;
          r.start_pose = r.pose;
          r.motion_cells = 0;
          r.reverse = false;
          break;
        case Kind::kPowerOff:
          r.powered = false;
          r.motion_cells = 0;
          break;
        case Kind::kRotate:
          r.pose.heading = normalise_heading(r.pose.heading - op->arg0);
          break;
        case Kind::kMotion:
          r.motion_cells = op->arg0;
          r.reverse = op->arg1 != 0;
          break;
        case Kind::kAwaitSensor:
          if (op->arg0 != 1) {
            abort_row(r, "UNSUPPORTED_SENSOR", "sensor " + std::to_string(op->arg0));
            return;
          }
          if (!w_.object_at(front_cell(r))) return;  // blocked
          break;
        case Kind::kGrip: {
          if (op->arg0 != 1) {
            abort_row(r, "UNSUPPORTED_ACTUATOR", "actuator " + std::to_string(op->arg0));
            return;
          }
          if (r.holding) {
            abort_row(r, "ALREADY_HOLDING", std::to_string(*r.holding));
            return;
          }
          auto obj = w_.object_at(front_cell(r));
          if (!obj) obj = w_.object_at({r.pose.x, r.pose.y});
          if (!obj) {
            abort_row(r, "NOTHING_TO_GRASP", "");
            return;
          }
          r.holding = *obj;
          w_.objects.erase(*obj);
          break;
        }
        case Kind::kRelease: {
          if (op->arg0 != 1) {
            abort_row(r, "UNSUPPORTED_ACTUATOR", "actuator " + std::to_string(op->arg0));
            return;
          }
          if (!r.holding) {
            abort_row(r, "NOT_HOLDING", "");
            return;
          }
          const Cell here{r.pose.x, r.pose.y};
          if (w_.object_at(here)) {
            abort_row(r, "CELL_OCCUPIED", "");
            return;
          }
          w_.objects[*r.holding] = here;
          r.holding.reset();
          break;
        }
        case Kind::kReturnHome:
          if (r.pose.x != r.start_pose.x || r.pose.y != r.start_pose.y) return;  // blocked
          r.pose = r.start_pose;
          r.motion_cells = 0;
          r.reverse = false;
          break;
        case Kind::kSense: {
          auto rec = pose_record(w_, r);
          rec["occupancy"] = occupancy(w_, {r.pose.x, r.pose.y});
          report_.events.push_back({r.id, WorldEvent::Kind::kSee, "", rec.dump()});
          break;
        }
        case Kind::kSend:
          report_.events.push_back({r.id, WorldEvent::Kind::kSend, "", op->text});
          break;
      }
      ++r.active->next;
    }
  }

  WorldState& w_;
  TickReport& report_;
};

}  // namespace

TickReport step_world(WorldState& w) {
  ++w.tick;
  TickReport report{w.tick, {}};
  Executor ex(w, report);
  for (auto& [id, r] : w.robots) {
    ex.row_phase(r);
    ex.motion_phase(r);
  }
  return report;
}

WorldState make_fleet_world(std::uint64_t seed, int n, const std::string& vendor) {
  std::mt19937_64 rng(seed);
  WorldState w;
  w.seed = seed;
  w.width = 2 * n + 1;
  w.height = 12;
  for (int i = 1; i <= n; ++i) {
    RobotState r;
    r.id = static_cast<std::uint32_t>(i);
    r.vendor = vendor;
    r.ip = openbots::IpAddress::v4(10, 0, 0, static_cast<std::uint8_t>(i));
    r.pose = {2 * (i - 1), 0, 90};
    w.robots[r.id] = std::move(r);
    // modulo rather than a distribution: the draw must be identical on every
    // standard library
    const int oy = 3 + static_cast<int>(rng() % 6);
    w.objects[static_cast<ObjectId>(100 + i)] = Cell{2 * (i - 1), oy};
  }
  return w;
}

}  // namespace sdbotics::sim
