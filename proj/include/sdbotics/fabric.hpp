#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdbotics/controller/controller.hpp"
#include "sdbotics/controller/port.hpp"
#include "sdbotics/northbound/router.hpp"
#include "sdbotics/sim/entity.hpp"
#include "sdbotics/sim/world.hpp"

namespace sdbotics {

/// Controller, REST router and simulated fleet in one process on one clock.
/// Southbound traffic is still encoded to bytes and decoded on the other end;
/// only the socket is replaced by a direct call. Used by the acceptance suite
/// and the `local` CLI subcommand.
class LocalFabric {
 public:
  explicit LocalFabric(sim::WorldState world, controller::ControllerConfig cfg = {});

  /// HELLO from every robot, then delivery of the controller's ACKs.
  void connect_all();
  void connect(std::uint32_t robot_id);
  /// Robot goes silent: no further frames in either direction.
  void disconnect(std::uint32_t robot_id);

  /// One simulation tick: deliver pending southbound frames, step the world,
  /// feed telemetry to the controller, advance the controller clock.
  sim::TickReport tick();
  /// Ticks until every robot is idle with nothing in flight; returns the
  /// number of ticks taken, or nullopt if `max_ticks` ran out first.
  std::optional<std::uint64_t> run_until_idle(std::uint64_t max_ticks);

  northbound::HttpResponse request(const std::string& method, const std::string& path,
                                   const std::string& body = {},
                                   const std::map<std::string, std::string>& query = {});

  /// Hands one raw frame to the controller as if it came from `robot_id`'s link.
  void inject_to_controller(std::uint32_t robot_id, const openbots::Bytes& frame);
  /// Mutates the next frame headed to `robot_id` before delivery.
  void corrupt_next_to_robot(std::uint32_t robot_id, std::function<void(openbots::Bytes&)> fn);

  controller::ControllerCore& controller() { return core_; }
  controller::ControllerPort& port() { return port_; }
  sim::WorldState& world() { return world_; }
  const sim::EntityAgent& agent(std::uint32_t id) const { return agents_.at(id); }

  /// Every trace line so far, in tick order then robot order.
  const std::vector<std::string>& trace() const { return trace_; }
  std::vector<std::string> trace_for(std::uint32_t robot_id) const;

 private:
  void deliver();

  sim::WorldState world_;
  controller::ControllerCore core_;
  controller::InlinePort port_;
  northbound::Router router_;
  std::map<std::uint32_t, sim::EntityAgent> agents_;
  std::set<std::uint32_t> connected_;
  std::map<std::uint32_t, std::function<void(openbots::Bytes&)>> corruptors_;
  std::vector<std::string> trace_;
  std::map<std::uint32_t, std::vector<std::size_t>> trace_index_;
};

}  // namespace sdbotics
