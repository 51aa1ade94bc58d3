#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sdbotics/net/tcp.hpp"
#include "sdbotics/sim/entity.hpp"
#include "sdbotics/sim/world.hpp"

namespace sdbotics::net {

struct FleetOptions {
  std::string controller_host = "127.0.0.1";
  int controller_port = kDefaultFleetPort;
  int tick_ms = 50;
  bool hash_trailer = false;

  static constexpr int kDefaultFleetPort = 6801;
};

/// Hosts every simulated robot of a world file, each with its own OpenBots
/// session to the controller. Socket reader threads only queue frames; the
/// world itself is touched only by the thread calling tick().
class FleetRunner {
 public:
  FleetRunner(sim::WorldState world, FleetOptions opts);
  ~FleetRunner();

  FleetRunner(const FleetRunner&) = delete;
  FleetRunner& operator=(const FleetRunner&) = delete;

  /// Opens one session per robot and sends HELLO. Throws std::runtime_error
  /// when the controller is unreachable.
  void connect();
  /// Drops one robot's session (fault injection / robot crash).
  void disconnect(std::uint32_t robot_id);

  /// Deliver queued frames, step the world, emit telemetry. Returns the
  /// trace lines for this tick.
  std::vector<std::string> tick();

  /// Ticks at the configured rate until `stop` returns true or `max_ticks`
  /// elapse (0 = unbounded). Each tick's trace lines go to `trace` if set.
  std::uint64_t run(const std::function<bool(const sim::WorldState&)>& stop,
                    std::uint64_t max_ticks, std::ostream* trace = nullptr);

  bool all_registered() const;
  /// Copy of the world taken under the fleet lock.
  sim::WorldState snapshot() const;
  const sim::EntityAgent& agent(std::uint32_t robot_id) const { return *robots_.at(robot_id)->agent; }

 private:
  struct Robot {
    std::unique_ptr<sim::EntityAgent> agent;
    std::shared_ptr<FramedConnection> conn;
    std::thread reader;
    std::atomic<bool> connected{false};
  };

  void send(Robot& r, const std::vector<openbots::Bytes>& frames);

  FleetOptions opts_;
  sim::WorldState world_;
  mutable std::mutex world_mu_;
  std::map<std::uint32_t, std::unique_ptr<Robot>> robots_;

  std::mutex inbox_mu_;
  std::vector<std::pair<std::uint32_t, openbots::Bytes>> inbox_;
};

}  // namespace sdbotics::net
