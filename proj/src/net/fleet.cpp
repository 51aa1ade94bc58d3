#include "sdbotics/net/fleet.hpp"

#include <chrono>
#include <stdexcept>

namespace sdbotics::net {

FleetRunner::FleetRunner(sim::WorldState world, FleetOptions opts)
    : opts_(std::move(opts)), world_(std::move(world)) {
  for (const auto& [id, r] : world_.robots) {
    auto robot = std::make_unique<Robot>();
    robot->agent = std::make_unique<sim::EntityAgent>(id, r.vendor, r.ip, opts_.hash_trailer);
    robots_.emplace(id, std::move(robot));
  }
}

FleetRunner::~FleetRunner() {
  for (auto& [id, r] : robots_) {
    if (r->conn) r->conn->shutdown();
  }
  for (auto& [id, r] : robots_) {
    if (r->reader.joinable()) r->reader.join();
  }
}

void FleetRunner::connect() {
  for (auto& [id, r] : robots_) {
    r->conn = std::make_shared<FramedConnection>(connect_to(opts_.controller_host, opts_.controller_port));
    r->connected = true;
    r->reader = std::thread([this, id = id, conn = r->conn, robot = r.get()] {
      while (auto f = conn->receive()) {
        std::lock_guard lk(inbox_mu_);
        inbox_.emplace_back(id, std::move(*f));
      }
      robot->connected = false;
    });
    std::lock_guard lk(world_mu_);
    r->conn->send(r->agent->hello());
  }
}

void FleetRunner::disconnect(std::uint32_t robot_id) {
  auto& r = *robots_.at(robot_id);
  r.connected = false;
  if (r.conn) r.conn->shutdown();
}

void FleetRunner::send(Robot& r, const std::vector<openbots::Bytes>& frames) {
  if (!r.connected || !r.conn) return;
  for (const auto& f : frames) r.conn->send(f);
}

std::vector<std::string> FleetRunner::tick() {
  std::vector<std::pair<std::uint32_t, openbots::Bytes>> pending;
  {
    std::lock_guard lk(inbox_mu_);
    pending.swap(inbox_);
  }
  std::lock_guard lk(world_mu_);
  for (auto& [id, bytes] : pending) {
    auto& r = *robots_.at(id);
    send(r, r.agent->on_frame(bytes, world_));
  }
  const auto report = sim::step_world(world_);
  for (auto& [id, r] : robots_) send(*r, r->agent->after_tick(world_, report));
  return sim::trace_lines(world_);
}

std::uint64_t FleetRunner::run(const std::function<bool(const sim::WorldState&)>& stop,
                               std::uint64_t max_ticks, std::ostream* trace) {
  using clock = std::chrono::steady_clock;
  auto next = clock::now();
  std::uint64_t n = 0;
  while (max_ticks == 0 || n < max_ticks) {
    next += std::chrono::milliseconds(opts_.tick_ms);
    std::this_thread::sleep_until(next);
    auto lines = tick();
    ++n;
    if (trace != nullptr) {
      for (const auto& l : lines) *trace << l << '\n';
      trace->flush();
    }
    bool done = false;
    {
      std::lock_guard lk(world_mu_);
      done = stop && stop(world_);
    }
    if (done) break;
  }
  return n;
}

bool FleetRunner::all_registered() const {
  std::lock_guard lk(world_mu_);
  for (const auto& [id, r] : robots_) {
    if (!r->agent->registered()) return false;
  }
  return true;
}

sim::WorldState FleetRunner::snapshot() const {
  std::lock_guard lk(world_mu_);
  return world_;
}

}  // namespace sdbotics::net
