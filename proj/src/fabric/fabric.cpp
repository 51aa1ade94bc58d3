#include "sdbotics/fabric.hpp"

namespace sdbotics {

LocalFabric::LocalFabric(sim::WorldState world, controller::ControllerConfig cfg)
    : world_(std::move(world)), core_(std::move(cfg)), port_(core_), router_(port_) {
  for (const auto& [id, r] : world_.robots) {
    agents_.emplace(id, sim::EntityAgent(id, r.vendor, r.ip, core_.config().hash_trailer));
  }
}

void LocalFabric::connect(std::uint32_t robot_id) {
  auto& agent = agents_.at(robot_id);
  connected_.insert(robot_id);
  core_.ingest(robot_id, agent.hello());
  deliver();
}

void LocalFabric::connect_all() {
  for (const auto& [id, _] : agents_) connect(id);
}

void LocalFabric::disconnect(std::uint32_t robot_id) {
  connected_.erase(robot_id);
  core_.link_closed(robot_id);
}

void LocalFabric::deliver() {
  for (auto out = core_.take_outbox(); !out.empty(); out = core_.take_outbox()) {
    for (auto& o : out) {
      // Link ids are robot ids in the fabric.
      const auto id = static_cast<std::uint32_t>(o.link);
      if (!connected_.contains(id)) continue;
      if (auto c = corruptors_.find(id); c != corruptors_.end()) {
        c->second(o.bytes);
        corruptors_.erase(c);
      }
      for (const auto& reply : agents_.at(id).on_frame(o.bytes, world_)) core_.ingest(o.link, reply);
    }
  }
}

sim::TickReport LocalFabric::tick() {
  deliver();
  auto report = sim::step_world(world_);
  for (const auto& [id, r] : world_.robots) {
    trace_index_[id].push_back(trace_.size());
    trace_.push_back(sim::trace_line(world_, r));
  }
  for (auto& [id, agent] : agents_) {
    if (!connected_.contains(id)) continue;
    for (const auto& f : agent.after_tick(world_, report)) core_.ingest(id, f);
  }
  core_.tick();
  deliver();
  return report;
}

std::optional<std::uint64_t> LocalFabric::run_until_idle(std::uint64_t max_ticks) {
  for (std::uint64_t n = 1; n <= max_ticks; ++n) {
    tick();
    bool idle = true;
    for (const auto& [id, r] : world_.robots) idle = idle && r.idle();
    if (idle) return n;
  }
  return std::nullopt;
}

northbound::HttpResponse LocalFabric::request(const std::string& method, const std::string& path,
                                              const std::string& body,
                                              const std::map<std::string, std::string>& query) {
  auto res = router_.handle({method, path, query, body});
  deliver();
  return res;
}

void LocalFabric::inject_to_controller(std::uint32_t robot_id, const openbots::Bytes& frame) {
  core_.ingest(robot_id, frame);
  deliver();
}

void LocalFabric::corrupt_next_to_robot(std::uint32_t robot_id,
                                        std::function<void(openbots::Bytes&)> fn) {
  corruptors_[robot_id] = std::move(fn);
}

std::vector<std::string> LocalFabric::trace_for(std::uint32_t robot_id) const {
  std::vector<std::string> out;
  if (auto it = trace_index_.find(robot_id); it != trace_index_.end()) {
    for (auto i : it->second) out.push_back(trace_[i]);
  }
  return out;
}

}  // namespace sdbotics
