#include "sdbotics/sim/world_file.hpp"

#include <fstream>
#include <set>

#include "sdbotics/error.hpp"

namespace sdbotics::sim {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error("INVALID_WORLD", msg); }

std::string node_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint32_t>());
  bad("link endpoint must be \"C\" or a robot id");
}

}  // namespace

WorldState parse_world(const nlohmann::json& j, std::uint64_t seed) {
  WorldState w;
  w.seed = seed;
  try {
    if (j.contains("grid")) {
      w.width = j.at("grid").at("w").get<int>();
      w.height = j.at("grid").at("h").get<int>();
    }
    if (w.width <= 0 || w.height <= 0) bad("grid dimensions must be positive");

    for (const auto& jr : j.value("robots", nlohmann::json::array())) {
      RobotState r;
      r.id = jr.at("id").get<std::uint32_t>();
      if (r.id == 0) bad("robot id 0 is reserved for broadcast");
      r.pose = {jr.at("x").get<int>(), jr.at("y").get<int>(), jr.value("heading", 0)};
      r.pose.heading = ((r.pose.heading % 360) + 360) % 360;
      r.vendor = jr.value("vendor", std::string("generic"));
      if (find_vendor(r.vendor) == nullptr) bad("unknown vendor " + r.vendor);
      if (jr.contains("ip")) {
        auto ip = openbots::IpAddress::parse(jr.at("ip").get<std::string>());
        if (!ip) bad("bad ip for robot " + std::to_string(r.id));
        r.ip = *ip;
      } else {
        r.ip = openbots::IpAddress::v4(10, 0, static_cast<std::uint8_t>(r.id >> 8),
                                       static_cast<std::uint8_t>(r.id));
      }
      if (!w.in_bounds({r.pose.x, r.pose.y})) bad("robot " + std::to_string(r.id) + " out of grid");
      r.start_pose = r.pose;
      const auto id = r.id;
      if (!w.robots.emplace(id, std::move(r)).second) bad("duplicate robot id " + std::to_string(id));
    }

    std::set<Cell> used;
    for (const auto& jo : j.value("objects", nlohmann::json::array())) {
      const auto id = jo.at("id").get<ObjectId>();
      const Cell c{jo.at("x").get<int>(), jo.at("y").get<int>()};
      if (!w.in_bounds(c)) bad("object " + std::to_string(id) + " out of grid");
      if (!used.insert(c).second) bad("two objects share a cell");
      if (!w.objects.emplace(id, c).second) bad("duplicate object id " + std::to_string(id));
    }

    for (const auto& jl : j.value("links", nlohmann::json::array())) {
      LinkSpec l{node_text(jl.at("a")), node_text(jl.at("b")), jl.value("w", 1.0)};
      if (!(l.weight > 0)) bad("link weight must be positive");
      w.links.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return w;
}

WorldState load_world(const std::filesystem::path& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw Error("FILE_NOT_FOUND", "file not found: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("INVALID_WORLD", path.string() + ": " + e.what());
  }
  return parse_world(j, seed);
}

}  // namespace sdbotics::sim
