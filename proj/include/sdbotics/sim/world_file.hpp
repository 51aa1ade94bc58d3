#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "sdbotics/sim/world.hpp"

namespace sdbotics::sim {

/// Parses {grid:{w,h}, robots:[{id,x,y,heading,vendor[,ip]}], objects:[{id,x,y}],
/// links:[{a,b,w}]}. Throws sdbotics::Error(INVALID_WORLD).
WorldState parse_world(const nlohmann::json& j, std::uint64_t seed = 0);
WorldState load_world(const std::filesystem::path& path, std::uint64_t seed = 0);

}  // namespace sdbotics::sim
