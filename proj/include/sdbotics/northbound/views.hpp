#pragma once

#include <nlohmann/json.hpp>

#include "sdbotics/controller/controller.hpp"

namespace sdbotics::northbound {

nlohmann::json robots_view(const controller::ControllerCore& core);
nlohmann::json stats_view(const controller::StatsReport& stats);
nlohmann::json map_view(const controller::ControllerCore& core);
nlohmann::json groups_view(const controller::ControllerCore& core);
nlohmann::json route_view(const controller::Route& route);
nlohmann::json topology_view(const controller::ControllerCore& core);
nlohmann::json report_view(const controller::DispatchReport& report);

/// Integral costs print as integers ("cost":2), others as doubles.
nlohmann::json cost_json(double cost);

}  // namespace sdbotics::northbound
