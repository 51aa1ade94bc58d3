#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdbotics/openbots/packet.hpp"

namespace sdbotics::controller {

/// One unified-mnemonic row in the tuple order
/// (robotID, speed, dir, angle, sensor, actuator, ip-addr, data, action).
/// robot_ref is a placeholder; compilation rewrites it to each target id.
struct ProgramRow {
  std::string robot_ref;
  openbots::RobotCoefficients coefficients;
  openbots::Action action = openbots::Action::kNop;
};

struct Program {
  std::vector<ProgramRow> rows;
};

struct Submission {
  std::string target;
  Program program;
};

/// Accepts rows either as 9-element arrays or as objects keyed by
/// robotID/speed/dir/angle/sensor/actuator/ip_addr/data/action.
/// Throws sdbotics::Error(VALIDATION_FAILED) with detail
/// {"row": i, "violations": [{field, code, allowed}]}.
Submission parse_submission(const nlohmann::json& body);
ProgramRow parse_row(const nlohmann::json& row, std::size_t index);

nlohmann::json row_to_json(const ProgramRow& row);
nlohmann::json submission_to_json(const Submission& s);

}  // namespace sdbotics::controller
