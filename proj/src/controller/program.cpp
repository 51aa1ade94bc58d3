#include "sdbotics/controller/program.hpp"

#include <array>
#include <limits>

#include "sdbotics/error.hpp"
#include "sdbotics/openbots/codec.hpp"

namespace sdbotics::controller {

using openbots::Violation;

namespace {

constexpr std::array<const char*, 9> kRowKeys = {"robotID",  "speed", "dir",  "angle", "sensor",
                                                  "actuator", "ip_addr", "data", "action"};

[[noreturn]] void row_failed(std::size_t index, const std::vector<Violation>& vs) {
  nlohmann::json jv = nlohmann::json::array();
  for (const auto& v : vs) jv.push_back({{"field", v.field}, {"code", v.code}, {"allowed", v.allowed}});
  std::string msg = "row " + std::to_string(index) + ":";
  for (const auto& v : vs) msg += " " + v.field + " " + v.code;
  throw Error("VALIDATION_FAILED", msg, {{"row", index}, {"violations", jv}});
}

// Range-checks an integer before narrowing so that values like angle=999 or
// speed=300 are reported as violations of the field, not as type errors.
template <typename T>
T narrow_field(const nlohmann::json& v, const char* field, const char* code, const char* allowed,
               std::vector<Violation>& vs) {
  if (!v.is_number_integer()) {
    vs.push_back({field, "TYPE_MISMATCH", "integer"});
    return T{};
  }
  const auto raw = v.get<std::int64_t>();
  if (raw < 0 || raw > static_cast<std::int64_t>(std::numeric_limits<T>::max())) {
    vs.push_back({field, code, allowed});
    return T{};
  }
  return static_cast<T>(raw);
}

}  // namespace

ProgramRow parse_row(const nlohmann::json& row, std::size_t index) {
  std::array<const nlohmann::json*, 9> f{};
  static const nlohmann::json kMissing;
  if (row.is_array()) {
    if (row.size() != 9) row_failed(index, {{"row", "ARITY", "9 fields"}});
    for (std::size_t i = 0; i < 9; ++i) f[i] = &row[i];
  } else if (row.is_object()) {
    for (std::size_t i = 0; i < 9; ++i) {
      auto it = row.find(kRowKeys[i]);
      if (it == row.end() && i == 6) it = row.find("ip-addr");
      f[i] = it == row.end() ? &kMissing : &*it;
    }
  } else {
    row_failed(index, {{"row", "TYPE_MISMATCH", "array or object"}});
  }

  std::vector<Violation> vs;
  ProgramRow out;
  const auto& ref = *f[0];
  if (ref.is_string()) {
    out.robot_ref = ref.get<std::string>();
  } else if (ref.is_number_integer()) {
    out.robot_ref = std::to_string(ref.get<std::int64_t>());
  } else if (!ref.is_null()) {
    vs.push_back({"robotID", "TYPE_MISMATCH", "string or integer"});
  }

  auto& c = out.coefficients;
  c.speed = narrow_field<std::uint8_t>(*f[1], "speed", "SPEED_OUT_OF_RANGE", "1..=5", vs);
  c.dir = narrow_field<std::uint8_t>(*f[2], "dir", "DIR_OUT_OF_RANGE", "1..=2", vs);
  c.angle = narrow_field<std::uint16_t>(*f[3], "angle", "ANGLE_OUT_OF_RANGE", "0..=180", vs);
  c.sensor = narrow_field<std::uint8_t>(*f[4], "sensor", "SENSOR_OUT_OF_RANGE", "1..=3", vs);
  c.actuator = narrow_field<std::uint8_t>(*f[5], "actuator", "ACTUATOR_OUT_OF_RANGE", "1..=2", vs);

  if (f[6]->is_string()) {
    auto ip = openbots::IpAddress::parse(f[6]->get<std::string>());
    if (ip) {
      c.ip = *ip;
    } else {
      vs.push_back({"ip_addr", "IP_INVALID", "IPv4 or IPv6 literal"});
    }
  } else {
    vs.push_back({"ip_addr", "TYPE_MISMATCH", "string"});
  }

  if (f[7]->is_string()) {
    c.data = f[7]->get<std::string>();
  } else if (!f[7]->is_null()) {
    vs.push_back({"data", "TYPE_MISMATCH", "string"});
  }

  if (f[8]->is_string()) {
    if (auto a = openbots::parse_action(f[8]->get<std::string>())) {
      out.action = *a;
    } else {
      vs.push_back({"action", "UNKNOWN_ACTION", "ON|OFF|TOUCH|GRASP|DROP|SEE|SEND|RENDEZVOUS|NOP"});
    }
  } else {
    vs.push_back({"action", "TYPE_MISMATCH", "string"});
  }

  // Type problems first; only well-typed fields are range-checked below.
  if (vs.empty()) {
    openbots::OpenBotsPacket probe;
    probe.coefficients = c;
    probe.action = out.action;
    vs = openbots::validate_packet(probe);
  }
  if (!vs.empty()) row_failed(index, vs);
  return out;
}

Submission parse_submission(const nlohmann::json& body) {
  if (!body.is_object()) {
    throw Error("VALIDATION_FAILED", "body must be a JSON object",
                {{"row", nullptr}, {"violations", {{{"field", "body"}, {"code", "TYPE_MISMATCH"}}}}});
  }
  Submission s;
  auto t = body.find("target");
  if (t == body.end() || !t->is_string()) {
    throw Error("VALIDATION_FAILED", "target must be a string",
                {{"row", nullptr}, {"violations", {{{"field", "target"}, {"code", "TYPE_MISMATCH"}}}}});
  }
  s.target = t->get<std::string>();
  auto rows = body.find("rows");
  if (rows == body.end() || !rows->is_array() || rows->empty()) {
    throw Error("VALIDATION_FAILED", "rows must be a non-empty array",
                {{"row", nullptr}, {"violations", {{{"field", "rows"}, {"code", "EMPTY_PROGRAM"}}}}});
  }
  for (std::size_t i = 0; i < rows->size(); ++i) s.program.rows.push_back(parse_row((*rows)[i], i));
  return s;
}

nlohmann::json row_to_json(const ProgramRow& row) {
  const auto& c = row.coefficients;
  return nlohmann::json::array({row.robot_ref, c.speed, c.dir, c.angle, c.sensor, c.actuator,
                                c.ip.to_string(), c.data, std::string(openbots::to_string(row.action))});
}

nlohmann::json submission_to_json(const Submission& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.program.rows) rows.push_back(row_to_json(r));
  return {{"target", s.target}, {"rows", rows}};
}

}  // namespace sdbotics::controller
