#include "sdbotics/northbound/router.hpp"

#include <charconv>
#include <string_view>
#include <vector>

#include "sdbotics/error.hpp"
#include "sdbotics/northbound/views.hpp"

namespace sdbotics::northbound {

using controller::ControllerCore;
using nlohmann::json;

int status_for(const std::string& code) {
  if (code == "VALIDATION_FAILED" || code == "MALFORMED_TARGET" || code == "EMPTY_GROUP" ||
      code == "MALFORMED_QUERY" || code == "BAD_JSON") {
    return 400;
  }
  if (code == "UNKNOWN_ROBOT" || code == "UNKNOWN_GROUP" || code == "UNKNOWN_TARGET" ||
      code == "UNKNOWN_NODE" || code == "NOT_FOUND") {
    return 404;
  }
  if (code == "METHOD_NOT_ALLOWED") return 405;
  if (code == "UNREACHABLE") return 409;
  return 500;
}

namespace {

HttpResponse ok(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(const std::string& code, const std::string& message,
                            const json& detail = nullptr) {
  json body{{"error", code}, {"message", message}};
  if (!detail.is_null()) body["detail"] = detail;
  return {status_for(code), body.dump()};
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    auto slash = path.find('/');
    auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

std::uint32_t parse_robot_id(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v == 0) {
    throw Error("MALFORMED_QUERY", "robot id must be a positive integer");
  }
  return v;
}

json parse_body(const std::string& body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error("BAD_JSON", "request body is not valid JSON");
  return j;
}

controller::NodeId parse_node(const ControllerCore& core, const std::map<std::string, std::string>& q,
                              const char* key) {
  auto it = q.find(key);
  if (it == q.end()) throw Error("MALFORMED_QUERY", std::string("missing query parameter ") + key);
  auto n = controller::NodeId::parse(it->second);
  if (!n) throw Error("MALFORMED_QUERY", "bad node id " + it->second);
  if (n->is_controller()) return core.hub();
  return *n;
}

}  // namespace

HttpResponse Router::handle(const HttpRequest& req) const {
  const auto parts = split_path(req.path);
  if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") {
    return error_response("NOT_FOUND", "no route " + req.path);
  }
  const std::string_view res = parts[2];
  const auto& m = req.method;
  const std::size_t n = parts.size();
  auto method_not_allowed = [&] { return error_response("METHOD_NOT_ALLOWED", m + " " + req.path); };

  try {
    HttpResponse out;
    if (res == "robots" && n == 3) {
      if (m != "GET") return method_not_allowed();
      port_.run([&](ControllerCore& c) { out = ok(200, robots_view(c)); });
    } else if (res == "robots" && n == 4) {
      if (m != "DELETE") return method_not_allowed();
      const auto id = parse_robot_id(parts[3]);
      port_.run([&](ControllerCore& c) { c.deregister_robot(id); });
      out = {204, ""};
    } else if (res == "stats" && n == 3) {
      if (m != "GET") return method_not_allowed();
      port_.run([&](ControllerCore& c) { out = ok(200, stats_view(c.stats_snapshot())); });
    } else if (res == "map" && n == 3) {
      if (m != "GET") return method_not_allowed();
      port_.run([&](ControllerCore& c) { out = ok(200, map_view(c)); });
    } else if (res == "topology" && n == 3) {
      if (m != "GET") return method_not_allowed();
      port_.run([&](ControllerCore& c) { out = ok(200, topology_view(c)); });
    } else if (res == "groups" && n == 3) {
      if (m == "GET") {
        port_.run([&](ControllerCore& c) { out = ok(200, groups_view(c)); });
      } else if (m == "POST") {
        auto body = parse_body(req.body);
        if (!body.is_object() || !body.contains("name") || !body["name"].is_string() ||
            !body.contains("ids") || !body["ids"].is_array()) {
          throw Error("VALIDATION_FAILED", "body must be {name: string, ids: [int]}");
        }
        std::vector<std::uint32_t> ids;
        for (const auto& v : body["ids"]) {
          if (!v.is_number_unsigned()) throw Error("VALIDATION_FAILED", "ids must be robot ids");
          ids.push_back(v.get<std::uint32_t>());
        }
        const auto name = body["name"].get<std::string>();
        port_.run([&](ControllerCore& c) {
          c.define_group(name, ids);
          out = ok(200, {{"name", name}, {"ids", c.groups().at(name)}});
        });
      } else {
        return method_not_allowed();
      }
    } else if (res == "groups" && n == 4) {
      if (m != "DELETE") return method_not_allowed();
      const std::string name(parts[3]);
      port_.run([&](ControllerCore& c) { c.remove_group(name); });
      out = {204, ""};
    } else if (res == "path" && n == 3) {
      if (m != "GET") return method_not_allowed();
      port_.run([&](ControllerCore& c) {
        auto src = parse_node(c, req.query, "src");
        auto dst = parse_node(c, req.query, "dst");
        out = ok(200, route_view(controller::shortest_path(c.topology(), src, dst)));
      });
    } else if (res == "data" && n == 4) {
      if (m != "GET") return method_not_allowed();
      const auto id = parse_robot_id(parts[3]);
      port_.run([&](ControllerCore& c) { out = ok(200, json(c.drain_mailbox(id))); });
    } else if (res == "programs" && n == 3) {
      if (m != "POST") return method_not_allowed();
      auto sub = controller::parse_submission(parse_body(req.body));
      port_.run([&](ControllerCore& c) {
        out = ok(202, report_view(c.submit(sub.program, sub.target)));
      });
    } else {
      return error_response("NOT_FOUND", "no route " + req.path);
    }
    return out;
  } catch (const Error& e) {
    return error_response(e.code(), e.what(), e.detail());
  } catch (const std::exception& e) {
    return error_response("INTERNAL", e.what());
  }
}

}  // namespace sdbotics::northbound
