#pragma once

#include <map>
#include <string>

#include "sdbotics/controller/port.hpp"

namespace sdbotics::northbound {

inline constexpr int kDefaultHttpPort = 8080;
inline constexpr const char* kApiPrefix = "/api/v1";

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON, empty for 204
};

/// HTTP status for an error code of the fixed vocabulary.
int status_for(const std::string& code);

/// REST surface of the controller, independent of any HTTP server. Every
/// handler reaches the state machine only through the port.
class Router {
 public:
  explicit Router(controller::ControllerPort& port) : port_(port) {}

  HttpResponse handle(const HttpRequest& req) const;

 private:
  controller::ControllerPort& port_;
};

}  // namespace sdbotics::northbound
