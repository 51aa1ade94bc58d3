#pragma once

#include <memory>
#include <string>

#include "sdbotics/controller/port.hpp"

namespace sdbotics::net {

inline constexpr int kDefaultBotsPort = 6801;

struct ServiceOptions {
  controller::ControllerConfig config;
  /// Empty: 0.0.0.0 in cloud mode, 127.0.0.1 in centralized mode.
  std::string listen_host;
  int bots_port = kDefaultBotsPort;  // 0 picks an ephemeral port
  int http_port = 8080;              // 0 picks an ephemeral port
  int tick_ms = 50;
};

/// The controller process: OpenBots over TCP southbound, REST northbound, and
/// a clock thread. All of them reach the core through one ActorPort.
class ControllerService {
 public:
  explicit ControllerService(ServiceOptions opts);
  ~ControllerService();

  ControllerService(const ControllerService&) = delete;
  ControllerService& operator=(const ControllerService&) = delete;

  /// Binds both listeners and starts the worker threads. Throws on bind failure.
  void start();
  void stop();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();

  int bots_port() const;
  int http_port() const;
  const std::string& listen_host() const;
  controller::ControllerPort& port();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sdbotics::net
