#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>

#include "sdbotics/controller/controller.hpp"

namespace sdbotics::controller {

/// Access path to the controller state machine. Every mutation and every
/// read goes through run(), which executes the callable with exclusive
/// access to the core, in submission order.
class ControllerPort {
 public:
  virtual ~ControllerPort() = default;
  virtual void run(const std::function<void(ControllerCore&)>& fn) = 0;
};

/// Direct access for single-threaded hosts (tests, the in-process fabric).
class InlinePort final : public ControllerPort {
 public:
  explicit InlinePort(ControllerCore& core) : core_(core) {}
  void run(const std::function<void(ControllerCore&)>& fn) override { fn(core_); }

 private:
  ControllerCore& core_;
};

/// Owns the core on a dedicated writer thread; callers enqueue work and
/// block until it has run. After every task `after_each` sees the core too
/// (used to flush the southbound outbox).
class ActorPort final : public ControllerPort {
 public:
  explicit ActorPort(ControllerCore core,
                     std::function<void(ControllerCore&)> after_each = nullptr);
  ~ActorPort() override;

  ActorPort(const ActorPort&) = delete;
  ActorPort& operator=(const ActorPort&) = delete;

  void run(const std::function<void(ControllerCore&)>& fn) override;
  void stop();

 private:
  void loop();

  ControllerCore core_;
  std::function<void(ControllerCore&)> after_each_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace sdbotics::controller
