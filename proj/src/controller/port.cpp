#include "sdbotics/controller/port.hpp"

#include <exception>
#include <future>
#include <stdexcept>

namespace sdbotics::controller {

ActorPort::ActorPort(ControllerCore core, std::function<void(ControllerCore&)> after_each)
    : core_(std::move(core)), after_each_(std::move(after_each)), worker_([this] { loop(); }) {}

ActorPort::~ActorPort() { stop(); }

void ActorPort::stop() {
  {
    std::lock_guard lk(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void ActorPort::run(const std::function<void(ControllerCore&)>& fn) {
  std::promise<void> done;
  auto fut = done.get_future();
  {
    std::lock_guard lk(mu_);
    if (stopping_) throw std::runtime_error("controller stopped");
    queue_.push_back([&] {
      std::exception_ptr err;
      try {
        fn(core_);
      } catch (...) {
        err = std::current_exception();
      }
      if (after_each_) after_each_(core_);
      if (err) {
        done.set_exception(err);
      } else {
        done.set_value();
      }
    });
  }
  cv_.notify_one();
  fut.get();
}

void ActorPort::loop() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lk(mu_);
      cv_.wait(lk, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    task();
  }
}

}  // namespace sdbotics::controller
