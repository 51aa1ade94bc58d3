#include "sdbotics/net/controller_service.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "sdbotics/northbound/router.hpp"
#include "sdbotics/net/tcp.hpp"

namespace sdbotics::net {

using controller::ControllerCore;
using controller::LinkId;

struct ControllerService::Impl {
  ServiceOptions opts;
  std::string host;
  std::unique_ptr<controller::ActorPort> port;
  std::unique_ptr<northbound::Router> router;
  std::unique_ptr<TcpListener> listener;
  httplib::Server http;
  int http_port = 0;

  std::mutex conn_mu;
  std::map<LinkId, std::shared_ptr<FramedConnection>> connections;
  std::vector<std::thread> readers;
  LinkId next_link = 1;

  std::thread accept_thread;
  std::thread http_thread;
  std::thread clock_thread;
  std::atomic<bool> running{false};
  std::mutex stop_mu;
  std::condition_variable stop_cv;

  void flush(ControllerCore& core) {
    for (auto& out : core.take_outbox()) {
      std::shared_ptr<FramedConnection> c;
      {
        std::lock_guard lk(conn_mu);
        auto it = connections.find(out.link);
        if (it != connections.end()) c = it->second;
      }
      if (c) c->send(out.bytes);
    }
  }

  void serve_connection(LinkId link, std::shared_ptr<FramedConnection> conn, std::string remote) {
    while (auto f = conn->receive()) {
      try {
        port->run([&](ControllerCore& core) { core.ingest(link, *f, remote); });
      } catch (const std::exception&) {
        break;  // port stopped
      }
    }
    try {
      port->run([&](ControllerCore& core) { core.link_closed(link); });
    } catch (const std::exception&) {
    }
    std::lock_guard lk(conn_mu);
    connections.erase(link);
  }

  void accept_loop() {
    while (running) {
      std::string remote;
      Socket s = listener->accept(&remote);
      if (!s.valid()) break;
      auto conn = std::make_shared<FramedConnection>(std::move(s));
      std::lock_guard lk(conn_mu);
      if (!running) break;
      const LinkId link = next_link++;
      connections[link] = conn;
      readers.emplace_back([this, link, conn, remote] { serve_connection(link, conn, remote); });
    }
  }

  void clock_loop() {
    std::unique_lock lk(stop_mu);
    while (running) {
      if (stop_cv.wait_for(lk, std::chrono::milliseconds(opts.tick_ms), [&] { return !running.load(); })) {
        break;
      }
      lk.unlock();
      try {
        port->run([](ControllerCore& core) { core.tick(); });
      } catch (const std::exception&) {
      }
      lk.lock();
    }
  }

  void install_routes() {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      northbound::HttpRequest r;
      r.method = req.method;
      r.path = req.path;
      for (const auto& [k, v] : req.params) r.query.emplace(k, v);
      r.body = req.body;
      auto out = router->handle(r);
      res.status = out.status;
      if (!out.body.empty()) res.set_content(out.body, "application/json");
    };
    http.Get(".*", handler);
    http.Post(".*", handler);
    http.Delete(".*", handler);
  }
};

ControllerService::ControllerService(ServiceOptions opts) : impl_(std::make_unique<Impl>()) {
  impl_->opts = std::move(opts);
  impl_->host = impl_->opts.listen_host;
  if (impl_->host.empty()) {
    impl_->host = impl_->opts.config.mode == controller::Mode::kCloud ? "0.0.0.0" : "127.0.0.1";
  }
}

ControllerService::~ControllerService() { stop(); }

void ControllerService::start() {
  auto& d = *impl_;
  d.port = std::make_unique<controller::ActorPort>(
      ControllerCore(d.opts.config), [&d](ControllerCore& core) { d.flush(core); });
  d.router = std::make_unique<northbound::Router>(*d.port);
  d.listener = std::make_unique<TcpListener>(d.host, d.opts.bots_port);

  d.install_routes();
  if (d.opts.http_port == 0) {
    d.http_port = d.http.bind_to_any_port(d.host);
  } else if (d.http.bind_to_port(d.host, d.opts.http_port)) {
    d.http_port = d.opts.http_port;
  } else {
    d.http_port = -1;
  }
  if (d.http_port < 0) {
    throw std::runtime_error("cannot bind HTTP port " + std::to_string(d.opts.http_port));
  }

  d.running = true;
  d.accept_thread = std::thread([&d] { d.accept_loop(); });
  d.http_thread = std::thread([&d] { d.http.listen_after_bind(); });
  d.clock_thread = std::thread([&d] { d.clock_loop(); });
  d.http.wait_until_ready();
}

void ControllerService::stop() {
  auto& d = *impl_;
  if (!d.running.exchange(false)) return;
  d.stop_cv.notify_all();
  d.http.stop();
  if (d.listener) d.listener->shutdown();
  {
    std::lock_guard lk(d.conn_mu);
    for (auto& [link, c] : d.connections) c->shutdown();
  }
  if (d.accept_thread.joinable()) d.accept_thread.join();
  if (d.http_thread.joinable()) d.http_thread.join();
  if (d.clock_thread.joinable()) d.clock_thread.join();
  std::vector<std::thread> readers;
  {
    std::lock_guard lk(d.conn_mu);
    readers.swap(d.readers);
  }
  for (auto& t : readers) t.join();
  d.port->stop();
}

void ControllerService::wait() {
  std::unique_lock lk(impl_->stop_mu);
  impl_->stop_cv.wait(lk, [&] { return !impl_->running.load(); });
}

int ControllerService::bots_port() const { return impl_->listener ? impl_->listener->port() : -1; }
int ControllerService::http_port() const { return impl_->http_port; }
const std::string& ControllerService::listen_host() const { return impl_->host; }
controller::ControllerPort& ControllerService::port() { return *impl_->port; }

}  // namespace sdbotics::net
