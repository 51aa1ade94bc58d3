#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "sdbotics/net/framing.hpp"

namespace sdbotics::net {

/// Owning POSIX stream socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  /// Unblocks pending reads/accepts in other threads without releasing the fd.
  void shutdown();
  void close();

  bool write_all(std::span<const std::uint8_t> bytes);
  /// Returns bytes read; 0 on EOF or error.
  std::size_t read_some(std::span<std::uint8_t> buf);

 private:
  int fd_ = -1;
};

struct HostPort {
  std::string host;
  int port = 0;
};

/// "host:port" or ":port" / "port" (host defaults to 127.0.0.1).
std::optional<HostPort> parse_host_port(const std::string& s);

class TcpListener {
 public:
  /// Binds and listens; port 0 picks an ephemeral port. Throws std::runtime_error.
  TcpListener(const std::string& host, int port);
  int port() const { return port_; }
  /// Blocks; returns an invalid socket once the listener is shut down.
  Socket accept(std::string* remote = nullptr);
  void shutdown() { sock_.shutdown(); }

 private:
  Socket sock_;
  int port_ = 0;
};

/// Throws std::runtime_error when the peer cannot be reached.
Socket connect_to(const std::string& host, int port);

/// A socket with framed writes safe from several threads and a single reader.
class FramedConnection {
 public:
  explicit FramedConnection(Socket s) : sock_(std::move(s)) {}

  bool send(std::span<const std::uint8_t> payload);
  /// Blocking; nullopt on EOF, error or a bad frame.
  std::optional<Bytes> receive();
  void shutdown() { sock_.shutdown(); }

 private:
  Socket sock_;
  std::mutex write_mu_;
  FrameReader reader_;
};

}  // namespace sdbotics::net
