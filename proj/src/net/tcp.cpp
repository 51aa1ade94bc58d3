#include "sdbotics/net/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <stdexcept>

namespace sdbotics::net {

Socket::~Socket() { close(); }

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.fd_;
    o.fd_ = -1;
  }
  return *this;
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

bool Socket::write_all(std::span<const std::uint8_t> bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    auto n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

std::size_t Socket::read_some(std::span<std::uint8_t> buf) {
  for (;;) {
    auto n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0 && errno == EINTR) continue;
    return n <= 0 ? 0 : static_cast<std::size_t>(n);
  }
}

std::optional<HostPort> parse_host_port(const std::string& s) {
  HostPort hp{"127.0.0.1", 0};
  std::string_view port_text = s;
  if (auto colon = s.rfind(':'); colon != std::string::npos) {
    if (colon > 0) hp.host = s.substr(0, colon);
    port_text = std::string_view(s).substr(colon + 1);
  }
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), hp.port);
  if (ec != std::errc{} || p != port_text.data() + port_text.size() || hp.port < 0 ||
      hp.port > 65535) {
    return std::nullopt;
  }
  return hp;
}

TcpListener::TcpListener(const std::string& host, int port) {
  sock_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!sock_.valid()) throw std::runtime_error("socket: " + std::string(std::strerror(errno)));
  int one = 1;
  ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("bad listen address " + host);
  }
  if (::bind(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw std::runtime_error("bind " + host + ":" + std::to_string(port) + ": " +
                             std::strerror(errno));
  }
  if (::listen(sock_.fd(), 64) != 0) throw std::runtime_error("listen: " + std::string(std::strerror(errno)));
  socklen_t len = sizeof addr;
  ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Socket TcpListener::accept(std::string* remote) {
  sockaddr_in peer{};
  socklen_t len = sizeof peer;
  for (;;) {
    int fd = ::accept(sock_.fd(), reinterpret_cast<sockaddr*>(&peer), &len);
    if (fd < 0 && errno == EINTR) continue;
    if (fd < 0) return Socket{};
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    if (remote != nullptr) {
      char buf[INET_ADDRSTRLEN] = {};
      ::inet_ntop(AF_INET, &peer.sin_addr, buf, sizeof buf);
      *remote = std::string(buf) + ":" + std::to_string(ntohs(peer.sin_port));
    }
    return Socket(fd);
  }
}

Socket connect_to(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || res == nullptr) {
    throw std::runtime_error("cannot resolve " + host);
  }
  Socket s;
  for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
    Socket cand(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (cand.valid() && ::connect(cand.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
      s = std::move(cand);
      break;
    }
  }
  ::freeaddrinfo(res);
  if (!s.valid()) throw std::runtime_error("cannot connect to " + host + ":" + service);
  int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return s;
}

bool FramedConnection::send(std::span<const std::uint8_t> payload) {
  const auto f = frame(payload);
  std::lock_guard lk(write_mu_);
  return sock_.valid() && sock_.write_all(f);
}

std::optional<Bytes> FramedConnection::receive() {
  std::array<std::uint8_t, 4096> buf{};
  for (;;) {
    if (auto f = reader_.next()) return f;
    if (reader_.failed()) return std::nullopt;
    const auto n = sock_.read_some(buf);
    if (n == 0) return std::nullopt;
    reader_.feed(std::span(buf.data(), n));
  }
}

}  // namespace sdbotics::net
