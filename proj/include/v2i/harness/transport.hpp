/*
 * Copyright (C) 2026 The v2i-testbed Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "v2i/error.hpp"

namespace v2i::harness {

inline constexpr std::uint16_t kDefaultUdpPort = 5550;

enum class TransportKind { INPROC, UDP };

/// RSU -> OBU link. `poll` returns what arrived for the messages sent since
/// the previous poll, in arrival order.
class Transport {
public:
  virtual ~Transport() = default;
  virtual void send(const std::string& bytes) = 0;
  virtual std::vector<std::string> poll() = 0;
};

/// Lossless, in-order, same-process delivery.
class InProcTransport final : public Transport {
public:
  void send(const std::string& bytes) override { queue_.push_back(bytes); }
  std::vector<std::string> poll() override {
    std::vector<std::string> out(std::make_move_iterator(queue_.begin()),
                                 std::make_move_iterator(queue_.end()));
    queue_.clear();
    return out;
  }

private:
  std::deque<std::string> queue_;
};

namespace detail {

class Socket {
public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { reset(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

private:
  int fd_ = -1;
};

inline std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

inline sockaddr_in ipv4(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw TransportError("bad IPv4 address '" + host + "'");
  }
  return addr;
}

} // namespace detail

struct UdpOptions {
  std::string address = "127.0.0.1"; // a broadcast address also works
  std::uint16_t port = kDefaultUdpPort; // 0 picks a free port
  std::chrono::milliseconds receive_timeout{500};
};

/// One datagram per message. A background thread receives into a queue;
/// `poll` waits until every datagram sent since the last poll is in, or the
/// timeout passes (a lost datagram is simply missing from the result).
class UdpTransport final : public Transport {
public:
  explicit UdpTransport(UdpOptions opt = {}) : opt_(std::move(opt)) {
    rx_ = detail::Socket(::socket(AF_INET, SOCK_DGRAM, 0));
    tx_ = detail::Socket(::socket(AF_INET, SOCK_DGRAM, 0));
    if (!rx_.valid() || !tx_.valid()) throw TransportError(detail::errno_text("socket"));
    int yes = 1;
    ::setsockopt(rx_.fd(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    ::setsockopt(tx_.fd(), SOL_SOCKET, SO_BROADCAST, &yes, sizeof yes);
    int rcvbuf = 1 << 20;
    ::setsockopt(rx_.fd(), SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof rcvbuf);

    sockaddr_in bind_addr{};
    bind_addr.sin_family = AF_INET;
    bind_addr.sin_addr.s_addr = htonl(INADDR_ANY);
    bind_addr.sin_port = htons(opt_.port);
    if (::bind(rx_.fd(), reinterpret_cast<sockaddr*>(&bind_addr), sizeof bind_addr) != 0) {
      throw TransportError(detail::errno_text("bind"));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(rx_.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    dest_ = detail::ipv4(opt_.address, port_);
    reader_ = std::thread([this] { read_loop(); });
  }

  ~UdpTransport() override {
    stop_ = true;
    if (reader_.joinable()) reader_.join();
  }

  std::uint16_t port() const { return port_; }

  void send(const std::string& bytes) override {
    const auto n = ::sendto(tx_.fd(), bytes.data(), bytes.size(), 0,
                            reinterpret_cast<const sockaddr*>(&dest_), sizeof dest_);
    if (n < 0 || static_cast<std::size_t>(n) != bytes.size()) {
      throw TransportError(detail::errno_text("sendto"));
    }
    ++in_flight_;
  }

  std::vector<std::string> poll() override {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, opt_.receive_timeout, [&] { return inbox_.size() >= in_flight_; });
    std::vector<std::string> out(std::make_move_iterator(inbox_.begin()),
                                 std::make_move_iterator(inbox_.end()));
    inbox_.clear();
    in_flight_ = 0;
    return out;
  }

private:
  void read_loop() {
    std::vector<char> buf(65536);
    while (!stop_) {
      pollfd pfd{rx_.fd(), POLLIN, 0};
      if (::poll(&pfd, 1, 20) <= 0) continue;
      const auto n = ::recv(rx_.fd(), buf.data(), buf.size(), 0);
      if (n <= 0) continue;
      {
        std::lock_guard lock(mu_);
        inbox_.emplace_back(buf.data(), static_cast<std::size_t>(n));
      }
      cv_.notify_all();
    }
  }

  UdpOptions opt_;
  detail::Socket rx_;
  detail::Socket tx_;
  std::uint16_t port_ = 0;
  sockaddr_in dest_{};
  std::thread reader_;
  std::atomic<bool> stop_{false};
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> inbox_;
  std::size_t in_flight_ = 0;
};

/// Drops (and optionally duplicates) messages with seeded probabilities.
/// `delivered()` records, per send, whether the message went out.
class LossyTransport final : public Transport {
public:
  LossyTransport(std::unique_ptr<Transport> inner, double loss, std::uint64_t seed,
                 double duplicate = 0.0)
      : inner_(std::move(inner)), loss_(loss), duplicate_(duplicate), rng_(seed) {}

  void send(const std::string& bytes) override {
    const bool keep = uniform() >= loss_;
    delivered_.push_back(keep);
    if (!keep) return;
    inner_->send(bytes);
    if (duplicate_ > 0.0 && uniform() < duplicate_) inner_->send(bytes);
  }

  std::vector<std::string> poll() override { return inner_->poll(); }
  const std::vector<bool>& delivered() const { return delivered_; }

private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::unique_ptr<Transport> inner_;
  double loss_;
  double duplicate_;
  std::mt19937_64 rng_;
  std::vector<bool> delivered_;
};

} // namespace v2i::harness
