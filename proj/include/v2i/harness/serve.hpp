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
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"
#include "v2i/harness/runner.hpp"
#include "v2i/harness/transport.hpp"

namespace v2i::harness {

// Console protocol: newline-delimited JSON over TCP.
//   server -> client, once per tick:
//     {"type":"telemetry","scenario":s,"tick":k,"t":..,"d_int":..,"v_veh_kmh":..,
//      "light_state":1|2|3,"algo_state":..,"warn":0|1,"v_min_kmh":..,
//      "v_max_kmh":..,"time_to_green":..}
//   server -> client, after the last tick: {"type":"end","ticks":n}
//   client -> server, any time: {"throttle":0..1,"brake":0..1[,"tick":k]}

inline std::string telemetry_line(const TelemetryFrame& f) {
  const auto& r = f.row;
  nlohmann::json j{{"type", "telemetry"},   {"scenario", f.scenario},   {"tick", f.tick},
                   {"t", r.t},              {"d_int", r.d_int},         {"v_veh_kmh", r.v_kmh},
                   {"light_state", r.light}, {"algo_state", r.algo_state}, {"warn", r.warn ? 1 : 0},
                   {"v_min_kmh", r.v_min},  {"v_max_kmh", r.v_max},     {"time_to_green", r.time_to_green}};
  return j.dump() + "\n";
}

inline TelemetryFrame parse_telemetry_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line.begin(), line.end());
    if (j.at("type") != "telemetry") throw ParseError("not a telemetry frame");
    TelemetryFrame f;
    f.scenario = j.at("scenario").get<std::string>();
    f.tick = j.at("tick").get<int>();
    f.row = {j.at("t").get<double>(),         j.at("d_int").get<double>(),
             j.at("v_veh_kmh").get<double>(), j.at("light_state").get<int>(),
             j.at("algo_state").get<int>(),   j.at("warn").get<int>() != 0,
             j.at("v_min_kmh").get<double>(), j.at("v_max_kmh").get<double>(),
             j.at("time_to_green").get<double>()};
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

struct TimedCommand {
  ControlCommand cmd;
  std::optional<int> tick;
};

inline std::string command_line(const ControlCommand& c, std::optional<int> tick = std::nullopt) {
  nlohmann::json j{{"throttle", c.throttle}, {"brake", c.brake}};
  if (tick) j["tick"] = *tick;
  return j.dump() + "\n";
}

/// Parses a control line; missing pedals read as 0 and values clamp to [0, 1].
inline TimedCommand parse_command_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line.begin(), line.end());
    if (!j.is_object()) throw ParseError("control message must be an object");
    const auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
    TimedCommand tc;
    tc.cmd.throttle = clamp01(j.value("throttle", 0.0));
    tc.cmd.brake = clamp01(j.value("brake", 0.0));
    if (j.contains("tick")) tc.tick = j.at("tick").get<int>();
    return tc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

struct ServeOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 0; // 0 picks a free port
  // Lockstep: each tick waits for the client's command for that tick, which
  // makes human or replayed runs reproducible. Otherwise the loop runs at
  // 10 Hz wall-clock and applies the latest command received.
  bool lockstep = false;
  std::function<void(std::uint16_t)> on_listening;
  RunOptions run;
};

/// Live state of a serve loop, readable from other threads.
struct ServeStatus {
  std::atomic<int> tick{0};
  std::atomic<bool> client_connected{false};
  std::atomic<int> connections{0};
};

/// One console connection at a time. A reader thread turns incoming lines
/// into commands on a queue; the simulation owner only touches the queue.
class ConsoleLink {
public:
  explicit ConsoleLink(const ServeOptions& opt) {
    listener_ = detail::Socket(::socket(AF_INET, SOCK_STREAM, 0));
    if (!listener_.valid()) throw TransportError(detail::errno_text("socket"));
    int yes = 1;
    ::setsockopt(listener_.fd(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    auto addr = detail::ipv4(opt.bind_address, opt.port);
    if (::bind(listener_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      throw TransportError(detail::errno_text("bind"));
    }
    if (::listen(listener_.fd(), 1) != 0) throw TransportError(detail::errno_text("listen"));
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listener_.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
  }

  ~ConsoleLink() { drop(); }

  std::uint16_t port() const { return port_; }

  /// Blocks until a console connects.
  void accept() {
    drop();
    const int fd = ::accept(listener_.fd(), nullptr, nullptr);
    if (fd < 0) throw TransportError(detail::errno_text("accept"));
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    client_ = detail::Socket(fd);
    closed_ = false;
    reader_ = std::thread([this] { read_loop(); });
  }

  bool connected() const { return client_.valid() && !closed_; }

  bool send_line(const std::string& line) {
    std::size_t off = 0;
    while (off < line.size()) {
      const auto n = ::send(client_.fd(), line.data() + off, line.size() - off, MSG_NOSIGNAL);
      if (n <= 0) {
        closed_ = true;
        return false;
      }
      off += static_cast<std::size_t>(n);
    }
    return true;
  }

  /// Next queued command, waiting up to `timeout`. Empty on timeout or
  /// disconnect.
  std::optional<TimedCommand> next(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    auto c = queue_.front();
    queue_.pop_front();
    return c;
  }

  /// Drains the queue and returns the newest command, if any arrived.
  std::optional<TimedCommand> latest() {
    std::lock_guard lock(mu_);
    if (queue_.empty()) return std::nullopt;
    auto c = queue_.back();
    queue_.clear();
    return c;
  }

private:
  void drop() {
    closed_ = true;
    if (client_.valid()) ::shutdown(client_.fd(), SHUT_RDWR);
    if (reader_.joinable()) reader_.join();
    client_.reset();
    std::lock_guard lock(mu_);
    queue_.clear();
  }

  void read_loop() {
    std::string buf;
    char chunk[4096];
    while (true) {
      const auto n = ::recv(client_.fd(), chunk, sizeof chunk, 0);
      if (n <= 0) break;
      buf.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buf.find('\n')) != std::string::npos) {
        const std::string line = buf.substr(0, nl);
        buf.erase(0, nl + 1);
        try {
          auto cmd = parse_command_line(line);
          std::lock_guard lock(mu_);
          queue_.push_back(cmd);
        } catch (const ParseError&) {
          // Malformed control lines are ignored.
        }
        cv_.notify_all();
      }
    }
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  detail::Socket listener_;
  detail::Socket client_;
  std::uint16_t port_ = 0;
  std::thread reader_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<TimedCommand> queue_;
  std::atomic<bool> closed_{true};
};

/// Runs a scenario driven from a console connection. The simulation does not
/// start until a console connects, and pauses whenever it disconnects.
inline RunResult serve(const ScenarioConfig& cfg, const ServeOptions& opt,
                       ServeStatus* status = nullptr) {
  ConsoleLink link(opt);
  if (opt.on_listening) opt.on_listening(link.port());

  const auto connect = [&] {
    if (status) status->client_connected = false;
    link.accept();
    if (status) {
      status->client_connected = true;
      ++status->connections;
    }
  };
  connect();

  ControlCommand current{};
  auto deadline = std::chrono::steady_clock::now();
  constexpr auto kTick = std::chrono::milliseconds(100);

  auto source = [&](const TelemetryFrame& frame, const driver::Observation&) {
    if (status) status->tick = frame.tick;
    const std::string line = telemetry_line(frame);
    while (!link.send_line(line)) connect();

    if (opt.lockstep) {
      while (true) {
        auto c = link.next(std::chrono::milliseconds(200));
        if (!c) {
          if (!link.connected()) {
            connect();
            while (!link.send_line(line)) connect();
          }
          continue;
        }
        if (c->tick && *c->tick < frame.tick) continue;
        current = c->cmd;
        return current;
      }
    }
    deadline += kTick;
    std::this_thread::sleep_until(deadline);
    if (auto c = link.latest()) current = c->cmd;
    if (!link.connected()) {
      connect();
      deadline = std::chrono::steady_clock::now();
    }
    return current;
  };

  auto res = simulate(cfg, opt.run, source);
  link.send_line(nlohmann::json{{"type", "end"}, {"ticks", cfg.ticks()}}.dump() + "\n");
  return res;
}

} // namespace v2i::harness
