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

#include <gtest/gtest.h>

#include <future>

#include "support.hpp"

using namespace v2i;
using namespace v2i::harness;

namespace {

class Console {
public:
  explicit Console(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    auto addr = detail::ipv4("127.0.0.1", port);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      throw TransportError("connect failed");
    }
  }
  ~Console() { close(); }

  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  void send(const std::string& line) { ::send(fd_, line.data(), line.size(), MSG_NOSIGNAL); }

  std::optional<std::string> read_line() {
    while (true) {
      if (auto nl = buf_.find('\n'); nl != std::string::npos) {
        auto line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return std::nullopt;
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

private:
  int fd_ = -1;
  std::string buf_;
};

struct Server {
  std::promise<std::uint16_t> port_promise;
  ServeStatus status;
  std::future<RunResult> result;

  Server(const ScenarioConfig& cfg, bool lockstep) {
    ServeOptions opt;
    opt.lockstep = lockstep;
    opt.on_listening = [this](std::uint16_t p) { port_promise.set_value(p); };
    result = std::async(std::launch::async, [this, cfg, opt] { return serve(cfg, opt, &status); });
  }
  std::uint16_t port() { return port_promise.get_future().get(); }
};

ScenarioConfig human(const std::string& name) {
  auto c = builtin_scenario(name);
  c.driver.reset();
  return c;
}

// Answers every telemetry frame with `pick(frame)` until the end marker.
std::vector<TelemetryFrame> drive(Console& c, const std::function<ControlCommand(const TelemetryFrame&)>& pick,
                                  int stop_after = -1) {
  std::vector<TelemetryFrame> frames;
  while (auto line = c.read_line()) {
    if (line->find("\"type\":\"end\"") != std::string::npos) break;
    frames.push_back(parse_telemetry_line(*line));
    if (stop_after >= 0 && static_cast<int>(frames.size()) > stop_after) break;
    c.send(command_line(pick(frames.back()), frames.back().tick));
  }
  return frames;
}

} // namespace

TEST(Serve, ProtocolLinesRoundTrip) {
  const TelemetryFrame f{"rlvw-1", 12, {1.2, 33.5, 17.42, 3, 1, true, -1, -1, -1}};
  const auto back = parse_telemetry_line(telemetry_line(f));
  EXPECT_EQ(back.scenario, "rlvw-1");
  EXPECT_EQ(back.tick, 12);
  EXPECT_EQ(csv_row(back.row), csv_row(f.row));
  const auto c = parse_command_line(R"({"throttle":1.5,"brake":-2,"tick":4})");
  EXPECT_EQ(c.cmd.throttle, 1.0);
  EXPECT_EQ(c.cmd.brake, 0.0);
  EXPECT_EQ(c.tick, 4);
  EXPECT_EQ(parse_command_line("{}").cmd, ControlCommand{});
  EXPECT_THROW(parse_command_line("throttle=1"), ParseError);
}

TEST(Serve, IdlesAtTickZeroWithoutAClient) {
  Server srv(human("rlvw-1"), true);
  const auto port = srv.port();
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  EXPECT_EQ(srv.status.tick.load(), 0);
  EXPECT_EQ(srv.status.connections.load(), 0);
  Console c(port);
  const auto frames = drive(c, [](const TelemetryFrame&) { return ControlCommand{}; });
  EXPECT_EQ(frames.size(), 351u);
  EXPECT_EQ(srv.result.get().log.rows.size(), 351u);
}

TEST(Serve, FullBrakeStopsAndHolds) {
  Server srv(human("rlvw-2"), true);
  Console c(srv.port());
  drive(c, [](const TelemetryFrame&) { return ControlCommand{0.0, 1.0}; });
  const auto log = srv.result.get().log;
  EXPECT_GT(log.rows[0].v_kmh, 49.0);
  const int stop = v2i::testing::first_index(log, [](const LogRow& r) { return r.v_kmh == 0.0; });
  ASSERT_GT(stop, 0);
  for (std::size_t k = stop; k < log.rows.size(); ++k) EXPECT_EQ(log.rows[k].v_kmh, 0.0);
}

TEST(Serve, ScriptedCommandsThroughTheEndpointReproduceTheScriptedRun) {
  for (const std::string name : {"rlvw-1", "glosa-1"}) {
    const auto scripted = run_scenario(builtin_scenario(name));
    Server srv(human(name), true);
    Console c(srv.port());
    const auto frames =
        drive(c, [&](const TelemetryFrame& f) { return scripted.commands.at(f.tick); });
    const auto served = srv.result.get();
    EXPECT_TRUE(v2i::testing::logs_identical(served.log, scripted.log)) << name;
    ASSERT_EQ(frames.size(), scripted.log.rows.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
      EXPECT_EQ(csv_row(frames[k].row), csv_row(scripted.log.rows[k]));
    }
  }
}

TEST(Serve, PausesWhileTheConsoleIsAway) {
  const auto scripted = run_scenario(builtin_scenario("rlvw-1"));
  Server srv(human("rlvw-1"), true);
  const auto port = srv.port();
  const auto pick = [&](const TelemetryFrame& f) { return scripted.commands.at(f.tick); };
  {
    Console first(port);
    drive(first, pick, 40);
  }
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  const int paused_at = srv.status.tick.load();
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  EXPECT_EQ(srv.status.tick.load(), paused_at);
  EXPECT_EQ(paused_at, 40);
  Console second(port);
  const auto frames = drive(second, pick);
  ASSERT_FALSE(frames.empty());
  EXPECT_EQ(frames.front().tick, 40);
  const auto served = srv.result.get();
  EXPECT_EQ(srv.status.connections.load(), 2);
  EXPECT_TRUE(v2i::testing::logs_identical(served.log, scripted.log));
}

TEST(Serve, RealTimeModeAppliesTheLatestCommand) {
  auto cfg = human("rlvw-1");
  cfg.plan = test_intersection_plan({{SignalState::GREEN, 0.6}, {SignalState::RED, 0.4}});
  cfg.duration = 1.0;
  cfg.vehicle = {1, -40.0, 0.0};
  Server srv(cfg, false);
  Console c(srv.port());
  c.send(command_line({1.0, 0.0}));
  const auto start = std::chrono::steady_clock::now();
  std::vector<TelemetryFrame> frames;
  while (auto line = c.read_line()) {
    if (line->find("\"end\"") != std::string::npos) break;
    frames.push_back(parse_telemetry_line(*line));
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  const auto log = srv.result.get().log;
  EXPECT_EQ(frames.size(), 11u);
  EXPECT_GE(elapsed, std::chrono::milliseconds(900));
  EXPECT_GT(log.rows.back().v_kmh, 0.0);
}
