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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "v2i/driver.hpp"
#include "v2i/harness/log.hpp"
#include "v2i/harness/obu.hpp"
#include "v2i/harness/scenario.hpp"
#include "v2i/harness/transport.hpp"
#include "v2i/signal_plan.hpp"
#include "v2i/vehicle.hpp"

namespace v2i::harness {

/// SPaT every tick (10 Hz), MAP every tenth tick (1 Hz).
inline constexpr int kMapEveryTicks = 10;

struct RunOptions {
  std::optional<TransportKind> transport; // overrides the scenario's choice
  UdpOptions udp;
  double loss = 0.0;      // probability of dropping each message
  double duplicate = 0.0; // probability of sending a delivered message twice
  std::uint64_t seed = 0;
};

struct TelemetryFrame {
  std::string scenario;
  int tick = 0;
  LogRow row;
};

struct RunResult {
  TimeSeriesLog log;
  std::vector<ControlCommand> commands; // one per tick, as applied
  std::vector<bool> spat_delivered;     // per tick
  std::vector<bool> map_delivered;      // per tick (false on ticks without a MAP send)
};

/// Supplies the pedal command for a tick, given what was just published.
using CommandSource =
    std::function<ControlCommand(const TelemetryFrame&, const driver::Observation&)>;

/// Geodetic position on the lane, continuing straight past the stop bar
/// along the first segment's direction once the vehicle is in the box.
inline geo::GeoPoint vehicle_position(const MapMessage& map, int lane_id, double s) {
  if (s <= 0.0) return position_to_geo(map, lane_id, s);
  const auto& lane = lane_or_throw(map, lane_id);
  const auto& stop = lane.nodes[0];
  const auto& next = lane.nodes[1];
  const double seg = geo::planar_distance(stop, next) * 100.0;
  const double k = s * 100.0 / seg;
  return geo::from_local(map.reference, {stop.east_cm + k * (stop.east_cm - next.east_cm),
                                         stop.north_cm + k * (stop.north_cm - next.north_cm)});
}

inline std::unique_ptr<Transport> make_transport(TransportKind kind, const UdpOptions& udp) {
  if (kind == TransportKind::UDP) return std::make_unique<UdpTransport>(udp);
  return std::make_unique<InProcTransport>();
}

/// The tick loop. Order per tick: controller, SPaT/MAP publish, OBU
/// algorithms, telemetry, driver, vehicle. Only this loop advances time.
inline RunResult simulate(const ScenarioConfig& cfg, const RunOptions& opt,
                          const CommandSource& source,
                          const std::function<void(const TelemetryFrame&)>& on_frame = {}) {
  validate(cfg);
  auto lossy = std::make_unique<LossyTransport>(
      make_transport(opt.transport.value_or(cfg.transport), opt.udp), opt.loss, opt.seed,
      opt.duplicate);
  LossyTransport& link = *lossy;

  Obu obu({cfg.application, cfg.cfg, cfg.debounce_ticks});
  const int lane = cfg.vehicle.lane_id;
  const int group = cfg.map.find_lane(lane)->signal_group;
  const std::string map_bytes = encode(cfg.map);
  const VehicleLimits limits;

  VehicleState veh{cfg.vehicle.s, cfg.vehicle.v, 0.0, 0.0};
  RunResult res;
  const int n = cfg.ticks();
  res.log.rows.reserve(n + 1);

  for (int k = 0; k <= n; ++k) {
    const double t = k / 10.0;
    const int wall = (cfg.start_clock_ds + k) % kDeciSecondsPerHour;

    bool map_sent = false;
    if (k % kMapEveryTicks == 0) {
      link.send(map_bytes);
      map_sent = true;
    }
    link.send(encode(spat_snapshot(cfg.plan, t, wall)));
    const auto& d = link.delivered();
    res.spat_delivered.push_back(d.back());
    res.map_delivered.push_back(map_sent && d[d.size() - 2]);
    for (const auto& bytes : link.poll()) obu.receive(bytes);

    const auto out = obu.process(vehicle_position(cfg.map, lane, veh.s), veh.v, wall);
    const auto truth = state_at(cfg.plan, group, t);

    LogRow row;
    row.t = t;
    row.d_int = out.match ? out.match->distance_to_intersection : -1.0;
    row.v_kmh = veh.v * 3.6;
    row.light = light_code(truth.state);
    row.algo_state = out.algo_state;
    row.warn = out.warn;
    row.v_min = out.v_min;
    row.v_max = out.v_max;
    row.time_to_green = out.time_to_green;
    res.log.rows.push_back(row);

    const TelemetryFrame frame{cfg.name, k, row};
    if (on_frame) on_frame(frame);

    const driver::Observation obs{t,        truth.state, -veh.s,    veh.v,
                                  out.warn, out.algo_state, out.v_min, out.v_max,
                                  out.time_to_green};
    const ControlCommand cmd = source(frame, obs);
    res.commands.push_back(cmd);
    if (k < n) veh = step(veh, command_to_acceleration(cmd, limits), kTickSeconds, limits);
  }
  return res;
}

/// Runs a scenario with its scripted driver.
inline RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {}) {
  if (cfg.human()) throw ConfigError("scenario '" + cfg.name + "' needs a human driver; use serve");
  driver::Driver drv(*cfg.driver, kTickSeconds);
  return simulate(cfg, opt, [&](const TelemetryFrame&, const driver::Observation& o) {
    return drv.command(o);
  });
}

/// Runs a scenario open-loop from a recorded command stream. Ticks beyond the
/// recording coast with no pedal input.
inline RunResult replay(const ScenarioConfig& cfg, const std::vector<ControlCommand>& commands,
                        const RunOptions& opt = {}) {
  return simulate(cfg, opt, [&](const TelemetryFrame& f, const driver::Observation&) {
    return static_cast<std::size_t>(f.tick) < commands.size() ? commands[f.tick]
                                                              : ControlCommand{};
  });
}

} // namespace v2i::harness
