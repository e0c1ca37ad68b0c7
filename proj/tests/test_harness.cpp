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

#include <cstdio>
#include <filesystem>

#include "support.hpp"

using namespace v2i;
using namespace v2i::harness;
using v2i::testing::source_path;

namespace {
const std::vector<std::string> kBuiltins{"rlvw-1", "rlvw-2", "rlvw-3", "glosa-1", "glosa-2"};

RunOptions udp_options() {
  RunOptions o;
  o.transport = TransportKind::UDP;
  o.udp.port = 0;
  return o;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("v2i_test_" + name)).string();
}
} // namespace

TEST(Log, CsvHeaderAndRowCount) {
  const auto cfg = builtin_scenario("rlvw-1");
  const auto res = run_scenario(cfg);
  EXPECT_EQ(res.log.rows.size(), static_cast<std::size_t>(std::llround(cfg.duration / 0.1)) + 1);
  const auto csv = to_csv(res.log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,d_int,v_veh_kmh,light_state,algo_state,warn,v_min_kmh,v_max_kmh,time_to_green");
  for (std::size_t i = 0; i < res.log.rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(res.log.rows[i].t, i / 10.0);
  }
}

TEST(Log, CsvRoundTripThroughFile) {
  const auto res = run_scenario(builtin_scenario("glosa-1"));
  const auto path = temp_path("roundtrip.csv");
  export_log(res.log, ExportFormat::CSV, path);
  const auto back = import_csv(path);
  std::remove(path.c_str());
  ASSERT_EQ(back.rows.size(), res.log.rows.size());
  EXPECT_TRUE(v2i::testing::logs_identical(back, res.log));
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].d_int, res.log.rows[i].d_int);
    EXPECT_EQ(back.rows[i].v_kmh, res.log.rows[i].v_kmh);
    EXPECT_EQ(back.rows[i].v_min, res.log.rows[i].v_min);
  }
}

TEST(Log, PlotdataHasColorBands) {
  const auto res = run_scenario(builtin_scenario("rlvw-1"));
  const auto text = to_plotdata(res.log);
  EXPECT_NE(text.find("# band 0 11.9 red"), std::string::npos);
  EXPECT_NE(text.find("# band 12 31.9 green"), std::string::npos);
  EXPECT_NE(text.find("# band 32 34.9 yellow"), std::string::npos);
  EXPECT_NE(text.find("# band 35 35 red"), std::string::npos);
  EXPECT_NE(text.find("\n0 39.99999999970354 0 3 1 0 -1 -1 -1 red\n"), std::string::npos);
}

TEST(Log, ExportToUnwritablePathIsIoError) {
  EXPECT_THROW(export_log({}, ExportFormat::CSV, "/nonexistent-dir/x.csv"), IoError);
  EXPECT_THROW(import_csv("/nonexistent-dir/x.csv"), IoError);
  EXPECT_THROW(from_csv("t,d_int\n1,2\n"), ParseError);
}

TEST(Scenario, BuiltinsMatchTheirExpectationFiles) {
  for (const auto& name : kBuiltins) {
    const auto cfg = builtin_scenario(name);
    const auto expected = parse_events(read_file(source_path("scenarios/expected/" + name + ".events")));
    EXPECT_EQ(extract_events(run_scenario(cfg).log, cfg.application), expected) << name;
  }
}

TEST(Scenario, FilesEqualBuiltins) {
  for (const auto& name : kBuiltins) {
    const auto file = scenario_from_json(read_file(source_path("scenarios/" + name + ".json")));
    EXPECT_EQ(scenario_to_json(file), scenario_to_json(builtin_scenario(name))) << name;
    EXPECT_TRUE(v2i::testing::logs_identical(run_scenario(file).log,
                                             run_scenario(builtin_scenario(name)).log))
        << name;
  }
}

TEST(Scenario, RunsAreBitReproducible) {
  for (const auto& name : kBuiltins) {
    const auto cfg = builtin_scenario(name);
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    EXPECT_TRUE(v2i::testing::logs_identical(a.log, b.log)) << name;
    EXPECT_EQ(a.commands, b.commands) << name;
  }
}

TEST(Scenario, ConfigErrors) {
  auto c = builtin_scenario("rlvw-1");
  c.vehicle.lane_id = 9;
  EXPECT_THROW(run_scenario(c), ConfigError);
  c = builtin_scenario("rlvw-1");
  c.duration = 10.0;
  EXPECT_THROW(run_scenario(c), ConfigError);
  c = builtin_scenario("rlvw-1");
  c.plan.groups.erase(2);
  EXPECT_THROW(validate(c), ConfigError);
  c = builtin_scenario("rlvw-1");
  c.driver.reset();
  EXPECT_TRUE(c.human());
  EXPECT_THROW(run_scenario(c), ConfigError);
  EXPECT_THROW(builtin_scenario("rlvw-9"), ConfigError);

  auto text = scenario_to_json(builtin_scenario("glosa-2"));
  EXPECT_THROW(scenario_from_json(text.substr(0, text.size() / 2)), ConfigError);
  auto j = nlohmann::json::parse(text);
  j["schema_version"] = 2;
  EXPECT_THROW(scenario_from_json(j.dump()), ConfigError);
  j = nlohmann::json::parse(text);
  j["transport"] = "CAN";
  EXPECT_THROW(scenario_from_json(j.dump()), ConfigError);
  j = nlohmann::json::parse(text);
  j["driver"]["initial"] = "nowhere";
  EXPECT_THROW(scenario_from_json(j.dump()), ConfigError);
}

TEST(Scenario, HumanDriverRoundTrips) {
  auto c = builtin_scenario("rlvw-2");
  c.driver.reset();
  const auto back = scenario_from_json(scenario_to_json(c));
  EXPECT_TRUE(back.human());
}

TEST(Transport, InProcDeliversInOrder) {
  InProcTransport t;
  for (int i = 0; i < 100; ++i) t.send(std::to_string(i));
  const auto got = t.poll();
  ASSERT_EQ(got.size(), 100u);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(got[i], std::to_string(i));
  EXPECT_TRUE(t.poll().empty());
}

TEST(Transport, UdpDeliversDatagrams) {
  UdpTransport t({"127.0.0.1", 0, std::chrono::milliseconds(500)});
  ASSERT_NE(t.port(), 0);
  for (int i = 0; i < 20; ++i) t.send("m" + std::to_string(i));
  const auto got = t.poll();
  ASSERT_EQ(got.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(got[i], "m" + std::to_string(i));
}

TEST(Transport, DuplicateSpatLeavesObuUnchanged) {
  const auto cfg = builtin_scenario("rlvw-1");
  Obu obu({Application::RLVW, cfg.cfg, 0});
  EXPECT_TRUE(obu.receive(encode(cfg.map)));
  const auto spat = encode(spat_snapshot(cfg.plan, 3.0, 30));
  EXPECT_TRUE(obu.receive(spat));
  const auto held = obu.spat();
  const auto pos = vehicle_position(cfg.map, 1, -30.0);
  const auto before = obu.process(pos, 10.0, 30);
  EXPECT_FALSE(obu.receive(spat));
  EXPECT_FALSE(obu.receive(encode(spat_snapshot(cfg.plan, 2.9, 29))));
  EXPECT_EQ(obu.spat(), held);
  const auto after = obu.process(pos, 10.0, 30);
  EXPECT_EQ(after.warn, before.warn);
  EXPECT_EQ(after.t_rem, before.t_rem);
  EXPECT_FALSE(obu.receive("{not json"));
  EXPECT_EQ(obu.rejected(), 1);
}

TEST(Transport, ObuReportsStaleSpat) {
  const auto cfg = builtin_scenario("rlvw-1");
  Obu obu({Application::RLVW, cfg.cfg, 0});
  obu.receive(encode(cfg.map));
  obu.receive(encode(spat_snapshot(cfg.plan, 3.0, 30)));
  const auto pos = vehicle_position(cfg.map, 1, -30.0);
  EXPECT_EQ(obu.process(pos, 10.0, 32).algo_state, kRlvwMonitoring);
  EXPECT_EQ(obu.process(pos, 10.0, 33).algo_state, kStateStale);
  EXPECT_FALSE(obu.process(pos, 10.0, 33).warn);
  // Accepts the next hour's frames after a wrap.
  Obu wrap({Application::RLVW, cfg.cfg, 0});
  EXPECT_TRUE(wrap.receive(encode(spat_snapshot(cfg.plan, 3.0, 35999))));
  EXPECT_TRUE(wrap.receive(encode(spat_snapshot(cfg.plan, 3.1, 0))));
  EXPECT_EQ(wrap.spat()->timestamp_ds, 0);
  EXPECT_FALSE(wrap.receive(encode(spat_snapshot(cfg.plan, 3.0, 35999))));
}

TEST(Transport, InProcAndUdpLogsIdentical) {
  const auto cfg = builtin_scenario("rlvw-2");
  const auto a = run_scenario(cfg);
  const auto b = run_scenario(cfg, udp_options());
  EXPECT_TRUE(v2i::testing::logs_identical(a.log, b.log));
}

TEST(Transport, LossyRunMatchesShadowOnFreshTicks) {
  const auto cfg = builtin_scenario("glosa-1");
  const auto shadow = run_scenario(cfg);
  RunOptions lossy;
  lossy.loss = 0.2;
  lossy.seed = 7;
  const auto res = replay(cfg, shadow.commands, lossy);
  const auto fresh = v2i::testing::fresh_ticks(cfg, res);
  int n_fresh = 0;
  for (std::size_t k = 0; k < res.log.rows.size(); ++k) {
    if (!fresh[k]) continue;
    ++n_fresh;
    EXPECT_EQ(csv_row(res.log.rows[k]), csv_row(shadow.log.rows[k])) << k;
  }
  EXPECT_GT(n_fresh, static_cast<int>(res.log.rows.size()) / 2);
  const auto dropped = std::count(res.spat_delivered.begin(), res.spat_delivered.end(), false);
  EXPECT_GT(dropped, 0);
}

TEST(Transport, ReplayOfRecordedCommandsIsBitIdentical) {
  for (const auto& name : kBuiltins) {
    const auto cfg = builtin_scenario(name);
    const auto a = run_scenario(cfg);
    EXPECT_TRUE(v2i::testing::logs_identical(replay(cfg, a.commands).log, a.log)) << name;
  }
}

TEST(Ui, RlvwStatusBlock) {
  const RlvwStatus s{1, 8, SignalState::RED, 8.6, 17.9, 17.42, true};
  EXPECT_EQ(render(s), "Matched Lane: 1\nPhase Group Number: 8\nPhase State: RED\n"
                       "Remaining Time: 8.6 sec\nDistance to Intersection: 17.9 m\n"
                       "Vehicle Speed: 17.42 km/h\nWarning Status: 1\n");
}

TEST(Ui, GlosaSentinelsPrintBare) {
  GlosaStatus s{2.0, {}, SignalState::GREEN};
  const auto text = render(s);
  EXPECT_NE(text.find("Min Recommended Speed: -1 km/h"), std::string::npos);
  EXPECT_NE(text.find("Time to Green: -1 sec"), std::string::npos);
  EXPECT_NE(text.find("Approaching State: 4"), std::string::npos);
}
