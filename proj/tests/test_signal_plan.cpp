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

#include "support.hpp"

using namespace v2i;
using S = SignalState;
using v2i::testing::Rng;
using v2i::testing::uniform;

namespace {
SignalPlan plan(double offset = 0.0) {
  SignalPlan p;
  p.intersection_id = 9;
  p.groups[2] = {{{S::GREEN, 10}, {S::YELLOW, 3}, {S::RED, 12}}, offset};
  return p;
}
} // namespace

TEST(SignalPlan, StateAtExamples) {
  const auto p = plan();
  auto a = state_at(p, 2, 0.0);
  EXPECT_EQ(a.state, S::GREEN);
  EXPECT_DOUBLE_EQ(a.t_rem, 10.0);
  a = state_at(p, 2, 10.0);
  EXPECT_EQ(a.state, S::YELLOW);
  EXPECT_DOUBLE_EQ(a.t_rem, 3.0);
  a = state_at(p, 2, 26.5);
  EXPECT_EQ(a.state, S::GREEN);
  EXPECT_DOUBLE_EQ(a.t_rem, 8.5);
  EXPECT_THROW(state_at(p, 3, 0.0), UnknownGroup);
}

TEST(SignalPlan, OffsetShiftsTheCycle) {
  const auto a = state_at(plan(13.0), 2, 0.0);
  EXPECT_EQ(a.state, S::RED);
  EXPECT_DOUBLE_EQ(a.t_rem, 12.0);
}

TEST(SignalPlan, Validation) {
  auto p = plan();
  EXPECT_NO_THROW(validate(p));
  p.groups[2].intervals = {{S::GREEN, 10}, {S::YELLOW, 3}};
  EXPECT_THROW(validate(p), ConfigError);
  p.groups[2].intervals = {{S::GREEN, 10}, {S::RED, 0}};
  EXPECT_THROW(validate(p), ConfigError);
  p.groups[2].intervals = {{S::GREEN, 1800}, {S::RED, 1800}};
  EXPECT_THROW(validate(p), ConfigError);
  EXPECT_THROW(validate(SignalPlan{}), ConfigError);
}

TEST(SignalPlan, Periodic) {
  const auto p = plan(4.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = i * 0.25;
    EXPECT_EQ(state_at(p, 2, t).state, state_at(p, 2, t + 25.0).state);
    EXPECT_NEAR(state_at(p, 2, t).t_rem, state_at(p, 2, t + 25.0).t_rem, 1e-9);
  }
}

TEST(SignalPlan, OccupancySumsToCycle) {
  const auto p = plan();
  double green = 0, yellow = 0, red = 0;
  const int n = 25000;
  for (int i = 0; i < n; ++i) {
    switch (state_at(p, 2, i * 0.001).state) {
    case S::GREEN: green += 0.001; break;
    case S::YELLOW: yellow += 0.001; break;
    case S::RED: red += 0.001; break;
    }
  }
  EXPECT_NEAR(green, 10.0, 1e-6);
  EXPECT_NEAR(yellow, 3.0, 1e-6);
  EXPECT_NEAR(red, 12.0, 1e-6);
}

TEST(SignalPlan, SnapshotRounding) {
  SignalPlan p;
  p.intersection_id = 9;
  p.groups[1] = {{{S::RED, 8.6}, {S::GREEN, 10}}, 0.0};
  auto s = spat_snapshot(p, 0.0, 1000);
  EXPECT_EQ(s.timestamp_ds, 1000);
  EXPECT_EQ(s.phases.at(0).min_end_time_ds, 1086);
  s = spat_snapshot(p, 8.56, 1000);
  EXPECT_EQ(s.phases.at(0).min_end_time_ds, 1000);
  s = spat_snapshot(p, 0.0, 35990);
  EXPECT_EQ(s.phases.at(0).min_end_time_ds, 76);
  EXPECT_EQ(std::get<SpatMessage>(decode(encode(s))), s);
  EXPECT_THROW(spat_snapshot(p, 0.0, 36000), OutOfRange);
}

TEST(SignalPlan, RemainingTimeWithinOneQuantum) {
  Rng rng(61);
  for (int i = 0; i < 2000; ++i) {
    SignalPlan p;
    p.intersection_id = 1;
    p.groups[1] = {{{S::GREEN, uniform(rng, 1, 60)}, {S::YELLOW, uniform(rng, 1, 6)}, {S::RED, uniform(rng, 1, 60)}},
                   uniform(rng, 0, 100)};
    const double t = uniform(rng, 0, 1000);
    const int wall = v2i::testing::uniform_int(rng, 0, 35999);
    const auto s = spat_snapshot(p, t, wall);
    EXPECT_LE(std::abs(remaining_time(s.phases[0], wall) - state_at(p, 1, t).t_rem), 0.1);
  }
}
