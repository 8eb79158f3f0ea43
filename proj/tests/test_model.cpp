// Copyright 2026 The auditfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "auditfuse/model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

namespace auditfuse {
namespace {

bool HasField(const std::vector<Violation>& v, const std::string& field) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field; });
}

TEST(Model, DefaultsAreValid) {
  EXPECT_TRUE(violations(NetworkConfig{}, DetectionParams{0.9, 0.1, 0.5, 0.5}, AttackParams{0.3, 0.7, 0.7}).empty());
}

TEST(Model, RejectsOddSensorCount) {
  NetworkConfig c;
  c.n_sensors = 101;
  EXPECT_TRUE(HasField(violations(c, {0.9, 0.1, 0.5, 0.5}, {0.3, 0.7, 0.7}), "n_sensors"));
}

TEST(Model, RejectsZeroSensors) {
  NetworkConfig c;
  c.n_sensors = 0;
  EXPECT_TRUE(HasField(violations(c, {0.9, 0.1, 0.5, 0.5}, {0.3, 0.7, 0.7}), "n_sensors"));
}

TEST(Model, ClustersMustDivideGroups) {
  NetworkConfig c;
  c.n_sensors = 100;
  c.n_clusters = 4;  // 50 groups
  EXPECT_TRUE(HasField(violations(c, {0.9, 0.1, 0.5, 0.5}, {0.3, 0.7, 0.7}), "n_clusters"));
  c.n_clusters = 5;
  EXPECT_TRUE(violations(c, {0.9, 0.1, 0.5, 0.5}, {0.3, 0.7, 0.7}).empty());
  c.n_clusters = 0;
  EXPECT_TRUE(HasField(violations(c, {0.9, 0.1, 0.5, 0.5}, {0.3, 0.7, 0.7}), "n_clusters"));
}

TEST(Model, RequiresPfBelowPd) {
  EXPECT_TRUE(HasField(violations({}, {0.5, 0.5, 0.5, 0.5}, {0.3, 0.7, 0.7}), "p_f"));
  EXPECT_TRUE(HasField(violations({}, {0.1, 0.9, 0.5, 0.5}, {0.3, 0.7, 0.7}), "p_f"));
}

TEST(Model, RejectsOutOfRangeProbabilities) {
  const auto v = violations({}, {0.9, 0.1, 0.5, 0.5}, {-0.1, 1.5, std::nan("")});
  EXPECT_TRUE(HasField(v, "alpha0"));
  EXPECT_TRUE(HasField(v, "p1"));
  EXPECT_TRUE(HasField(v, "p2"));
}

TEST(Model, PriorsMustSumToOne) {
  EXPECT_TRUE(HasField(violations({}, {0.9, 0.1, 0.5, 0.6}, {0.3, 0.7, 0.7}), "prior1"));
}

TEST(Model, ValidateThrowsWithEveryViolation) {
  NetworkConfig c;
  c.n_sensors = 3;
  try {
    validate(c, {0.1, 0.9, 0.5, 0.5}, {2.0, 0.7, 0.7});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.violations().size(), 3u);
    EXPECT_NE(std::string(e.what()).find("n_sensors"), std::string::npos);
  }
}

TEST(Model, StatusIndicatorsFollowRelayedCopies) {
  GroupTranscript g;
  g.i.u = 1;
  g.j.u = 0;
  g.i.z = 0;  // i relays j's bit correctly
  g.j.z = 0;  // j relays i's bit wrongly
  EXPECT_EQ(g.d_i(), 1);
  EXPECT_EQ(g.d_j(), 0);
  EXPECT_FALSE(g.matched());
}

TEST(Model, SetLabels) {
  EXPECT_EQ(eas_set(1, 1), EasSet::ss_low);
  EXPECT_EQ(eas_set(1, 0), EasSet::s_low_high);
  EXPECT_EQ(eas_set(0, 1), EasSet::s_high_low);
  EXPECT_EQ(eas_set(0, 0), EasSet::ss_high);
  for (auto s : kEasSets) EXPECT_EQ(mirror(mirror(s)), s);
  EXPECT_EQ(mirror(EasSet::s_low_high), EasSet::s_high_low);
  EXPECT_EQ(tas_set(1), TasSet::s_low);
  const SetLabel l = label_of(1, 0, 1, 1);
  EXPECT_EQ(l.tas, TasSet::s_low);
  EXPECT_EQ(l.eas, EasSet::s_low_high);
  EXPECT_TRUE(l.matched);
}

TEST(Model, FixedByzantineCountRounds) {
  NetworkConfig c;
  c.n_sensors = 100;
  EXPECT_EQ(fixed_byzantine_count(c, {0.305, 0.5, 0.5}), 31u);
  EXPECT_EQ(fixed_byzantine_count(c, {0.0, 0.5, 0.5}), 0u);
}

}  // namespace
}  // namespace auditfuse
