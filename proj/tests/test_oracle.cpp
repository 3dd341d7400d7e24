/*
 * Copyright (c) 2026, The sbamc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "oracles/agreement.hpp"

namespace sbamc {
namespace {

void expect_agreement(const oracle::Comparison& c) {
  EXPECT_TRUE(c.oracle_locality);
  EXPECT_GT(c.points, 0u);
  EXPECT_EQ(c.truth_mismatches, 0u);
  EXPECT_EQ(c.missing_in_engine, 0u);
  EXPECT_EQ(c.missing_in_oracle, 0u);
  EXPECT_EQ(c.table_mismatches, 0u);
}

TEST(WholeHorizonOracle, ThreeAgentsFaultReportNonfaulty) {
  oracle::Comparison c = oracle::compare_with_engine(
      3, 1, "fault-report", 2, DecisionCondition::kBnCbn);
  expect_agreement(c);
  EXPECT_EQ(c.points, 32u + 200u + 332u);
}

TEST(WholeHorizonOracle, ThreeAgentsFaultReportActive) {
  expect_agreement(
      oracle::compare_with_engine(3, 1, "fault-report", 2, DecisionCondition::kBaCba));
}

TEST(WholeHorizonOracle, ThreeAgentsFullInformation) {
  expect_agreement(
      oracle::compare_with_engine(3, 1, "fip", 2, DecisionCondition::kBnCbn));
}

TEST(WholeHorizonOracle, TwoAgentsLongerHorizon) {
  expect_agreement(
      oracle::compare_with_engine(2, 1, "fault-report", 4, DecisionCondition::kBnCbn));
}

TEST(WholeHorizonOracle, ThreeAgentsThreeRounds) {
  expect_agreement(
      oracle::compare_with_engine(3, 1, "fault-report", 3, DecisionCondition::kBnCbn));
}

}  // namespace
}  // namespace sbamc
