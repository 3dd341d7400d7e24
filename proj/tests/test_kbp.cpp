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

#include <algorithm>

#include <gtest/gtest.h>

#include "sbamc/kbp.hpp"
#include "sbamc/optimality.hpp"
#include "sbamc/protocol.hpp"
#include "sbamc/speccheck.hpp"
#include "sbamc/system.hpp"
#include "support.hpp"

namespace sbamc {
namespace {

using testing::agents;

TEST(Condition, NamesRoundTrip) {
  for (auto c : {DecisionCondition::kBnCbn, DecisionCondition::kBaCba,
                 DecisionCondition::kKCka}) {
    EXPECT_EQ(parse_condition(to_string(c)), c);
  }
  EXPECT_THROW(parse_condition("k-ck"), SchemaError);
}

TEST(Condition, FormulaShapes) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  EXPECT_EQ(condition_formulas(DecisionCondition::kBnCbn, *ctx)[1][0]->to_string(),
            "(B N 2 (CB N (exists 0)))");
  EXPECT_EQ(condition_formulas(DecisionCondition::kBaCba, *ctx)[0][1]->to_string(),
            "(B A 1 (CB A (exists 1)))");
  EXPECT_EQ(condition_formulas(DecisionCondition::kKCka, *ctx)[2][1]->to_string(),
            "(K 3 (CK A (exists 1)))");
}

TEST(Construct, SingleValueWithoutFailuresDecidesImmediately) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 0, "fault-report", 2, {0});
  Implementation impl = construct_implementation(ctx, DecisionCondition::kBnCbn);
  const Slice& s0 = impl.system->slice(0);
  ASSERT_EQ(s0.size(), 1u);
  for (Agent i = 0; i < 3; ++i) EXPECT_EQ(s0.action(0, i), Action::decide(0));
  const Slice& s1 = impl.system->slice(1);
  for (Agent i = 0; i < 3; ++i) EXPECT_FALSE(s1.action(0, i).is_decide());
}

TEST(Construct, OutputVerifiesAndIsDeterministic) {
  for (auto [kind, ex] : {std::pair{FailureKind::kSendOmit, "fault-report"},
                          std::pair{FailureKind::kHardCrash, "fip"},
                          std::pair{FailureKind::kGenOmit, "fault-report"}}) {
    auto ctx = testing::context(3, kind, 1, ex, 3);
    for (auto cond : {DecisionCondition::kBnCbn, DecisionCondition::kBaCba,
                      DecisionCondition::kKCka}) {
      Implementation a = construct_implementation(ctx, cond);
      EXPECT_TRUE(verify_implementation(ctx, a.table, cond).ok)
          << to_string(kind) << " " << to_string(cond);
      Implementation b = construct_implementation(ctx, cond, 2);
      EXPECT_TRUE(a.table->same_entries(*b.table));
      EXPECT_EQ(a.table->canonical_text(*ctx), b.table->canonical_text(*ctx));
    }
  }
}

TEST(Construct, TablesAreTotalOnTheirSystems) {
  auto ctx = testing::context(3, FailureKind::kHardCrash, 1, "fault-report", 3);
  Implementation impl = construct_implementation(ctx, DecisionCondition::kBnCbn);
  for (int m = 0; m <= 3; ++m) {
    const Slice& s = impl.system->slice(m);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      for (Agent i = 0; i < 3; ++i) {
        auto a = impl.table->find(i, s.local(p, i));
        ASSERT_TRUE(a.has_value());
        if (ctx->exchange().is_crashed(s.local(p, i))) EXPECT_FALSE(a->is_decide());
      }
    }
  }
}

TEST(Construct, CanonicalTextIsSorted) {
  auto ctx = testing::context(2, FailureKind::kSendOmit, 1, "fault-report", 2);
  Implementation impl = construct_implementation(ctx, DecisionCondition::kBnCbn);
  const std::string text = impl.table->canonical_text(*ctx);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    lines.push_back(text.substr(start, nl - start));
  }
  EXPECT_EQ(lines.size(), impl.table->size());
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

// Fault-report variant that never records decisions.
class ForgetfulExchange : public FaultReportExchange {
 public:
  using FaultReportExchange::FaultReportExchange;

 protected:
  StateId do_update(Agent i, StateId s, Action,
                    std::span<const Message> received) override {
    return FaultReportExchange::do_update(i, s, Action::noop(), received);
  }
};

TEST(Construct, AbortsWhenDecisionsAreNotRecorded) {
  auto ctx = std::make_shared<const Context>(
      3, std::vector<int>{0, 1}, FailureModel{FailureKind::kSendOmit, 1}, 3,
      std::make_shared<ForgetfulExchange>(3, 2));
  EXPECT_THROW(construct_implementation(ctx, DecisionCondition::kBnCbn),
               ConstructionError);
}

TEST(Verify, FaultReportRuleIsNotAnImplementation) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 3);
  auto pprime = builtin_rule("fault-report-pprime", {{"t", 1}}, ctx);
  ImplementationCheck c =
      verify_implementation(ctx, pprime, DecisionCondition::kBnCbn);
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.actual, Action::noop());
  EXPECT_TRUE(c.expected.is_decide());
  EXPECT_FALSE(c.message.empty());
}

TEST(Verify, SilenceIsNotAnImplementationWithoutFailures) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 0, "fault-report", 2);
  ImplementationCheck c = verify_implementation(
      ctx, builtin_rule("always-noop", {}, ctx), DecisionCondition::kBnCbn);
  // Nobody knows the other preferences at time 0.
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.time, 1);
}

TEST(Builtins, FaultReportRuleDecidesOnFullSuspicion) {
  auto ctx = testing::context(4, FailureKind::kSendOmit, 3, "fault-report", 5);
  auto& ex = const_cast<FaultReportExchange&>(testing::fr(*ctx));
  auto pprime = builtin_rule("fault-report-pprime", {{"t", 3}}, ctx);
  FrLocalState s;
  s.init = 0;
  s.known = 0b11;
  s.kfaulty = agents({1, 2, 3});
  s.time = 2;
  EXPECT_EQ(pprime->act(3, ex.intern(s)), Action::decide(0));
  s.time = 1;
  EXPECT_EQ(pprime->act(0, ex.intern(s)), Action::noop());
  s.time = 4;
  s.kfaulty = {};
  EXPECT_EQ(pprime->act(0, ex.intern(s)), Action::decide(0));
  s.done = true;
  const StateId done = ex.intern(s);
  EXPECT_EQ(pprime->act(0, done), Action::noop());
}

TEST(Builtins, NoDecisionAfterDone) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 3);
  for (const char* name : {"wait-until", "fault-report-pprime", "always-noop"}) {
    auto sys = build_system(ctx, builtin_protocol(name, {{"k", 1}, {"t", 1}}, ctx));
    const auto& ex = testing::fr(*ctx);
    for (int m = 0; m <= 3; ++m) {
      const Slice& s = sys->slice(m);
      for (std::uint32_t p = 0; p < s.size(); ++p) {
        for (Agent i = 0; i < 3; ++i) {
          if (ex.state(s.local(p, i)).done) EXPECT_FALSE(s.action(p, i).is_decide());
        }
      }
    }
  }
}

TEST(Builtins, UnknownOrIncomplete) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  EXPECT_THROW(builtin_rule("telepathy", {}, ctx), SchemaError);
  EXPECT_THROW(builtin_rule("wait-until", {}, ctx), SchemaError);
  auto fip = testing::context(3, FailureKind::kSendOmit, 1, "fip", 2);
  EXPECT_THROW(builtin_rule("fault-report-pprime", {{"t", 1}}, fip), SchemaError);
}

TEST(Builtins, TabulatedRuleMatchesRule) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 3);
  auto rule = builtin_rule("fault-report-pprime", {{"t", 1}}, ctx);
  auto table = builtin_protocol("fault-report-pprime", {{"t", 1}}, ctx);
  auto a = build_system(ctx, rule);
  auto b = build_system(ctx, table);
  for (int m = 0; m <= 3; ++m) {
    EXPECT_EQ(a->slice(m).locals, b->slice(m).locals);
    EXPECT_EQ(a->slice(m).actions, b->slice(m).actions);
  }
}

TEST(KnowledgeProperties, BeliefConditionsAgreeOnCrashAndOmission) {
  for (auto [kind, ex] : {std::pair{FailureKind::kSendOmit, "fault-report"},
                          std::pair{FailureKind::kHardCrash, "fault-report"},
                          std::pair{FailureKind::kSendOmit, "fip"},
                          std::pair{FailureKind::kHardCrash, "fip"}}) {
    auto ctx = testing::context(3, kind, 1, ex, 3);
    Implementation n = construct_implementation(ctx, DecisionCondition::kBnCbn);
    Implementation a = construct_implementation(ctx, DecisionCondition::kBaCba);
    EXPECT_TRUE(n.table->same_entries(*a.table)) << to_string(kind) << " " << ex;
    EXPECT_TRUE(check_sba(*n.system, Selector::nonfaulty()).pass);
  }
}

TEST(KnowledgeProperties, FailureFreeDecisionTimesSmallCrash) {
  // Two agents, one crash, full information: with the other agent possibly
  // crashed, nobody can be sure of common belief before time 1.
  auto ctx = testing::context(2, FailureKind::kHardCrash, 1, "fip", 3);
  Implementation impl = construct_implementation(ctx, DecisionCondition::kBnCbn);
  for (const DecisionTimes& d : failure_free_decision_times(*ctx, *impl.table)) {
    for (int t : d.times) EXPECT_EQ(t, 1);
  }
}

}  // namespace
}  // namespace sbamc
