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

#include "sbamc/kbp.hpp"
#include "sbamc/protocol.hpp"
#include "sbamc/speccheck.hpp"
#include "sbamc/system.hpp"
#include "support.hpp"

namespace sbamc {
namespace {

using testing::agents;

std::shared_ptr<const InterpretedSystem> system_of(
    std::shared_ptr<const Context> ctx, const std::string& name,
    std::map<std::string, int> params = {}) {
  return build_system(ctx, builtin_rule(name, params, ctx));
}

TEST(CheckSba, SilencePasses) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 3);
  auto sys = system_of(ctx, "always-noop");
  for (auto sel : {Selector::nonfaulty(), Selector::active(), Selector::everyone()}) {
    SpecVerdict v = check_sba(*sys, sel);
    EXPECT_TRUE(v.pass);
    EXPECT_TRUE(v.failed_clause.empty());
    EXPECT_EQ(v.horizon, 3);
  }
}

TEST(CheckSba, EarlyDecisionBreaksAgreement) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  auto sys = system_of(ctx, "wait-until", {{"k", 1}});
  SpecVerdict v = check_sba(*sys, Selector::nonfaulty());
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.failed_clause, "simultaneous-agreement");
  EXPECT_EQ(v.simultaneous_agreement.time, 1);
  EXPECT_TRUE(v.unique_decision.pass);
  EXPECT_TRUE(v.validity.pass);

  // A concrete instance: inits (0,1,1), agent 1 faulty and silent towards
  // agent 2 in round 1. Agent 2 only knows 1, agent 3 knows 0 and 1.
  RoundBehavior r1;
  r1.transmit_drop[0] = agents({2});
  RunPrefix run = replay(*ctx, sys->protocol(), std::vector<Value>{0, 1, 1},
                         testing::omission_commitment(*ctx, agents({1})),
                         std::vector<RoundBehavior>{r1});
  EXPECT_EQ(run.actions[1][1], Action::decide(1));
  EXPECT_EQ(run.actions[1][2], Action::decide(0));
  ASSERT_TRUE(sys->locate(run, 1).has_value());
}

TEST(CheckSba, WaitingOutTheFaultsPasses) {
  for (auto [kind, ex] : {std::pair{FailureKind::kSendOmit, "fault-report"},
                          std::pair{FailureKind::kHardCrash, "fip"}}) {
    auto ctx = testing::context(3, kind, 1, ex, 3);
    auto sys = system_of(ctx, "wait-until", {{"k", 2}});
    EXPECT_TRUE(check_sba(*sys, Selector::nonfaulty()).pass) << to_string(kind);
    EXPECT_TRUE(check_sba(*sys, Selector::active()).pass) << to_string(kind);
  }
}

TEST(CheckSba, LateRevealBreaksWaitingUnderFullInformation) {
  // Agent 1 stays silent in round 1, then reveals its 0 only to agent 2.
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fip", 2);
  auto sys = system_of(ctx, "wait-until", {{"k", 2}});
  SpecVerdict v = check_sba(*sys, Selector::nonfaulty());
  EXPECT_EQ(v.failed_clause, "simultaneous-agreement");
  EXPECT_EQ(v.simultaneous_agreement.time, 2);

  RoundBehavior r1, r2;
  r1.transmit_drop[0] = agents({2, 3});
  r2.transmit_drop[0] = agents({3});
  RunPrefix run = replay(*ctx, sys->protocol(), std::vector<Value>{0, 1, 1},
                         testing::omission_commitment(*ctx, agents({1})),
                         std::vector<RoundBehavior>{r1, r2});
  EXPECT_EQ(run.actions[2][1], Action::decide(0));
  EXPECT_EQ(run.actions[2][2], Action::decide(1));
}

TEST(CheckSba, RepeatedDecisionIsReported) {
  auto ctx = testing::context(2, FailureKind::kSendOmit, 0, "fault-report", 2);
  auto eager = std::make_shared<RuleProtocol>(
      "eager", [](Agent, StateId) { return Action::decide(0); });
  SpecVerdict v = check_sba(*build_system(ctx, eager), Selector::nonfaulty());
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.failed_clause, "unique-decision");
  EXPECT_EQ(v.unique_decision.time, 1);
}

TEST(CheckSba, InventedValueIsReported) {
  auto ctx = testing::context(2, FailureKind::kSendOmit, 0, "fault-report", 1);
  auto contrary = std::make_shared<RuleProtocol>(
      "contrary", [ctx](Agent, StateId s) {
        const Exchange& ex = ctx->exchange();
        return ex.time(s) == 0 ? Action::decide(1) : Action::noop();
      });
  SpecVerdict v = check_sba(*build_system(ctx, contrary), Selector::nonfaulty());
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.failed_clause, "validity");
  EXPECT_EQ(ctx->init_vectors()[build_system(ctx, contrary)->slice(0).init[v.validity.point]],
            (std::vector<Value>{0, 0}));
}

TEST(CheckSba, UniquenessCanBeRestrictedToTheSelector) {
  auto ctx = testing::context(2, FailureKind::kSendOmit, 0, "fault-report", 2);
  auto stutter = std::make_shared<RuleProtocol>(
      "stutter", [](Agent i, StateId) {
        return i == 0 ? Action::decide(0) : Action::noop();
      });
  auto sys = build_system(ctx, stutter);
  const Selector second = Selector::of(agents({2}));
  EXPECT_FALSE(check_sba(*sys, second, false).unique_decision.pass);
  EXPECT_TRUE(check_sba(*sys, second, true).pass);
}

TEST(CheckValid, ContainmentAndDecisionFormulas) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 3);
  auto sys = system_of(ctx, "fault-report-pprime", {{"t", 1}});
  EXPECT_TRUE(check_valid(*sys, parse_formula("(subset N A)")).valid);
  EXPECT_TRUE(check_valid(*sys, parse_formula("(subset A Agt)")).valid);
  ValidityResult r = check_valid(*sys, parse_formula("(subset A N)"));
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.instance, "(subset A N)");
  ValidityResult b = check_valid(
      *sys, parse_formula("(implies (decides i v) (B N i (CB N (exists v))))"));
  EXPECT_TRUE(b.valid);
  EXPECT_EQ(b.instances, 6u);
}

TEST(CheckValid, ReportsBindingOfFailingInstance) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  auto sys = system_of(ctx, "always-noop");
  ValidityResult r = check_valid(*sys, parse_formula("(exists v)"));
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.time, 0);
  ASSERT_EQ(r.binding.count("v"), 1u);
  EXPECT_EQ(r.instance, "(exists " + std::to_string(r.binding["v"]) + ")");
}

TEST(CheckValid, NeverBothAFormulaAndItsNegation) {
  auto ctx = testing::context(3, FailureKind::kHardCrash, 1, "fip", 3);
  auto sys = system_of(ctx, "wait-until", {{"k", 2}});
  for (const char* text : {"(decided 1)", "(in 2 N)", "(exists 0)",
                           "(B N 1 (CB N (exists 1)))", "(CK A (decides-all A 0))"}) {
    FormulaPtr f = parse_formula(text);
    const bool pos = check_valid(*sys, f).valid;
    const bool neg = check_valid(*sys, fm::neg(f)).valid;
    EXPECT_FALSE(pos && neg) << text;
  }
}

TEST(CheckValid, CrashDecisionsAreCommonKnowledge) {
  auto ctx = testing::context(3, FailureKind::kHardCrash, 1, "fip", 3);
  Implementation impl = construct_implementation(ctx, DecisionCondition::kKCka);
  EXPECT_TRUE(check_valid(*impl.system,
                          parse_formula("(implies (decides i v) (K i (CK A (exists v))))"))
                  .valid);
}

TEST(Transfer, FaultReportRuleSatisfiesBoth) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 3);
  TransferReport r = check_sba_transfer(
      *system_of(ctx, "fault-report-pprime", {{"t", 1}}), Selector::nonfaulty(),
      Selector::active());
  EXPECT_TRUE(r.containment);
  EXPECT_TRUE(r.equivalence_expected);
  EXPECT_TRUE(r.agree);
  EXPECT_TRUE(r.sba_s.pass);
  EXPECT_TRUE(r.sba_t.pass);
}

TEST(Transfer, KnowledgeBasedCrashSatisfiesBoth) {
  auto ctx = testing::context(3, FailureKind::kHardCrash, 1, "fip", 3);
  Implementation impl = construct_implementation(ctx, DecisionCondition::kBnCbn);
  TransferReport r =
      check_sba_transfer(*impl.system, Selector::nonfaulty(), Selector::active());
  EXPECT_TRUE(r.equivalence_expected);
  EXPECT_TRUE(r.sba_s.pass);
  EXPECT_TRUE(r.sba_t.pass);
}

TEST(Transfer, NoClaimWhenEveryoneMayFail) {
  auto ctx = testing::context(2, FailureKind::kSendOmit, 2, "fault-report", 2);
  TransferReport r = check_sba_transfer(*system_of(ctx, "always-noop"),
                                        Selector::nonfaulty(), Selector::active());
  EXPECT_TRUE(r.containment);
  EXPECT_FALSE(r.equivalence_expected);
  EXPECT_NE(r.note.find("precondition failed"), std::string::npos);
}

TEST(Transfer, WrongDirectionIsAPreconditionFailure) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  TransferReport r = check_sba_transfer(*system_of(ctx, "always-noop"),
                                        Selector::active(), Selector::nonfaulty());
  EXPECT_FALSE(r.containment);
  EXPECT_FALSE(r.equivalence_expected);
}

TEST(Transfer, EarlyDecisionFailsBoth) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  TransferReport r = check_sba_transfer(*system_of(ctx, "wait-until", {{"k", 1}}),
                                        Selector::nonfaulty(), Selector::active());
  EXPECT_FALSE(r.sba_s.pass);
  EXPECT_FALSE(r.sba_t.pass);
  EXPECT_TRUE(r.agree);
}

}  // namespace
}  // namespace sbamc
