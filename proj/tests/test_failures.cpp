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

#include "sbamc/counterexample.hpp"
#include "sbamc/kernel.hpp"
#include "sbamc/protocol.hpp"
#include "sbamc/system.hpp"
#include "support.hpp"

namespace sbamc {
namespace {

using testing::agents;

TEST(Commitments, NoFailuresMeansOnlyEmptySet) {
  auto cs = enumerate_commitments({FailureKind::kSendOmit, 0}, 3, 4);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(cs[0].faulty.empty());
}

TEST(Commitments, SendOmissionCountsFaultySets) {
  EXPECT_EQ(enumerate_commitments({FailureKind::kSendOmit, 3}, 4, 5).size(),
            15u);
}

TEST(Commitments, HardCrashCountsRoundsAndReceivers) {
  // 1 empty set, plus per agent: 2 rounds x 4 receiver sets, or no crash
  auto cs = enumerate_commitments({FailureKind::kHardCrash, 1}, 2, 2);
  EXPECT_EQ(cs.size(), 19u);
  std::size_t no_crash = 0;
  for (const FaultyCommitment& c : cs) {
    c.faulty.for_each([&](Agent i) {
      if (c.crash[i].round == 3) ++no_crash;
    });
  }
  EXPECT_EQ(no_crash, 2u);
}

TEST(Commitments, ParseFailureKindRoundTrips) {
  for (auto k : {FailureKind::kHardCrash, FailureKind::kComCrash,
                 FailureKind::kSendOmit, FailureKind::kRecvOmit,
                 FailureKind::kGenOmit}) {
    EXPECT_EQ(parse_failure_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_failure_kind("byzantine"), SchemaError);
}

TEST(RoundBehaviors, EmptyCommitmentIsIdentity) {
  for (auto k : {FailureKind::kHardCrash, FailureKind::kComCrash,
                 FailureKind::kSendOmit, FailureKind::kRecvOmit,
                 FailureKind::kGenOmit}) {
    FailureModel model{k, 1};
    auto cs = enumerate_commitments(model, 3, 2);
    auto bs = enumerate_round_behaviors(model, 3, cs[0], 1);
    ASSERT_EQ(bs.size(), 1u) << to_string(k);
    EXPECT_TRUE(bs[0].is_identity());
  }
}

TEST(RoundBehaviors, SendOmissionThreeFaultyOfFour) {
  FailureModel model{FailureKind::kSendOmit, 3};
  FaultyCommitment c{agents({1, 2, 3}), {}};
  auto bs = enumerate_round_behaviors(model, 4, c, 1);
  EXPECT_EQ(bs.size(), 4096u);
  for (const RoundBehavior& b : bs) {
    EXPECT_TRUE(b.transmit_drop[3].empty());
    EXPECT_TRUE(b.crash_state.empty());
    for (Agent i = 0; i < 4; ++i) EXPECT_TRUE(b.receive_drop[i].empty());
  }
}

TEST(RoundBehaviors, HardCrashAfterCrashRoundSilencesEveryone) {
  FailureModel model{FailureKind::kHardCrash, 1};
  FaultyCommitment c{agents({2}), {}};
  c.crash[1] = CrashSpec{1, agents({1})};
  auto r1 = enumerate_round_behaviors(model, 3, c, 1);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_EQ(r1[0].transmit_drop[1], agents({1}));
  auto r2 = enumerate_round_behaviors(model, 3, c, 2);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(r2[0].transmit_drop[1], AgentSet::all(3));
  EXPECT_EQ(r2[0].crash_state, agents({2}));
}

TEST(RoundBehaviors, ComCrashMatchesHardCrashTransmission) {
  FailureModel hard{FailureKind::kHardCrash, 1};
  FailureModel com{FailureKind::kComCrash, 1};
  auto hc = enumerate_commitments(hard, 3, 3);
  auto cc = enumerate_commitments(com, 3, 3);
  ASSERT_EQ(hc, cc);
  for (const FaultyCommitment& c : hc) {
    for (int round = 1; round <= 3; ++round) {
      RoundBehavior h = enumerate_round_behaviors(hard, 3, c, round).at(0);
      RoundBehavior m = enumerate_round_behaviors(com, 3, c, round).at(0);
      EXPECT_EQ(h.transmit_drop, m.transmit_drop);
      EXPECT_EQ(h.receive_drop, m.receive_drop);
      EXPECT_TRUE(m.crash_state.empty());
    }
  }
}

TEST(RoundBehaviors, ColumnsAssembleIntoBehaviors) {
  for (auto k : {FailureKind::kSendOmit, FailureKind::kRecvOmit,
                 FailureKind::kGenOmit, FailureKind::kHardCrash}) {
    FailureModel model{k, 1};
    auto cs = enumerate_commitments(model, 3, 2);
    ColumnCache cache(model, 3, cs, 2);
    for (std::uint32_t ci = 0; ci < cs.size(); ++ci) {
      for (int round = 1; round <= 2; ++round) {
        for (Agent j = 0; j < 3; ++j) {
          EXPECT_EQ(cache.get(ci, round, j),
                    column_choices(model, 3, cs[ci], round, j));
        }
      }
    }
    EXPECT_THROW(cache.get(0, 3, 0), std::out_of_range) << to_string(k);
    EXPECT_THROW(cache.get(0, 0, 0), std::out_of_range) << to_string(k);
    EXPECT_THROW(cache.get(static_cast<std::uint32_t>(cs.size()), 1, 0),
                 std::out_of_range);
    EXPECT_THROW(cache.get(0, 1, 3), std::out_of_range);
  }
}

TEST(Reconcile, NoFailuresNoReport) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 0, "fault-report", 3);
  auto sys = build_system(ctx, builtin_rule("always-noop", {}, ctx));
  EXPECT_TRUE(reconcile_semantic_faults(*sys).unrealized.empty());
}

TEST(Reconcile, CounterexampleRunFlagsExactlyTheCommitment) {
  auto ctx = testing::context(4, FailureKind::kSendOmit, 3, "fault-report", 5);
  const std::uint32_t c = testing::omission_commitment(*ctx, agents({1, 2, 3}));
  auto p = builtin_rule("fault-report-pprime", {{"t", 3}}, ctx);
  RunPrefix run = replay(*ctx, *p, std::vector<Value>{0, 0, 0, 0}, c,
                         counterexample_behaviors(5));
  EXPECT_EQ(run.faults[0].transmission, agents({1, 2, 3}));
  EXPECT_EQ(run.failed_by(5), agents({1, 2, 3}));
  EXPECT_NO_THROW(classify_sets(*ctx, run, 5, ctx->commitments()[c]));
}

TEST(Reconcile, UnrealizedCommitmentIsReported) {
  auto ctx = testing::context(3, FailureKind::kSendOmit, 1, "fault-report", 2);
  auto sys = build_system(ctx, builtin_rule("always-noop", {}, ctx));
  const std::uint32_t c2 = testing::omission_commitment(*ctx, agents({2}));
  auto rep = reconcile_semantic_faults(*sys);
  bool found = false;
  for (const UnrealizedFault& u : rep.unrealized) {
    if (u.commitment == c2) {
      found = true;
      EXPECT_EQ(u.agents, agents({2}));
      EXPECT_TRUE(sys->slice(2).failed[u.example_point].empty());
    }
  }
  EXPECT_TRUE(found);
}

class FaultInvariants : public ::testing::TestWithParam<FailureKind> {};

TEST_P(FaultInvariants, FlagsStayInsideCommitmentAndCrashesPersist) {
  const FailureKind kind = GetParam();
  auto ctx = testing::context(3, kind, 1, "fault-report", 3);
  auto sys = build_system(ctx, builtin_rule("wait-until", {{"k", 2}}, ctx));
  EXPECT_NO_THROW(reconcile_semantic_faults(*sys));
  for (int m = 0; m <= 3; ++m) {
    const Slice& s = sys->slice(m);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      EXPECT_TRUE(s.failed[p].subset_of(ctx->all() - s.nonfaulty[p]));
      if (m == 0) continue;
      const Slice& prev = sys->slice(m - 1);
      EXPECT_TRUE(prev.failed[s.parent[p]].subset_of(s.failed[p]));
      const RoundBehavior& b = s.behaviors[s.behavior[p]];
      if (kind == FailureKind::kSendOmit) {
        for (Agent i = 0; i < 3; ++i) EXPECT_TRUE(b.receive_drop[i].empty());
        EXPECT_TRUE(b.crash_state.empty());
      }
      for (Agent i = 0; i < 3; ++i) {
        if (ctx->exchange().is_crashed(prev.local(s.parent[p], i))) {
          EXPECT_TRUE(ctx->exchange().is_crashed(s.local(p, i)));
          EXPECT_FALSE(s.action(p, i).is_decide());
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Models, FaultInvariants,
                         ::testing::Values(FailureKind::kHardCrash,
                                           FailureKind::kComCrash,
                                           FailureKind::kSendOmit,
                                           FailureKind::kRecvOmit,
                                           FailureKind::kGenOmit),
                         [](const auto& info) {
                           std::string s = to_string(info.param);
                           std::erase(s, '-');
                           return s;
                         });

}  // namespace
}  // namespace sbamc
