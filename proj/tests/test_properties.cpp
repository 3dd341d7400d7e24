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
#include <filesystem>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "sbamc/evaluator.hpp"
#include "sbamc/fault_report.hpp"
#include "sbamc/scenario.hpp"
#include "sbamc/speccheck.hpp"
#include "support.hpp"

namespace sbamc {
namespace {

std::vector<std::string> regression_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(
           std::filesystem::path(SBAMC_SCENARIO_DIR) / "regression")) {
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Loaded {
  Scenario scenario;
  std::shared_ptr<const Context> context;
  std::vector<BuiltProtocol> built;
};

// Building every scenario once keeps the suite fast.
const Loaded& load(const std::string& path) {
  static std::map<std::string, Loaded> cache;
  auto it = cache.find(path);
  if (it != cache.end()) return it->second;
  Loaded l;
  l.scenario = load_scenario(path);
  l.context = l.scenario.make_context();
  for (const ProtocolSpec& spec : l.scenario.protocols) {
    l.built.push_back(build_protocol(spec, l.context));
  }
  return cache.emplace(path, std::move(l)).first->second;
}

std::vector<FormulaPtr> samples(const Context& ctx) {
  std::vector<FormulaPtr> out;
  for (int label : ctx.value_labels()) {
    out.push_back(fm::exists(label));
    out.push_back(fm::neg(fm::exists(label)));
  }
  for (Agent i = 0; i < ctx.agents(); ++i) {
    out.push_back(fm::decided(i));
    out.push_back(fm::in(i, Selector::nonfaulty()));
    out.push_back(fm::B(Selector::nonfaulty(), i,
                        fm::CB(Selector::nonfaulty(),
                               fm::exists(ctx.value_labels().front()))));
  }
  return out;
}

class Regression : public ::testing::TestWithParam<std::string> {};

TEST_P(Regression, EpistemicOperatorLaws) {
  const Loaded& l = load(GetParam());
  const Context& ctx = *l.context;
  const std::vector<Selector> groups = {Selector::nonfaulty(), Selector::active(),
                                        Selector::everyone()};
  for (const BuiltProtocol& b : l.built) {
    for (int m = 0; m <= b.system->horizon(); ++m) {
      const Slice& s = b.system->slice(m);
      Evaluator ev(ctx, s);
      for (const FormulaPtr& phi : samples(ctx)) {
        const auto& holds = ev.eval(phi);
        for (const Selector& g : groups) {
          // Fixed point: C phi holds exactly where E (phi and C phi) holds.
          const auto& cb = ev.eval(fm::CB(g, phi));
          ASSERT_EQ(cb, ev.eval(fm::EB(g, fm::conj({phi, fm::CB(g, phi)}))))
              << b.name << " t=" << m << " " << phi->to_string();
          const auto& ck = ev.eval(fm::CK(g, phi));
          ASSERT_EQ(ck, ev.eval(fm::EK(g, fm::conj({phi, fm::CK(g, phi)}))))
              << b.name << " t=" << m << " " << phi->to_string();
          for (std::uint32_t p = 0; p < s.size(); ++p) {
            const bool nonempty = !ev.resolve(p, g).empty();
            // Truthfulness for nonempty groups, and knowledge implies belief.
            if (nonempty && (cb[p] || ck[p])) ASSERT_TRUE(holds[p]);
            if (ck[p]) ASSERT_TRUE(cb[p]) << b.name << " t=" << m;
          }
          for (Agent i = 0; i < ctx.agents(); ++i) {
            const auto& k = ev.eval(fm::K(i, phi));
            const auto& bel = ev.eval(fm::B(g, i, phi));
            for (std::uint32_t p = 0; p < s.size(); ++p) {
              if (k[p]) ASSERT_TRUE(bel[p]);
              if (k[p]) ASSERT_TRUE(holds[p]);
              if (bel[p] && ev.resolve(p, g).contains(i)) ASSERT_TRUE(holds[p]);
            }
          }
        }
        // Containment: a common belief of a larger group is one of a smaller.
        for (auto [small, big] : {std::pair{groups[0], groups[1]},
                                  std::pair{groups[1], groups[2]}}) {
          const auto& wide = ev.eval(fm::CB(big, phi));
          const auto& narrow = ev.eval(fm::CB(small, phi));
          for (std::uint32_t p = 0; p < s.size(); ++p) {
            if (wide[p]) ASSERT_TRUE(narrow[p]) << phi->to_string();
          }
        }
      }
      for (std::uint32_t p = 0; p < s.size(); ++p) {
        ASSERT_TRUE(s.nonfaulty[p].subset_of(s.active(p)));
      }
    }
  }
}

TEST_P(Regression, FaultFlagsAreSound) {
  const Loaded& l = load(GetParam());
  const Context& ctx = *l.context;
  for (const BuiltProtocol& b : l.built) {
    for (int m = 0; m <= b.system->horizon(); ++m) {
      const Slice& s = b.system->slice(m);
      for (std::uint32_t p = 0; p < s.size(); ++p) {
        const FaultyCommitment& c = ctx.commitments()[s.commitment[p]];
        ASSERT_TRUE(s.failed[p].subset_of(c.faulty)) << b.name;
        ASSERT_EQ(s.nonfaulty[p], ctx.all() - c.faulty);
        for (Agent i = 0; i < ctx.agents(); ++i) {
          if (ctx.exchange().is_crashed(s.local(p, i))) {
            ASSERT_TRUE(s.failed[p].contains(i));
            ASSERT_LE(c.crash[i].round, m);
          }
        }
        if (m > 0) {
          const Slice& prev = b.system->slice(m - 1);
          const std::uint32_t q = s.parent[p];
          ASSERT_TRUE(prev.failed[q].subset_of(s.failed[p]));
          ASSERT_TRUE(prev.decided[q].subset_of(s.decided[p]));
          ASSERT_EQ(prev.commitment[q], s.commitment[p]);
        }
      }
    }
    FaultReconciliation rec = reconcile_semantic_faults(*b.system);
    for (const UnrealizedFault& u : rec.unrealized) {
      ASSERT_TRUE(u.agents.subset_of(ctx.commitments()[u.commitment].faulty));
      const Slice& last = b.system->slice(b.system->horizon());
      ASSERT_FALSE(u.agents.subset_of(last.failed[u.example_point]) &&
                   !u.agents.empty());
    }
  }
}

TEST_P(Regression, KnownFaultyAgentsAreFaulty) {
  const Loaded& l = load(GetParam());
  const Context& ctx = *l.context;
  // Receive omissions make innocent senders look faulty.
  if (l.scenario.exchange != "fault-report" || ctx.failures().omits_reception()) {
    GTEST_SKIP() << "only meaningful for fault-report with sending faults";
  }
  const auto& ex = testing::fr(ctx);
  for (const BuiltProtocol& b : l.built) {
    for (int m = 0; m <= b.system->horizon(); ++m) {
      const Slice& s = b.system->slice(m);
      for (std::uint32_t p = 0; p < s.size(); ++p) {
        for (Agent i = 0; i < ctx.agents(); ++i) {
          if (ex.is_crashed(s.local(p, i))) continue;
          ASSERT_TRUE(ex.state(s.local(p, i)).kfaulty.subset_of(s.failed[p]))
              << b.name << " t=" << m;
        }
      }
    }
  }
}

TEST_P(Regression, DominanceIsReflexiveAndTransitive) {
  const Loaded& l = load(GetParam());
  const std::size_t k = l.built.size();
  std::vector<std::vector<char>> le(k, std::vector<char>(k, 0));
  // covers[a][b]: wherever a decides within the horizon, so does b.
  std::vector<std::vector<char>> covers(k, std::vector<char>(k, 1));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      DominanceReport r =
          dominance(l.context, *l.built[a].protocol, *l.built[b].protocol);
      ASSERT_TRUE(r.exhaustive);
      le[a][b] = r.a_le_b;
      le[b][a] = r.b_le_a;
      covers[a][b] = r.inconclusive_b_le_a == 0;
      covers[b][a] = r.inconclusive_a_le_b == 0;
      if (a == b) {
        EXPECT_EQ(r.verdict(), "both") << l.built[a].name;
      }
    }
  }
  // "Or not at all" lets a protocol that stays silent sit between any two
  // others, so the middle protocol must decide wherever the first one does.
  std::size_t checked = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t c = 0; c < k; ++c) {
        if (le[a][b] && le[b][c] && covers[a][b]) {
          ++checked;
          EXPECT_TRUE(le[a][c]) << l.built[a].name << " <= " << l.built[b].name
                                << " <= " << l.built[c].name;
        }
      }
    }
  }
  EXPECT_GE(checked, k);
}

TEST_P(Regression, RebuildIsIdentical) {
  const Loaded& l = load(GetParam());
  auto again = l.scenario.make_context();
  for (std::size_t k = 0; k < l.built.size(); ++k) {
    const BuiltProtocol& first = l.built[k];
    BuiltProtocol second = build_protocol(l.scenario.protocols[k], again, 2);
    ASSERT_EQ(first.system->horizon(), second.system->horizon());
    for (int m = 0; m <= first.system->horizon(); ++m) {
      const Slice& x = first.system->slice(m);
      const Slice& y = second.system->slice(m);
      ASSERT_EQ(x.size(), y.size()) << first.name << " t=" << m;
      EXPECT_EQ(x.commitment, y.commitment);
      EXPECT_EQ(x.init, y.init);
      EXPECT_EQ(x.failed, y.failed);
      EXPECT_EQ(x.decided, y.decided);
      EXPECT_EQ(x.actions, y.actions);
      EXPECT_EQ(x.parent, y.parent);
      for (std::uint32_t p = 0; p < x.size(); ++p) {
        for (Agent i = 0; i < x.agents; ++i) {
          ASSERT_EQ(l.context->exchange().describe(x.local(p, i)),
                    again->exchange().describe(y.local(p, i)));
        }
      }
    }
    if (l.scenario.protocols[k].knowledge_based) {
      const auto& t1 = dynamic_cast<const ProtocolTable&>(*first.protocol);
      const auto& t2 = dynamic_cast<const ProtocolTable&>(*second.protocol);
      EXPECT_EQ(t1.canonical_text(*l.context), t2.canonical_text(*again));
    }
  }
}

TEST_P(Regression, KnowledgeBasedProtocolsSolveTheProblem) {
  const Loaded& l = load(GetParam());
  for (std::size_t k = 0; k < l.built.size(); ++k) {
    const ProtocolSpec& spec = l.scenario.protocols[k];
    if (!spec.knowledge_based) continue;
    SpecVerdict v = check_sba(*l.built[k].system, Selector::nonfaulty());
    EXPECT_TRUE(v.pass) << spec.name << " " << v.failed_clause;
    EXPECT_TRUE(check_valid(*l.built[k].system,
                            parse_formula("(implies (decides i v) (B N i (CB N (exists v))))"))
                    .valid);
  }
}

std::string param_name(const ::testing::TestParamInfo<std::string>& info) {
  std::string stem = std::filesystem::path(info.param).stem().string();
  std::replace(stem.begin(), stem.end(), '-', '_');
  return stem;
}

INSTANTIATE_TEST_SUITE_P(Scenarios, Regression,
                         ::testing::ValuesIn(regression_files()), param_name);

TEST(DominanceOrder, SilentProtocolBreaksTransitivity) {
  auto ctx = testing::context(3, FailureKind::kHardCrash, 1, "fip", 3);
  auto w1 = builtin_rule("wait-until", {{"k", 1}}, ctx);
  auto w2 = builtin_rule("wait-until", {{"k", 2}}, ctx);
  auto noop = builtin_rule("always-noop", {}, ctx);
  EXPECT_TRUE(dominance(ctx, *w2, *noop).a_le_b);
  EXPECT_TRUE(dominance(ctx, *noop, *w1).a_le_b);
  EXPECT_FALSE(dominance(ctx, *w2, *w1).a_le_b);
}

// Chains of agents that each learn a value for the first time at consecutive
// times. Every run is enumerated directly, without the point-level merging
// used by system construction.
struct ChainScan {
  std::size_t runs = 0;
  std::size_t chains = 0;
  std::string violation;
};

void scan_run(const Context& ctx, const RunPrefix& run, ChainScan& out) {
  const auto& ex = testing::fr(ctx);
  const int n = ctx.agents();
  const int last = run.length();
  for (Value v = 0; v < ctx.values(); ++v) {
    std::vector<Agent> chain;
    // Depth-first over one agent per time 0..last.
    auto dfs = [&](auto&& self, int m) -> void {
      if (!out.violation.empty()) return;
      if (m > last) {
        if (last < 2) return;
        ++out.chains;
        const int k = last - 1;
        std::vector<Agent> sorted = chain;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          out.violation = "repeated agent in chain";
        }
        for (int j = 0; j <= k - 1; ++j) {
          if (!run.faults[j].transmission.contains(chain[j])) {
            out.violation = "agent " + std::to_string(chain[j] + 1) +
                            " has no sending fault in round " +
                            std::to_string(j + 1) + " (chain length " +
                            std::to_string(chain.size()) + ")";
          }
        }
        return;
      }
      for (Agent i = 0; i < n; ++i) {
        const StateId s = run.states[m].locals[i];
        if (ex.is_crashed(s) || !(ex.state(s).fresh >> v & 1u)) continue;
        chain.push_back(i);
        self(self, m + 1);
        chain.pop_back();
      }
    };
    dfs(dfs, 0);
  }
}

ChainScan scan_all_runs(std::shared_ptr<const Context> ctx, const Protocol& protocol) {
  ChainScan out;
  const FailureModel& model = ctx->failures();
  for (std::uint32_t c = 0; c < ctx->commitments().size(); ++c) {
    const FaultyCommitment& fc = ctx->commitments()[c];
    std::vector<std::vector<RoundBehavior>> per_round;
    for (int round = 1; round <= ctx->horizon(); ++round) {
      per_round.push_back(enumerate_round_behaviors(model, ctx->agents(), fc, round));
    }
    for (const auto& inits : ctx->init_vectors()) {
      std::vector<RoundBehavior> prefix;
      auto extend = [&](auto&& self, int round) -> void {
        if (!out.violation.empty()) return;
        RunPrefix run = replay(*ctx, protocol, inits, c, prefix);
        ++out.runs;
        scan_run(*ctx, run, out);
        if (round > ctx->horizon()) return;
        for (const RoundBehavior& b : per_round[round - 1]) {
          prefix.push_back(b);
          self(self, round + 1);
          prefix.pop_back();
        }
      };
      extend(extend, 1);
    }
  }
  return out;
}

TEST(FaultySequences, EveryEarlyChainMemberIsFaulty) {
  for (auto [t, horizon] : {std::pair{1, 3}, std::pair{2, 2}}) {
    auto ctx = testing::context(3, FailureKind::kSendOmit, t, "fault-report", horizon);
    auto pprime = builtin_rule("fault-report-pprime", {{"t", t}}, ctx);
    ChainScan scan = scan_all_runs(ctx, *pprime);
    EXPECT_EQ(scan.violation, "") << "t=" << t;
    EXPECT_GT(scan.chains, 0u);
    EXPECT_GT(scan.runs, 1000u);
    std::cout << "t=" << t << " T=" << horizon << ": " << scan.runs
              << " run prefixes, " << scan.chains << " chains\n";
  }
}

}  // namespace
}  // namespace sbamc
