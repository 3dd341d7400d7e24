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

#include "sbamc/counterexample.hpp"

#include <algorithm>

#include "sbamc/dot.hpp"
#include "sbamc/fault_report.hpp"

namespace sbamc {
namespace {

constexpr int kAgents = 4;
constexpr int kT = 3;
constexpr int kHorizon = 5;

std::string join_sets(const std::vector<AgentSet>& sets) {
  std::string out;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (k > 0) out += " ";
    out += sets[k].to_string();
  }
  return out;
}

std::string time_text(int t) { return t < 0 ? "never" : std::to_string(t); }

class FactList {
 public:
  void add(std::string name, std::string expected, std::string actual) {
    const bool ok = expected == actual;
    facts_.push_back(Fact{std::move(name), std::move(expected),
                          std::move(actual), ok});
  }
  void check(std::string name, std::string expected, std::string actual,
             bool ok) {
    facts_.push_back(Fact{std::move(name), std::move(expected),
                          std::move(actual), ok});
  }
  std::vector<Fact> take() { return std::move(facts_); }

 private:
  std::vector<Fact> facts_;
};

std::string witness_text(const DominanceWitness& w) {
  std::string inits;
  for (Value v : w.inits) inits += std::to_string(v);
  return "agent " + std::to_string(w.agent + 1) + " decides at " +
         time_text(w.time_a) + " under P and at " + time_text(w.time_b) +
         " under P' (inits " + inits + ")";
}

}  // namespace

bool CounterexampleReport::ok() const {
  return std::all_of(facts.begin(), facts.end(),
                     [](const Fact& f) { return f.ok; });
}

std::vector<RoundBehavior> counterexample_behaviors(int horizon) {
  std::vector<RoundBehavior> behaviors(horizon);
  if (horizon > 0) {
    for (Agent i = 0; i < 3; ++i) behaviors[0].transmit_drop[i] = AgentSet::single(0);
  }
  return behaviors;
}

CounterexampleReport reproduce_counterexample(int jobs) {
  CounterexampleReport report;
  report.context = Context::make(kAgents, {0, 1},
                                 FailureModel{FailureKind::kSendOmit, kT},
                                 "fault-report", kHorizon);
  const Context& ctx = *report.context;
  const auto& fr = dynamic_cast<const FaultReportExchange&>(ctx.exchange());
  FactList facts;

  report.p = construct_implementation(report.context,
                                      DecisionCondition::kBnCbn, jobs);
  report.p_prime =
      builtin_rule("fault-report-pprime", {{"t", kT}}, report.context);
  const Protocol& p = *report.p.table;
  const Protocol& pp = *report.p_prime;
  const InterpretedSystem& system = *report.p.system;

  FaultyCommitment faulty;
  faulty.faulty = AgentSet(0b0111);
  const std::uint32_t commitment = ctx.commitment_index(faulty);
  const std::vector<Value> inits(kAgents, 0);
  const std::vector<RoundBehavior> behaviors = counterexample_behaviors(kHorizon);
  report.run_p = replay(ctx, p, inits, commitment, behaviors);
  report.run_p_prime = replay(ctx, pp, inits, commitment, behaviors);
  const RunPrefix& r = report.run_p;
  const RunPrefix& rp = report.run_p_prime;
  const AgentSet nonfaulty = ctx.all() - faulty.faulty;

  auto kfaulty = [&](const RunPrefix& run, int m, Agent i) {
    return fr.state(run.states[m].locals[i]).kfaulty;
  };

  bool located = true;
  for (int m = 0; m <= kHorizon; ++m) located = located && system.locate(r, m).has_value();
  facts.check("r is a run of the P system", "located at times 0..5",
              located ? "located at times 0..5" : "missing", located);

  facts.add("kfaulty of agent 1 at time 1 in r", "{1,2,3}",
            kfaulty(r, 1, 0).to_string());
  facts.add("P: agent 1 decides at time 1 in r", "1",
            time_text(r.decision_time(0)));
  facts.add("P: kfaulty of agents 2, 3, 4 at time 2 in r", "{} {} {}",
            join_sets({kfaulty(r, 2, 1), kfaulty(r, 2, 2), kfaulty(r, 2, 3)}));
  {
    std::string deciding;
    nonfaulty.for_each([&](Agent i) {
      if (r.decision_time(i) == 2) deciding += std::to_string(i + 1) + " ";
    });
    facts.add("P: no nonfaulty agent decides at time 2 in r", "none",
              deciding.empty() ? "none" : deciding);
  }
  facts.add("P: agent 4, the sole nonfaulty agent, decides at time 3 in r",
            "3", time_text(r.decision_time(3)));

  facts.add("P': agent 1 acts at time 1 in r", "noop",
            to_string(rp.actions[1][0], ctx));
  {
    const StepResult round2 = step(ctx, pp, rp.states[1], behaviors[1]);
    const FrLocalState& s1 = fr.state(rp.states[1].locals[0]);
    const std::string expected = fr.describe_message(
        FrMessage::encode(FrMessage{s1.fresh, AgentSet(0b0111)}));
    std::string actual;
    for (Agent j = 1; j < kAgents; ++j) {
      if (j > 1) actual += " ";
      actual += fr.describe_message(round2.sent[0][j]);
    }
    facts.add("P': round-2 messages of agent 1 to agents 2, 3, 4 in r",
              expected + " " + expected + " " + expected, actual);
  }
  facts.add("P': kfaulty of agents 2, 3, 4 at time 2 in r",
            "{1,2,3} {1,2,3} {1,2,3}",
            join_sets({kfaulty(rp, 2, 1), kfaulty(rp, 2, 2), kfaulty(rp, 2, 3)}));
  facts.add("P': agent 4 decides at time 2 in r", "2",
            time_text(rp.decision_time(3)));
  {
    const int a = r.decision_time(3), b = rp.decision_time(3);
    facts.check("r: agent 4 decides earlier under P' than under P",
                "P' before P",
                "P " + time_text(a) + ", P' " + time_text(b),
                a >= 0 && b >= 0 && b < a);
  }
  {
    const int a = r.decision_time(0), b = rp.decision_time(0);
    facts.check("r: agent 1 decides earlier under P than under P'",
                "P before P'",
                "P " + time_text(a) + ", P' " + time_text(b),
                a >= 0 && b >= 0 && a < b);
  }

  report.failure_free = failure_free_decision_times(ctx, p);
  {
    bool all_three = true;
    std::string seen;
    for (const DecisionTimes& d : report.failure_free) {
      for (int t : d.times) {
        all_three = all_three && t == kT;
        const std::string text = time_text(t);
        if (seen.find(text) == std::string::npos) seen += (seen.empty() ? "" : ",") + text;
      }
    }
    facts.check("P: failure-free decision time, every agent and input", "3",
                seen, all_three);
  }

  report.all_agents = dominance(report.context, p, pp, AgentsMode::kAll);
  facts.add("dominance of P and P', all agents", "incomparable",
            report.all_agents.verdict());
  {
    const auto& w = report.all_agents.refutes_a_le_b;
    facts.check("witness that P <= P' fails", "P' decides strictly earlier",
                w ? witness_text(*w) : "none",
                w && w->time_a >= 0 && w->time_b >= 0 && w->time_b < w->time_a);
  }
  {
    const auto& w = report.all_agents.refutes_b_le_a;
    facts.check("witness that P' <= P fails", "P decides strictly earlier",
                w ? witness_text(*w) : "none",
                w && w->time_a >= 0 && w->time_b >= 0 && w->time_a < w->time_b);
  }

  report.nonfaulty_only = dominance(report.context, p, pp,
                                    AgentsMode::kNonfaultyOnly,
                                    DominanceStop::kFirstRefutation);
  {
    const auto& w = report.nonfaulty_only.refutes_a_le_b;
    const bool agent_nonfaulty =
        w && !ctx.commitments()[w->commitment].faulty.contains(w->agent);
    facts.check("nonfaulty agents only: P <= P' fails",
                "refuted by a nonfaulty agent",
                w ? witness_text(*w) : report.nonfaulty_only.verdict(),
                agent_nonfaulty && w->time_b >= 0 && w->time_b < w->time_a);
  }

  // Failure-free run with mixed inputs, viewed at time 2.
  {
    const std::vector<Value> mixed{0, 0, 1, 1};
    const RunPrefix run =
        replay(ctx, p, mixed, ctx.commitment_index(FaultyCommitment{}),
               std::vector<RoundBehavior>(2));
    const auto point = system.locate(run, 2);
    facts.check("mixed failure-free run is in the P system at time 2", "located",
                point ? "located" : "missing", point.has_value());
    if (point) {
      Evaluator ev(ctx, system.slice(2));
      std::string holding;
      for (Agent i = 0; i < kAgents; ++i) {
        for (int label : ctx.value_labels()) {
          const auto f = fm::B(Selector::nonfaulty(), i,
                               fm::CB(Selector::nonfaulty(), fm::exists(label)));
          if (ev.holds(*point, f)) {
            holding += "(" + std::to_string(i + 1) + "," + std::to_string(label) + ")";
          }
        }
      }
      facts.add("mixed run, time 2: no agent believes common belief of any value",
                "none", holding.empty() ? "none" : holding);
      for (int label : ctx.value_labels()) {
        MixedRunChain c;
        c.excluded = label;
        c.chain = ev.witness_chain(*point, Selector::nonfaulty(),
                                   fm::neg(fm::exists(label)));
        c.dot = chain_to_dot(system, 2, c.chain,
                             "chain to a run where nobody starts with " +
                                 std::to_string(label));
        facts.check("mixed run, time 2: chain to a run without value " +
                        std::to_string(label),
                    "found",
                    c.chain.found ? "found, " +
                                        std::to_string(c.chain.points.size()) +
                                        " runs"
                                  : "not found",
                    c.chain.found);
        report.chains.push_back(std::move(c));
      }
    }
  }

  report.facts = facts.take();
  return report;
}

}  // namespace sbamc
