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

#include "sbamc/report.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "sbamc/protocol.hpp"

namespace sbamc::report {

namespace {

json agents_json(AgentSet s) {
  json out = json::array();
  s.for_each([&](Agent i) { out.push_back(i + 1); });
  return out;
}

json labels(const Context& context, const std::vector<Value>& values) {
  json out = json::array();
  for (Value v : values) out.push_back(context.value_labels().at(v));
  return out;
}

json time_json(int t) { return t < 0 ? json(nullptr) : json(t); }

json clause(const InterpretedSystem& system, const ClauseResult& c) {
  json out = {{"pass", c.pass}};
  if (!c.pass) {
    out["detail"] = c.detail;
    out["agent"] = c.agent < 0 ? json(nullptr) : json(c.agent + 1);
    out["point"] = point(system, c.time, c.point);
  }
  return out;
}

json behaviors_json(const Context& context,
                    const std::vector<RoundBehavior>& behaviors) {
  json out = json::array();
  for (const RoundBehavior& b : behaviors) {
    out.push_back(b.to_string(context.agents()));
  }
  return out;
}

json witness(const Context& context, const DominanceWitness& w) {
  return {
      {"inits", labels(context, w.inits)},
      {"commitment",
       context.commitments().at(w.commitment).to_string(context.failures())},
      {"rounds", behaviors_json(context, w.behaviors)},
      {"agent", w.agent + 1},
      {"time_a", time_json(w.time_a)},
      {"time_b", time_json(w.time_b)},
  };
}

json optional_witness(const Context& context,
                      const std::optional<DominanceWitness>& w) {
  return w ? witness(context, *w) : json(nullptr);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

json point(const InterpretedSystem& system, int m, std::uint32_t p) {
  const Context& ctx = system.context();
  const Slice& s = system.slice(m);
  json locals = json::array();
  for (Agent i = 0; i < ctx.agents(); ++i) {
    locals.push_back(ctx.exchange().describe(s.local(p, i)));
  }
  return {
      {"time", m},
      {"index", p},
      {"inits", labels(ctx, ctx.init_vectors().at(s.init[p]))},
      {"commitment",
       ctx.commitments().at(s.commitment[p]).to_string(ctx.failures())},
      {"faulty", agents_json(ctx.all() - s.nonfaulty[p])},
      {"failed_so_far", agents_json(s.failed[p])},
      {"decided_before", agents_json(s.decided[p])},
      {"locals", locals},
  };
}

json system_stats(const InterpretedSystem& system) {
  const Context& ctx = system.context();
  json slices = json::array();
  for (int m = 0; m <= system.horizon(); ++m) slices.push_back(system.slice(m).size());
  const FaultReconciliation rec = reconcile_semantic_faults(system);
  json unrealized = json::array();
  for (const UnrealizedFault& u : rec.unrealized) {
    unrealized.push_back(
        {{"commitment",
          ctx.commitments().at(u.commitment).to_string(ctx.failures())},
         {"agents", agents_json(u.agents)}});
  }
  return {
      {"protocol", system.protocol().name()},
      {"agents", ctx.agents()},
      {"values", ctx.value_labels()},
      {"failure_model", to_string(ctx.failures().kind)},
      {"t", ctx.failures().t},
      {"exchange", ctx.exchange().name()},
      {"horizon", system.horizon()},
      {"commitments", ctx.commitments().size()},
      {"initial_vectors", ctx.init_vectors().size()},
      {"slice_sizes", slices},
      {"points", system.point_count()},
      {"unrealized_faults", unrealized},
      {"warnings", ctx.warnings()},
  };
}

json verdict(const InterpretedSystem& system, const SpecVerdict& v) {
  return {
      {"pass", v.pass},
      {"scope", "up to horizon " + std::to_string(v.horizon)},
      {"failed_clause", v.failed_clause},
      {"unique_decision", clause(system, v.unique_decision)},
      {"simultaneous_agreement", clause(system, v.simultaneous_agreement)},
      {"validity", clause(system, v.validity)},
  };
}

json transfer(const InterpretedSystem& system, const TransferReport& r) {
  return {
      {"containment", r.containment},
      {"sba_s", verdict(system, r.sba_s)},
      {"sba_t", verdict(system, r.sba_t)},
      {"equivalence_expected", r.equivalence_expected},
      {"agree", r.agree},
      {"note", r.note},
  };
}

json validity(const InterpretedSystem& system, const ValidityResult& r) {
  json out = {{"valid", r.valid}, {"instances", r.instances}};
  if (!r.valid) {
    out["binding"] = r.binding;
    out["instance"] = r.instance;
    out["point"] = point(system, r.time, r.point);
  }
  return out;
}

json implementation_check(const Context& context,
                          const ImplementationCheck& c) {
  json out = {{"ok", c.ok}};
  if (!c.ok) {
    out["message"] = c.message;
    out["time"] = c.time;
    out["point"] = c.point;
    out["agent"] = c.agent + 1;
    out["expected"] = to_string(c.expected, context);
    out["actual"] = to_string(c.actual, context);
  }
  return out;
}

json protocol_table(const Context& context, const ProtocolTable& table) {
  return {
      {"name", table.name()},
      {"entries", table.size()},
      {"lines", lines_of(table.canonical_text(context))},
  };
}

json dominance(const Context& context, const DominanceReport& r) {
  return {
      {"verdict", r.verdict()},
      {"exhaustive", r.exhaustive},
      {"a_le_b", r.a_le_b},
      {"b_le_a", r.b_le_a},
      {"refutes_a_le_b", optional_witness(context, r.refutes_a_le_b)},
      {"refutes_b_le_a", optional_witness(context, r.refutes_b_le_a)},
      {"inconclusive_a_le_b", r.inconclusive_a_le_b},
      {"inconclusive_b_le_a", r.inconclusive_b_le_a},
      {"inconclusive_example_a_le_b",
       optional_witness(context, r.inconclusive_example_a_le_b)},
      {"inconclusive_example_b_le_a",
       optional_witness(context, r.inconclusive_example_b_le_a)},
      {"joint_points", r.joint_points},
  };
}

json chain(const InterpretedSystem& system, int m, const WitnessChain& c) {
  json out = {{"found", c.found}};
  if (!c.found) return out;
  json points = json::array();
  for (std::uint32_t p : c.points) points.push_back(point(system, m, p));
  json links = json::array();
  for (Agent i : c.links) links.push_back(i + 1);
  out["length"] = c.links.size();
  out["points"] = points;
  out["links"] = links;
  return out;
}

json counterexample(const CounterexampleReport& r) {
  const Context& ctx = *r.context;
  json facts = json::array();
  for (const Fact& f : r.facts) {
    facts.push_back({{"name", f.name},
                     {"expected", f.expected},
                     {"actual", f.actual},
                     {"ok", f.ok}});
  }
  json failure_free = json::array();
  for (const DecisionTimes& d : r.failure_free) {
    json times = json::array();
    for (int t : d.times) times.push_back(time_json(t));
    failure_free.push_back({{"inits", labels(ctx, d.inits)}, {"times", times}});
  }
  json chains = json::array();
  for (const MixedRunChain& c : r.chains) {
    json entry = chain(*r.p.system, 2, c.chain);
    entry["excluded_value"] = c.excluded;
    chains.push_back(entry);
  }
  json run_times = json::object();
  for (Agent i = 0; i < ctx.agents(); ++i) {
    run_times[std::to_string(i + 1)] = {
        {"P", time_json(r.run_p.decision_time(i))},
        {"P'", time_json(r.run_p_prime.decision_time(i))}};
  }
  return {
      {"ok", r.ok()},
      {"agents", ctx.agents()},
      {"t", ctx.failures().t},
      {"failure_model", to_string(ctx.failures().kind)},
      {"exchange", ctx.exchange().name()},
      {"horizon", ctx.horizon()},
      {"facts", facts},
      {"run_r_decision_times", run_times},
      {"p_slice_sizes",
       [&] {
         json s = json::array();
         for (int m = 0; m <= r.p.system->horizon(); ++m) {
           s.push_back(r.p.system->slice(m).size());
         }
         return s;
       }()},
      {"p_table_entries", r.p.table->size()},
      {"dominance_all_agents", dominance(ctx, r.all_agents)},
      {"dominance_nonfaulty_only", dominance(ctx, r.nonfaulty_only)},
      {"failure_free_decision_times", failure_free},
      {"mixed_run_chains", chains},
  };
}

}  // namespace sbamc::report
