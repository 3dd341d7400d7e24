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

#include "sbamc/speccheck.hpp"

#include "sbamc/evaluator.hpp"

namespace sbamc {

namespace {

AgentSet resolve(const Context& ctx, const Slice& s, std::uint32_t p,
                 const Selector& sel) {
  switch (sel.kind) {
    case Selector::Kind::kN: return s.nonfaulty[p];
    case Selector::Kind::kA: return s.active(p);
    case Selector::Kind::kAgt: return ctx.all();
    case Selector::Kind::kExplicit: return sel.members;
  }
  return {};
}

void record(ClauseResult& c, int m, std::uint32_t p, Agent i, std::string detail) {
  if (!c.pass) return;
  c.pass = false;
  c.time = m;
  c.point = p;
  c.agent = i;
  c.detail = std::move(detail);
}

}  // namespace

SpecVerdict check_sba(const InterpretedSystem& system, const Selector& sel,
                      bool unique_for_selector) {
  const Context& ctx = system.context();
  const int n = ctx.agents();
  SpecVerdict v;
  v.horizon = system.horizon();
  for (int m = 0; m <= system.horizon(); ++m) {
    const Slice& s = system.slice(m);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      const AgentSet members = resolve(ctx, s, p, sel);
      const auto& inits = ctx.init_vectors()[s.init[p]];
      for (Agent i = 0; i < n; ++i) {
        const Action a = s.action(p, i);
        if (!a.is_decide()) continue;
        const std::string who = "agent " + std::to_string(i + 1) + " decides " +
                                to_string(a, ctx) + " at time " +
                                std::to_string(m);
        if (s.decided[p].contains(i) &&
            (!unique_for_selector || members.contains(i))) {
          record(v.unique_decision, m, p, i, who + " after an earlier decision");
        }
        if (!members.contains(i)) continue;
        members.for_each([&](Agent j) {
          if (s.action(p, j) != a) {
            record(v.simultaneous_agreement, m, p, i,
                   who + " but agent " + std::to_string(j + 1) + " performs " +
                       to_string(s.action(p, j), ctx));
          }
        });
        bool present = false;
        for (Value x : inits) present = present || x == a.value;
        if (!present) {
          record(v.validity, m, p, i, who + " which is nobody's initial value");
        }
      }
    }
  }
  if (!v.unique_decision.pass) {
    v.failed_clause = "unique-decision";
  } else if (!v.simultaneous_agreement.pass) {
    v.failed_clause = "simultaneous-agreement";
  } else if (!v.validity.pass) {
    v.failed_clause = "validity";
  }
  v.pass = v.failed_clause.empty();
  return v;
}

ValidityResult check_valid(const InterpretedSystem& system,
                           const FormulaPtr& schema) {
  const Context& ctx = system.context();
  ValidityResult r;
  const std::vector<Instance> instances = instantiate(schema, ctx);
  r.instances = instances.size();
  for (int m = 0; m <= system.horizon(); ++m) {
    const Slice& s = system.slice(m);
    Evaluator ev(ctx, s);
    for (const Instance& inst : instances) {
      const auto& truth = ev.eval(inst.formula);
      for (std::uint32_t p = 0; p < s.size(); ++p) {
        if (truth[p]) continue;
        r.valid = false;
        r.binding = inst.binding;
        r.instance = inst.formula->to_string();
        r.time = m;
        r.point = p;
        return r;
      }
    }
  }
  return r;
}

TransferReport check_sba_transfer(const InterpretedSystem& system,
                                  const Selector& s, const Selector& t) {
  const Context& ctx = system.context();
  TransferReport r;
  r.containment = check_valid(system, fm::subset(s, t)).valid;
  r.sba_s = check_sba(system, s);
  r.sba_t = check_sba(system, t);
  r.agree = r.sba_s.pass == r.sba_t.pass;
  if (!r.containment) {
    r.note = "precondition failed: " + s.to_string() + " is not contained in " +
             t.to_string() + " at every point";
    return r;
  }
  const bool pair = s.kind == Selector::Kind::kN && t.kind == Selector::Kind::kA;
  if (!pair) {
    r.note = "no equivalence expected for this pair of sets";
  } else if (!ctx.nonfaulty_nonempty()) {
    r.note = "precondition failed: N may be empty (t = n), equivalence not asserted";
  } else {
    r.equivalence_expected = true;
    r.note = r.agree ? "SBA(N) and SBA(A) agree"
                     : "SBA(N) and SBA(A) disagree despite N being nonempty";
  }
  return r;
}

}  // namespace sbamc
