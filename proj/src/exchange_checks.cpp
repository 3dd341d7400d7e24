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

#include "sbamc/exchange_checks.hpp"

#include <map>
#include <set>

namespace sbamc {

MemoryFactorization fip_factorization() { return {{"history"}, {}, ""}; }

MemoryFactorization fault_report_factorization() {
  return {{"init", "known", "new", "kfaulty", "time"}, {"done"}, "done"};
}

std::string to_string(ExchangeVerdict::Status s) {
  switch (s) {
    case ExchangeVerdict::Status::kHolds: return "holds";
    case ExchangeVerdict::Status::kFails: return "fails";
    case ExchangeVerdict::Status::kNotApplicable: return "not-applicable";
  }
  return "?";
}

namespace {

using Projection = std::vector<std::uint64_t>;

Projection project(const Exchange& ex, StateId s,
                   const std::vector<std::string>& fields) {
  Projection out;
  out.reserve(fields.size());
  for (const std::string& f : fields) out.push_back(ex.field(s, f));
  return out;
}

std::vector<Action> all_actions(const Exchange& ex) {
  std::vector<Action> out{Action::noop()};
  for (Value v = 0; v < ex.values(); ++v) out.push_back(Action::decide(v));
  return out;
}

std::string action_text(Action a) {
  return a.is_decide() ? "decide#" + std::to_string(a.value) : "noop";
}

std::string messages_text(const Exchange& ex, const std::vector<Message>& ms) {
  std::string out = "(";
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (k) out += ",";
    out += ex.describe_message(ms[k]);
  }
  return out + ")";
}

std::string input_text(const Exchange& ex, const ExchangeInput& in) {
  return "agent " + std::to_string(in.agent + 1) + " at " +
         ex.describe(in.state) + " receiving " + messages_text(ex, in.received);
}

ExchangeVerdict fail(std::string witness) {
  return {ExchangeVerdict::Status::kFails, std::move(witness)};
}

}  // namespace

std::vector<ExchangeInput> reachable_inputs(const InterpretedSystem& system) {
  const Context& ctx = system.context();
  Exchange& ex = ctx.exchange();
  const int n = ctx.agents();
  std::set<std::tuple<Agent, StateId, std::vector<std::uint64_t>>> seen;
  std::vector<ExchangeInput> out;
  std::vector<std::vector<Message>> sent(n, std::vector<Message>(n));
  std::vector<Message> received(n);
  for (int m = 0; m < system.horizon(); ++m) {
    const Slice& s = system.slice(m);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      const FaultyCommitment& c = ctx.commitments()[s.commitment[p]];
      for (Agent i = 0; i < n; ++i) ex.send(i, s.local(p, i), s.action(p, i), sent[i]);
      for (Agent j = 0; j < n; ++j) {
        if (ex.is_crashed(s.local(p, j))) continue;
        for (const ColumnChoice& col :
             column_choices(ctx.failures(), n, c, m + 1, j)) {
          std::vector<std::uint64_t> key;
          for (Agent i = 0; i < n; ++i) {
            const bool drop = col.transmit.contains(i) || col.receive.contains(i);
            received[i] = drop ? Message::bottom() : sent[i][j];
            key.push_back(received[i].payload);
          }
          if (seen.emplace(j, s.local(p, j), std::move(key)).second) {
            out.push_back(ExchangeInput{j, s.local(p, j), received});
          }
        }
      }
    }
  }
  return out;
}

ExchangeVerdict check_no_decision_info(Exchange& ex,
                                       const std::vector<ExchangeInput>& inputs) {
  const int n = ex.agents();
  std::vector<Message> a(n), b(n);
  for (const ExchangeInput& in : inputs) {
    ex.send(in.agent, in.state, Action::decide(0), a);
    const StateId base = ex.update(in.agent, in.state, Action::decide(0), in.received);
    for (Value v = 1; v < ex.values(); ++v) {
      ex.send(in.agent, in.state, Action::decide(v), b);
      if (a != b) {
        return fail("send differs for decide#0 and decide#" + std::to_string(v) +
                    " at " + input_text(ex, in));
      }
      if (ex.update(in.agent, in.state, Action::decide(v), in.received) != base) {
        return fail("update differs for decide#0 and decide#" +
                    std::to_string(v) + " at " + input_text(ex, in));
      }
    }
  }
  return {};
}

ExchangeVerdict check_no_action_info(Exchange& ex,
                                     const MemoryFactorization* fact,
                                     const std::vector<ExchangeInput>& inputs) {
  if (fact == nullptr) {
    return {ExchangeVerdict::Status::kNotApplicable, "no memory factorization"};
  }
  const int n = ex.agents();
  const std::vector<Action> actions = all_actions(ex);
  // (agent, message memory) -> first sent vector and its origin
  std::map<std::pair<Agent, Projection>, std::pair<std::vector<Message>, std::string>>
      sends;
  // (agent, message memory, received) -> next message memory
  std::map<std::tuple<Agent, Projection, std::vector<Message>>,
           std::pair<Projection, std::string>>
      delta1;
  // (agent, action memory, action) -> next action memory
  std::map<std::tuple<Agent, Projection, int>, std::pair<Projection, std::string>>
      delta2;
  std::vector<Message> out(n);
  for (const ExchangeInput& in : inputs) {
    const Projection sm = project(ex, in.state, fact->message);
    const Projection dm = project(ex, in.state, fact->action);
    for (Action a : actions) {
      const std::string where = input_text(ex, in) + " with " + action_text(a);
      ex.send(in.agent, in.state, a, out);
      auto [it, fresh] = sends.try_emplace({in.agent, sm}, out, where);
      if (!fresh && it->second.first != out) {
        return fail("send is not a function of the message memory: " +
                    it->second.second + " vs " + where);
      }
      const StateId next = ex.update(in.agent, in.state, a, in.received);
      const Projection ns = project(ex, next, fact->message);
      const Projection nd = project(ex, next, fact->action);
      auto [i1, f1] = delta1.try_emplace({in.agent, sm, in.received}, ns, where);
      if (!f1 && i1->second.first != ns) {
        return fail("message memory update depends on more than memory and "
                    "messages: " + i1->second.second + " vs " + where);
      }
      auto [i2, f2] = delta2.try_emplace({in.agent, dm, a.value}, nd, where);
      if (!f2 && i2->second.first != nd) {
        return fail("action memory update depends on more than memory and "
                    "action: " + i2->second.second + " vs " + where);
      }
    }
  }
  return {};
}

ExchangeVerdict check_records_decision_info(
    Exchange& ex, const MemoryFactorization* fact,
    const std::vector<ExchangeInput>& inputs) {
  if (fact == nullptr) {
    return {ExchangeVerdict::Status::kNotApplicable, "no memory factorization"};
  }
  auto decided = [&](StateId s) {
    return !fact->decided_field.empty() && ex.field(s, fact->decided_field) != 0;
  };
  for (Agent i = 0; i < ex.agents(); ++i) {
    for (Value v = 0; v < ex.values(); ++v) {
      const StateId s = ex.initial_state(i, v);
      if (decided(s)) {
        return fail("initial state " + ex.describe(s) + " of agent " +
                    std::to_string(i + 1) + " is marked decided");
      }
    }
  }
  for (const ExchangeInput& in : inputs) {
    const bool before = decided(in.state);
    for (Action a : all_actions(ex)) {
      const StateId next = ex.update(in.agent, in.state, a, in.received);
      if (ex.is_crashed(next)) continue;
      const bool after = decided(next);
      const bool want = before || a.is_decide();
      if (after != want) {
        return fail(std::string(want ? "decided marker not set" : "decided marker set") +
                    " after " + action_text(a) + " at " + input_text(ex, in) +
                    " giving " + ex.describe(next));
      }
    }
  }
  return {};
}

}  // namespace sbamc
