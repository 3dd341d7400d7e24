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

#include "sbamc/kernel.hpp"

#include <string>

namespace sbamc {

Action protocol_action(const Context& context, const Protocol& protocol,
                       Agent i, StateId s) {
  if (context.exchange().is_crashed(s)) return Action::noop();
  return protocol.act(i, s);
}

StepResult step(const Context& context, const Protocol& protocol,
                const GlobalState& state, const RoundBehavior& behavior) {
  const int n = context.agents();
  const FaultyCommitment& commitment =
      context.commitments().at(state.commitment);
  for (Agent i = 0; i < n; ++i) {
    const bool perturbed = !behavior.transmit_drop[i].empty() ||
                           !behavior.receive_drop[i].empty() ||
                           behavior.crash_state.contains(i);
    if (perturbed && !commitment.faulty.contains(i)) {
      throw IntegrityError("behavior perturbs agent " + std::to_string(i + 1) +
                           " outside the faulty commitment");
    }
  }

  Exchange& ex = context.exchange();
  StepResult r;
  r.actions.resize(n);
  r.sent.assign(n, std::vector<Message>(n));
  r.received.assign(n, std::vector<Message>(n));
  for (Agent i = 0; i < n; ++i) {
    r.actions[i] = protocol_action(context, protocol, i, state.locals[i]);
    ex.send(i, state.locals[i], r.actions[i], r.sent[i]);
  }
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      const Message m = r.sent[i][j];
      Message out = m;
      if (behavior.transmit_drop[i].contains(j)) out = Message::bottom();
      if (out != m) r.faults.transmission.insert(i);
      Message in = out;
      if (behavior.receive_drop[j].contains(i)) in = Message::bottom();
      if (in != out) r.faults.reception.insert(j);
      r.received[j][i] = in;
    }
  }
  r.next.locals.resize(n);
  for (Agent j = 0; j < n; ++j) {
    const StateId updated =
        ex.update(j, state.locals[j], r.actions[j], r.received[j]);
    const StateId perturbed =
        behavior.crash_state.contains(j) ? Exchange::kCrashed : updated;
    if (perturbed != updated) r.faults.state.insert(j);
    r.next.locals[j] = perturbed;
  }
  r.next.commitment = state.commitment;
  r.next.env = state.env;
  r.next.time = state.time + 1;
  return r;
}

int RunPrefix::decision_time(Agent i) const {
  for (std::size_t m = 0; m < actions.size(); ++m) {
    if (actions[m][i].is_decide()) return static_cast<int>(m);
  }
  return -1;
}

AgentSet RunPrefix::failed_by(int m) const {
  AgentSet out;
  for (int k = 0; k < m && k < static_cast<int>(faults.size()); ++k) {
    out |= faults[k].any();
  }
  return out;
}

GlobalState initial_global_state(const Context& context,
                                 std::span<const Value> inits,
                                 std::uint32_t commitment) {
  GlobalState g;
  g.commitment = commitment;
  g.locals.resize(context.agents());
  for (Agent i = 0; i < context.agents(); ++i) {
    g.locals[i] = context.exchange().initial_state(i, inits[i]);
  }
  return g;
}

RunPrefix replay(const Context& context, const Protocol& protocol,
                 std::span<const Value> inits, std::uint32_t commitment,
                 std::span<const RoundBehavior> behaviors) {
  RunPrefix run;
  run.inits.assign(inits.begin(), inits.end());
  run.commitment = commitment;
  run.behaviors.assign(behaviors.begin(), behaviors.end());
  run.states.push_back(initial_global_state(context, inits, commitment));
  for (const RoundBehavior& b : behaviors) {
    StepResult r = step(context, protocol, run.states.back(), b);
    run.actions.push_back(std::move(r.actions));
    run.faults.push_back(r.faults);
    run.states.push_back(std::move(r.next));
  }
  std::vector<Action> last(context.agents());
  for (Agent i = 0; i < context.agents(); ++i) {
    last[i] = protocol_action(context, protocol, i, run.states.back().locals[i]);
  }
  run.actions.push_back(std::move(last));
  return run;
}

ActiveSets classify_sets(const Context& context, const RunPrefix& run, int m,
                         const FaultyCommitment& commitment) {
  if (m < 0 || m > run.length()) {
    throw std::out_of_range("time beyond the run prefix");
  }
  const AgentSet all = context.all();
  const AgentSet ever = run.failed_by(run.length());
  if (!ever.subset_of(commitment.faulty)) {
    throw IntegrityError("agents " + (ever - commitment.faulty).to_string() +
                         " have faults but are outside the commitment");
  }
  return ActiveSets{all - run.failed_by(m), all - commitment.faulty};
}

}  // namespace sbamc
