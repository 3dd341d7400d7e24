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

#include "sbamc/fault_report.hpp"

#include <string>

namespace sbamc {
namespace {

std::string value_set(std::uint32_t mask) {
  std::string out = "{";
  bool first = true;
  for (int v = 0; v < kMaxValues; ++v) {
    if (!((mask >> v) & 1u)) continue;
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}

}  // namespace

FaultReportExchange::FaultReportExchange(int agents, int values)
    : Exchange(agents, values) {
  states_.push_back(FrLocalState{});  // slot for kCrashed
}

std::uint64_t FaultReportExchange::pack(const FrLocalState& s) {
  return std::uint64_t(s.init) | (std::uint64_t(s.known) << 4) |
         (std::uint64_t(s.fresh) << 12) |
         (std::uint64_t(s.kfaulty.bits()) << 20) |
         (std::uint64_t(s.done) << 28) | (std::uint64_t(s.time) << 32);
}

StateId FaultReportExchange::intern(const FrLocalState& s) {
  auto [it, inserted] =
      index_.try_emplace(pack(s), static_cast<StateId>(states_.size()));
  if (inserted) states_.push_back(s);
  return it->second;
}

const FrLocalState& FaultReportExchange::state(StateId s) const {
  return states_.at(s);
}

StateId FaultReportExchange::initial_state(Agent, Value init) {
  FrLocalState s;
  s.init = init;
  s.known = 1u << init;
  s.fresh = 1u << init;
  return intern(s);
}

void FaultReportExchange::do_send(Agent, StateId id, Action a,
                                  std::span<Message> out) const {
  const FrLocalState& s = state(id);
  FrMessage m;
  if (!s.done && !a.is_decide()) m = FrMessage{s.fresh, s.kfaulty};
  std::fill(out.begin(), out.end(), FrMessage::encode(m));
}

StateId FaultReportExchange::do_update(Agent, StateId id, Action a,
                                       std::span<const Message> received) {
  const FrLocalState s = state(id);
  FrLocalState next = s;
  AgentSet heard;
  std::uint32_t incoming = 0;
  AgentSet reported;
  for (Agent j = 0; j < static_cast<Agent>(received.size()); ++j) {
    if (received[j].is_bottom()) continue;
    heard.insert(j);
    const FrMessage m = FrMessage::decode(received[j]);
    incoming |= m.values;
    reported |= m.faulty;
  }
  next.known = s.known | incoming;
  next.fresh = next.known & ~s.known;
  next.kfaulty = s.kfaulty | (AgentSet::all(agents()) - heard) | reported;
  next.done = s.done || a.is_decide();
  next.time = s.time + 1;
  return intern(next);
}

std::string FaultReportExchange::do_describe(StateId id) const {
  const FrLocalState& s = state(id);
  return "<init=" + std::to_string(s.init) + ",known=" + value_set(s.known) +
         ",new=" + value_set(s.fresh) + ",kfaulty=" + s.kfaulty.to_string() +
         ",done=" + (s.done ? "1" : "0") + ",time=" + std::to_string(s.time) +
         ">";
}

std::string FaultReportExchange::describe_message(Message m) const {
  if (m.is_bottom()) return "_";
  const FrMessage fm = FrMessage::decode(m);
  return "<" + value_set(fm.values) + "," + fm.faulty.to_string() + ">";
}

std::vector<std::string> FaultReportExchange::field_names() const {
  return {"init", "known", "new", "kfaulty", "done", "time"};
}

std::uint64_t FaultReportExchange::field(StateId id,
                                         std::string_view name) const {
  if (is_crashed(id)) return ~std::uint64_t{0};
  const FrLocalState& s = state(id);
  if (name == "init") return s.init;
  if (name == "known") return s.known;
  if (name == "new") return s.fresh;
  if (name == "kfaulty") return s.kfaulty.bits();
  if (name == "done") return s.done;
  if (name == "time") return s.time;
  throw SchemaError("fault-report exchange has no field '" +
                    std::string(name) + "'");
}

}  // namespace sbamc
