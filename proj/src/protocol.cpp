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

#include "sbamc/protocol.hpp"

#include <algorithm>
#include <bit>

#include "sbamc/fault_report.hpp"
#include "sbamc/system.hpp"

namespace sbamc {

ProtocolTable::ProtocolTable(std::string name, int agents)
    : name_(std::move(name)), entries_(agents) {}

Action ProtocolTable::act(Agent i, StateId s) const {
  auto found = find(i, s);
  if (!found) {
    throw ConstructionError("protocol " + name_ + " has no entry for agent " +
                            std::to_string(i + 1) + " at state #" +
                            std::to_string(s));
  }
  return *found;
}

std::optional<Action> ProtocolTable::find(Agent i, StateId s) const {
  const auto& m = entries_.at(i);
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool ProtocolTable::set(Agent i, StateId s, Action a) {
  auto [it, inserted] = entries_.at(i).try_emplace(s, a);
  return inserted || it->second == a;
}

std::size_t ProtocolTable::size() const {
  std::size_t total = 0;
  for (const auto& m : entries_) total += m.size();
  return total;
}

std::string ProtocolTable::canonical_text(const Context& context) const {
  std::vector<std::string> lines;
  lines.reserve(size());
  for (Agent i = 0; i < agents(); ++i) {
    for (const auto& [s, a] : entries_[i]) {
      lines.push_back(std::to_string(i + 1) + " " +
                      context.exchange().describe(s) + " -> " +
                      to_string(a, context));
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

bool ProtocolTable::same_entries(const ProtocolTable& other) const {
  return entries_ == other.entries_;
}

std::string to_string(Action a, const Context& context) {
  if (!a.is_decide()) return "noop";
  return "decide(" + std::to_string(context.value_labels().at(a.value)) + ")";
}

namespace {

int param(const std::map<std::string, int>& params, const std::string& name,
          const std::string& protocol) {
  auto it = params.find(name);
  if (it == params.end()) {
    throw SchemaError("protocol " + protocol + " requires parameter '" + name +
                      "'");
  }
  return it->second;
}

Action least_known(const Exchange& ex, StateId s) {
  const std::uint32_t known = ex.known_values(s);
  if (known == 0) return Action::noop();
  return Action::decide(std::countr_zero(known));
}

}  // namespace

std::shared_ptr<const Protocol> builtin_rule(
    const std::string& name, const std::map<std::string, int>& params,
    std::shared_ptr<const Context> context) {
  if (name == "always-noop") {
    return std::make_shared<RuleProtocol>(
        name, [](Agent, StateId) { return Action::noop(); });
  }
  if (name == "wait-until") {
    const int k = param(params, "k", name);
    return std::make_shared<RuleProtocol>(
        name + "(" + std::to_string(k) + ")",
        [context, k](Agent, StateId s) {
          const Exchange& ex = context->exchange();
          if (ex.is_crashed(s) || ex.time(s) != k) return Action::noop();
          return least_known(ex, s);
        });
  }
  if (name == "fault-report-pprime") {
    const int t = param(params, "t", name);
    auto* fr = dynamic_cast<const FaultReportExchange*>(&context->exchange());
    if (fr == nullptr) {
      throw SchemaError("protocol " + name +
                        " requires the fault-report exchange");
    }
    const AgentSet all = context->all();
    return std::make_shared<RuleProtocol>(
        name + "(" + std::to_string(t) + ")",
        [context, fr, t, all](Agent i, StateId s) {
          if (fr->is_crashed(s)) return Action::noop();
          const FrLocalState& st = fr->state(s);
          if (st.done) return Action::noop();
          if (st.time == t + 1 || st.kfaulty == all - AgentSet::single(i)) {
            return least_known(*fr, s);
          }
          return Action::noop();
        });
  }
  throw SchemaError("unknown protocol '" + name + "'");
}

std::shared_ptr<ProtocolTable> tabulate(const Protocol& protocol,
                                        const InterpretedSystem& system) {
  const Context& ctx = system.context();
  auto table = std::make_shared<ProtocolTable>(protocol.name(), ctx.agents());
  for (int m = 0; m <= system.horizon(); ++m) {
    const Slice& s = system.slice(m);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      for (Agent i = 0; i < ctx.agents(); ++i) {
        table->set(i, s.local(p, i), s.action(p, i));
      }
    }
  }
  return table;
}

std::shared_ptr<ProtocolTable> builtin_protocol(
    const std::string& name, const std::map<std::string, int>& params,
    std::shared_ptr<const Context> context) {
  auto rule = builtin_rule(name, params, context);
  auto system = build_system(context, rule);
  return tabulate(*rule, *system);
}

}  // namespace sbamc
