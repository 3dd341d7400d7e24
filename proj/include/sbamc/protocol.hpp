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

#ifndef SBAMC_PROTOCOL_HPP_
#define SBAMC_PROTOCOL_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sbamc/context.hpp"
#include "sbamc/types.hpp"

namespace sbamc {

/// A decision protocol: one action per (agent, local state).
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string name() const = 0;
  /// Throws ConstructionError when the protocol is undefined at `s`.
  virtual Action act(Agent i, StateId s) const = 0;
};

/// Explicit finite map from reachable local states to actions.
class ProtocolTable : public Protocol {
 public:
  ProtocolTable(std::string name, int agents);

  std::string name() const override { return name_; }
  Action act(Agent i, StateId s) const override;

  std::optional<Action> find(Agent i, StateId s) const;
  /// Inserts or checks an entry; returns false if a different action was
  /// already recorded for the same state.
  bool set(Agent i, StateId s, Action a);
  std::size_t size() const;
  int agents() const { return static_cast<int>(entries_.size()); }

  /// Sorted "agent <state> -> action" lines, one per entry.
  std::string canonical_text(const Context& context) const;
  /// Same entries, regardless of name.
  bool same_entries(const ProtocolTable& other) const;

  const std::unordered_map<StateId, Action>& entries(Agent i) const {
    return entries_.at(i);
  }

 private:
  std::string name_;
  std::vector<std::unordered_map<StateId, Action>> entries_;
};

/// A protocol given by a rule over local states.
class RuleProtocol : public Protocol {
 public:
  using Rule = std::function<Action(Agent, StateId)>;
  RuleProtocol(std::string name, Rule rule)
      : name_(std::move(name)), rule_(std::move(rule)) {}

  std::string name() const override { return name_; }
  Action act(Agent i, StateId s) const override { return rule_(i, s); }

 private:
  std::string name_;
  Rule rule_;
};

std::string to_string(Action a, const Context& context);

/**
 * Built-in protocols, as rules:
 *   fault-report-pprime  params {t}: decide the least known value once the
 *       agent has not decided and either time = t+1 or it knows every other
 *       agent is faulty. Requires the fault-report exchange.
 *   wait-until           params {k}: decide the least known value at time k.
 *   always-noop.
 * A crashed state always maps to noop. Throws SchemaError on unknown names
 * or missing parameters.
 */
std::shared_ptr<const Protocol> builtin_rule(
    const std::string& name, const std::map<std::string, int>& params,
    std::shared_ptr<const Context> context);

class InterpretedSystem;

/// Records the action of `protocol` at every local state reachable in
/// `system`.
std::shared_ptr<ProtocolTable> tabulate(const Protocol& protocol,
                                        const InterpretedSystem& system);

/// builtin_rule materialized over the system it induces in `context`.
std::shared_ptr<ProtocolTable> builtin_protocol(
    const std::string& name, const std::map<std::string, int>& params,
    std::shared_ptr<const Context> context);

}  // namespace sbamc

#endif  // SBAMC_PROTOCOL_HPP_
