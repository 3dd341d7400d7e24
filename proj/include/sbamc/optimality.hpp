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

#ifndef SBAMC_OPTIMALITY_HPP_
#define SBAMC_OPTIMALITY_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbamc/evaluator.hpp"
#include "sbamc/exchange_checks.hpp"
#include "sbamc/kernel.hpp"
#include "sbamc/protocol.hpp"
#include "sbamc/speccheck.hpp"

namespace sbamc {

/// Decision time of every agent in one run; -1 when the agent has not
/// decided by the horizon.
struct DecisionTimes {
  std::vector<Value> inits;
  std::uint32_t commitment = 0;
  std::vector<int> times;
};

DecisionTimes decision_times(const Context& context, const Protocol& protocol,
                             std::span<const Value> inits,
                             std::uint32_t commitment,
                             std::span<const RoundBehavior> behaviors);

/// One entry per initial value vector, in the failure-free run.
std::vector<DecisionTimes> failure_free_decision_times(const Context& context,
                                                       const Protocol& protocol);

enum class AgentsMode { kAll, kNonfaultyOnly };
AgentsMode parse_agents_mode(std::string_view name);
std::string to_string(AgentsMode m);

/// A run and agent separating two protocols.
struct DominanceWitness {
  std::vector<Value> inits;
  std::uint32_t commitment = 0;
  std::vector<RoundBehavior> behaviors;
  Agent agent = -1;
  int time_a = -1;  // -1: undecided within the horizon
  int time_b = -1;
};

/**
 * Compares decision times of two protocols over corresponding runs (same
 * initial states, same adversary). `a_le_b` holds when no agent decides
 * under b strictly before it decides under a. An agent that has decided
 * under b but not under a by the horizon might decide under a later, so
 * such pairs are counted as inconclusive rather than as violations.
 */
struct DominanceReport {
  bool a_le_b = true;
  bool b_le_a = true;
  std::optional<DominanceWitness> refutes_a_le_b;
  std::optional<DominanceWitness> refutes_b_le_a;
  std::size_t inconclusive_a_le_b = 0;
  std::size_t inconclusive_b_le_a = 0;
  std::optional<DominanceWitness> inconclusive_example_a_le_b;
  std::optional<DominanceWitness> inconclusive_example_b_le_a;
  std::size_t joint_points = 0;
  /// False when exploration stopped early; the inconclusive counts and
  /// joint_points are then partial, and an unrefuted direction is unsettled.
  bool exhaustive = true;

  /// "both", "a<=b", "b<=a" or "incomparable". A stopped exploration
  /// that refuted only one direction yields "not a<=b" or "not b<=a".
  std::string verdict() const;
};

/// When the joint exploration may stop before the horizon.
enum class DominanceStop {
  kExhaustive,       // explore everything
  kIncomparable,     // once both directions are refuted
  kFirstRefutation,  // once either direction is refuted
};

DominanceStop parse_dominance_stop(std::string_view name);
std::string to_string(DominanceStop s);

DominanceReport dominance(std::shared_ptr<const Context> context,
                          const Protocol& a, const Protocol& b,
                          AgentsMode mode = AgentsMode::kAll,
                          DominanceStop stop = DominanceStop::kExhaustive);

struct Candidate {
  std::string name;
  std::shared_ptr<const Protocol> protocol;
};

struct CandidateResult {
  std::string name;
  SpecVerdict sba;
  bool rejected = false;  // not an SBA(N) protocol
  std::optional<DominanceReport> dominance;
  bool refutes = false;
};

struct ProbeReport {
  bool holds = true;
  std::vector<CandidateResult> candidates;
  std::string scope;
  // Exchange prerequisites, filled by optimum_probe only.
  std::optional<ExchangeVerdict> no_decision_info;
  std::optional<ExchangeVerdict> no_action_info;
  std::optional<ExchangeVerdict> records_decision_info;
  std::string state_failures;
};

/// P is optimal relative to the candidates: no SBA candidate c with c <= P
/// fails P <= c.
ProbeReport optimality_probe(std::shared_ptr<const Context> context,
                             const Candidate& p,
                             const std::vector<Candidate>& candidates,
                             AgentsMode mode = AgentsMode::kAll);

/// P is an optimum relative to the candidates: P <= c for every SBA
/// candidate c.
ProbeReport optimum_probe(std::shared_ptr<const Context> context,
                          const Candidate& p,
                          const std::vector<Candidate>& candidates,
                          AgentsMode mode = AgentsMode::kAll);

/// Default message/action split for the built-in exchanges.
std::optional<MemoryFactorization> default_factorization(const Exchange& ex);

}  // namespace sbamc

#endif  // SBAMC_OPTIMALITY_HPP_
