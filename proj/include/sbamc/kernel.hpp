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

#ifndef SBAMC_KERNEL_HPP_
#define SBAMC_KERNEL_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "sbamc/context.hpp"
#include "sbamc/failures.hpp"
#include "sbamc/protocol.hpp"

namespace sbamc {

/// One time slice of one run. The adversary is identified by its commitment
/// index; the environment record is the trivial single-point state.
struct GlobalState {
  std::vector<StateId> locals;
  std::uint32_t commitment = 0;
  std::uint32_t env = 0;
  int time = 0;

  bool operator==(const GlobalState&) const = default;
};

/// Semantic faults of one round: a flag is set iff the corresponding
/// perturbation actually changed its input.
struct FaultRecord {
  AgentSet transmission;
  AgentSet reception;
  AgentSet state;

  AgentSet any() const { return transmission | reception | state; }
  bool operator==(const FaultRecord&) const = default;
};

struct StepResult {
  GlobalState next;
  FaultRecord faults;
  std::vector<Action> actions;                  // a_i at the old state
  std::vector<std::vector<Message>> sent;       // sent[i][j] before perturbation
  std::vector<std::vector<Message>> received;   // received[j][i] after perturbation
};

/// Action of agent i at local state s; crashed states always noop.
Action protocol_action(const Context& context, const Protocol& protocol,
                       Agent i, StateId s);

/**
 * One synchronous round: actions, sends (self included), transmission then
 * reception perturbation, update, state perturbation. Throws IntegrityError
 * if `behavior` perturbs an agent outside the commitment.
 */
StepResult step(const Context& context, const Protocol& protocol,
                const GlobalState& state, const RoundBehavior& behavior);

/// A run from time 0 to time length(), with per-round behavior and faults.
struct RunPrefix {
  std::vector<Value> inits;
  std::uint32_t commitment = 0;
  std::vector<RoundBehavior> behaviors;      // rounds 1..m
  std::vector<GlobalState> states;           // times 0..m
  std::vector<FaultRecord> faults;           // rounds 1..m
  std::vector<std::vector<Action>> actions;  // times 0..m

  int length() const { return static_cast<int>(behaviors.size()); }
  /// First time agent i decides, or -1.
  int decision_time(Agent i) const;
  /// Agents with a fault flag in rounds 1..m.
  AgentSet failed_by(int m) const;
};

GlobalState initial_global_state(const Context& context,
                                 std::span<const Value> inits,
                                 std::uint32_t commitment);

/// Re-executes a run from its initial state and adversary behavior.
RunPrefix replay(const Context& context, const Protocol& protocol,
                 std::span<const Value> inits, std::uint32_t commitment,
                 std::span<const RoundBehavior> behaviors);

struct ActiveSets {
  AgentSet active;              // no fault flag in rounds 1..m
  AgentSet nonfaulty_possible;  // Agt \ F
};

/// Throws IntegrityError if some flagged agent is outside `commitment`.
ActiveSets classify_sets(const Context& context, const RunPrefix& run, int m,
                         const FaultyCommitment& commitment);

}  // namespace sbamc

#endif  // SBAMC_KERNEL_HPP_
