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

#ifndef SBAMC_COUNTEREXAMPLE_HPP_
#define SBAMC_COUNTEREXAMPLE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "sbamc/kbp.hpp"
#include "sbamc/optimality.hpp"

namespace sbamc {

/// One checked claim: what was expected, what the tool observed.
struct Fact {
  std::string name;
  std::string expected;
  std::string actual;
  bool ok = false;
};

/// A shortest chain from the mixed-value failure-free point to a point
/// where nobody started with `excluded`.
struct MixedRunChain {
  int excluded = 0;  // value label
  WitnessChain chain;
  std::string dot;
};

/**
 * The fault-report counterexample: four agents, up to three of which may
 * omit to send, horizon 5. P is the implementation of the bn-cbn program and
 * P' the fault-report protocol that decides at time t+1 or as soon as an
 * agent knows everyone else is faulty.
 *
 * In run r agents 1, 2 and 3 omit their round-1 messages to agent 1 and all
 * agents start with value 0.
 */
struct CounterexampleReport {
  std::shared_ptr<const Context> context;
  Implementation p;
  std::shared_ptr<const Protocol> p_prime;
  RunPrefix run_p;       // r under P
  RunPrefix run_p_prime; // r under P'
  DominanceReport all_agents;
  DominanceReport nonfaulty_only;
  std::vector<DecisionTimes> failure_free;
  std::vector<MixedRunChain> chains;
  std::vector<Fact> facts;

  bool ok() const;
};

CounterexampleReport reproduce_counterexample(int jobs = 1);

/// The adversary of run r, for `horizon` rounds.
std::vector<RoundBehavior> counterexample_behaviors(int horizon);

}  // namespace sbamc

#endif  // SBAMC_COUNTEREXAMPLE_HPP_
