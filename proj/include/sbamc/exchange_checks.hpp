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

#ifndef SBAMC_EXCHANGE_CHECKS_HPP_
#define SBAMC_EXCHANGE_CHECKS_HPP_

#include <string>
#include <vector>

#include "sbamc/system.hpp"

namespace sbamc {

/**
 * Declared split of local states into a message memory (the `message`
 * fields) and an action memory (the `action` fields). An action memory is
 * "decided" when `decided_field` is nonzero; with no decided field every
 * action memory counts as undecided.
 */
struct MemoryFactorization {
  std::vector<std::string> message;
  std::vector<std::string> action;
  std::string decided_field;
};

/// S = whole state, D trivial.
MemoryFactorization fip_factorization();
/// S = {init, known, new, kfaulty, time}, D = {done}, decided iff done.
MemoryFactorization fault_report_factorization();

/// A (receiver, state, received vector) triple seen in a built system.
struct ExchangeInput {
  Agent agent = 0;
  StateId state = 0;
  std::vector<Message> received;
};

/// Every distinct non-crashed input reachable in rounds 1..T of `system`,
/// over all adversary choices.
std::vector<ExchangeInput> reachable_inputs(const InterpretedSystem& system);

struct ExchangeVerdict {
  enum class Status { kHolds, kFails, kNotApplicable };
  Status status = Status::kHolds;
  std::string witness;  // empty unless kFails / kNotApplicable

  bool holds() const { return status == Status::kHolds; }
};

std::string to_string(ExchangeVerdict::Status s);

/// Sending and updating never depend on which value is decided.
ExchangeVerdict check_no_decision_info(Exchange& exchange,
                                       const std::vector<ExchangeInput>& inputs);

/// Sending depends only on the message memory, and updating factors into
/// a message-memory part and an action-memory part.
ExchangeVerdict check_no_action_info(
    Exchange& exchange, const MemoryFactorization* factorization,
    const std::vector<ExchangeInput>& inputs);

/// Initial states are undecided; noop keeps an undecided memory undecided,
/// deciding makes it decided, and decided memories stay decided.
ExchangeVerdict check_records_decision_info(
    Exchange& exchange, const MemoryFactorization* factorization,
    const std::vector<ExchangeInput>& inputs);

}  // namespace sbamc

#endif  // SBAMC_EXCHANGE_CHECKS_HPP_
