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

#ifndef SBAMC_KBP_HPP_
#define SBAMC_KBP_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbamc/formula.hpp"
#include "sbamc/protocol.hpp"
#include "sbamc/system.hpp"

namespace sbamc {

/**
 * Decision conditions of the knowledge-based program "do noop until some
 * condition(i, v) holds; then decide the least such v; then noop forever":
 *   bn-cbn  B(N, i) CB(N) exists(v)
 *   ba-cba  B(A, i) CB(A) exists(v)
 *   k-cka   K(i) CK(A) exists(v)
 */
enum class DecisionCondition { kBnCbn, kBaCba, kKCka };

DecisionCondition parse_condition(std::string_view name);
std::string to_string(DecisionCondition c);

/// The condition formulas of one condition, indexed [agent][value]. The
/// group subformula for each value is shared by every agent.
std::vector<std::vector<FormulaPtr>> condition_formulas(DecisionCondition c,
                                                        const Context& context);

/// Action the program selects at each point and agent of `slice`, given the
/// truth of the conditions there. Point-major.
std::vector<Action> program_selection(
    const Context& context, const Slice& slice,
    const std::vector<std::vector<std::vector<char>>>& truth);

/// Evaluates every condition at every point of `slice`, [agent][value][point],
/// optionally spreading values across `jobs` threads.
std::vector<std::vector<std::vector<char>>> evaluate_conditions(
    const Context& context, const Slice& slice,
    const std::vector<std::vector<FormulaPtr>>& formulas, int jobs = 1);

struct Implementation {
  std::shared_ptr<ProtocolTable> table;
  std::shared_ptr<const InterpretedSystem> system;
};

/**
 * Builds the implementation one time layer at a time: with all earlier
 * actions fixed, the layer is determined, the conditions are evaluated on
 * it and the selected actions are recorded for every local state. Throws
 * ConstructionError if two points sharing a local state disagree on a
 * condition or on whether the agent has already decided.
 */
Implementation construct_implementation(std::shared_ptr<const Context> context,
                                        DecisionCondition condition,
                                        int jobs = 1);

struct ImplementationCheck {
  bool ok = true;
  std::string message;  // describes the first mismatch
  int time = -1;
  std::uint32_t point = 0;
  Agent agent = -1;
  Action expected;
  Action actual;
};

/// Rebuilds the system of `protocol` and compares its action at every point
/// with the action the program selects there.
ImplementationCheck verify_implementation(std::shared_ptr<const Context> context,
                                          std::shared_ptr<const Protocol> protocol,
                                          DecisionCondition condition,
                                          int jobs = 1);

}  // namespace sbamc

#endif  // SBAMC_KBP_HPP_
