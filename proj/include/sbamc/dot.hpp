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

#ifndef SBAMC_DOT_HPP_
#define SBAMC_DOT_HPP_

#include <string>
#include <string_view>

#include "sbamc/evaluator.hpp"
#include "sbamc/system.hpp"

namespace sbamc {

/**
 * Renders a witness chain at time m as a Graphviz digraph. Each point of the
 * chain becomes one cluster showing its run up to m: a node per agent and
 * time, a solid edge per delivered message and a dashed edge per message
 * that was sent but not delivered. Members of N are drawn as double
 * circles. Consecutive runs are joined by an undirected edge between the
 * linking agent's time-m nodes, labeled with that agent.
 */
std::string chain_to_dot(const InterpretedSystem& system, int m,
                         const WitnessChain& chain, std::string_view title);

}  // namespace sbamc

#endif  // SBAMC_DOT_HPP_
