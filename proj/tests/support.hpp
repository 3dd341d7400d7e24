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

#ifndef SBAMC_TESTS_SUPPORT_HPP_
#define SBAMC_TESTS_SUPPORT_HPP_

#include <memory>
#include <string>
#include <vector>

#include "sbamc/context.hpp"
#include "sbamc/fault_report.hpp"
#include "sbamc/failures.hpp"

namespace sbamc::testing {

inline AgentSet agents(std::initializer_list<int> one_based) {
  AgentSet s;
  for (int a : one_based) s.insert(a - 1);
  return s;
}

inline std::shared_ptr<const Context> context(int n, FailureKind kind, int t,
                                              const std::string& exchange,
                                              int horizon,
                                              std::vector<int> values = {0, 1}) {
  return Context::make(n, std::move(values), FailureModel{kind, t}, exchange,
                       horizon);
}

/// Index of the omission commitment with faulty set `f`.
inline std::uint32_t omission_commitment(const Context& ctx, AgentSet f) {
  return ctx.commitment_index(FaultyCommitment{f, {}});
}

inline std::uint32_t crash_commitment(const Context& ctx, Agent agent,
                                      CrashSpec spec) {
  FaultyCommitment c{AgentSet::single(agent), {}};
  c.crash[agent] = spec;
  return ctx.commitment_index(c);
}

inline const FaultReportExchange& fr(const Context& ctx) {
  return dynamic_cast<const FaultReportExchange&>(ctx.exchange());
}

}  // namespace sbamc::testing

#endif  // SBAMC_TESTS_SUPPORT_HPP_
