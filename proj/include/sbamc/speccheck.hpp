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

#ifndef SBAMC_SPECCHECK_HPP_
#define SBAMC_SPECCHECK_HPP_

#include <map>
#include <optional>
#include <string>

#include "sbamc/formula.hpp"
#include "sbamc/system.hpp"

namespace sbamc {

struct ClauseResult {
  bool pass = true;
  int time = -1;
  std::uint32_t point = 0;
  Agent agent = -1;
  std::string detail;
};

/// SBA(S) up to the horizon of the checked system. A pass means "no
/// violation at times 0..T"; there is no termination clause.
struct SpecVerdict {
  bool pass = true;
  int horizon = 0;
  ClauseResult unique_decision;
  ClauseResult simultaneous_agreement;
  ClauseResult validity;
  std::string failed_clause;  // first failing clause, empty on pass
};

/// With `unique_for_selector` Unique-Decision is only required of agents
/// in S at the offending point.
SpecVerdict check_sba(const InterpretedSystem& system, const Selector& s,
                      bool unique_for_selector = false);

struct ValidityResult {
  bool valid = true;
  std::map<std::string, int> binding;  // of the failing instance
  std::string instance;
  int time = -1;
  std::uint32_t point = 0;
  std::size_t instances = 0;
};

/// Checks every ground instance of `schema` at every point.
ValidityResult check_valid(const InterpretedSystem& system,
                           const FormulaPtr& schema);

struct TransferReport {
  bool containment = true;  // S subset of T at every point
  SpecVerdict sba_s;
  SpecVerdict sba_t;
  /// Whether SBA(S) <=> SBA(T) is expected: S = N, T = A in a crash or
  /// omission context where N is never empty.
  bool equivalence_expected = false;
  bool agree = true;
  std::string note;
};

TransferReport check_sba_transfer(const InterpretedSystem& system,
                                  const Selector& s, const Selector& t);

}  // namespace sbamc

#endif  // SBAMC_SPECCHECK_HPP_
