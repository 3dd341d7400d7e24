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

#ifndef SBAMC_REPORT_HPP_
#define SBAMC_REPORT_HPP_

#include <cstdint>

#include "json.hpp"

#include "sbamc/counterexample.hpp"
#include "sbamc/kbp.hpp"
#include "sbamc/optimality.hpp"
#include "sbamc/speccheck.hpp"
#include "sbamc/system.hpp"

// Structured records for every command. Output holds no timings or
// addresses, so the same inputs serialize to identical bytes.

namespace sbamc::report {

using nlohmann::json;

json point(const InterpretedSystem& system, int m, std::uint32_t p);
json system_stats(const InterpretedSystem& system);
json verdict(const InterpretedSystem& system, const SpecVerdict& v);
json transfer(const InterpretedSystem& system, const TransferReport& r);
json validity(const InterpretedSystem& system, const ValidityResult& r);
json implementation_check(const Context& context, const ImplementationCheck& c);
/// Canonical "agent <state> -> action" lines.
json protocol_table(const Context& context, const ProtocolTable& table);
json dominance(const Context& context, const DominanceReport& r);
json chain(const InterpretedSystem& system, int m, const WitnessChain& c);
json counterexample(const CounterexampleReport& r);

}  // namespace sbamc::report

#endif  // SBAMC_REPORT_HPP_
