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

#ifndef SBAMC_SCENARIO_HPP_
#define SBAMC_SCENARIO_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sbamc/context.hpp"
#include "sbamc/exchange_checks.hpp"
#include "sbamc/formula.hpp"
#include "sbamc/kbp.hpp"
#include "sbamc/optimality.hpp"
#include "sbamc/protocol.hpp"

namespace sbamc {

/// A named protocol: either a built-in rule with integer parameters, or the
/// knowledge-based program under one decision condition.
struct ProtocolSpec {
  std::string name;
  bool knowledge_based = false;
  std::string builtin;
  std::map<std::string, int> params;
  DecisionCondition condition = DecisionCondition::kBnCbn;
};

struct ComparisonSpec {
  std::string a;
  std::string b;
  std::optional<AgentsMode> mode;  // falls back to the command-line mode
};

/// The run a witness chain starts from: initial values (by label), the
/// faulty set of the commitment, and per-round drops. Crash models use the
/// commitment's crash parameters instead of drops.
struct RunSpec {
  std::vector<int> inits;
  AgentSet faulty;
  std::vector<CrashSpec> crashes;  // one per faulty agent, ascending
  std::vector<RoundBehavior> behaviors;
};

struct WitnessSpec {
  std::string protocol;
  int time = 0;
  RunSpec run;
  Selector selector = Selector::nonfaulty();
  std::string target_text;
  FormulaPtr target;
};

struct FormulaSpec {
  std::string text;
  FormulaPtr schema;
};

struct Scenario {
  std::string name;
  int agents = 0;
  std::vector<int> values;
  FailureModel failures;
  std::string exchange;
  int horizon = 6;
  std::vector<ProtocolSpec> protocols;
  std::vector<FormulaSpec> formulas;
  std::vector<ComparisonSpec> comparisons;
  std::vector<WitnessSpec> witnesses;
  std::optional<MemoryFactorization> factorization;
  bool unique_for_selector = false;

  std::shared_ptr<const Context> make_context() const;
  const ProtocolSpec& protocol(const std::string& name) const;
};

/// Throws SchemaError whose message starts with the JSON location of the
/// offending field, e.g. "$.protocols[1].condition: ...".
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// A protocol instantiated in a context, together with its system.
struct BuiltProtocol {
  std::string name;
  std::shared_ptr<const Protocol> protocol;
  std::shared_ptr<const InterpretedSystem> system;
};

BuiltProtocol build_protocol(const ProtocolSpec& spec,
                             std::shared_ptr<const Context> context,
                             int jobs = 1);

/// Replays `spec` under `protocol`; throws SchemaError if the commitment is
/// not one the context enumerates.
RunPrefix realize_run(const Context& context, const Protocol& protocol,
                      const RunSpec& spec, int length);

}  // namespace sbamc

#endif  // SBAMC_SCENARIO_HPP_
