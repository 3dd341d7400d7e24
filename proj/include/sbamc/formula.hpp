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

#ifndef SBAMC_FORMULA_HPP_
#define SBAMC_FORMULA_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sbamc/context.hpp"
#include "sbamc/types.hpp"

namespace sbamc {

/// An indexical set of agents: N (Agt \ F), A (no fault so far), Agt, or an
/// explicit set.
struct Selector {
  enum class Kind { kN, kA, kAgt, kExplicit };
  Kind kind = Kind::kN;
  AgentSet members;  // kExplicit only

  static Selector nonfaulty() { return {Kind::kN, {}}; }
  static Selector active() { return {Kind::kA, {}}; }
  static Selector everyone() { return {Kind::kAgt, {}}; }
  static Selector of(AgentSet s) { return {Kind::kExplicit, s}; }

  bool operator==(const Selector&) const = default;
  std::string to_string() const;
};

enum class Op {
  kTrue, kFalse,
  kDecides, kDecidesAll, kDecided, kIn, kSubset, kEmpty, kExists,
  kNot, kAnd, kOr, kImplies, kIff,
  kK, kB, kEK, kEB, kCK, kCB,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/**
 * Immutable formula node. Agents are 0-based, values are labels as they
 * appear in the scenario. In a schema an agent or value position may hold a
 * variable name instead; such formulas must be instantiated before they are
 * evaluated.
 */
struct Formula {
  Op op = Op::kTrue;
  Agent agent = -1;
  std::string agent_var;
  int value = 0;
  std::string value_var;
  Selector s1;
  Selector s2;
  std::vector<FormulaPtr> kids;

  bool is_ground() const;
  std::string to_string() const;  // prefix syntax, round-trips via parse
};

namespace fm {
FormulaPtr truth();
FormulaPtr falsity();
FormulaPtr decides(Agent i, int value);
FormulaPtr decides_all(Selector s, int value);
FormulaPtr decided(Agent i);
FormulaPtr in(Agent i, Selector s);
FormulaPtr subset(Selector s, Selector t);
FormulaPtr empty(Selector s);
FormulaPtr exists(int value);
FormulaPtr neg(FormulaPtr a);
FormulaPtr conj(std::vector<FormulaPtr> kids);
FormulaPtr disj(std::vector<FormulaPtr> kids);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr K(Agent i, FormulaPtr a);
FormulaPtr B(Selector s, Agent i, FormulaPtr a);
FormulaPtr EK(Selector s, FormulaPtr a);
FormulaPtr EB(Selector s, FormulaPtr a);
FormulaPtr CK(Selector s, FormulaPtr a);
FormulaPtr CB(Selector s, FormulaPtr a);
}  // namespace fm

/**
 * Prefix syntax:
 *   true | false
 *   (decides i v) (decides-all S v) (decided i) (in i S) (subset S T)
 *   (empty S) (exists v)
 *   (not f) (and f...) (or f...) (implies f g) (iff f g)
 *   (K i f) (B S i f) (EK S f) (EB S f) (CK S f) (CB S f)
 * with S ::= N | A | Agt | (set i...), agents numbered from 1, values given
 * by label. A bare identifier in an agent or value position is a schema
 * variable. Throws SchemaError with the offending position.
 */
FormulaPtr parse_formula(std::string_view text);

struct SchemaVariables {
  std::vector<std::string> agents;
  std::vector<std::string> values;
};
SchemaVariables schema_variables(const FormulaPtr& f);

struct Instance {
  std::map<std::string, int> binding;  // agents 1-based, values by label
  FormulaPtr formula;
};

/// Every ground instance over the context's agents and values, in odometer
/// order of the sorted variable names.
std::vector<Instance> instantiate(const FormulaPtr& schema,
                                  const Context& context);

/// Throws SchemaError if an agent or value is out of range for `context`.
void validate(const FormulaPtr& f, const Context& context);

}  // namespace sbamc

#endif  // SBAMC_FORMULA_HPP_
