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

#ifndef SBAMC_EVALUATOR_HPP_
#define SBAMC_EVALUATOR_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sbamc/formula.hpp"
#include "sbamc/system.hpp"

namespace sbamc {

/// Result of a closure search from one point.
struct Reach {
  std::vector<std::uint32_t> points;       // BFS order, origin first
  std::vector<std::uint32_t> predecessor;  // aligned with points; kNone for origin
  std::vector<Agent> link;                 // agent linking predecessor to point
};

struct WitnessChain {
  bool found = false;
  std::vector<std::uint32_t> points;  // origin ... target
  std::vector<Agent> links;           // links[k] joins points[k] and points[k+1]
};

/**
 * Model checking over one slice. Every operator is computed for all points
 * of the slice at once and memoized by formula node, so evaluating formulas
 * that share subformula pointers is cheap.
 *
 * The C operators follow their conjunction definition: a point whose
 * indexical set is empty satisfies C(S) phi vacuously; otherwise C(S) phi
 * holds iff phi holds throughout the closure of the point.
 *
 * Not thread-safe; use one evaluator per thread.
 */
class Evaluator {
 public:
  Evaluator(const Context& context, const Slice& slice);

  const std::vector<char>& eval(const FormulaPtr& f);
  bool holds(std::uint32_t p, const FormulaPtr& f) { return eval(f)[p] != 0; }

  AgentSet resolve(std::uint32_t p, const Selector& s) const;

  /// Closure of the undirected relation (S-belief) or of the directed one
  /// (S-knowledge), as used by CB and CK respectively.
  Reach reachable(std::uint32_t p, const Selector& s, bool knowledge = false) const;

  /// Shortest S-belief path from p to a point satisfying `target`.
  WitnessChain witness_chain(std::uint32_t p, const Selector& s,
                             const FormulaPtr& target);

  const Slice& slice() const { return slice_; }

 private:
  std::vector<char> compute(const Formula& f);
  std::vector<char> knows(Agent i, const std::vector<char>& phi,
                          const Selector* guard) const;
  std::vector<char> common_belief(const Selector& s,
                                  const std::vector<char>& phi) const;
  std::vector<char> common_knowledge(const Selector& s,
                                     const std::vector<char>& phi) const;

  const Context& context_;
  const Slice& slice_;
  std::vector<std::uint32_t> exists_mask_;  // per point, values present
  std::unordered_map<const Formula*, std::pair<FormulaPtr, std::vector<char>>>
      memo_;
};

}  // namespace sbamc

#endif  // SBAMC_EVALUATOR_HPP_
