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

#ifndef SBAMC_CONTEXT_HPP_
#define SBAMC_CONTEXT_HPP_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbamc/exchange.hpp"
#include "sbamc/failures.hpp"

namespace sbamc {

/// Creates "fip" or "fault-report".
std::shared_ptr<Exchange> make_exchange(std::string_view name, int agents,
                                        int values);

/**
 * A context for SBA: the agents, the ordered value set, an information
 * exchange, a failure model, and the finite horizon T that every generated
 * system is built to. All systems compared with each other must share one
 * Context so that their interned local states are comparable.
 */
class Context {
 public:
  Context(int agents, std::vector<int> value_labels, FailureModel failures,
          int horizon, std::shared_ptr<Exchange> exchange);

  static std::shared_ptr<const Context> make(int agents,
                                             std::vector<int> value_labels,
                                             FailureModel failures,
                                             std::string_view exchange,
                                             int horizon);

  int agents() const { return agents_; }
  int values() const { return static_cast<int>(value_labels_.size()); }
  const std::vector<int>& value_labels() const { return value_labels_; }
  /// Value index of a user-facing label; throws SchemaError if absent.
  Value value_of(int label) const;
  const FailureModel& failures() const { return failures_; }
  int horizon() const { return horizon_; }
  AgentSet all() const { return AgentSet::all(agents_); }

  /// Exchanges intern states lazily, hence the non-const access.
  Exchange& exchange() const { return *exchange_; }

  const std::vector<FaultyCommitment>& commitments() const {
    return commitments_;
  }
  const std::vector<std::vector<Value>>& init_vectors() const {
    return init_vectors_;
  }
  std::uint32_t init_vector_index(std::span<const Value> inits) const;
  std::uint32_t commitment_index(const FaultyCommitment& c) const;

  /// N != {} holds in every system of this context.
  bool nonfaulty_nonempty() const { return failures_.t < agents_; }
  std::vector<std::string> warnings() const;

 private:
  int agents_;
  std::vector<int> value_labels_;
  FailureModel failures_;
  int horizon_;
  std::shared_ptr<Exchange> exchange_;
  std::vector<FaultyCommitment> commitments_;
  std::vector<std::vector<Value>> init_vectors_;
};

}  // namespace sbamc

#endif  // SBAMC_CONTEXT_HPP_
