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

#include "sbamc/context.hpp"

#include <algorithm>

#include "sbamc/fault_report.hpp"
#include "sbamc/fip.hpp"

namespace sbamc {

std::shared_ptr<Exchange> make_exchange(std::string_view name, int agents,
                                        int values) {
  if (name == "fip") return std::make_shared<FipExchange>(agents, values);
  if (name == "fault-report") {
    return std::make_shared<FaultReportExchange>(agents, values);
  }
  throw SchemaError("unknown exchange '" + std::string(name) + "'");
}

Context::Context(int agents, std::vector<int> value_labels,
                 FailureModel failures, int horizon,
                 std::shared_ptr<Exchange> exchange)
    : agents_(agents),
      value_labels_(std::move(value_labels)),
      failures_(failures),
      horizon_(horizon),
      exchange_(std::move(exchange)) {
  if (agents_ < 2 || agents_ > kMaxAgents) {
    throw SchemaError("agents must be in 2.." + std::to_string(kMaxAgents));
  }
  if (value_labels_.empty() ||
      static_cast<int>(value_labels_.size()) > kMaxValues) {
    throw SchemaError("values must list 1.." + std::to_string(kMaxValues) +
                      " labels");
  }
  if (!std::is_sorted(value_labels_.begin(), value_labels_.end()) ||
      std::adjacent_find(value_labels_.begin(), value_labels_.end()) !=
          value_labels_.end()) {
    throw SchemaError("values must be strictly increasing");
  }
  if (horizon_ < 1) throw SchemaError("horizon must be at least 1");
  if (!exchange_ || exchange_->agents() != agents_ ||
      exchange_->values() != values()) {
    throw SchemaError("exchange does not match the context dimensions");
  }
  commitments_ = enumerate_commitments(failures_, agents_, horizon_);

  std::vector<Value> v(agents_, 0);
  while (true) {
    init_vectors_.push_back(v);
    int k = agents_;
    while (k > 0) {
      if (++v[k - 1] < values()) break;
      v[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
}

std::shared_ptr<const Context> Context::make(int agents,
                                             std::vector<int> value_labels,
                                             FailureModel failures,
                                             std::string_view exchange,
                                             int horizon) {
  const int values = static_cast<int>(value_labels.size());
  return std::make_shared<const Context>(agents, std::move(value_labels),
                                         failures, horizon,
                                         make_exchange(exchange, agents, values));
}

Value Context::value_of(int label) const {
  auto it = std::find(value_labels_.begin(), value_labels_.end(), label);
  if (it == value_labels_.end()) {
    throw SchemaError("value " + std::to_string(label) + " is not in V");
  }
  return static_cast<Value>(it - value_labels_.begin());
}

std::uint32_t Context::init_vector_index(std::span<const Value> inits) const {
  std::uint32_t idx = 0;
  for (Value v : inits) idx = idx * values() + v;
  return idx;
}

std::uint32_t Context::commitment_index(const FaultyCommitment& c) const {
  auto it = std::find(commitments_.begin(), commitments_.end(), c);
  if (it == commitments_.end()) {
    throw SchemaError("commitment is not legal in this failure model");
  }
  return static_cast<std::uint32_t>(it - commitments_.begin());
}

std::vector<std::string> Context::warnings() const {
  std::vector<std::string> out;
  if (!nonfaulty_nonempty()) {
    out.push_back("t = n: runs with no nonfaulty agent exist, so N != {} is "
                  "not valid and results relying on it do not apply");
  }
  if (values() < 2) out.push_back("fewer than two values: agreement is trivial");
  return out;
}

}  // namespace sbamc
