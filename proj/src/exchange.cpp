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

#include "sbamc/exchange.hpp"

#include <algorithm>

namespace sbamc {

std::string AgentSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each([&](Agent i) {
    if (!first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  });
  out += '}';
  return out;
}

Exchange::Exchange(int agents, int values) : agents_(agents), values_(values) {
  if (agents < 1 || agents > kMaxAgents) {
    throw SchemaError("number of agents must be in 1.." +
                      std::to_string(kMaxAgents));
  }
  if (values < 1 || values > kMaxValues) {
    throw SchemaError("number of values must be in 1.." +
                      std::to_string(kMaxValues));
  }
}

void Exchange::send(Agent i, StateId s, Action a, std::span<Message> out) const {
  if (is_crashed(s)) {
    std::fill(out.begin(), out.end(), Message::bottom());
    return;
  }
  do_send(i, s, a, out);
}

StateId Exchange::update(Agent i, StateId s, Action a,
                         std::span<const Message> received) {
  if (is_crashed(s)) return kCrashed;
  return do_update(i, s, a, received);
}

std::string Exchange::describe(StateId s) const {
  if (is_crashed(s)) return "crashed";
  return do_describe(s);
}

}  // namespace sbamc
