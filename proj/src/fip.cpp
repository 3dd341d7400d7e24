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

#include "sbamc/fip.hpp"

#include <algorithm>

namespace sbamc {

FipExchange::FipExchange(int agents, int values) : Exchange(agents, values) {
  nodes_.push_back(Node{});  // slot for kCrashed
}

std::size_t FipExchange::KeyHash::operator()(
    const std::vector<std::uint64_t>& k) const {
  std::uint64_t h = k.size();
  for (std::uint64_t v : k) h = hash_mix(h, v);
  return static_cast<std::size_t>(h);
}

const FipExchange::Node& FipExchange::node(StateId s) const {
  return nodes_.at(s);
}

std::span<const Message> FipExchange::last_received(StateId s) const {
  const Node& n = node(s);
  if (n.time == 0) return {};
  return std::span<const Message>(received_).subspan(n.received_offset,
                                                     agents());
}

StateId FipExchange::intern(Node n, std::span<const Message> received) {
  std::vector<std::uint64_t> key;
  key.reserve(2 + received.size());
  key.push_back(static_cast<std::uint64_t>(n.init));
  key.push_back(n.time == 0 ? ~std::uint64_t{0} : n.previous);
  for (Message m : received) key.push_back(m.payload);
  auto [it, inserted] =
      index_.try_emplace(std::move(key), static_cast<StateId>(nodes_.size()));
  if (inserted) {
    n.received_offset = static_cast<std::uint32_t>(received_.size());
    received_.insert(received_.end(), received.begin(), received.end());
    nodes_.push_back(n);
  }
  return it->second;
}

StateId FipExchange::initial_state(Agent, Value init) {
  Node n;
  n.init = init;
  n.known = 1u << init;
  return intern(n, {});
}

void FipExchange::do_send(Agent, StateId s, Action,
                          std::span<Message> out) const {
  std::fill(out.begin(), out.end(), Message{s});
}

StateId FipExchange::do_update(Agent, StateId s, Action,
                               std::span<const Message> received) {
  const Node& prev = node(s);
  Node n;
  n.init = prev.init;
  n.time = prev.time + 1;
  n.previous = s;
  n.known = prev.known;
  for (Message m : received) {
    if (m.is_bottom()) continue;
    n.known |= node(static_cast<StateId>(m.payload)).known;
  }
  return intern(n, received);
}

std::string FipExchange::do_describe(StateId s) const {
  if (auto it = describe_cache_.find(s); it != describe_cache_.end()) {
    return it->second;
  }
  const Node& n = node(s);
  std::string out;
  if (n.time == 0) {
    out = std::to_string(n.init);
  } else {
    out = do_describe(n.previous) + ".<";
    auto msgs = last_received(s);
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      if (j > 0) out += ',';
      out += describe_message(msgs[j]);
    }
    out += '>';
  }
  describe_cache_.emplace(s, out);
  return out;
}

std::string FipExchange::describe_message(Message m) const {
  if (m.is_bottom()) return "_";
  return describe(static_cast<StateId>(m.payload));
}

std::vector<std::string> FipExchange::field_names() const {
  return {"init", "time", "history"};
}

std::uint64_t FipExchange::field(StateId s, std::string_view name) const {
  if (is_crashed(s)) return ~std::uint64_t{0};
  if (name == "init") return node(s).init;
  if (name == "time") return static_cast<std::uint64_t>(node(s).time);
  if (name == "history") return s;
  throw SchemaError("fip exchange has no field '" + std::string(name) + "'");
}

}  // namespace sbamc
