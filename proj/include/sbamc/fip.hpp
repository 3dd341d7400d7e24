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

#ifndef SBAMC_FIP_HPP_
#define SBAMC_FIP_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sbamc/exchange.hpp"

namespace sbamc {

/**
 * Full-information exchange. A state is the initial preference followed by
 * every received message vector; each message is the sender's complete
 * state. The action is ignored by both the send and update rules.
 *
 * Interning makes nested states hash-consed: a message payload is the
 * sender's StateId, and a state is (previous state, received vector).
 */
class FipExchange : public Exchange {
 public:
  FipExchange(int agents, int values);

  std::string name() const override { return "fip"; }
  StateId initial_state(Agent i, Value init) override;

  Value init(StateId s) const override { return node(s).init; }
  int time(StateId s) const override { return node(s).time; }
  std::uint32_t known_values(StateId s) const override { return node(s).known; }

  std::string describe_message(Message m) const override;
  std::vector<std::string> field_names() const override;
  std::uint64_t field(StateId s, std::string_view name) const override;
  std::size_t state_count() const override { return nodes_.size(); }

  /// State before the latest round, or kCrashed for a time-0 state.
  StateId previous(StateId s) const { return node(s).previous; }
  /// Message vector received in the latest round (empty at time 0).
  std::span<const Message> last_received(StateId s) const;

 protected:
  void do_send(Agent i, StateId s, Action a,
               std::span<Message> out) const override;
  StateId do_update(Agent i, StateId s, Action a,
                    std::span<const Message> received) override;
  std::string do_describe(StateId s) const override;

 private:
  struct Node {
    Value init = 0;
    int time = 0;
    StateId previous = kCrashed;
    std::uint32_t received_offset = 0;
    std::uint32_t known = 0;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const;
  };

  const Node& node(StateId s) const;
  StateId intern(Node n, std::span<const Message> received);

  std::vector<Node> nodes_;
  std::vector<Message> received_;
  std::unordered_map<std::vector<std::uint64_t>, StateId, KeyHash> index_;
  mutable std::unordered_map<StateId, std::string> describe_cache_;
};

}  // namespace sbamc

#endif  // SBAMC_FIP_HPP_
