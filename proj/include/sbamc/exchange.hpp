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

#ifndef SBAMC_EXCHANGE_HPP_
#define SBAMC_EXCHANGE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbamc/types.hpp"

namespace sbamc {

/**
 * An information exchange: local states, initial states, messages, the send
 * rule and the state update rule, for every agent.
 *
 * Local states are interned, so StateId equality is structural equality.
 * Id 0 is reserved for the distinguished `crashed` state used by the
 * hard-crash failure model: a crashed agent sends bottom to everyone and
 * stays crashed under every update.
 *
 * Send and update must preserve the synchronous shape of states: the update
 * keeps `init` and advances `time` by one.
 */
class Exchange {
 public:
  static constexpr StateId kCrashed = 0;

  Exchange(int agents, int values);
  virtual ~Exchange() = default;

  Exchange(const Exchange&) = delete;
  Exchange& operator=(const Exchange&) = delete;

  int agents() const { return agents_; }
  int values() const { return values_; }

  virtual std::string name() const = 0;

  virtual StateId initial_state(Agent i, Value init) = 0;

  /// mu_i(s, a). Writes one message per recipient (self included) into
  /// `out`, which must have `agents()` entries.
  void send(Agent i, StateId s, Action a, std::span<Message> out) const;

  /// delta_i(s, a, received). `received` has one entry per sender.
  StateId update(Agent i, StateId s, Action a,
                 std::span<const Message> received);

  bool is_crashed(StateId s) const { return s == kCrashed; }

  /// Initial preference. Undefined for the crashed state.
  virtual Value init(StateId s) const = 0;
  /// Rounds elapsed. Undefined for the crashed state.
  virtual int time(StateId s) const = 0;
  /// Bitmask (by value index) of values the state has evidence of.
  virtual std::uint32_t known_values(StateId s) const = 0;

  std::string describe(StateId s) const;
  virtual std::string describe_message(Message m) const = 0;

  /// Named components usable in a memory factorization declaration.
  virtual std::vector<std::string> field_names() const = 0;
  /// Value of a named component; throws SchemaError for unknown names.
  virtual std::uint64_t field(StateId s, std::string_view name) const = 0;

  /// Number of interned states, including the crashed state.
  virtual std::size_t state_count() const = 0;

 protected:
  virtual void do_send(Agent i, StateId s, Action a,
                       std::span<Message> out) const = 0;
  virtual StateId do_update(Agent i, StateId s, Action a,
                            std::span<const Message> received) = 0;
  virtual std::string do_describe(StateId s) const = 0;

 private:
  int agents_;
  int values_;
};

}  // namespace sbamc

#endif  // SBAMC_EXCHANGE_HPP_
