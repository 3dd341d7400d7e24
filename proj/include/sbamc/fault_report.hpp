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

#ifndef SBAMC_FAULT_REPORT_HPP_
#define SBAMC_FAULT_REPORT_HPP_

#include <cstdint>
#include <vector>

#include "absl/container/flat_hash_map.h"

#include "sbamc/exchange.hpp"

namespace sbamc {

/// Local state of the fault-report exchange. Value sets are bitmasks over
/// value indices.
struct FrLocalState {
  Value init = 0;
  std::uint32_t known = 0;
  std::uint32_t fresh = 0;  // values first learned in the latest round
  AgentSet kfaulty;
  bool done = false;
  int time = 0;

  bool operator==(const FrLocalState&) const = default;
};

/// Payload of a non-bottom fault-report message: <values, faulty agents>.
struct FrMessage {
  std::uint32_t values = 0;
  AgentSet faulty;

  static Message encode(FrMessage m) {
    return Message{std::uint64_t{m.values} | (std::uint64_t{m.faulty.bits()} << 32)};
  }
  static FrMessage decode(Message m) {
    return FrMessage{static_cast<std::uint32_t>(m.payload & 0xffffffffu),
                     AgentSet(static_cast<std::uint32_t>(m.payload >> 32))};
  }
};

/**
 * Agents forward newly learned values and the agents they know to be faulty.
 * After deciding (or while deciding) an agent only sends the empty heartbeat
 * <{}, {}>. Missing messages, including a missing self-message, mark the
 * sender as faulty.
 */
class FaultReportExchange : public Exchange {
 public:
  FaultReportExchange(int agents, int values);

  std::string name() const override { return "fault-report"; }
  StateId initial_state(Agent i, Value init) override;

  Value init(StateId s) const override { return state(s).init; }
  int time(StateId s) const override { return state(s).time; }
  std::uint32_t known_values(StateId s) const override { return state(s).known; }

  std::string describe_message(Message m) const override;
  std::vector<std::string> field_names() const override;
  std::uint64_t field(StateId s, std::string_view name) const override;
  std::size_t state_count() const override { return states_.size(); }

  const FrLocalState& state(StateId s) const;
  StateId intern(const FrLocalState& s);

 protected:
  void do_send(Agent i, StateId s, Action a,
               std::span<Message> out) const override;
  StateId do_update(Agent i, StateId s, Action a,
                    std::span<const Message> received) override;
  std::string do_describe(StateId s) const override;

 private:
  static std::uint64_t pack(const FrLocalState& s);

  std::vector<FrLocalState> states_;
  absl::flat_hash_map<std::uint64_t, StateId> index_;
};

}  // namespace sbamc

#endif  // SBAMC_FAULT_REPORT_HPP_
