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

#ifndef SBAMC_FAILURES_HPP_
#define SBAMC_FAILURES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbamc/types.hpp"

namespace sbamc {

enum class FailureKind { kHardCrash, kComCrash, kSendOmit, kRecvOmit, kGenOmit };

/// Parses "hard-crash", "com-crash", "send-omit", "recv-omit", "gen-omit".
FailureKind parse_failure_kind(std::string_view name);
std::string to_string(FailureKind kind);

struct FailureModel {
  FailureKind kind = FailureKind::kSendOmit;
  int t = 0;

  bool is_crash() const {
    return kind == FailureKind::kHardCrash || kind == FailureKind::kComCrash;
  }
  bool has_crashed_state() const { return kind == FailureKind::kHardCrash; }
  bool omits_transmission() const {
    return kind == FailureKind::kSendOmit || kind == FailureKind::kGenOmit;
  }
  bool omits_reception() const {
    return kind == FailureKind::kRecvOmit || kind == FailureKind::kGenOmit;
  }
};

/// Crash parameters of one faulty agent. `round` is in 1..T, or T+1 when the
/// agent does not crash within the horizon.
struct CrashSpec {
  int round = 0;
  AgentSet receivers;  // recipients that miss the agent's crash-round message
  bool operator==(const CrashSpec&) const = default;
};

/**
 * The designated faulty set F of an adversary. Agents outside F behave
 * correctly in every round; F is an upper bound on who ever fails, and
 * Agt \ F is the nonfaulty set N of every run with this commitment.
 */
struct FaultyCommitment {
  AgentSet faulty;
  std::array<CrashSpec, kMaxAgents> crash{};  // crash models, members of F only

  bool operator==(const FaultyCommitment&) const = default;
  std::string to_string(const FailureModel& model) const;
};

std::vector<FaultyCommitment> enumerate_commitments(const FailureModel& model,
                                                    int agents, int horizon);

/**
 * Perturbation applied by the adversary in one round. Dropping a message
 * replaces it with bottom.
 */
struct RoundBehavior {
  std::array<AgentSet, kMaxAgents> transmit_drop{};  // sender -> receivers
  std::array<AgentSet, kMaxAgents> receive_drop{};   // receiver -> senders
  AgentSet crash_state;  // agents whose post-update state becomes crashed

  bool operator==(const RoundBehavior&) const = default;
  bool is_identity() const;
  std::string to_string(int agents) const;
};

/// All legal behaviors of `commitment` in `round` (1-based). Crash models
/// yield a singleton; omission models branch over drop subsets of F members.
std::vector<RoundBehavior> enumerate_round_behaviors(
    const FailureModel& model, int agents, const FaultyCommitment& commitment,
    int round);

/// Drops seen by one receiver in one round: senders whose message was
/// removed in transmission and senders whose message was removed on receipt.
struct ColumnChoice {
  AgentSet transmit;
  AgentSet receive;
  bool operator==(const ColumnChoice&) const = default;
};

/**
 * Per-receiver factorization of the round behaviors: every behavior is a
 * free combination of one choice per receiver, plus the state perturbation
 * from `crash_state_in_round`. Used by the system builder to avoid
 * materializing the (2^n)^|F| behaviors of omission models.
 */
std::vector<ColumnChoice> column_choices(const FailureModel& model, int agents,
                                         const FaultyCommitment& commitment,
                                         int round, Agent receiver);

/// Memoizes `column_choices` per (commitment index, round, receiver).
class ColumnCache {
 public:
  ColumnCache(const FailureModel& model, int agents,
              std::span<const FaultyCommitment> commitments, int horizon);

  const std::vector<ColumnChoice>& get(std::uint32_t commitment, int round,
                                       Agent receiver);

 private:
  const FailureModel& model_;
  int agents_;
  int horizon_;
  std::span<const FaultyCommitment> commitments_;
  std::vector<std::optional<std::vector<ColumnChoice>>> table_;
};

AgentSet crash_state_in_round(const FailureModel& model,
                              const FaultyCommitment& commitment, int round);

RoundBehavior assemble_behavior(std::span<const ColumnChoice> columns,
                                AgentSet crash_state);

}  // namespace sbamc

#endif  // SBAMC_FAILURES_HPP_
