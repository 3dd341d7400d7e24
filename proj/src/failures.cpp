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

#include "sbamc/failures.hpp"

#include <stdexcept>

namespace sbamc {
namespace {

// All subsets of `base`, in increasing order of their bit patterns.
std::vector<AgentSet> subsets_of(AgentSet base) {
  std::vector<AgentSet> out;
  std::uint32_t b = base.bits();
  std::uint32_t s = 0;
  do {
    out.push_back(AgentSet(s));
    s = (s - b) & b;
  } while (s != 0);
  return out;
}

}  // namespace

FailureKind parse_failure_kind(std::string_view name) {
  if (name == "hard-crash") return FailureKind::kHardCrash;
  if (name == "com-crash") return FailureKind::kComCrash;
  if (name == "send-omit") return FailureKind::kSendOmit;
  if (name == "recv-omit") return FailureKind::kRecvOmit;
  if (name == "gen-omit") return FailureKind::kGenOmit;
  throw SchemaError("unknown failure model '" + std::string(name) + "'");
}

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::kHardCrash: return "hard-crash";
    case FailureKind::kComCrash: return "com-crash";
    case FailureKind::kSendOmit: return "send-omit";
    case FailureKind::kRecvOmit: return "recv-omit";
    case FailureKind::kGenOmit: return "gen-omit";
  }
  return "?";
}

std::string FaultyCommitment::to_string(const FailureModel& model) const {
  std::string out = "F=" + faulty.to_string();
  if (!model.is_crash()) return out;
  faulty.for_each([&](Agent i) {
    out += " crash" + std::to_string(i + 1) + "@" +
           std::to_string(crash[i].round) + "/J=" +
           crash[i].receivers.to_string();
  });
  return out;
}

std::vector<FaultyCommitment> enumerate_commitments(const FailureModel& model,
                                                    int agents, int horizon) {
  if (model.t < 0 || model.t > agents) {
    throw SchemaError("failure bound t must be in 0..n");
  }
  std::vector<AgentSet> faulty_sets;
  for (int size = 0; size <= model.t; ++size) {
    for (std::uint32_t bits = 0; bits < (1u << agents); ++bits) {
      if (std::popcount(bits) == size) faulty_sets.push_back(AgentSet(bits));
    }
  }
  std::vector<FaultyCommitment> out;
  if (!model.is_crash()) {
    for (AgentSet f : faulty_sets) out.push_back(FaultyCommitment{f, {}});
    return out;
  }

  std::vector<CrashSpec> options;
  for (int round = 1; round <= horizon; ++round) {
    for (AgentSet j : subsets_of(AgentSet::all(agents))) {
      options.push_back(CrashSpec{round, j});
    }
  }
  options.push_back(CrashSpec{horizon + 1, AgentSet{}});

  for (AgentSet f : faulty_sets) {
    std::vector<Agent> members;
    f.for_each([&](Agent i) { members.push_back(i); });
    std::vector<std::size_t> digit(members.size(), 0);
    while (true) {
      FaultyCommitment c{f, {}};
      for (std::size_t k = 0; k < members.size(); ++k) {
        c.crash[members[k]] = options[digit[k]];
      }
      out.push_back(c);
      std::size_t k = members.size();
      while (k > 0) {
        if (++digit[k - 1] < options.size()) break;
        digit[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  return out;
}

bool RoundBehavior::is_identity() const { return *this == RoundBehavior{}; }

std::string RoundBehavior::to_string(int agents) const {
  std::string out;
  for (Agent i = 0; i < agents; ++i) {
    if (!transmit_drop[i].empty()) {
      out += " tx" + std::to_string(i + 1) + "-x->" + transmit_drop[i].to_string();
    }
    if (!receive_drop[i].empty()) {
      out += " rx" + std::to_string(i + 1) + "-x<-" + receive_drop[i].to_string();
    }
  }
  if (!crash_state.empty()) out += " crashed" + crash_state.to_string();
  return out.empty() ? "identity" : out.substr(1);
}

AgentSet crash_state_in_round(const FailureModel& model,
                              const FaultyCommitment& commitment, int round) {
  AgentSet out;
  if (!model.has_crashed_state()) return out;
  commitment.faulty.for_each([&](Agent i) {
    if (commitment.crash[i].round <= round) out.insert(i);
  });
  return out;
}

std::vector<RoundBehavior> enumerate_round_behaviors(
    const FailureModel& model, int agents, const FaultyCommitment& commitment,
    int round) {
  const AgentSet all = AgentSet::all(agents);
  if (model.is_crash()) {
    RoundBehavior b;
    commitment.faulty.for_each([&](Agent i) {
      const CrashSpec& c = commitment.crash[i];
      if (round == c.round) b.transmit_drop[i] = c.receivers;
      if (round > c.round) b.transmit_drop[i] = all;
    });
    b.crash_state = crash_state_in_round(model, commitment, round);
    return {b};
  }

  // Each free slot is a (sender row or receiver row) that may drop any
  // subset of agents; behaviors are the product over slots.
  struct Slot {
    bool transmit;
    Agent agent;
  };
  std::vector<Slot> slots;
  commitment.faulty.for_each([&](Agent i) {
    if (model.omits_transmission()) slots.push_back(Slot{true, i});
    if (model.omits_reception()) slots.push_back(Slot{false, i});
  });
  const std::vector<AgentSet> choices = subsets_of(all);
  std::vector<std::size_t> digit(slots.size(), 0);
  std::vector<RoundBehavior> out;
  while (true) {
    RoundBehavior b;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      auto& row = slots[k].transmit ? b.transmit_drop : b.receive_drop;
      row[slots[k].agent] = choices[digit[k]];
    }
    out.push_back(b);
    std::size_t k = slots.size();
    while (k > 0) {
      if (++digit[k - 1] < choices.size()) break;
      digit[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

std::vector<ColumnChoice> column_choices(const FailureModel& model, int agents,
                                         const FaultyCommitment& commitment,
                                         int round, Agent receiver) {
  const AgentSet all = AgentSet::all(agents);
  if (model.is_crash()) {
    ColumnChoice c;
    commitment.faulty.for_each([&](Agent i) {
      const CrashSpec& spec = commitment.crash[i];
      if ((round == spec.round && spec.receivers.contains(receiver)) ||
          round > spec.round) {
        c.transmit.insert(i);
      }
    });
    return {c};
  }
  const std::vector<AgentSet> tx =
      model.omits_transmission() ? subsets_of(commitment.faulty)
                                 : std::vector<AgentSet>{AgentSet{}};
  const std::vector<AgentSet> rx =
      model.omits_reception() && commitment.faulty.contains(receiver)
          ? subsets_of(all)
          : std::vector<AgentSet>{AgentSet{}};
  std::vector<ColumnChoice> out;
  out.reserve(tx.size() * rx.size());
  for (AgentSet t : tx) {
    for (AgentSet r : rx) out.push_back(ColumnChoice{t, r});
  }
  return out;
}

ColumnCache::ColumnCache(const FailureModel& model, int agents,
                         std::span<const FaultyCommitment> commitments,
                         int horizon)
    : model_(model),
      agents_(agents),
      horizon_(horizon),
      commitments_(commitments),
      table_(commitments.size() * static_cast<std::size_t>(horizon + 1) *
             static_cast<std::size_t>(agents)) {}

const std::vector<ColumnChoice>& ColumnCache::get(std::uint32_t commitment,
                                                  int round, Agent receiver) {
  // Omission choices do not depend on the round; share slot 0.
  if (round < 1 || round > horizon_ || commitment >= commitments_.size() ||
      receiver < 0 || receiver >= agents_) {
    throw std::out_of_range("column cache lookup out of range");
  }
  const int r = model_.is_crash() ? round : 0;
  auto& slot = table_[(static_cast<std::size_t>(commitment) * (horizon_ + 1) + r) *
                          agents_ +
                      receiver];
  if (!slot) {
    slot = column_choices(model_, agents_, commitments_[commitment], round,
                          receiver);
  }
  return *slot;
}

RoundBehavior assemble_behavior(std::span<const ColumnChoice> columns,
                                AgentSet crash_state) {
  RoundBehavior b;
  for (Agent j = 0; j < static_cast<Agent>(columns.size()); ++j) {
    columns[j].transmit.for_each([&](Agent i) { b.transmit_drop[i].insert(j); });
    b.receive_drop[j] = columns[j].receive;
  }
  b.crash_state = crash_state;
  return b;
}

}  // namespace sbamc
