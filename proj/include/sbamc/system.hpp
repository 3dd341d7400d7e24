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

#ifndef SBAMC_SYSTEM_HPP_
#define SBAMC_SYSTEM_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "sbamc/context.hpp"
#include "sbamc/kernel.hpp"
#include "sbamc/protocol.hpp"

namespace sbamc {

/// Everything that determines formula truth at a point, and the future of
/// its run under a fixed protocol.
struct PointKey {
  std::array<StateId, kMaxAgents> locals{};
  std::uint32_t commitment = 0;
  std::uint32_t init = 0;
  std::uint32_t failed = 0;
  std::uint32_t decided = 0;

  bool operator==(const PointKey&) const = default;
  template <typename H>
  friend H AbslHashValue(H h, const PointKey& k) {
    std::uint64_t x = hash_mix(k.commitment, k.init);
    x = hash_mix(x, (std::uint64_t{k.failed} << 32) | k.decided);
    for (std::size_t i = 0; i < k.locals.size(); i += 2)
      x = hash_mix(x, (std::uint64_t{k.locals[i]} << 32) | k.locals[i + 1]);
    return H::combine(std::move(h), x);
  }
};

/**
 * The deduplicated time-m points of one system. A point stands for every run
 * prefix reaching the same key; the first prefix found is kept as its
 * provenance (parent point at time m-1 plus the round-m behavior).
 */
struct Slice {
  static constexpr std::uint32_t kNone = ~0u;

  int time = 0;
  int agents = 0;

  std::vector<StateId> locals;  // point-major, `agents` entries per point
  std::vector<std::uint32_t> commitment;
  std::vector<std::uint32_t> init;
  std::vector<AgentSet> failed;     // semantic faults in rounds 1..time
  std::vector<AgentSet> decided;    // agents that decided before `time`
  std::vector<AgentSet> nonfaulty;  // Agt \ F
  std::vector<Action> actions;      // at `time`, point-major; empty until set

  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> behavior;
  std::vector<RoundBehavior> behaviors;  // round-`time` behaviors in use

  // Per-agent partition of the points by local state, in CSR form.
  std::vector<std::vector<std::uint32_t>> group_of;
  std::vector<std::vector<std::uint32_t>> group_offsets;
  std::vector<std::vector<std::uint32_t>> group_members;

  absl::flat_hash_map<PointKey, std::uint32_t> index;

  std::size_t size() const { return commitment.size(); }
  StateId local(std::uint32_t p, Agent i) const { return locals[p * agents + i]; }
  Action action(std::uint32_t p, Agent i) const { return actions[p * agents + i]; }
  AgentSet active(std::uint32_t p) const {
    return AgentSet::all(agents) - failed[p];
  }
  std::size_t group_count(Agent i) const { return group_offsets[i].size() - 1; }
  std::span<const std::uint32_t> group(Agent i, std::uint32_t g) const {
    const auto& off = group_offsets[i];
    return {group_members[i].data() + off[g], off[g + 1] - off[g]};
  }
  std::span<const std::uint32_t> peers(Agent i, std::uint32_t p) const {
    return group(i, group_of[i][p]);
  }
  PointKey key(std::uint32_t p) const;
  std::optional<std::uint32_t> find(const PointKey& k) const;
};

/// The interpreted system of a protocol in a context, truncated at the
/// context horizon.
class InterpretedSystem {
 public:
  InterpretedSystem(std::shared_ptr<const Context> context,
                    std::shared_ptr<const Protocol> protocol,
                    std::vector<Slice> slices);

  const Context& context() const { return *context_; }
  std::shared_ptr<const Context> context_ptr() const { return context_; }
  const Protocol& protocol() const { return *protocol_; }
  std::shared_ptr<const Protocol> protocol_ptr() const { return protocol_; }
  int horizon() const { return static_cast<int>(slices_.size()) - 1; }
  const Slice& slice(int m) const { return slices_.at(m); }
  std::size_t point_count() const;

  /// The provenance run of point p at time m, replayed from its inits.
  RunPrefix run_to(int m, std::uint32_t p) const;
  /// The point reached by `run` at time m, if it is in this system.
  std::optional<std::uint32_t> locate(const RunPrefix& run, int m) const;

 private:
  std::shared_ptr<const Context> context_;
  std::shared_ptr<const Protocol> protocol_;
  std::vector<Slice> slices_;
};

/**
 * Layer-by-layer construction. The caller fixes the actions of the current
 * layer, by protocol or directly, before extending to the next one.
 */
class SystemBuilder {
 public:
  explicit SystemBuilder(std::shared_ptr<const Context> context);

  int time() const { return static_cast<int>(slices_.size()) - 1; }
  Slice& current() { return slices_.back(); }
  const Slice& current() const { return slices_.back(); }

  /// Fills current().actions from `protocol`; crashed states get noop.
  void assign_actions(const Protocol& protocol);
  /// Builds the next layer from the current actions. Throws IntegrityError
  /// if a semantic fault falls outside its commitment.
  void extend();

  InterpretedSystem finish(std::shared_ptr<const Protocol> protocol) &&;

 private:
  void index_groups(Slice& s) const;
  std::shared_ptr<const Context> context_;
  std::vector<Slice> slices_;
};

std::shared_ptr<const InterpretedSystem> build_system(
    std::shared_ptr<const Context> context,
    std::shared_ptr<const Protocol> protocol);

/// The run of `b` with the same initial state and adversary behavior as
/// `run`. Throws std::out_of_range if the horizons differ or the run is
/// longer than the horizon.
RunPrefix corresponding_run(const InterpretedSystem& a,
                            const InterpretedSystem& b, const RunPrefix& run);

struct UnrealizedFault {
  std::uint32_t commitment = 0;
  AgentSet agents;  // committed but fault-free through the horizon in some run
  std::uint32_t example_point = 0;  // at the horizon
};

struct FaultReconciliation {
  std::vector<UnrealizedFault> unrealized;
};

/// Hard check that every flagged agent is committed (IntegrityError
/// otherwise), plus the committed agents that never fail within the horizon.
FaultReconciliation reconcile_semantic_faults(const InterpretedSystem& system);

}  // namespace sbamc

#endif  // SBAMC_SYSTEM_HPP_
