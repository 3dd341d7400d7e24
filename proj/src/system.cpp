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

#include "sbamc/system.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sbamc {

PointKey Slice::key(std::uint32_t p) const {
  PointKey k;
  for (Agent i = 0; i < agents; ++i) k.locals[i] = local(p, i);
  k.commitment = commitment[p];
  k.init = init[p];
  k.failed = failed[p].bits();
  k.decided = decided[p].bits();
  return k;
}

std::optional<std::uint32_t> Slice::find(const PointKey& k) const {
  auto it = index.find(k);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

InterpretedSystem::InterpretedSystem(std::shared_ptr<const Context> context,
                                     std::shared_ptr<const Protocol> protocol,
                                     std::vector<Slice> slices)
    : context_(std::move(context)),
      protocol_(std::move(protocol)),
      slices_(std::move(slices)) {}

std::size_t InterpretedSystem::point_count() const {
  std::size_t total = 0;
  for (const Slice& s : slices_) total += s.size();
  return total;
}

RunPrefix InterpretedSystem::run_to(int m, std::uint32_t p) const {
  std::vector<RoundBehavior> behaviors(m);
  std::uint32_t q = p;
  for (int k = m; k > 0; --k) {
    const Slice& s = slices_.at(k);
    behaviors[k - 1] = s.behaviors[s.behavior[q]];
    q = s.parent[q];
  }
  const Slice& s0 = slices_.at(0);
  const auto& inits = context_->init_vectors()[s0.init[q]];
  return replay(*context_, *protocol_, inits, s0.commitment[q], behaviors);
}

std::optional<std::uint32_t> InterpretedSystem::locate(const RunPrefix& run,
                                                       int m) const {
  if (m < 0 || m > horizon() || m > run.length()) return std::nullopt;
  PointKey k;
  for (Agent i = 0; i < context_->agents(); ++i) {
    k.locals[i] = run.states[m].locals[i];
  }
  k.commitment = run.commitment;
  k.init = context_->init_vector_index(run.inits);
  k.failed = run.failed_by(m).bits();
  AgentSet decided;
  for (int t = 0; t < m; ++t) {
    for (Agent i = 0; i < context_->agents(); ++i) {
      if (run.actions[t][i].is_decide()) decided.insert(i);
    }
  }
  k.decided = decided.bits();
  return slices_[m].find(k);
}

SystemBuilder::SystemBuilder(std::shared_ptr<const Context> context)
    : context_(std::move(context)) {
  const Context& ctx = *context_;
  const int n = ctx.agents();
  Slice s;
  s.time = 0;
  s.agents = n;
  for (std::uint32_t c = 0; c < ctx.commitments().size(); ++c) {
    for (std::uint32_t v = 0; v < ctx.init_vectors().size(); ++v) {
      const GlobalState g =
          initial_global_state(ctx, ctx.init_vectors()[v], c);
      const auto idx = static_cast<std::uint32_t>(s.commitment.size());
      s.locals.insert(s.locals.end(), g.locals.begin(), g.locals.end());
      s.commitment.push_back(c);
      s.init.push_back(v);
      s.failed.emplace_back();
      s.decided.emplace_back();
      s.nonfaulty.push_back(ctx.all() - ctx.commitments()[c].faulty);
      s.parent.push_back(Slice::kNone);
      s.behavior.push_back(Slice::kNone);
      s.index.emplace(s.key(idx), idx);
    }
  }
  index_groups(s);
  slices_.push_back(std::move(s));
}

void SystemBuilder::assign_actions(const Protocol& protocol) {
  Slice& s = current();
  const int n = s.agents;
  s.actions.assign(s.size() * n, Action::noop());
  for (std::uint32_t p = 0; p < s.size(); ++p) {
    for (Agent i = 0; i < n; ++i) {
      s.actions[p * n + i] =
          protocol_action(*context_, protocol, i, s.local(p, i));
    }
  }
}

namespace {

struct ColumnOption {
  StateId next;
  AgentSet flags;  // new fault flags contributed by this column
  ColumnChoice choice;
};

}  // namespace

void SystemBuilder::extend() {
  const Context& ctx = *context_;
  Exchange& ex = ctx.exchange();
  const FailureModel& model = ctx.failures();
  const int n = ctx.agents();
  const Slice& cur = slices_.back();
  if (cur.actions.size() != cur.size() * n) {
    throw std::logic_error("actions of the current layer are not assigned");
  }
  const int round = cur.time + 1;

  Slice next;
  next.time = round;
  next.agents = n;
  absl::flat_hash_map<std::uint64_t, std::vector<std::uint32_t>> behavior_index;

  auto intern_behavior = [&](const RoundBehavior& b) -> std::uint32_t {
    std::uint64_t h = b.crash_state.bits();
    for (Agent i = 0; i < n; ++i) {
      h = hash_mix(h, b.transmit_drop[i].bits());
      h = hash_mix(h, b.receive_drop[i].bits());
    }
    auto& bucket = behavior_index[h];
    for (std::uint32_t idx : bucket) {
      if (next.behaviors[idx] == b) return idx;
    }
    const auto idx = static_cast<std::uint32_t>(next.behaviors.size());
    next.behaviors.push_back(b);
    bucket.push_back(idx);
    return idx;
  };

  std::vector<std::vector<Message>> sent(n, std::vector<Message>(n));
  std::vector<Message> received(n);
  std::vector<std::vector<ColumnOption>> options(n);
  std::vector<std::size_t> odometer(n);
  std::vector<ColumnChoice> columns(n);
  ColumnCache column_cache(model, n, ctx.commitments(), ctx.horizon());
  constexpr StateId kUnset = ~StateId{0};
  std::vector<StateId> next_by_drop(std::size_t{1} << n, kUnset);

  for (std::uint32_t p = 0; p < cur.size(); ++p) {
    const FaultyCommitment& commitment = ctx.commitments()[cur.commitment[p]];
    const AgentSet crash_state =
        crash_state_in_round(model, commitment, round);
    AgentSet decided = cur.decided[p];
    for (Agent i = 0; i < n; ++i) {
      const Action a = cur.action(p, i);
      if (a.is_decide()) decided.insert(i);
      ex.send(i, cur.local(p, i), a, sent[i]);
    }
    for (Agent j = 0; j < n; ++j) {
      options[j].clear();
      AgentSet live;  // senders whose message to j is not bottom
      for (Agent i = 0; i < n; ++i) {
        received[i] = sent[i][j];
        if (!sent[i][j].is_bottom()) live.insert(i);
      }
      // The update only sees the effective drop set; memoize on it.
      std::fill(next_by_drop.begin(), next_by_drop.end(), kUnset);
      for (const ColumnChoice& col : column_cache.get(cur.commitment[p], round, j)) {
        const AgentSet tx = col.transmit & live;
        const AgentSet dropped = (col.transmit | col.receive) & live;
        AgentSet flags = tx;
        if (!(dropped - tx).empty()) flags.insert(j);
        StateId& s = next_by_drop[dropped.bits()];
        if (s == kUnset) {
          dropped.for_each([&](Agent i) { received[i] = Message::bottom(); });
          s = ex.update(j, cur.local(p, j), cur.action(p, j), received);
          dropped.for_each([&](Agent i) { received[i] = sent[i][j]; });
        }
        StateId next_state = s;
        if (crash_state.contains(j) && next_state != Exchange::kCrashed) {
          next_state = Exchange::kCrashed;
          flags.insert(j);
        }
        flags = flags - cur.failed[p];
        bool seen = false;
        for (const ColumnOption& o : options[j]) {
          if (o.next == next_state && o.flags == flags) {
            seen = true;
            break;
          }
        }
        if (!seen) options[j].push_back(ColumnOption{next_state, flags, col});
      }
    }

    std::fill(odometer.begin(), odometer.end(), 0);
    PointKey key;
    key.commitment = cur.commitment[p];
    key.init = cur.init[p];
    key.decided = decided.bits();
    while (true) {
      AgentSet failed = cur.failed[p];
      for (Agent j = 0; j < n; ++j) {
        const ColumnOption& o = options[j][odometer[j]];
        key.locals[j] = o.next;
        failed |= o.flags;
      }
      key.failed = failed.bits();
      auto [it, inserted] =
          next.index.try_emplace(key, static_cast<std::uint32_t>(next.size()));
      if (inserted) {
        if (!failed.subset_of(commitment.faulty)) {
          throw IntegrityError("semantic fault of agents " +
                               (failed - commitment.faulty).to_string() +
                               " outside commitment " +
                               commitment.to_string(model));
        }
        for (Agent j = 0; j < n; ++j) {
          columns[j] = options[j][odometer[j]].choice;
          next.locals.push_back(key.locals[j]);
        }
        next.commitment.push_back(key.commitment);
        next.init.push_back(key.init);
        next.failed.push_back(failed);
        next.decided.push_back(decided);
        next.nonfaulty.push_back(cur.nonfaulty[p]);
        next.parent.push_back(p);
        next.behavior.push_back(
            intern_behavior(assemble_behavior(columns, crash_state)));
      }
      Agent j = 0;
      while (j < n && ++odometer[j] == options[j].size()) {
        odometer[j] = 0;
        ++j;
      }
      if (j == n) break;
    }
  }
  index_groups(next);
  slices_.push_back(std::move(next));
}

void SystemBuilder::index_groups(Slice& s) const {
  const int n = s.agents;
  const auto size = static_cast<std::uint32_t>(s.size());
  s.group_of.assign(n, std::vector<std::uint32_t>(size));
  s.group_offsets.assign(n, {});
  s.group_members.assign(n, {});
  for (Agent i = 0; i < n; ++i) {
    absl::flat_hash_map<StateId, std::uint32_t> ids;
    std::vector<std::uint32_t> counts;
    for (std::uint32_t p = 0; p < size; ++p) {
      auto [it, inserted] = ids.try_emplace(
          s.local(p, i), static_cast<std::uint32_t>(counts.size()));
      if (inserted) counts.push_back(0);
      s.group_of[i][p] = it->second;
      ++counts[it->second];
    }
    auto& off = s.group_offsets[i];
    off.assign(counts.size() + 1, 0);
    for (std::size_t g = 0; g < counts.size(); ++g) off[g + 1] = off[g] + counts[g];
    std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
    auto& members = s.group_members[i];
    members.resize(size);
    for (std::uint32_t p = 0; p < size; ++p) {
      members[fill[s.group_of[i][p]]++] = p;
    }
  }
}

InterpretedSystem SystemBuilder::finish(
    std::shared_ptr<const Protocol> protocol) && {
  return InterpretedSystem(context_, std::move(protocol), std::move(slices_));
}

std::shared_ptr<const InterpretedSystem> build_system(
    std::shared_ptr<const Context> context,
    std::shared_ptr<const Protocol> protocol) {
  SystemBuilder builder(context);
  builder.assign_actions(*protocol);
  while (builder.time() < context->horizon()) {
    builder.extend();
    builder.assign_actions(*protocol);
  }
  return std::make_shared<const InterpretedSystem>(
      std::move(builder).finish(std::move(protocol)));
}

RunPrefix corresponding_run(const InterpretedSystem& a,
                            const InterpretedSystem& b, const RunPrefix& run) {
  if (a.horizon() != b.horizon()) {
    throw std::out_of_range("systems have different horizons");
  }
  if (run.length() > b.horizon()) {
    throw std::out_of_range("run is longer than the horizon");
  }
  return replay(b.context(), b.protocol(), run.inits, run.commitment,
                run.behaviors);
}

FaultReconciliation reconcile_semantic_faults(const InterpretedSystem& system) {
  const Context& ctx = system.context();
  FaultReconciliation report;
  std::vector<std::size_t> slot(ctx.commitments().size(), ~std::size_t{0});
  for (int m = 0; m <= system.horizon(); ++m) {
    const Slice& s = system.slice(m);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      const AgentSet faulty = ctx.commitments()[s.commitment[p]].faulty;
      if (!s.failed[p].subset_of(faulty)) {
        throw IntegrityError("semantic fault of agents " +
                             (s.failed[p] - faulty).to_string() +
                             " outside its commitment at time " +
                             std::to_string(m));
      }
      if (m != system.horizon()) continue;
      const AgentSet unrealized = faulty - s.failed[p];
      if (unrealized.empty()) continue;
      std::size_t& at = slot[s.commitment[p]];
      if (at == ~std::size_t{0}) {
        at = report.unrealized.size();
        report.unrealized.push_back(UnrealizedFault{s.commitment[p], {}, p});
      }
      report.unrealized[at].agents |= unrealized;
    }
  }
  std::sort(report.unrealized.begin(), report.unrealized.end(),
            [](const UnrealizedFault& x, const UnrealizedFault& y) {
              return x.commitment < y.commitment;
            });
  return report;
}

}  // namespace sbamc
