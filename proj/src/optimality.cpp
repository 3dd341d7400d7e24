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

#include "sbamc/optimality.hpp"

#include <algorithm>
#include <array>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/hash/hash.h"
#include "sbamc/system.hpp"

namespace sbamc {

DecisionTimes decision_times(const Context& context, const Protocol& protocol,
                             std::span<const Value> inits,
                             std::uint32_t commitment,
                             std::span<const RoundBehavior> behaviors) {
  const RunPrefix run = replay(context, protocol, inits, commitment, behaviors);
  DecisionTimes out;
  out.inits.assign(inits.begin(), inits.end());
  out.commitment = commitment;
  for (Agent i = 0; i < context.agents(); ++i) {
    out.times.push_back(run.decision_time(i));
  }
  return out;
}

std::vector<DecisionTimes> failure_free_decision_times(const Context& context,
                                                       const Protocol& protocol) {
  const std::uint32_t none = context.commitment_index(FaultyCommitment{});
  const std::vector<RoundBehavior> identity(context.horizon());
  std::vector<DecisionTimes> out;
  for (const auto& inits : context.init_vectors()) {
    out.push_back(decision_times(context, protocol, inits, none, identity));
  }
  return out;
}

AgentsMode parse_agents_mode(std::string_view name) {
  if (name == "all") return AgentsMode::kAll;
  if (name == "nonfaulty-only") return AgentsMode::kNonfaultyOnly;
  throw SchemaError("unknown agents mode '" + std::string(name) + "'");
}

std::string to_string(AgentsMode m) {
  return m == AgentsMode::kAll ? "all" : "nonfaulty-only";
}

DominanceStop parse_dominance_stop(std::string_view name) {
  if (name == "exhaustive") return DominanceStop::kExhaustive;
  if (name == "incomparable") return DominanceStop::kIncomparable;
  if (name == "first-refutation") return DominanceStop::kFirstRefutation;
  throw SchemaError("unknown stop rule '" + std::string(name) + "'");
}

std::string to_string(DominanceStop s) {
  switch (s) {
    case DominanceStop::kExhaustive:
      return "exhaustive";
    case DominanceStop::kIncomparable:
      return "incomparable";
    case DominanceStop::kFirstRefutation:
      return "first-refutation";
  }
  return "exhaustive";
}

std::string DominanceReport::verdict() const {
  if (!exhaustive && (a_le_b || b_le_a)) {
    if (!a_le_b) return "not a<=b";
    if (!b_le_a) return "not b<=a";
    return "unsettled";
  }
  if (a_le_b && b_le_a) return "both";
  if (a_le_b) return "a<=b";
  if (b_le_a) return "b<=a";
  return "incomparable";
}

namespace {

// Joint point of the two systems. Each agent's (state under a, state under
// b) pair is interned to one id.
struct JointKey {
  std::array<std::uint32_t, kMaxAgents> pair{};
  std::uint32_t commitment = 0;
  std::uint32_t init = 0;
  std::uint16_t decided_a = 0;
  std::uint16_t decided_b = 0;

  bool operator==(const JointKey&) const = default;
  template <typename H>
  friend H AbslHashValue(H h, const JointKey& k) {
    std::uint64_t x = hash_mix(k.commitment, k.init);
    x = hash_mix(x, (std::uint64_t{k.decided_a} << 16) | k.decided_b);
    for (std::size_t i = 0; i < k.pair.size(); i += 2)
      x = hash_mix(x, (std::uint64_t{k.pair[i]} << 32) | k.pair[i + 1]);
    return H::combine(std::move(h), x);
  }
};

class PairTable {
 public:
  std::uint32_t intern(StateId a, StateId b) {
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    auto [it, inserted] =
        ids_.try_emplace(key, static_cast<std::uint32_t>(pairs_.size()));
    if (inserted) pairs_.emplace_back(a, b);
    return it->second;
  }
  StateId a(std::uint32_t id) const { return pairs_[id].first; }
  StateId b(std::uint32_t id) const { return pairs_[id].second; }

 private:
  absl::flat_hash_map<std::uint64_t, std::uint32_t> ids_;
  std::vector<std::pair<StateId, StateId>> pairs_;
};

// Hash set of point indices keyed by the points they refer to, so that the
// table itself stays small. Hashes are kept beside the points.
struct IndexHash {
  const std::vector<std::uint64_t>* hashes;
  std::size_t operator()(std::uint32_t i) const { return (*hashes)[i]; }
};
struct IndexEq {
  const std::vector<JointKey>* points;
  bool operator()(std::uint32_t x, std::uint32_t y) const {
    return (*points)[x] == (*points)[y];
  }
};
using IndexSet = absl::flat_hash_set<std::uint32_t, IndexHash, IndexEq>;

struct JointLayer {
  std::vector<JointKey> points;
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> behavior;
  std::vector<RoundBehavior> behaviors;
};

struct JointOption {
  std::uint32_t pair;
  ColumnChoice choice;
};

}  // namespace

DominanceReport dominance(std::shared_ptr<const Context> context,
                          const Protocol& pa, const Protocol& pb,
                          AgentsMode mode, DominanceStop stop) {
  const Context& ctx = *context;
  Exchange& ex = ctx.exchange();
  const FailureModel& model = ctx.failures();
  const int n = ctx.agents();
  const int horizon = ctx.horizon();
  DominanceReport report;
  PairTable pairs;

  // With every agent counted, a run of a smaller omission commitment is
  // also a run of any larger one, so only maximal commitments are seeded.
  int max_faulty = 0;
  for (const FaultyCommitment& c : ctx.commitments()) {
    max_faulty = std::max(max_faulty, c.faulty.size());
  }
  const bool maximal_only = mode == AgentsMode::kAll && !model.is_crash();

  std::vector<JointLayer> layers(1);
  layers.reserve(horizon + 1);
  for (std::uint32_t c = 0; c < ctx.commitments().size(); ++c) {
    if (maximal_only && ctx.commitments()[c].faulty.size() != max_faulty) {
      continue;
    }
    for (std::uint32_t v = 0; v < ctx.init_vectors().size(); ++v) {
      const GlobalState g = initial_global_state(ctx, ctx.init_vectors()[v], c);
      JointKey k;
      for (Agent i = 0; i < n; ++i) k.pair[i] = pairs.intern(g.locals[i], g.locals[i]);
      k.commitment = c;
      k.init = v;
      layers[0].points.push_back(k);
      layers[0].parent.push_back(Slice::kNone);
      layers[0].behavior.push_back(Slice::kNone);
    }
  }
  const std::vector<JointKey> roots = layers[0].points;

  struct Pending {
    int time;
    std::uint32_t point;
    Agent agent;
  };
  std::optional<Pending> against_ab, against_ba, incon_ab, incon_ba;

  std::vector<StateId> loc_a(n), loc_b(n);
  std::vector<Action> act_a(n), act_b(n);
  std::vector<std::vector<Message>> sent_a(n, std::vector<Message>(n));
  std::vector<std::vector<Message>> sent_b(n, std::vector<Message>(n));
  std::vector<Message> recv_a(n), recv_b(n);
  std::vector<std::vector<JointOption>> options(n);
  std::vector<std::size_t> odometer(n);
  std::vector<ColumnChoice> columns(n);
  ColumnCache column_cache(model, n, ctx.commitments(), horizon);
  std::vector<bool> seen_drop(std::size_t{1} << n);
  std::vector<std::uint32_t> recent(std::size_t{1} << 16);
  bool stopped = false;

  for (int m = 0; m <= horizon && !stopped; ++m) {
    JointLayer& cur = layers[m];
    report.joint_points += cur.points.size();
    const bool last = m == horizon;
    JointLayer next;
    std::vector<std::uint64_t> hashes;
    if (!last) {
      next.points.reserve(cur.points.size() + cur.points.size() / 2);
      hashes.reserve(next.points.capacity());
    }
    IndexSet index(0, IndexHash{&hashes}, IndexEq{&next.points});
    if (!last) index.reserve(next.points.capacity());
    // Siblings and cousins share many children; a small direct-mapped
    // cache of recent insertions answers most lookups from warm memory.
    std::fill(recent.begin(), recent.end(), Slice::kNone);
    absl::flat_hash_map<std::uint64_t, std::vector<std::uint32_t>> behavior_index;

    // Loads point p into loc_*/act_* and returns who decides there.
    struct Decisions {
      AgentSet counted, da, db, now_a, now_b;
    };
    auto load = [&](std::uint32_t p) {
      const JointKey& k = cur.points[p];
      Decisions d;
      d.counted = mode == AgentsMode::kAll
                      ? ctx.all()
                      : ctx.all() - ctx.commitments()[k.commitment].faulty;
      d.da = AgentSet(k.decided_a);
      d.db = AgentSet(k.decided_b);
      for (Agent i = 0; i < n; ++i) {
        loc_a[i] = pairs.a(k.pair[i]);
        loc_b[i] = pairs.b(k.pair[i]);
        act_a[i] = protocol_action(ctx, pa, i, loc_a[i]);
        act_b[i] = protocol_action(ctx, pb, i, loc_b[i]);
        if (act_a[i].is_decide()) d.now_a.insert(i);
        if (act_b[i].is_decide()) d.now_b.insert(i);
      }
      return d;
    };

    // Judge the whole layer before paying for its successors.
    for (std::uint32_t p = 0; p < cur.points.size(); ++p) {
      const auto [counted, da, db, now_a, now_b] = load(p);
      counted.for_each([&](Agent i) {
        // Only first decisions count.
        if (now_a.contains(i) && !da.contains(i) && db.contains(i)) {
          report.a_le_b = false;
          if (!against_ab) against_ab = Pending{m, p, i};
        }
        if (now_b.contains(i) && !db.contains(i) && da.contains(i)) {
          report.b_le_a = false;
          if (!against_ba) against_ba = Pending{m, p, i};
        }
        if (last) {
          const bool fin_a = da.contains(i) || now_a.contains(i);
          const bool fin_b = db.contains(i) || now_b.contains(i);
          if (fin_b && !fin_a) {
            ++report.inconclusive_a_le_b;
            if (!incon_ab) incon_ab = Pending{m, p, i};
          }
          if (fin_a && !fin_b) {
            ++report.inconclusive_b_le_a;
            if (!incon_ba) incon_ba = Pending{m, p, i};
          }
        }
      });
    }
    if (last) break;
    if ((stop == DominanceStop::kIncomparable && !report.a_le_b &&
         !report.b_le_a) ||
        (stop == DominanceStop::kFirstRefutation &&
         (!report.a_le_b || !report.b_le_a))) {
      stopped = true;
      break;
    }

    for (std::uint32_t p = 0; p < cur.points.size(); ++p) {
      const JointKey k = cur.points[p];
      const FaultyCommitment& commitment = ctx.commitments()[k.commitment];
      const auto [counted, da, db, now_a, now_b] = load(p);
      // Once every counted agent has decided under both protocols nothing
      // below this point can matter.
      if (counted.subset_of((da | now_a) & (db | now_b))) continue;

      const int round = m + 1;
      const AgentSet crash_state = crash_state_in_round(model, commitment, round);
      for (Agent i = 0; i < n; ++i) {
        ex.send(i, loc_a[i], act_a[i], sent_a[i]);
        ex.send(i, loc_b[i], act_b[i], sent_b[i]);
      }
      for (Agent j = 0; j < n; ++j) {
        options[j].clear();
        AgentSet live;  // senders with a message to j in either run
        for (Agent i = 0; i < n; ++i) {
          recv_a[i] = sent_a[i][j];
          recv_b[i] = sent_b[i][j];
          if (!sent_a[i][j].is_bottom() || !sent_b[i][j].is_bottom()) {
            live.insert(i);
          }
        }
        // Without fault flags in the key only the effective drop set
        // matters.
        std::fill(seen_drop.begin(), seen_drop.end(), false);
        for (const ColumnChoice& col : column_cache.get(k.commitment, round, j)) {
          const AgentSet dropped = (col.transmit | col.receive) & live;
          if (seen_drop[dropped.bits()]) continue;
          seen_drop[dropped.bits()] = true;
          dropped.for_each([&](Agent i) {
            recv_a[i] = Message::bottom();
            recv_b[i] = Message::bottom();
          });
          StateId sa = ex.update(j, loc_a[j], act_a[j], recv_a);
          StateId sb = ex.update(j, loc_b[j], act_b[j], recv_b);
          dropped.for_each([&](Agent i) {
            recv_a[i] = sent_a[i][j];
            recv_b[i] = sent_b[i][j];
          });
          if (crash_state.contains(j)) {
            sa = Exchange::kCrashed;
            sb = Exchange::kCrashed;
          }
          const std::uint32_t id = pairs.intern(sa, sb);
          bool seen = false;
          for (const JointOption& o : options[j]) {
            if (o.pair == id) {
              seen = true;
              break;
            }
          }
          if (!seen) options[j].push_back(JointOption{id, col});
        }
      }
      JointKey nk;
      nk.commitment = k.commitment;
      nk.init = k.init;
      nk.decided_a = static_cast<std::uint16_t>((da | now_a).bits());
      nk.decided_b = static_cast<std::uint16_t>((db | now_b).bits());
      std::fill(odometer.begin(), odometer.end(), 0);
      while (true) {
        for (Agent j = 0; j < n; ++j) nk.pair[j] = options[j][odometer[j]].pair;
        const std::uint64_t h = absl::Hash<JointKey>{}(nk);
        std::uint32_t& slot = recent[h & (recent.size() - 1)];
        bool fresh = false;
        if (slot == Slice::kNone || !(next.points[slot] == nk)) {
          const auto candidate = static_cast<std::uint32_t>(next.points.size());
          next.points.push_back(nk);
          hashes.push_back(h);
          auto [it, inserted] = index.insert(candidate);
          if (inserted) {
            fresh = true;
          } else {
            next.points.pop_back();
            hashes.pop_back();
          }
          slot = *it;
        }
        if (fresh) {
          for (Agent j = 0; j < n; ++j) columns[j] = options[j][odometer[j]].choice;
          const RoundBehavior b = assemble_behavior(columns, crash_state);
          std::uint64_t bh = b.crash_state.bits();
          for (Agent i = 0; i < n; ++i) {
            bh = hash_mix(bh, b.transmit_drop[i].bits());
            bh = hash_mix(bh, b.receive_drop[i].bits());
          }
          auto& bucket = behavior_index[bh];
          std::uint32_t bidx = Slice::kNone;
          for (std::uint32_t x : bucket) {
            if (next.behaviors[x] == b) bidx = x;
          }
          if (bidx == Slice::kNone) {
            bidx = static_cast<std::uint32_t>(next.behaviors.size());
            next.behaviors.push_back(b);
            bucket.push_back(bidx);
          }
          next.parent.push_back(p);
          next.behavior.push_back(bidx);
        }
        Agent j = 0;
        while (j < n && ++odometer[j] == options[j].size()) {
          odometer[j] = 0;
          ++j;
        }
        if (j == n) break;
      }
    }
    // Witness replay only needs parents, behaviors and the roots.
    std::vector<JointKey>().swap(cur.points);
    if (!last && !stopped) layers.push_back(std::move(next));
  }
  report.exhaustive = !stopped;

  auto witness = [&](const Pending& at) {
    DominanceWitness w;
    std::vector<RoundBehavior> behaviors(at.time);
    std::uint32_t q = at.point;
    for (int k = at.time; k > 0; --k) {
      behaviors[k - 1] = layers[k].behaviors[layers[k].behavior[q]];
      q = layers[k].parent[q];
    }
    const JointKey& root = roots[q];
    w.inits = ctx.init_vectors()[root.init];
    w.commitment = root.commitment;
    w.behaviors = std::move(behaviors);
    w.agent = at.agent;
    w.time_a = decision_times(ctx, pa, w.inits, w.commitment, w.behaviors)
                   .times[at.agent];
    w.time_b = decision_times(ctx, pb, w.inits, w.commitment, w.behaviors)
                   .times[at.agent];
    return w;
  };
  if (against_ab) report.refutes_a_le_b = witness(*against_ab);
  if (against_ba) report.refutes_b_le_a = witness(*against_ba);
  if (incon_ab) report.inconclusive_example_a_le_b = witness(*incon_ab);
  if (incon_ba) report.inconclusive_example_b_le_a = witness(*incon_ba);
  return report;
}

std::optional<MemoryFactorization> default_factorization(const Exchange& ex) {
  if (ex.name() == "fip") return fip_factorization();
  if (ex.name() == "fault-report") return fault_report_factorization();
  return std::nullopt;
}

namespace {

constexpr const char* kScope =
    "certified relative to the listed candidates only, up to the horizon";

CandidateResult screen(std::shared_ptr<const Context> context,
                       const Candidate& c) {
  CandidateResult r;
  r.name = c.name;
  auto system = build_system(context, c.protocol);
  r.sba = check_sba(*system, Selector::nonfaulty());
  r.rejected = !r.sba.pass;
  return r;
}

}  // namespace

ProbeReport optimality_probe(std::shared_ptr<const Context> context,
                             const Candidate& p,
                             const std::vector<Candidate>& candidates,
                             AgentsMode mode) {
  ProbeReport report;
  report.scope = kScope;
  for (const Candidate& c : candidates) {
    CandidateResult r = screen(context, c);
    if (!r.rejected) {
      r.dominance = dominance(context, *c.protocol, *p.protocol, mode);
      r.refutes = r.dominance->a_le_b && !r.dominance->b_le_a;
      report.holds = report.holds && !r.refutes;
    }
    report.candidates.push_back(std::move(r));
  }
  return report;
}

ProbeReport optimum_probe(std::shared_ptr<const Context> context,
                          const Candidate& p,
                          const std::vector<Candidate>& candidates,
                          AgentsMode mode) {
  ProbeReport report;
  report.scope = kScope;
  for (const Candidate& c : candidates) {
    CandidateResult r = screen(context, c);
    if (!r.rejected) {
      r.dominance = dominance(context, *p.protocol, *c.protocol, mode);
      r.refutes = !r.dominance->a_le_b;
      report.holds = report.holds && !r.refutes;
    }
    report.candidates.push_back(std::move(r));
  }
  auto system = build_system(context, p.protocol);
  const auto inputs = reachable_inputs(*system);
  Exchange& ex = context->exchange();
  const auto fact = default_factorization(ex);
  const MemoryFactorization* f = fact ? &*fact : nullptr;
  report.no_decision_info = check_no_decision_info(ex, inputs);
  report.no_action_info = check_no_action_info(ex, f, inputs);
  report.records_decision_info = check_records_decision_info(ex, f, inputs);
  report.state_failures =
      context->failures().has_crashed_state()
          ? "state failures only produce the crashed state, where every protocol "
            "performs noop"
          : "the failure model never perturbs local states";
  return report;
}

}  // namespace sbamc
