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

#include "oracles/brute_force.hpp"

#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "sbamc/exchange.hpp"

namespace sbamc::oracle {

namespace {

struct Run {
  std::vector<Value> inits;
  std::vector<std::uint32_t> drops;  // [round * n + sender] -> receivers
  std::vector<StateId> locals;
  std::uint32_t failed = 0;
  std::uint32_t decided = 0;
  std::uint32_t nonfaulty = 0;
};

std::uint32_t members(std::uint32_t nonfaulty, std::uint32_t active,
                      Group g, int n) {
  switch (g) {
    case Group::kNonfaulty: return nonfaulty;
    case Group::kActive: return active;
    case Group::kEveryone: return (1u << n) - 1;
  }
  return 0;
}

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

std::set<std::vector<std::uint32_t>> drop_tables(int n, int t, int rounds) {
  std::set<std::vector<std::uint32_t>> tables;
  const int size = std::min(t, n);
  for (std::uint32_t f = 0; f < (1u << n); ++f) {
    if (std::popcount(f) != size) continue;
    std::vector<int> faulty;
    for (int i = 0; i < n; ++i) {
      if ((f >> i) & 1u) faulty.push_back(i);
    }
    const std::size_t digits = faulty.size() * rounds;
    std::vector<std::uint32_t> digit(digits, 0);
    while (true) {
      std::vector<std::uint32_t> table(rounds * n, 0);
      for (int r = 0; r < rounds; ++r) {
        for (std::size_t k = 0; k < faulty.size(); ++k) {
          table[r * n + faulty[k]] = digit[r * faulty.size() + k];
        }
      }
      tables.insert(std::move(table));
      std::size_t k = digits;
      while (k > 0) {
        if (++digit[k - 1] < (1u << n)) break;
        digit[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  return tables;
}

}  // namespace

WholeHorizonResult whole_horizon_send_omission(const Context& context,
                                               Group group) {
  if (context.failures().kind != FailureKind::kSendOmit) {
    throw std::invalid_argument("oracle handles send omission only");
  }
  Exchange& ex = context.exchange();
  const int n = context.agents();
  const int nv = context.values();
  const int horizon = context.horizon();
  const int rounds = horizon + 1;

  std::vector<Run> runs;
  for (const auto& table : drop_tables(n, context.failures().t, rounds)) {
    std::uint32_t faulty = 0;
    for (int r = 0; r < rounds; ++r) {
      for (int i = 0; i < n; ++i) {
        if (table[r * n + i] != 0) faulty |= 1u << i;
      }
    }
    for (const auto& inits : context.init_vectors()) {
      Run run;
      run.inits = inits;
      run.drops = table;
      run.nonfaulty = ((1u << n) - 1) & ~faulty;
      for (int i = 0; i < n; ++i) {
        run.locals.push_back(ex.initial_state(i, inits[i]));
      }
      runs.push_back(std::move(run));
    }
  }

  WholeHorizonResult out;
  out.runs = runs.size();
  out.truth.resize(horizon + 1);

  for (int m = 0; m <= horizon; ++m) {
    // points of this layer
    std::map<PointKey, int> index;
    std::vector<PointKey> keys;
    std::vector<std::uint32_t> exists;
    std::vector<int> point_of(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const Run& run = runs[r];
      PointKey key{run.locals, run.nonfaulty, ((1u << n) - 1) & ~run.failed};
      auto [it, fresh] = index.emplace(key, static_cast<int>(keys.size()));
      if (fresh) {
        keys.push_back(key);
        std::uint32_t mask = 0;
        for (Value v : run.inits) mask |= 1u << v;
        exists.push_back(mask);
      }
      point_of[r] = it->second;
    }
    const int np = static_cast<int>(keys.size());
    std::vector<std::uint32_t> group_of(np);
    for (int p = 0; p < np; ++p) {
      group_of[p] = members(keys[p].nonfaulty, keys[p].active, group, n);
    }

    // indistinguishability classes and common-belief components
    std::vector<std::map<StateId, std::vector<int>>> classes(n);
    for (int p = 0; p < np; ++p) {
      for (int i = 0; i < n; ++i) classes[i][keys[p].locals[i]].push_back(p);
    }
    std::vector<int> parent(np);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i) {
      for (const auto& [_, pts] : classes[i]) {
        int first = -1;
        for (int q : pts) {
          if (!((group_of[q] >> i) & 1u)) continue;
          if (first < 0) {
            first = q;
          } else {
            parent[find(parent, q)] = find(parent, first);
          }
        }
      }
    }
    // per component, the values present at every member
    std::vector<std::uint32_t> common(np, ~0u);
    for (int p = 0; p < np; ++p) {
      if (group_of[p] == 0) continue;
      common[find(parent, p)] &= exists[p];
    }
    std::vector<std::uint32_t> cb(np);
    for (int p = 0; p < np; ++p) {
      cb[p] = group_of[p] == 0 ? ~0u : common[find(parent, p)];
    }

    auto& truth = out.truth[m];
    for (int p = 0; p < np; ++p) {
      std::vector<char> row(n * nv, 0);
      for (int i = 0; i < n; ++i) {
        std::uint32_t believed = ~0u;
        for (int q : classes[i][keys[p].locals[i]]) {
          if ((group_of[q] >> i) & 1u) believed &= cb[q];
        }
        for (int v = 0; v < nv; ++v) row[i * nv + v] = (believed >> v) & 1u;
      }
      truth.emplace(keys[p], std::move(row));
    }

    // actions of the program, then the next round
    std::vector<std::vector<Action>> actions(runs.size(),
                                             std::vector<Action>(n));
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const Run& run = runs[r];
      const std::vector<char>& row = truth.at(keys[point_of[r]]);
      for (int i = 0; i < n; ++i) {
        Action a;
        if (!((run.decided >> i) & 1u)) {
          for (int v = 0; v < nv; ++v) {
            if (row[i * nv + v]) {
              a = Action::decide(v);
              break;
            }
          }
        }
        actions[r][i] = a;
        auto [it, fresh] = out.table.emplace(std::pair{i, run.locals[i]}, a.value);
        if (!fresh && it->second != a.value) out.locality_ok = false;
      }
    }
    if (m == horizon) break;

    std::vector<std::vector<Message>> sent(n, std::vector<Message>(n));
    std::vector<Message> received(n);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      Run& run = runs[r];
      for (int i = 0; i < n; ++i) ex.send(i, run.locals[i], actions[r][i], sent[i]);
      std::vector<StateId> next(n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const bool dropped = (run.drops[m * n + i] >> j) & 1u;
          if (dropped && sent[i][j].is_bottom()) {
            throw std::logic_error("oracle assumes every message is non-bottom");
          }
          received[i] = dropped ? Message::bottom() : sent[i][j];
        }
        next[j] = ex.update(j, run.locals[j], actions[r][j], received);
      }
      for (int i = 0; i < n; ++i) {
        if (run.drops[m * n + i] != 0) run.failed |= 1u << i;
        if (actions[r][i].is_decide()) run.decided |= 1u << i;
      }
      run.locals = std::move(next);
    }
  }
  return out;
}

int shortest_belief_path(const Slice& slice, std::uint32_t origin, Group group,
                         const std::vector<char>& target) {
  const int n = slice.agents;
  const std::uint32_t np = static_cast<std::uint32_t>(slice.size());
  auto in_group = [&](std::uint32_t p, int i) {
    const std::uint32_t g =
        members(slice.nonfaulty[p].bits(),
                ((1u << n) - 1) & ~slice.failed[p].bits(), group, n);
    return ((g >> i) & 1u) != 0;
  };
  std::vector<std::unordered_map<StateId, std::vector<std::uint32_t>>> classes(n);
  for (std::uint32_t p = 0; p < np; ++p) {
    for (int i = 0; i < n; ++i) {
      if (in_group(p, i)) classes[i][slice.locals[p * n + i]].push_back(p);
    }
  }
  std::vector<int> dist(np, -1);
  std::deque<std::uint32_t> queue{origin};
  dist[origin] = 0;
  while (!queue.empty()) {
    const std::uint32_t p = queue.front();
    queue.pop_front();
    if (target[p]) return dist[p];
    for (int i = 0; i < n; ++i) {
      if (!in_group(p, i)) continue;
      for (std::uint32_t q : classes[i][slice.locals[p * n + i]]) {
        if (dist[q] >= 0) continue;
        dist[q] = dist[p] + 1;
        queue.push_back(q);
      }
    }
  }
  return -1;
}

}  // namespace sbamc::oracle
