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

#include "sbamc/evaluator.hpp"

#include <deque>
#include <numeric>

namespace sbamc {

Evaluator::Evaluator(const Context& context, const Slice& slice)
    : context_(context), slice_(slice) {
  exists_mask_.resize(slice.size());
  for (std::uint32_t p = 0; p < slice.size(); ++p) {
    std::uint32_t mask = 0;
    for (Value v : context.init_vectors()[slice.init[p]]) mask |= 1u << v;
    exists_mask_[p] = mask;
  }
}

AgentSet Evaluator::resolve(std::uint32_t p, const Selector& s) const {
  switch (s.kind) {
    case Selector::Kind::kN: return slice_.nonfaulty[p];
    case Selector::Kind::kA: return slice_.active(p);
    case Selector::Kind::kAgt: return context_.all();
    case Selector::Kind::kExplicit: return s.members;
  }
  return {};
}

const std::vector<char>& Evaluator::eval(const FormulaPtr& f) {
  auto it = memo_.find(f.get());
  if (it != memo_.end()) return it->second.second;
  std::vector<char> result = compute(*f);
  auto [pos, inserted] =
      memo_.emplace(f.get(), std::make_pair(f, std::move(result)));
  return pos->second.second;
}

std::vector<char> Evaluator::knows(Agent i, const std::vector<char>& phi,
                                   const Selector* guard) const {
  const std::size_t groups = slice_.group_count(i);
  std::vector<char> group_ok(groups, 1);
  for (std::uint32_t g = 0; g < groups; ++g) {
    for (std::uint32_t q : slice_.group(i, g)) {
      if (phi[q]) continue;
      if (guard != nullptr && !resolve(q, *guard).contains(i)) continue;
      group_ok[g] = 0;
      break;
    }
  }
  std::vector<char> out(slice_.size());
  for (std::uint32_t p = 0; p < slice_.size(); ++p) {
    out[p] = group_ok[slice_.group_of[i][p]];
  }
  return out;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> parent;
};

}  // namespace

std::vector<char> Evaluator::common_belief(const Selector& s,
                                           const std::vector<char>& phi) const {
  const std::size_t size = slice_.size();
  UnionFind uf(size);
  for (Agent i = 0; i < context_.agents(); ++i) {
    for (std::uint32_t g = 0; g < slice_.group_count(i); ++g) {
      std::uint32_t first = Slice::kNone;
      for (std::uint32_t q : slice_.group(i, g)) {
        if (!resolve(q, s).contains(i)) continue;
        if (first == Slice::kNone) {
          first = q;
        } else {
          uf.unite(first, q);
        }
      }
    }
  }
  std::vector<char> bad_root(size, 0);
  for (std::uint32_t p = 0; p < size; ++p) {
    if (!phi[p]) bad_root[uf.find(p)] = 1;
  }
  std::vector<char> out(size);
  for (std::uint32_t p = 0; p < size; ++p) {
    out[p] = resolve(p, s).empty() || !bad_root[uf.find(p)];
  }
  return out;
}

std::vector<char> Evaluator::common_knowledge(
    const Selector& s, const std::vector<char>& phi) const {
  // reaches[p]: some point violating phi is reachable from p in one or more
  // steps. A group (i, g) is tainted once it contains a violating or
  // reaching point; every member p with i in S(p) then reaches.
  const std::size_t size = slice_.size();
  const int n = context_.agents();
  std::vector<std::vector<char>> tainted(n);
  for (Agent i = 0; i < n; ++i) tainted[i].assign(slice_.group_count(i), 0);
  std::vector<char> reaches(size, 0);
  std::deque<std::pair<Agent, std::uint32_t>> work;
  auto taint = [&](std::uint32_t q) {
    for (Agent i = 0; i < n; ++i) {
      const std::uint32_t g = slice_.group_of[i][q];
      if (!tainted[i][g]) {
        tainted[i][g] = 1;
        work.emplace_back(i, g);
      }
    }
  };
  for (std::uint32_t q = 0; q < size; ++q) {
    if (!phi[q]) taint(q);
  }
  while (!work.empty()) {
    auto [i, g] = work.front();
    work.pop_front();
    for (std::uint32_t p : slice_.group(i, g)) {
      if (reaches[p] || !resolve(p, s).contains(i)) continue;
      reaches[p] = 1;
      taint(p);
    }
  }
  std::vector<char> out(size);
  for (std::uint32_t p = 0; p < size; ++p) out[p] = !reaches[p];
  return out;
}

std::vector<char> Evaluator::compute(const Formula& f) {
  const std::size_t size = slice_.size();
  std::vector<char> out(size, 0);
  auto need_actions = [&] {
    if (slice_.actions.size() != size * slice_.agents) {
      throw ConstructionError("actions at time " + std::to_string(slice_.time) +
                              " are not fixed yet");
    }
  };
  if (!f.is_ground()) {
    throw SchemaError("formula " + f.to_string() + " has unbound variables");
  }
  switch (f.op) {
    case Op::kTrue:
      std::fill(out.begin(), out.end(), 1);
      break;
    case Op::kFalse:
      break;
    case Op::kDecides: {
      need_actions();
      const Action want = Action::decide(context_.value_of(f.value));
      for (std::uint32_t p = 0; p < size; ++p) {
        out[p] = slice_.action(p, f.agent) == want;
      }
      break;
    }
    case Op::kDecidesAll: {
      need_actions();
      const Action want = Action::decide(context_.value_of(f.value));
      for (std::uint32_t p = 0; p < size; ++p) {
        bool all = true;
        resolve(p, f.s1).for_each(
            [&](Agent i) { all = all && slice_.action(p, i) == want; });
        out[p] = all;
      }
      break;
    }
    case Op::kDecided:
      for (std::uint32_t p = 0; p < size; ++p) {
        out[p] = slice_.decided[p].contains(f.agent);
      }
      break;
    case Op::kIn:
      for (std::uint32_t p = 0; p < size; ++p) {
        out[p] = resolve(p, f.s1).contains(f.agent);
      }
      break;
    case Op::kSubset:
      for (std::uint32_t p = 0; p < size; ++p) {
        out[p] = resolve(p, f.s1).subset_of(resolve(p, f.s2));
      }
      break;
    case Op::kEmpty:
      for (std::uint32_t p = 0; p < size; ++p) out[p] = resolve(p, f.s1).empty();
      break;
    case Op::kExists: {
      const std::uint32_t bit = 1u << context_.value_of(f.value);
      for (std::uint32_t p = 0; p < size; ++p) out[p] = (exists_mask_[p] & bit) != 0;
      break;
    }
    case Op::kNot: {
      const auto& a = eval(f.kids[0]);
      for (std::size_t p = 0; p < size; ++p) out[p] = !a[p];
      break;
    }
    case Op::kAnd:
      std::fill(out.begin(), out.end(), 1);
      for (const FormulaPtr& k : f.kids) {
        const auto& a = eval(k);
        for (std::size_t p = 0; p < size; ++p) out[p] = out[p] && a[p];
      }
      break;
    case Op::kOr:
      for (const FormulaPtr& k : f.kids) {
        const auto& a = eval(k);
        for (std::size_t p = 0; p < size; ++p) out[p] = out[p] || a[p];
      }
      break;
    case Op::kImplies: {
      const auto& a = eval(f.kids[0]);
      const auto& b = eval(f.kids[1]);
      for (std::size_t p = 0; p < size; ++p) out[p] = !a[p] || b[p];
      break;
    }
    case Op::kIff: {
      const auto& a = eval(f.kids[0]);
      const auto& b = eval(f.kids[1]);
      for (std::size_t p = 0; p < size; ++p) out[p] = (a[p] != 0) == (b[p] != 0);
      break;
    }
    case Op::kK:
      out = knows(f.agent, eval(f.kids[0]), nullptr);
      break;
    case Op::kB:
      out = knows(f.agent, eval(f.kids[0]), &f.s1);
      break;
    case Op::kEK:
    case Op::kEB: {
      const auto& a = eval(f.kids[0]);
      std::vector<std::vector<char>> per_agent;
      for (Agent i = 0; i < context_.agents(); ++i) {
        per_agent.push_back(knows(i, a, f.op == Op::kEB ? &f.s1 : nullptr));
      }
      for (std::uint32_t p = 0; p < size; ++p) {
        bool all = true;
        resolve(p, f.s1).for_each([&](Agent i) { all = all && per_agent[i][p]; });
        out[p] = all;
      }
      break;
    }
    case Op::kCK:
      out = common_knowledge(f.s1, eval(f.kids[0]));
      break;
    case Op::kCB:
      out = common_belief(f.s1, eval(f.kids[0]));
      break;
  }
  return out;
}

Reach Evaluator::reachable(std::uint32_t p, const Selector& s,
                           bool knowledge) const {
  Reach r;
  const int n = context_.agents();
  std::vector<char> seen(slice_.size(), 0);
  std::vector<std::vector<char>> expanded(n);
  for (Agent i = 0; i < n; ++i) expanded[i].assign(slice_.group_count(i), 0);
  seen[p] = 1;
  r.points.push_back(p);
  r.predecessor.push_back(Slice::kNone);
  r.link.push_back(-1);
  for (std::size_t head = 0; head < r.points.size(); ++head) {
    const std::uint32_t u = r.points[head];
    const AgentSet su = resolve(u, s);
    for (Agent i = 0; i < n; ++i) {
      if (!su.contains(i)) continue;
      const std::uint32_t g = slice_.group_of[i][u];
      if (expanded[i][g]) continue;
      // In the undirected relation every member with i in S is linked to u,
      // and all of them share the group; in the directed one all members
      // are successors of u.
      expanded[i][g] = 1;
      for (std::uint32_t q : slice_.group(i, g)) {
        if (seen[q]) continue;
        if (!knowledge && !resolve(q, s).contains(i)) continue;
        seen[q] = 1;
        r.points.push_back(q);
        r.predecessor.push_back(u);
        r.link.push_back(i);
      }
    }
  }
  return r;
}

WitnessChain Evaluator::witness_chain(std::uint32_t p, const Selector& s,
                                      const FormulaPtr& target) {
  const std::vector<char>& goal = eval(target);
  const Reach r = reachable(p, s, false);
  WitnessChain out;
  std::vector<std::uint32_t> slot(slice_.size(), Slice::kNone);
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    slot[r.points[k]] = static_cast<std::uint32_t>(k);
  }
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    if (!goal[r.points[k]]) continue;
    out.found = true;
    std::size_t at = k;
    while (true) {
      out.points.push_back(r.points[at]);
      if (r.predecessor[at] == Slice::kNone) break;
      out.links.push_back(r.link[at]);
      at = slot[r.predecessor[at]];
    }
    std::reverse(out.points.begin(), out.points.end());
    std::reverse(out.links.begin(), out.links.end());
    break;
  }
  return out;
}

}  // namespace sbamc
