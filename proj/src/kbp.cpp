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

#include "sbamc/kbp.hpp"

#include <thread>

#include "sbamc/evaluator.hpp"

namespace sbamc {

DecisionCondition parse_condition(std::string_view name) {
  if (name == "bn-cbn") return DecisionCondition::kBnCbn;
  if (name == "ba-cba") return DecisionCondition::kBaCba;
  if (name == "k-cka") return DecisionCondition::kKCka;
  throw SchemaError("unknown decision condition '" + std::string(name) + "'");
}

std::string to_string(DecisionCondition c) {
  switch (c) {
    case DecisionCondition::kBnCbn: return "bn-cbn";
    case DecisionCondition::kBaCba: return "ba-cba";
    case DecisionCondition::kKCka: return "k-cka";
  }
  return "?";
}

std::vector<std::vector<FormulaPtr>> condition_formulas(DecisionCondition c,
                                                        const Context& context) {
  const int n = context.agents();
  std::vector<std::vector<FormulaPtr>> out(n);
  for (Value v = 0; v < context.values(); ++v) {
    const FormulaPtr ex = fm::exists(context.value_labels()[v]);
    FormulaPtr group;
    switch (c) {
      case DecisionCondition::kBnCbn: group = fm::CB(Selector::nonfaulty(), ex); break;
      case DecisionCondition::kBaCba: group = fm::CB(Selector::active(), ex); break;
      case DecisionCondition::kKCka: group = fm::CK(Selector::active(), ex); break;
    }
    for (Agent i = 0; i < n; ++i) {
      switch (c) {
        case DecisionCondition::kBnCbn:
          out[i].push_back(fm::B(Selector::nonfaulty(), i, group));
          break;
        case DecisionCondition::kBaCba:
          out[i].push_back(fm::B(Selector::active(), i, group));
          break;
        case DecisionCondition::kKCka:
          out[i].push_back(fm::K(i, group));
          break;
      }
    }
  }
  return out;
}

std::vector<std::vector<std::vector<char>>> evaluate_conditions(
    const Context& context, const Slice& slice,
    const std::vector<std::vector<FormulaPtr>>& formulas, int jobs) {
  const int n = context.agents();
  const int values = context.values();
  std::vector<std::vector<std::vector<char>>> truth(
      n, std::vector<std::vector<char>>(values));
  auto work = [&](Value v) {
    Evaluator ev(context, slice);
    for (Agent i = 0; i < n; ++i) truth[i][v] = ev.eval(formulas[i][v]);
  };
  if (jobs <= 1 || values == 1) {
    for (Value v = 0; v < values; ++v) work(v);
    return truth;
  }
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, values);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Value v = w; v < values; v += workers) work(v);
    });
  }
  for (std::thread& t : pool) t.join();
  return truth;
}

std::vector<Action> program_selection(
    const Context& context, const Slice& slice,
    const std::vector<std::vector<std::vector<char>>>& truth) {
  const int n = context.agents();
  std::vector<Action> out(slice.size() * n, Action::noop());
  for (std::uint32_t p = 0; p < slice.size(); ++p) {
    for (Agent i = 0; i < n; ++i) {
      if (context.exchange().is_crashed(slice.local(p, i))) continue;
      if (slice.decided[p].contains(i)) continue;
      for (Value v = 0; v < context.values(); ++v) {
        if (truth[i][v][p]) {
          out[p * n + i] = Action::decide(v);
          break;
        }
      }
    }
  }
  return out;
}

namespace {

std::string point_text(const Context& context, const Slice& slice,
                       std::uint32_t p) {
  return "time " + std::to_string(slice.time) + " point #" + std::to_string(p) +
         " (commitment " +
         context.commitments()[slice.commitment[p]].to_string(context.failures()) +
         ")";
}

}  // namespace

Implementation construct_implementation(std::shared_ptr<const Context> context,
                                        DecisionCondition condition, int jobs) {
  const Context& ctx = *context;
  const int n = ctx.agents();
  const auto formulas = condition_formulas(condition, ctx);
  auto table = std::make_shared<ProtocolTable>(
      "kbp(" + to_string(condition) + ")", n);
  SystemBuilder builder(context);
  while (true) {
    Slice& s = builder.current();
    const auto truth = evaluate_conditions(ctx, s, formulas, jobs);
    for (Agent i = 0; i < n; ++i) {
      for (std::uint32_t g = 0; g < s.group_count(i); ++g) {
        const auto members = s.group(i, g);
        const std::uint32_t first = members[0];
        // A crashed agent acts noop whatever it did before.
        const bool crashed = ctx.exchange().is_crashed(s.local(first, i));
        for (std::uint32_t q : members) {
          if (!crashed &&
              s.decided[q].contains(i) != s.decided[first].contains(i)) {
            throw ConstructionError(
                "agent " + std::to_string(i + 1) +
                " cannot tell from its state whether it has decided: " +
                point_text(ctx, s, first) + " vs " + point_text(ctx, s, q));
          }
          for (Value v = 0; v < ctx.values(); ++v) {
            if (truth[i][v][q] != truth[i][v][first]) {
              throw ConstructionError(
                  "condition for agent " + std::to_string(i + 1) +
                  " is not local: " + point_text(ctx, s, first) + " vs " +
                  point_text(ctx, s, q));
            }
          }
        }
      }
    }
    s.actions = program_selection(ctx, s, truth);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      for (Agent i = 0; i < n; ++i) {
        if (!table->set(i, s.local(p, i), s.action(p, i))) {
          throw ConstructionError("conflicting actions for agent " +
                                  std::to_string(i + 1) + " at " +
                                  ctx.exchange().describe(s.local(p, i)));
        }
      }
    }
    if (builder.time() == ctx.horizon()) break;
    builder.extend();
  }
  auto system = std::make_shared<const InterpretedSystem>(
      std::move(builder).finish(table));
  return {table, system};
}

ImplementationCheck verify_implementation(std::shared_ptr<const Context> context,
                                          std::shared_ptr<const Protocol> protocol,
                                          DecisionCondition condition,
                                          int jobs) {
  const Context& ctx = *context;
  ImplementationCheck result;
  std::shared_ptr<const InterpretedSystem> system;
  try {
    system = build_system(context, protocol);
  } catch (const ConstructionError& e) {
    result.ok = false;
    result.message = e.what();
    return result;
  }
  const auto formulas = condition_formulas(condition, ctx);
  for (int m = 0; m <= system->horizon(); ++m) {
    const Slice& s = system->slice(m);
    const auto truth = evaluate_conditions(ctx, s, formulas, jobs);
    const auto selected = program_selection(ctx, s, truth);
    for (std::uint32_t p = 0; p < s.size(); ++p) {
      for (Agent i = 0; i < ctx.agents(); ++i) {
        if (selected[p * ctx.agents() + i] == s.action(p, i)) continue;
        result.ok = false;
        result.time = m;
        result.point = p;
        result.agent = i;
        result.expected = selected[p * ctx.agents() + i];
        result.actual = s.action(p, i);
        result.message = "agent " + std::to_string(i + 1) + " at " +
                         point_text(ctx, s, p) + " performs " +
                         to_string(result.actual, ctx) + " but the program selects " +
                         to_string(result.expected, ctx);
        return result;
      }
    }
  }
  return result;
}

}  // namespace sbamc
