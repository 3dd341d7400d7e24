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

#include "sbamc/dot.hpp"

#include <sstream>

#include "sbamc/protocol.hpp"

namespace sbamc {
namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string node_id(std::size_t run, Agent i, int t) {
  return "r" + std::to_string(run) + "_a" + std::to_string(i + 1) + "_t" +
         std::to_string(t);
}

}  // namespace

std::string chain_to_dot(const InterpretedSystem& system, int m,
                         const WitnessChain& chain, std::string_view title) {
  const Context& ctx = system.context();
  const Protocol& protocol = system.protocol();
  const int n = ctx.agents();
  std::ostringstream out;
  out << "digraph witness {\n";
  out << "  rankdir=LR;\n";
  out << "  labelloc=t;\n";
  out << "  label=" << quoted(title) << ";\n";
  out << "  node [shape=circle, fontsize=10];\n";
  for (std::size_t k = 0; k < chain.points.size(); ++k) {
    const RunPrefix run = system.run_to(m, chain.points[k]);
    const FaultyCommitment& commitment = ctx.commitments()[run.commitment];
    const AgentSet nonfaulty = ctx.all() - commitment.faulty;
    std::string inits;
    for (Agent i = 0; i < n; ++i) {
      if (i > 0) inits += ",";
      inits += std::to_string(ctx.value_labels()[run.inits[i]]);
    }
    out << "  subgraph cluster_" << k << " {\n";
    out << "    label=" << quoted("run " + std::to_string(k + 1) + ": inits (" +
                                  inits + "), F=" + commitment.faulty.to_string())
        << ";\n";
    for (int t = 0; t <= m; ++t) {
      for (Agent i = 0; i < n; ++i) {
        std::string label = std::to_string(i + 1);
        if (t == 0) label += "=" + std::to_string(ctx.value_labels()[run.inits[i]]);
        const Action a = run.actions[t][i];
        if (a.is_decide()) label += "\\nd" + std::to_string(ctx.value_labels()[a.value]);
        out << "    " << node_id(k, i, t) << " [label=" << quoted(label);
        if (nonfaulty.contains(i)) out << ", shape=doublecircle";
        out << "];\n";
      }
    }
    for (int t = 1; t <= m; ++t) {
      const StepResult r =
          step(ctx, protocol, run.states[t - 1], run.behaviors[t - 1]);
      for (Agent i = 0; i < n; ++i) {
        for (Agent j = 0; j < n; ++j) {
          if (i == j || r.sent[i][j].is_bottom()) continue;
          out << "    " << node_id(k, i, t - 1) << " -> " << node_id(k, j, t);
          if (r.received[j][i].is_bottom()) out << " [style=dashed]";
          out << ";\n";
        }
      }
    }
    out << "  }\n";
  }
  for (std::size_t k = 0; k < chain.links.size(); ++k) {
    const Agent i = chain.links[k];
    out << "  " << node_id(k, i, m) << " -> " << node_id(k + 1, i, m)
        << " [dir=none, style=bold, color=blue, constraint=false, label="
        << quoted("agent " + std::to_string(i + 1)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace sbamc
