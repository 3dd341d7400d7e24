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

// Command-line front end: builds systems from a scenario file and writes
// JSON reports (and DOT witness chains) to the output directory.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sbamc/counterexample.hpp"
#include "sbamc/dot.hpp"
#include "sbamc/evaluator.hpp"
#include "sbamc/kbp.hpp"
#include "sbamc/optimality.hpp"
#include "sbamc/report.hpp"
#include "sbamc/scenario.hpp"
#include "sbamc/speccheck.hpp"
#include "sbamc/system.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sbamc;

namespace {

constexpr int kExitCounterexample = 1;
constexpr int kExitSchema = 2;
constexpr int kExitIntegrity = 3;

struct Options {
  std::string scenario;
  std::optional<int> horizon;
  int jobs = 1;
  std::string output = "sbamc-out";
  std::string agents_mode = "all";
  std::string condition = "bn-cbn";
  std::string stop = "exhaustive";
  std::vector<std::string> protocols;
  std::vector<std::string> formulas;
};

class Session {
 public:
  explicit Session(const Options& opt) : opt_(opt) {
    if (opt.scenario.empty()) throw SchemaError("--scenario is required");
    scenario_ = load_scenario(opt.scenario);
    if (opt.horizon) {
      if (*opt.horizon < 1) throw SchemaError("--horizon: must be at least 1");
      scenario_.horizon = *opt.horizon;
    }
    context_ = scenario_.make_context();
    for (const std::string& w : context_->warnings()) {
      std::cout << "warning: " << w << "\n";
    }
  }

  const Scenario& scenario() const { return scenario_; }
  std::shared_ptr<const Context> context() const { return context_; }

  const BuiltProtocol& built(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    BuiltProtocol b = build_protocol(scenario_.protocol(name), context_, opt_.jobs);
    const std::chrono::duration<double> took =
        std::chrono::steady_clock::now() - start;
    std::cout << "built " << name << " (" << b.system->point_count()
              << " points, " << took.count() << " s)\n";
    return cache_.emplace(name, std::move(b)).first->second;
  }

  /// The protocols a command applies to: --protocol selections, else all.
  std::vector<std::string> selected() const {
    if (!opt_.protocols.empty()) {
      for (const std::string& p : opt_.protocols) scenario_.protocol(p);
      return opt_.protocols;
    }
    std::vector<std::string> out;
    for (const ProtocolSpec& p : scenario_.protocols) out.push_back(p.name);
    if (out.empty()) throw SchemaError("$.protocols: no protocols to run");
    return out;
  }

  json header(const std::string& command) const {
    return {{"command", command},
            {"scenario", scenario_.name},
            {"agents", scenario_.agents},
            {"values", scenario_.values},
            {"failure_model", to_string(scenario_.failures.kind)},
            {"t", scenario_.failures.t},
            {"exchange", scenario_.exchange},
            {"horizon", scenario_.horizon}};
  }

 private:
  const Options& opt_;
  Scenario scenario_;
  std::shared_ptr<const Context> context_;
  std::map<std::string, BuiltProtocol> cache_;
};

void write_file(const Options& opt, const std::string& name,
                const std::string& text) {
  fs::create_directories(opt.output);
  const fs::path path = fs::path(opt.output) / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
}

void write_json(const Options& opt, const std::string& name, const json& j) {
  write_file(opt, name, j.dump(2) + "\n");
}

int cmd_build(const Options& opt) {
  Session session(opt);
  json out = session.header("build");
  out["systems"] = json::array();
  for (const std::string& name : session.selected()) {
    const BuiltProtocol& b = session.built(name);
    json stats = report::system_stats(*b.system);
    stats["name"] = name;
    std::cout << name << ": slice sizes " << stats["slice_sizes"].dump()
              << ", commitments " << stats["commitments"] << "\n";
    out["systems"].push_back(stats);
  }
  write_json(opt, "build.json", out);
  return 0;
}

int cmd_implement(const Options& opt) {
  Session session(opt);
  const DecisionCondition cond = parse_condition(opt.condition);
  auto ctx = session.context();
  const auto start = std::chrono::steady_clock::now();
  Implementation impl = construct_implementation(ctx, cond, opt.jobs);
  const std::chrono::duration<double> took =
      std::chrono::steady_clock::now() - start;
  const ImplementationCheck check =
      verify_implementation(ctx, impl.table, cond, opt.jobs);
  std::cout << "constructed " << impl.table->name() << ": "
            << impl.table->size() << " entries in " << took.count()
            << " s; verified: " << (check.ok ? "yes" : check.message) << "\n";

  json out = session.header("implement");
  out["condition"] = to_string(cond);
  out["system"] = report::system_stats(*impl.system);
  out["verification"] = report::implementation_check(*ctx, check);
  out["table"] = report::protocol_table(*ctx, *impl.table);
  out["builtin_checks"] = json::array();
  for (const ProtocolSpec& spec : session.scenario().protocols) {
    if (spec.knowledge_based) continue;
    auto rule = builtin_rule(spec.builtin, spec.params, ctx);
    const ImplementationCheck c = verify_implementation(ctx, rule, cond, opt.jobs);
    std::cout << spec.name << " implements " << to_string(cond) << ": "
              << (c.ok ? "yes" : "no, " + c.message) << "\n";
    json entry = report::implementation_check(*ctx, c);
    entry["name"] = spec.name;
    out["builtin_checks"].push_back(entry);
  }
  write_json(opt, "implement.json", out);
  write_file(opt, "protocol-table.txt", impl.table->canonical_text(*ctx));
  return 0;
}

int cmd_check_sba(const Options& opt) {
  Session session(opt);
  json out = session.header("check-sba");
  out["systems"] = json::array();
  const bool restricted = session.scenario().unique_for_selector;
  for (const std::string& name : session.selected()) {
    const InterpretedSystem& sys = *session.built(name).system;
    const SpecVerdict n = check_sba(sys, Selector::nonfaulty(), restricted);
    const SpecVerdict a = check_sba(sys, Selector::active(), restricted);
    const TransferReport tr =
        check_sba_transfer(sys, Selector::nonfaulty(), Selector::active());
    std::cout << name << ": SBA(N) " << (n.pass ? "pass" : "FAIL " + n.failed_clause)
              << ", SBA(A) " << (a.pass ? "pass" : "FAIL " + a.failed_clause)
              << " (up to horizon " << sys.horizon() << ")\n";
    out["systems"].push_back({{"name", name},
                              {"sba_n", report::verdict(sys, n)},
                              {"sba_a", report::verdict(sys, a)},
                              {"transfer_n_a", report::transfer(sys, tr)}});
  }
  write_json(opt, "check-sba.json", out);
  return 0;
}

int cmd_check_formula(const Options& opt) {
  Session session(opt);
  std::vector<FormulaSpec> formulas = session.scenario().formulas;
  for (const std::string& text : opt.formulas) {
    FormulaPtr f;
    try {
      f = parse_formula(text);
      schema_variables(f);
    } catch (const SchemaError& e) {
      throw SchemaError("--formula: " + std::string(e.what()));
    }
    formulas.push_back(FormulaSpec{text, f});
  }
  if (formulas.empty()) throw SchemaError("$.formulas: no formulas to check");
  json out = session.header("check-formula");
  out["results"] = json::array();
  for (const std::string& name : session.selected()) {
    const InterpretedSystem& sys = *session.built(name).system;
    for (const FormulaSpec& f : formulas) {
      const ValidityResult r = check_valid(sys, f.schema);
      std::cout << name << ": " << f.text << " -> "
                << (r.valid ? "valid" : "NOT valid, e.g. " + r.instance)
                << " (" << r.instances << " instances)\n";
      json entry = report::validity(sys, r);
      entry["protocol"] = name;
      entry["formula"] = f.text;
      out["results"].push_back(entry);
    }
  }
  write_json(opt, "check-formula.json", out);
  return 0;
}

int cmd_compare(const Options& opt) {
  Session session(opt);
  const AgentsMode default_mode = parse_agents_mode(opt.agents_mode);
  const DominanceStop stop = parse_dominance_stop(opt.stop);
  if (session.scenario().comparisons.empty()) {
    throw SchemaError("$.comparisons: nothing to compare");
  }
  json out = session.header("compare");
  out["stop"] = to_string(stop);
  out["comparisons"] = json::array();
  for (const ComparisonSpec& c : session.scenario().comparisons) {
    const AgentsMode mode = c.mode.value_or(default_mode);
    const Protocol& a = *session.built(c.a).protocol;
    const Protocol& b = *session.built(c.b).protocol;
    const DominanceReport r = dominance(session.context(), a, b, mode, stop);
    std::cout << c.a << " vs " << c.b << " (" << to_string(mode)
              << "): " << r.verdict() << "\n";
    json entry = report::dominance(*session.context(), r);
    entry["a"] = c.a;
    entry["b"] = c.b;
    entry["agents_mode"] = to_string(mode);
    out["comparisons"].push_back(entry);
  }
  write_json(opt, "compare.json", out);
  return 0;
}

int cmd_witness(const Options& opt) {
  Session session(opt);
  const auto& witnesses = session.scenario().witnesses;
  if (witnesses.empty()) throw SchemaError("$.witnesses: nothing to emit");
  json out = session.header("witness");
  out["witnesses"] = json::array();
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    const WitnessSpec& w = witnesses[k];
    const std::string where = "$.witnesses[" + std::to_string(k) + "]";
    if (w.time > session.scenario().horizon) {
      throw SchemaError(where + ".time: beyond the horizon");
    }
    const BuiltProtocol& b = session.built(w.protocol);
    RunPrefix run;
    std::optional<std::uint32_t> p;
    try {
      validate(w.target, *session.context());
      run = realize_run(*session.context(), *b.protocol, w.run, w.time);
      p = b.system->locate(run, w.time);
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
    if (!p) throw IntegrityError(where + ": run not found in the built system");
    Evaluator ev(*session.context(), b.system->slice(w.time));
    const WitnessChain chain = ev.witness_chain(*p, w.selector, w.target);
    json entry = report::chain(*b.system, w.time, chain);
    entry["protocol"] = w.protocol;
    entry["selector"] = w.selector.to_string();
    entry["target"] = w.target_text;
    if (chain.found) {
      const std::string file = "witness-" + std::to_string(k + 1) + ".dot";
      write_file(opt, file,
                 chain_to_dot(*b.system, w.time, chain,
                              w.protocol + ": " + w.target_text));
      entry["dot"] = file;
      std::cout << "witness " << k + 1 << ": chain of " << chain.links.size()
                << " links\n";
    } else {
      std::cout << "witness " << k + 1 << ": no reachable point satisfies "
                << w.target_text << ", so CB " << w.selector.to_string()
                << " of its negation holds\n";
    }
    out["witnesses"].push_back(entry);
  }
  write_json(opt, "witness.json", out);
  return 0;
}

int cmd_counterexample(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const CounterexampleReport r = reproduce_counterexample(opt.jobs);
  const std::chrono::duration<double> took =
      std::chrono::steady_clock::now() - start;
  for (const Fact& f : r.facts) {
    std::cout << (f.ok ? "ok   " : "FAIL ") << f.name;
    if (!f.ok) std::cout << "\n     expected: " << f.expected
                         << "\n     actual:   " << f.actual;
    std::cout << "\n";
  }
  std::cout << "dominance(P, P'): " << r.all_agents.verdict() << "\n";
  std::cout << (r.ok() ? "all facts hold" : "some facts FAILED") << " ("
            << took.count() << " s)\n";
  write_json(opt, "counterexample.json", report::counterexample(r));
  for (const MixedRunChain& c : r.chains) {
    write_file(opt, "mixed-run-without-" + std::to_string(c.excluded) + ".dot",
               c.dot);
  }
  return r.ok() ? 0 : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous agreement simulator and epistemic model checker"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub, bool needs_scenario) {
    auto* s = sub->add_option("--scenario", opt.scenario, "Scenario JSON file");
    if (needs_scenario) s->required();
    sub->add_option("--horizon", opt.horizon, "Override the scenario horizon");
    sub->add_option("--jobs", opt.jobs, "Worker threads for condition evaluation")
        ->check(CLI::PositiveNumber);
    sub->add_option("--output", opt.output, "Directory for JSON and DOT output")
        ->capture_default_str();
  };

  auto* build = app.add_subcommand("build", "Build systems; report slice sizes");
  common(build, true);
  build->add_option("--protocol", opt.protocols, "Restrict to these protocols");

  auto* implement = app.add_subcommand(
      "implement", "Construct and verify the knowledge-based implementation");
  common(implement, true);
  implement->add_option("--condition", opt.condition, "bn-cbn, ba-cba or k-cka")
      ->check(CLI::IsMember({"bn-cbn", "ba-cba", "k-cka"}))
      ->capture_default_str();

  auto* check_sba_cmd = app.add_subcommand("check-sba", "Check SBA(N) and SBA(A)");
  common(check_sba_cmd, true);
  check_sba_cmd->add_option("--protocol", opt.protocols, "Restrict to these protocols");

  auto* check_formula = app.add_subcommand("check-formula",
                                           "Check validity of formula schemas");
  common(check_formula, true);
  check_formula->add_option("--protocol", opt.protocols, "Restrict to these protocols");
  check_formula->add_option("--formula", opt.formulas, "Extra schema to check");

  auto* compare = app.add_subcommand("compare", "Dominance between protocols");
  common(compare, true);
  compare->add_option("--agents-mode", opt.agents_mode, "all or nonfaulty-only")
      ->check(CLI::IsMember({"all", "nonfaulty-only"}))
      ->capture_default_str();
  compare->add_option("--stop", opt.stop,
                      "exhaustive, incomparable or first-refutation")
      ->check(CLI::IsMember({"exhaustive", "incomparable", "first-refutation"}))
      ->capture_default_str();

  auto* witness = app.add_subcommand("witness", "Emit witness chains as DOT");
  common(witness, true);

  auto* counter = app.add_subcommand(
      "counterexample", "Reproduce the four-agent send-omission counterexample");
  common(counter, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  try {
    if (*build) return cmd_build(opt);
    if (*implement) return cmd_implement(opt);
    if (*check_sba_cmd) return cmd_check_sba(opt);
    if (*check_formula) return cmd_check_formula(opt);
    if (*compare) return cmd_compare(opt);
    if (*witness) return cmd_witness(opt);
    if (*counter) return cmd_counterexample(opt);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const ConstructionError& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
