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

#include "sbamc/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sbamc/kernel.hpp"
#include "sbamc/system.hpp"

namespace sbamc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      fail(where, "unknown field '" + key + "'");
    }
  }
}

const json& required(const json& obj, const std::string& where,
                     const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  return v;
}

std::string at(const std::string& where, std::size_t k) {
  return where + "[" + std::to_string(k) + "]";
}

std::string field(const std::string& where, const char* key) {
  return where + "." + key;
}

AgentSet agent_set(const json& v, const std::string& where, int agents) {
  AgentSet out;
  const json& arr = as_array(v, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const int a = as_int(arr[k], at(where, k));
    if (a < 1 || a > agents) fail(at(where, k), "agent out of range");
    out.insert(a - 1);
  }
  return out;
}

template <typename F>
auto rethrow_at(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError& e) {
    fail(where, e.what());
  }
}

ProtocolSpec parse_protocol(const json& v, const std::string& where) {
  only_keys(v, where, {"name", "builtin", "params", "kbp"});
  ProtocolSpec spec;
  spec.name = as_string(required(v, where, "name"), field(where, "name"));
  const bool has_builtin = v.contains("builtin");
  const bool has_kbp = v.contains("kbp");
  if (has_builtin == has_kbp) {
    fail(where, "exactly one of 'builtin' and 'kbp' is required");
  }
  if (has_kbp) {
    spec.knowledge_based = true;
    const std::string cond = as_string(v["kbp"], field(where, "kbp"));
    spec.condition =
        rethrow_at(field(where, "kbp"), [&] { return parse_condition(cond); });
    if (v.contains("params")) fail(where, "'params' applies to builtins only");
    return spec;
  }
  spec.builtin = as_string(v["builtin"], field(where, "builtin"));
  if (v.contains("params")) {
    const std::string p = field(where, "params");
    if (!v["params"].is_object()) fail(p, "expected an object");
    for (const auto& [key, val] : v["params"].items()) {
      spec.params[key] = as_int(val, p + "." + key);
    }
  }
  return spec;
}

Selector parse_selector(const std::string& text, const std::string& where) {
  if (text == "N") return Selector::nonfaulty();
  if (text == "A") return Selector::active();
  if (text == "Agt") return Selector::everyone();
  fail(where, "expected N, A or Agt");
}

RunSpec parse_run(const json& v, const std::string& where,
                  const Scenario& s) {
  only_keys(v, where, {"inits", "faulty", "crashes", "rounds"});
  RunSpec run;
  const std::string wi = field(where, "inits");
  const json& inits = as_array(required(v, where, "inits"), wi);
  if (static_cast<int>(inits.size()) != s.agents) {
    fail(wi, "expected one initial value per agent");
  }
  for (std::size_t k = 0; k < inits.size(); ++k) {
    const int label = as_int(inits[k], at(wi, k));
    if (std::find(s.values.begin(), s.values.end(), label) == s.values.end()) {
      fail(at(wi, k), "value not in the value set");
    }
    run.inits.push_back(label);
  }
  if (v.contains("faulty")) {
    run.faulty = agent_set(v["faulty"], field(where, "faulty"), s.agents);
  }
  if (v.contains("crashes")) {
    const std::string wc = field(where, "crashes");
    if (!s.failures.is_crash()) fail(wc, "only crash models take crashes");
    const json& arr = as_array(v["crashes"], wc);
    std::map<Agent, CrashSpec> by_agent;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string w = at(wc, k);
      only_keys(arr[k], w, {"agent", "round", "receivers"});
      const int a = as_int(required(arr[k], w, "agent"), field(w, "agent"));
      if (a < 1 || a > s.agents || !run.faulty.contains(a - 1)) {
        fail(field(w, "agent"), "not a member of the faulty set");
      }
      CrashSpec c;
      c.round = as_int(required(arr[k], w, "round"), field(w, "round"));
      if (arr[k].contains("receivers")) {
        c.receivers =
            agent_set(arr[k]["receivers"], field(w, "receivers"), s.agents);
      }
      by_agent[a - 1] = c;
    }
    for (auto& [_, c] : by_agent) run.crashes.push_back(c);
    if (static_cast<int>(run.crashes.size()) != run.faulty.size()) {
      fail(wc, "every faulty agent needs an entry");
    }
  }
  if (v.contains("rounds")) {
    const std::string wr = field(where, "rounds");
    if (s.failures.is_crash()) {
      fail(wr, "crash models take 'crashes', not per-round drops");
    }
    const json& arr = as_array(v["rounds"], wr);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string w = at(wr, k);
      only_keys(arr[k], w, {"transmit_drop", "receive_drop"});
      RoundBehavior b;
      auto drops = [&](const char* key, auto& target) {
        if (!arr[k].contains(key)) return;
        const std::string wd = field(w, key);
        if (!arr[k][key].is_object()) fail(wd, "expected an object");
        for (const auto& [agent, set] : arr[k][key].items()) {
          int a = 0;
          try {
            a = std::stoi(agent);
          } catch (const std::exception&) {
            fail(wd, "key '" + agent + "' is not an agent number");
          }
          if (a < 1 || a > s.agents) fail(wd + "." + agent, "agent out of range");
          target[a - 1] = agent_set(set, wd + "." + agent, s.agents);
        }
      };
      drops("transmit_drop", b.transmit_drop);
      drops("receive_drop", b.receive_drop);
      run.behaviors.push_back(b);
    }
  }
  return run;
}

}  // namespace

std::shared_ptr<const Context> Scenario::make_context() const {
  return Context::make(agents, values, failures, exchange, horizon);
}

const ProtocolSpec& Scenario::protocol(const std::string& name) const {
  for (const ProtocolSpec& p : protocols) {
    if (p.name == name) return p;
  }
  throw SchemaError("no protocol named '" + name + "'");
}

Scenario parse_scenario(const json& doc) {
  const std::string root = "$";
  only_keys(doc, root,
            {"name", "agents", "values", "failures", "exchange", "horizon",
             "protocols", "formulas", "comparisons", "witnesses",
             "factorization", "unique_decision"});
  Scenario s;
  if (doc.contains("name")) s.name = as_string(doc["name"], "$.name");

  s.agents = as_int(required(doc, root, "agents"), "$.agents");
  if (s.agents < 2 || s.agents > kMaxAgents) {
    fail("$.agents", "must be between 2 and " + std::to_string(kMaxAgents));
  }

  const json& values = as_array(required(doc, root, "values"), "$.values");
  if (values.empty() || values.size() > static_cast<std::size_t>(kMaxValues)) {
    fail("$.values", "must list between 1 and " + std::to_string(kMaxValues) +
                         " values");
  }
  std::set<int> seen;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const int v = as_int(values[k], at("$.values", k));
    if (!seen.insert(v).second) fail(at("$.values", k), "duplicate value");
    s.values.push_back(v);
  }

  const json& failures = required(doc, root, "failures");
  only_keys(failures, "$.failures", {"model", "t"});
  const std::string model =
      as_string(required(failures, "$.failures", "model"), "$.failures.model");
  s.failures.kind = rethrow_at("$.failures.model",
                               [&] { return parse_failure_kind(model); });
  s.failures.t =
      as_int(required(failures, "$.failures", "t"), "$.failures.t");
  if (s.failures.t < 0 || s.failures.t > s.agents) {
    fail("$.failures.t", "must satisfy 0 <= t <= agents");
  }

  s.exchange = as_string(required(doc, root, "exchange"), "$.exchange");
  if (s.exchange != "fip" && s.exchange != "fault-report") {
    fail("$.exchange", "expected 'fip' or 'fault-report'");
  }

  if (doc.contains("horizon")) s.horizon = as_int(doc["horizon"], "$.horizon");
  if (s.horizon < 1) fail("$.horizon", "must be at least 1");

  if (doc.contains("protocols")) {
    const json& arr = as_array(doc["protocols"], "$.protocols");
    std::set<std::string> names;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      ProtocolSpec p = parse_protocol(arr[k], at("$.protocols", k));
      if (!names.insert(p.name).second) {
        fail(at("$.protocols", k) + ".name", "duplicate protocol name");
      }
      s.protocols.push_back(std::move(p));
    }
  }

  if (doc.contains("formulas")) {
    const json& arr = as_array(doc["formulas"], "$.formulas");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string w = at("$.formulas", k);
      FormulaSpec f;
      f.text = as_string(arr[k], w);
      f.schema = rethrow_at(w, [&] {
        FormulaPtr schema = parse_formula(f.text);
        schema_variables(schema);
        return schema;
      });
      s.formulas.push_back(std::move(f));
    }
  }

  auto known_protocol = [&](const std::string& name, const std::string& w) {
    if (std::none_of(s.protocols.begin(), s.protocols.end(),
                     [&](const ProtocolSpec& p) { return p.name == name; })) {
      fail(w, "no protocol named '" + name + "'");
    }
  };

  if (doc.contains("comparisons")) {
    const json& arr = as_array(doc["comparisons"], "$.comparisons");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string w = at("$.comparisons", k);
      only_keys(arr[k], w, {"a", "b", "agents_mode"});
      ComparisonSpec c;
      c.a = as_string(required(arr[k], w, "a"), field(w, "a"));
      c.b = as_string(required(arr[k], w, "b"), field(w, "b"));
      known_protocol(c.a, field(w, "a"));
      known_protocol(c.b, field(w, "b"));
      if (arr[k].contains("agents_mode")) {
        const std::string m =
            as_string(arr[k]["agents_mode"], field(w, "agents_mode"));
        c.mode = rethrow_at(field(w, "agents_mode"),
                            [&] { return parse_agents_mode(m); });
      }
      s.comparisons.push_back(std::move(c));
    }
  }

  if (doc.contains("witnesses")) {
    const json& arr = as_array(doc["witnesses"], "$.witnesses");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string w = at("$.witnesses", k);
      only_keys(arr[k], w, {"protocol", "time", "run", "selector", "target"});
      WitnessSpec ws;
      ws.protocol =
          as_string(required(arr[k], w, "protocol"), field(w, "protocol"));
      known_protocol(ws.protocol, field(w, "protocol"));
      ws.time = as_int(required(arr[k], w, "time"), field(w, "time"));
      if (ws.time < 0 || ws.time > s.horizon) {
        fail(field(w, "time"), "outside 0..horizon");
      }
      ws.run = parse_run(required(arr[k], w, "run"), field(w, "run"), s);
      if (arr[k].contains("selector")) {
        ws.selector = parse_selector(
            as_string(arr[k]["selector"], field(w, "selector")),
            field(w, "selector"));
      }
      ws.target_text =
          as_string(required(arr[k], w, "target"), field(w, "target"));
      ws.target = rethrow_at(field(w, "target"), [&] {
        FormulaPtr f = parse_formula(ws.target_text);
        if (!f->is_ground()) throw SchemaError("target must be ground");
        return f;
      });
      s.witnesses.push_back(std::move(ws));
    }
  }

  if (doc.contains("factorization")) {
    const json& f = doc["factorization"];
    only_keys(f, "$.factorization", {"message", "action", "decided"});
    MemoryFactorization mf;
    auto names = [&](const char* key, std::vector<std::string>& out) {
      const std::string w = field("$.factorization", key);
      const json& arr = as_array(required(f, "$.factorization", key), w);
      for (std::size_t k = 0; k < arr.size(); ++k) {
        out.push_back(as_string(arr[k], at(w, k)));
      }
    };
    names("message", mf.message);
    names("action", mf.action);
    if (f.contains("decided")) {
      mf.decided_field = as_string(f["decided"], "$.factorization.decided");
    }
    s.factorization = std::move(mf);
  }

  if (doc.contains("unique_decision")) {
    const std::string u =
        as_string(doc["unique_decision"], "$.unique_decision");
    if (u == "all") {
      s.unique_for_selector = false;
    } else if (u == "selector") {
      s.unique_for_selector = true;
    } else {
      fail("$.unique_decision", "expected 'all' or 'selector'");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

BuiltProtocol build_protocol(const ProtocolSpec& spec,
                             std::shared_ptr<const Context> context,
                             int jobs) {
  BuiltProtocol out;
  out.name = spec.name;
  if (spec.knowledge_based) {
    Implementation impl =
        construct_implementation(context, spec.condition, jobs);
    out.protocol = impl.table;
    out.system = impl.system;
    return out;
  }
  out.protocol = builtin_rule(spec.builtin, spec.params, context);
  out.system = build_system(context, out.protocol);
  return out;
}

RunPrefix realize_run(const Context& context, const Protocol& protocol,
                      const RunSpec& spec, int length) {
  const FailureModel& model = context.failures();
  const int n = context.agents();
  if (spec.faulty.size() > model.t) {
    throw SchemaError("run: more faulty agents than t");
  }
  std::vector<Value> inits;
  for (int label : spec.inits) inits.push_back(context.value_of(label));

  FaultyCommitment c{spec.faulty, {}};
  if (model.is_crash()) {
    std::vector<Agent> members;
    spec.faulty.for_each([&](Agent i) { members.push_back(i); });
    for (std::size_t k = 0; k < members.size(); ++k) {
      c.crash[members[k]] = k < spec.crashes.size()
                                ? spec.crashes[k]
                                : CrashSpec{context.horizon() + 1, AgentSet{}};
    }
  }
  const std::uint32_t ci = context.commitment_index(c);

  std::vector<RoundBehavior> behaviors;
  for (int round = 1; round <= length; ++round) {
    if (model.is_crash()) {
      behaviors.push_back(
          enumerate_round_behaviors(model, n, c, round).front());
      continue;
    }
    RoundBehavior b = static_cast<std::size_t>(round - 1) < spec.behaviors.size()
                          ? spec.behaviors[round - 1]
                          : RoundBehavior{};
    for (Agent i = 0; i < n; ++i) {
      if (!b.transmit_drop[i].empty() &&
          (!model.omits_transmission() || !spec.faulty.contains(i))) {
        throw SchemaError("run: round " + std::to_string(round) +
                          " drops a transmission of agent " +
                          std::to_string(i + 1) + ", which may not omit sends");
      }
      if (!b.receive_drop[i].empty() &&
          (!model.omits_reception() || !spec.faulty.contains(i))) {
        throw SchemaError("run: round " + std::to_string(round) +
                          " drops a reception of agent " +
                          std::to_string(i + 1) +
                          ", which may not omit receipts");
      }
    }
    behaviors.push_back(b);
  }
  return replay(context, protocol, inits, ci, behaviors);
}

}  // namespace sbamc
