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

#include "sbamc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>

namespace sbamc {

std::string Selector::to_string() const {
  switch (kind) {
    case Kind::kN: return "N";
    case Kind::kA: return "A";
    case Kind::kAgt: return "Agt";
    case Kind::kExplicit: {
      std::string out = "(set";
      members.for_each([&](Agent i) { out += " " + std::to_string(i + 1); });
      return out + ")";
    }
  }
  return "?";
}

bool Formula::is_ground() const {
  if (!agent_var.empty() || !value_var.empty()) return false;
  return std::all_of(kids.begin(), kids.end(),
                     [](const FormulaPtr& k) { return k->is_ground(); });
}

namespace {

std::string agent_text(const Formula& f) {
  return f.agent_var.empty() ? std::to_string(f.agent + 1) : f.agent_var;
}
std::string value_text(const Formula& f) {
  return f.value_var.empty() ? std::to_string(f.value) : f.value_var;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kDecides: return "decides";
    case Op::kDecidesAll: return "decides-all";
    case Op::kDecided: return "decided";
    case Op::kIn: return "in";
    case Op::kSubset: return "subset";
    case Op::kEmpty: return "empty";
    case Op::kExists: return "exists";
    case Op::kNot: return "not";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kImplies: return "implies";
    case Op::kIff: return "iff";
    case Op::kK: return "K";
    case Op::kB: return "B";
    case Op::kEK: return "EK";
    case Op::kEB: return "EB";
    case Op::kCK: return "CK";
    case Op::kCB: return "CB";
  }
  return "?";
}

}  // namespace

std::string Formula::to_string() const {
  std::string head = std::string("(") + op_name(op);
  switch (op) {
    case Op::kTrue:
    case Op::kFalse:
      return op_name(op);
    case Op::kDecides:
      return head + " " + agent_text(*this) + " " + value_text(*this) + ")";
    case Op::kDecidesAll:
      return head + " " + s1.to_string() + " " + value_text(*this) + ")";
    case Op::kDecided:
      return head + " " + agent_text(*this) + ")";
    case Op::kIn:
      return head + " " + agent_text(*this) + " " + s1.to_string() + ")";
    case Op::kSubset:
      return head + " " + s1.to_string() + " " + s2.to_string() + ")";
    case Op::kEmpty:
      return head + " " + s1.to_string() + ")";
    case Op::kExists:
      return head + " " + value_text(*this) + ")";
    case Op::kK:
      return head + " " + agent_text(*this) + " " + kids[0]->to_string() + ")";
    case Op::kB:
      return head + " " + s1.to_string() + " " + agent_text(*this) + " " +
             kids[0]->to_string() + ")";
    case Op::kEK:
    case Op::kEB:
    case Op::kCK:
    case Op::kCB:
      return head + " " + s1.to_string() + " " + kids[0]->to_string() + ")";
    default:
      break;
  }
  for (const FormulaPtr& k : kids) head += " " + k->to_string();
  return head + ")";
}

namespace fm {
namespace {
Formula node(Op op) {
  Formula f;
  f.op = op;
  return f;
}
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr truth() { return make(node(Op::kTrue)); }
FormulaPtr falsity() { return make(node(Op::kFalse)); }
FormulaPtr decides(Agent i, int value) {
  Formula f = node(Op::kDecides);
  f.agent = i;
  f.value = value;
  return make(std::move(f));
}
FormulaPtr decides_all(Selector s, int value) {
  Formula f = node(Op::kDecidesAll);
  f.s1 = s;
  f.value = value;
  return make(std::move(f));
}
FormulaPtr decided(Agent i) {
  Formula f = node(Op::kDecided);
  f.agent = i;
  return make(std::move(f));
}
FormulaPtr in(Agent i, Selector s) {
  Formula f = node(Op::kIn);
  f.agent = i;
  f.s1 = s;
  return make(std::move(f));
}
FormulaPtr subset(Selector s, Selector t) {
  Formula f = node(Op::kSubset);
  f.s1 = s;
  f.s2 = t;
  return make(std::move(f));
}
FormulaPtr empty(Selector s) {
  Formula f = node(Op::kEmpty);
  f.s1 = s;
  return make(std::move(f));
}
FormulaPtr exists(int value) {
  Formula f = node(Op::kExists);
  f.value = value;
  return make(std::move(f));
}
FormulaPtr neg(FormulaPtr a) {
  Formula f = node(Op::kNot);
  f.kids = {std::move(a)};
  return make(std::move(f));
}
FormulaPtr conj(std::vector<FormulaPtr> kids) {
  Formula f = node(Op::kAnd);
  f.kids = std::move(kids);
  return make(std::move(f));
}
FormulaPtr disj(std::vector<FormulaPtr> kids) {
  Formula f = node(Op::kOr);
  f.kids = std::move(kids);
  return make(std::move(f));
}
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  Formula f = node(Op::kImplies);
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}
FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  Formula f = node(Op::kIff);
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}
FormulaPtr K(Agent i, FormulaPtr a) {
  Formula f = node(Op::kK);
  f.agent = i;
  f.kids = {std::move(a)};
  return make(std::move(f));
}
FormulaPtr B(Selector s, Agent i, FormulaPtr a) {
  Formula f = node(Op::kB);
  f.s1 = s;
  f.agent = i;
  f.kids = {std::move(a)};
  return make(std::move(f));
}

namespace {
FormulaPtr group_op(Op op, Selector s, FormulaPtr a) {
  Formula f = node(op);
  f.s1 = s;
  f.kids = {std::move(a)};
  return make(std::move(f));
}
}  // namespace

FormulaPtr EK(Selector s, FormulaPtr a) { return group_op(Op::kEK, s, std::move(a)); }
FormulaPtr EB(Selector s, FormulaPtr a) { return group_op(Op::kEB, s, std::move(a)); }
FormulaPtr CK(Selector s, FormulaPtr a) { return group_op(Op::kCK, s, std::move(a)); }
FormulaPtr CB(Selector s, FormulaPtr a) { return group_op(Op::kCB, s, std::move(a)); }
}  // namespace fm

namespace {

struct Token {
  std::string text;
  std::size_t pos;
};

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '(' || c == ')') {
        tokens_.push_back({std::string(1, c), i});
        ++i;
      } else {
        const std::size_t start = i;
        while (i < text.size() && text[i] != '(' && text[i] != ')' &&
               !std::isspace(static_cast<unsigned char>(text[i]))) {
          ++i;
        }
        tokens_.push_back({std::string(text.substr(start, i - start)), start});
      }
    }
    end_ = text.size();
  }

  FormulaPtr parse() {
    FormulaPtr f = formula();
    if (pos_ != tokens_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t at = pos_ < tokens_.size() ? tokens_[pos_].pos : end_;
    throw SchemaError("formula: " + what + " at offset " + std::to_string(at));
  }
  const std::string& peek() const {
    static const std::string kEnd;
    return pos_ < tokens_.size() ? tokens_[pos_].text : kEnd;
  }
  std::string next() {
    if (pos_ >= tokens_.size()) fail("unexpected end of input");
    return tokens_[pos_++].text;
  }
  void expect(const char* s) {
    if (peek() != s) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  static bool is_number(const std::string& s, int* out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
    return ec == std::errc() && p == s.data() + s.size();
  }
  static bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }

  void agent(Formula& f) {
    const std::size_t at = pos_;
    std::string tok = next();
    int n = 0;
    if (is_number(tok, &n)) {
      if (n < 1 || n > kMaxAgents) {
        pos_ = at;
        fail("agent out of range");
      }
      f.agent = n - 1;
    } else if (is_identifier(tok) && !is_reserved(tok)) {
      f.agent_var = tok;
    } else {
      pos_ = at;
      fail("expected an agent");
    }
  }
  void value(Formula& f) {
    const std::size_t at = pos_;
    std::string tok = next();
    int n = 0;
    if (is_number(tok, &n)) {
      f.value = n;
    } else if (is_identifier(tok) && !is_reserved(tok)) {
      f.value_var = tok;
    } else {
      pos_ = at;
      fail("expected a value");
    }
  }
  static bool is_reserved(const std::string& s) {
    return s == "N" || s == "A" || s == "Agt" || s == "true" || s == "false";
  }

  Selector selector() {
    if (peek() == "(") {
      ++pos_;
      if (next() != "set") {
        --pos_;
        fail("expected 'set'");
      }
      Selector s = Selector::of({});
      while (peek() != ")") {
        int n = 0;
        const std::string tok = next();
        if (!is_number(tok, &n) || n < 1 || n > kMaxAgents) {
          --pos_;
          fail("expected an agent number in set");
        }
        s.members.insert(n - 1);
      }
      ++pos_;
      return s;
    }
    const std::string tok = next();
    if (tok == "N") return Selector::nonfaulty();
    if (tok == "A") return Selector::active();
    if (tok == "Agt") return Selector::everyone();
    --pos_;
    fail("expected a selector");
  }

  FormulaPtr formula() {
    const std::string tok = next();
    if (tok == "true") return fm::truth();
    if (tok == "false") return fm::falsity();
    if (tok != "(") {
      --pos_;
      fail("expected a formula");
    }
    const std::string head = next();
    Formula f;
    if (head == "decides") {
      f.op = Op::kDecides;
      agent(f);
      value(f);
    } else if (head == "decides-all") {
      f.op = Op::kDecidesAll;
      f.s1 = selector();
      value(f);
    } else if (head == "decided") {
      f.op = Op::kDecided;
      agent(f);
    } else if (head == "in") {
      f.op = Op::kIn;
      agent(f);
      f.s1 = selector();
    } else if (head == "subset") {
      f.op = Op::kSubset;
      f.s1 = selector();
      f.s2 = selector();
    } else if (head == "empty") {
      f.op = Op::kEmpty;
      f.s1 = selector();
    } else if (head == "exists") {
      f.op = Op::kExists;
      value(f);
    } else if (head == "not") {
      f.op = Op::kNot;
      f.kids.push_back(formula());
    } else if (head == "and" || head == "or") {
      f.op = head == "and" ? Op::kAnd : Op::kOr;
      while (peek() != ")") {
        if (pos_ >= tokens_.size()) fail("unexpected end of input");
        f.kids.push_back(formula());
      }
    } else if (head == "implies" || head == "iff") {
      f.op = head == "implies" ? Op::kImplies : Op::kIff;
      f.kids.push_back(formula());
      f.kids.push_back(formula());
    } else if (head == "K") {
      f.op = Op::kK;
      agent(f);
      f.kids.push_back(formula());
    } else if (head == "B") {
      f.op = Op::kB;
      f.s1 = selector();
      agent(f);
      f.kids.push_back(formula());
    } else if (head == "EK" || head == "EB" || head == "CK" || head == "CB") {
      f.op = head == "EK"   ? Op::kEK
             : head == "EB" ? Op::kEB
             : head == "CK" ? Op::kCK
                            : Op::kCB;
      f.s1 = selector();
      f.kids.push_back(formula());
    } else {
      --pos_;
      fail("unknown operator '" + head + "'");
    }
    expect(")");
    return std::make_shared<const Formula>(std::move(f));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

void collect(const Formula& f, std::set<std::string>& agents,
             std::set<std::string>& values) {
  if (!f.agent_var.empty()) agents.insert(f.agent_var);
  if (!f.value_var.empty()) values.insert(f.value_var);
  for (const FormulaPtr& k : f.kids) collect(*k, agents, values);
}

FormulaPtr substitute(const FormulaPtr& f,
                      const std::map<std::string, int>& binding) {
  if (f->is_ground()) return f;
  Formula g = *f;
  if (!g.agent_var.empty()) {
    g.agent = binding.at(g.agent_var) - 1;
    g.agent_var.clear();
  }
  if (!g.value_var.empty()) {
    g.value = binding.at(g.value_var);
    g.value_var.clear();
  }
  for (FormulaPtr& k : g.kids) k = substitute(k, binding);
  return std::make_shared<const Formula>(std::move(g));
}

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

SchemaVariables schema_variables(const FormulaPtr& f) {
  std::set<std::string> agents, values;
  collect(*f, agents, values);
  for (const std::string& a : agents) {
    if (values.count(a)) {
      throw SchemaError("formula: variable '" + a +
                        "' is used both as an agent and as a value");
    }
  }
  return {{agents.begin(), agents.end()}, {values.begin(), values.end()}};
}

std::vector<Instance> instantiate(const FormulaPtr& schema,
                                  const Context& context) {
  const SchemaVariables vars = schema_variables(schema);
  struct Slot {
    std::string name;
    std::vector<int> domain;
  };
  std::vector<Slot> slots;
  std::vector<int> agents;
  for (int i = 1; i <= context.agents(); ++i) agents.push_back(i);
  for (const auto& a : vars.agents) slots.push_back({a, agents});
  for (const auto& v : vars.values) slots.push_back({v, context.value_labels()});
  std::sort(slots.begin(), slots.end(),
            [](const Slot& x, const Slot& y) { return x.name < y.name; });

  std::vector<Instance> out;
  std::vector<std::size_t> at(slots.size(), 0);
  while (true) {
    Instance inst;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      inst.binding[slots[k].name] = slots[k].domain[at[k]];
    }
    inst.formula = substitute(schema, inst.binding);
    validate(inst.formula, context);
    out.push_back(std::move(inst));
    std::size_t k = slots.size();
    while (k > 0) {
      --k;
      if (++at[k] < slots[k].domain.size()) break;
      at[k] = 0;
      if (k == 0) return out;
    }
    if (slots.empty()) return out;
  }
}

void validate(const FormulaPtr& f, const Context& context) {
  const AgentSet all = context.all();
  auto check_agent = [&](Agent i) {
    if (i < 0 || i >= context.agents()) {
      throw SchemaError("formula " + f->to_string() + ": agent " +
                        std::to_string(i + 1) + " out of range 1.." +
                        std::to_string(context.agents()));
    }
  };
  auto check_selector = [&](const Selector& s) {
    if (s.kind == Selector::Kind::kExplicit && !s.members.subset_of(all)) {
      throw SchemaError("formula " + f->to_string() + ": set " +
                        s.members.to_string() + " names unknown agents");
    }
  };
  if (!f->is_ground()) {
    throw SchemaError("formula " + f->to_string() + " has unbound variables");
  }
  switch (f->op) {
    case Op::kDecides:
    case Op::kDecided:
    case Op::kIn:
    case Op::kK:
    case Op::kB:
      check_agent(f->agent);
      break;
    default:
      break;
  }
  switch (f->op) {
    case Op::kDecides:
    case Op::kDecidesAll:
    case Op::kExists:
      context.value_of(f->value);
      break;
    default:
      break;
  }
  check_selector(f->s1);
  check_selector(f->s2);
  for (const FormulaPtr& k : f->kids) validate(k, context);
}

}  // namespace sbamc
