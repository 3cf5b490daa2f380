// Copyright 2026 The Hydra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hydra/heuristics.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"

#include "hydra/error.hpp"
#include "hydra/parallel.hpp"

namespace hydra {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kBuiltinNames = {
    "unguarded_pointer_deref", "shared_pointer_write", "unchecked_index",
    "unchecked_allocation", "log_without_halt"};

std::string_view combinator_name(Combinator c) {
  switch (c) {
    case Combinator::kAll:
      return "ALL";
    case Combinator::kAny:
      return "ANY";
    case Combinator::kAbsent:
      return "ABSENT";
  }
  return "ALL";
}

Combinator parse_combinator(const std::string& s) {
  if (s == "ALL") return Combinator::kAll;
  if (s == "ANY") return Combinator::kAny;
  if (s == "ABSENT") return Combinator::kAbsent;
  fail(ErrorCode::kConfig, "unknown clause combinator '" + s + "'");
}

Clause builtin_clause(Combinator c, BuiltinCheck check) {
  Clause clause;
  clause.combinator = c;
  clause.builtin = check;
  return clause;
}

Clause regex_clause(Combinator c, std::string pattern) {
  Clause clause;
  clause.combinator = c;
  clause.regex = std::move(pattern);
  return clause;
}

int line_of(std::string_view text, std::size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

std::vector<detail::Span> regex_spans(const std::regex& re, std::string_view text) {
  std::vector<detail::Span> out;
  using It = std::regex_iterator<std::string_view::const_iterator>;
  for (It it(text.begin(), text.end(), re), end; it != end; ++it) {
    const auto& m = *it;
    if (m.length(0) == 0) continue;
    detail::Span s;
    s.begin = static_cast<std::size_t>(m.position(0));
    s.end = s.begin + static_cast<std::size_t>(m.length(0));
    s.line_start = line_of(text, s.begin);
    s.line_end = line_of(text, s.end - 1);
    s.text = m.str(0);
    out.push_back(std::move(s));
  }
  return out;
}

// Spans of every positive clause when `rule` holds, nullopt otherwise.
std::optional<std::vector<std::vector<detail::Span>>> evaluate_rule(
    const HeuristicRule& rule, std::string_view text, const detail::Analysis& analysis) {
  std::vector<std::vector<detail::Span>> positive;
  bool has_any = false;
  bool any_hit = false;
  for (const Clause& clause : rule.clauses) {
    std::vector<detail::Span> spans = clause.builtin
                                          ? detail::run_builtin(*clause.builtin, analysis)
                                          : regex_spans(*clause.compiled, text);
    switch (clause.combinator) {
      case Combinator::kAll:
        if (spans.empty()) return std::nullopt;
        positive.push_back(std::move(spans));
        break;
      case Combinator::kAny:
        has_any = true;
        if (!spans.empty()) {
          any_hit = true;
          positive.push_back(std::move(spans));
        }
        break;
      case Combinator::kAbsent:
        if (!spans.empty()) return std::nullopt;
        break;
    }
  }
  if (has_any && !any_hit) return std::nullopt;
  return positive;
}

MatchEvidence to_evidence(int rule_index, const detail::Span& s) {
  return MatchEvidence{rule_index, s.line_start, s.line_end, s.text};
}

}  // namespace

std::string_view builtin_check_name(BuiltinCheck check) {
  return kBuiltinNames[static_cast<std::size_t>(check)];
}

std::optional<BuiltinCheck> parse_builtin_check(std::string_view name) {
  for (std::size_t i = 0; i < kBuiltinNames.size(); ++i) {
    if (kBuiltinNames[i] == name) return static_cast<BuiltinCheck>(i);
  }
  return std::nullopt;
}

bool HeuristicVector::any() const {
  return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

int HeuristicVector::lowest_set() const {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) return static_cast<int>(i) + 1;
  }
  return 0;
}

std::string HeuristicVector::bit_string() const {
  std::string s;
  for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

void RuleSet::add(HeuristicRule rule) {
  if (rule.name.empty()) fail(ErrorCode::kConfig, "rule without a name");
  if (rule.clauses.empty()) fail(ErrorCode::kConfig, "rule '" + rule.name + "' has no clauses");
  bool positive = false;
  for (Clause& c : rule.clauses) {
    if (c.builtin.has_value() == !c.regex.empty()) {
      fail(ErrorCode::kConfig,
           "rule '" + rule.name + "': each clause needs exactly one of regex or builtin");
    }
    if (!c.builtin) {
      try {
        c.compiled = std::make_shared<const std::regex>(c.regex, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        fail(ErrorCode::kConfig, "rule '" + rule.name + "': bad regex '" + c.regex + "': " + e.what());
      }
    }
    positive = positive || c.combinator != Combinator::kAbsent;
  }
  if (!positive) {
    fail(ErrorCode::kConfig, "rule '" + rule.name + "' needs at least one ALL or ANY clause");
  }
  for (const HeuristicRule& r : rules_) {
    if (r.name == rule.name) fail(ErrorCode::kConfig, "duplicate rule name '" + rule.name + "'");
  }
  rule.index = static_cast<int>(rules_.size()) + 1;
  rules_.push_back(std::move(rule));
}

std::vector<std::string> RuleSet::names() const {
  std::vector<std::string> out;
  for (const auto& r : rules_) out.push_back(r.name);
  return out;
}

std::string RuleSet::to_json() const {
  json arr = json::array();
  for (const auto& r : rules_) {
    json clauses = json::array();
    for (const auto& c : r.clauses) {
      json jc = {{"combinator", combinator_name(c.combinator)}};
      if (c.builtin) {
        jc["builtin"] = builtin_check_name(*c.builtin);
      } else {
        jc["regex"] = c.regex;
      }
      clauses.push_back(std::move(jc));
    }
    arr.push_back({{"index", r.index},
                   {"label", heuristic_label(r.index)},
                   {"name", r.name},
                   {"cwe_tags", r.cwe_tags},
                   {"clauses", std::move(clauses)}});
  }
  return json{{"include_defaults", false}, {"rules", std::move(arr)}}.dump(2);
}

RuleSet RuleSet::from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("rule file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kConfig, "rule file must hold a JSON object");
  RuleSet out;
  try {
    if (doc.value("include_defaults", true)) out = default_rules();
    for (const auto& jr : doc.value("rules", json::array())) {
      HeuristicRule rule;
      rule.name = jr.at("name").get<std::string>();
      rule.cwe_tags = jr.value("cwe_tags", std::vector<std::string>{});
      for (const auto& jc : jr.at("clauses")) {
        Clause c;
        c.combinator = parse_combinator(jc.value("combinator", std::string("ALL")));
        if (jc.contains("builtin")) {
          const std::string name = jc.at("builtin").get<std::string>();
          c.builtin = parse_builtin_check(name);
          if (!c.builtin) fail(ErrorCode::kConfig, "unknown builtin check '" + name + "'");
        }
        if (jc.contains("regex")) c.regex = jc.at("regex").get<std::string>();
        rule.clauses.push_back(std::move(c));
      }
      out.add(std::move(rule));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("malformed rule definition: ") + e.what());
  }
  if (out.size() == 0) fail(ErrorCode::kConfig, "rule file defines no rules");
  return out;
}

RuleSet RuleSet::load(const std::filesystem::path& path) {
  return from_json(read_text_file(path));
}

RuleSet default_rules() {
  RuleSet rules;
  rules.add({0, "missing-null-check", {"CWE-476"},
             {builtin_clause(Combinator::kAll, BuiltinCheck::kUnguardedPointerDeref)}});
  rules.add({0, "race-condition", {"CWE-362"},
             {builtin_clause(Combinator::kAll, BuiltinCheck::kSharedPointerWrite),
              regex_clause(Combinator::kAbsent,
                           R"(mutex|spin_lock|atomic|pthread_|rcu_|\b(?:\w+_)?(?:un)?lock\s*\()")}});
  rules.add({0, "missing-bounds-check", {"CWE-119", "CWE-120"},
             {builtin_clause(Combinator::kAll, BuiltinCheck::kUncheckedIndex),
              regex_clause(Combinator::kAbsent, R"(\bassert\s*\()")}});
  rules.add({0, "unsafe-allocation", {"CWE-690"},
             {builtin_clause(Combinator::kAll, BuiltinCheck::kUncheckedAllocation)}});
  rules.add({0, "logging-without-halt", {"CWE-390", "CWE-703"},
             {builtin_clause(Combinator::kAll, BuiltinCheck::kLogWithoutHalt)}});
  return rules;
}

std::string heuristic_label(int index) {
  return index <= 0 ? std::string("None") : "H" + std::to_string(index);
}

int parse_heuristic_label(std::string_view label) {
  if (label == "None") return 0;
  if (label.size() >= 2 && label[0] == 'H') {
    int v = 0;
    for (char ch : label.substr(1)) {
      if (ch < '0' || ch > '9' || v > 100000) fail(ErrorCode::kBadFormat, "bad heuristic label");
      v = v * 10 + (ch - '0');
    }
    if (v > 0) return v;
  }
  fail(ErrorCode::kBadFormat, "bad heuristic label '" + std::string(label) + "'");
}

HeuristicVector match_rules(std::string_view normalized_source, const RuleSet& rules) {
  HeuristicVector v;
  v.bits.assign(rules.size(), 0);
  const auto analysis = detail::analyze(normalized_source);
  for (const HeuristicRule& rule : rules.rules()) {
    const auto spans = evaluate_rule(rule, normalized_source, *analysis);
    if (!spans) continue;
    v.bits[static_cast<std::size_t>(rule.index - 1)] = 1;
    for (const auto& clause_spans : *spans) {
      if (!clause_spans.empty()) v.evidence.push_back(to_evidence(rule.index, clause_spans.front()));
    }
  }
  return v;
}

std::vector<MatchEvidence> explain(std::string_view normalized_source, const RuleSet& rules) {
  std::vector<MatchEvidence> out;
  const auto analysis = detail::analyze(normalized_source);
  for (const HeuristicRule& rule : rules.rules()) {
    const auto spans = evaluate_rule(rule, normalized_source, *analysis);
    if (!spans) continue;
    for (const auto& clause_spans : *spans) {
      for (const auto& s : clause_spans) out.push_back(to_evidence(rule.index, s));
    }
  }
  return out;
}

std::vector<HeuristicVector> match_corpus(const Corpus& corpus, const RuleSet& rules,
                                          std::size_t jobs) {
  std::vector<HeuristicVector> out(corpus.records.size());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    out[i] = match_rules(corpus.records[i].normalized_source, rules);
  });
  return out;
}

}  // namespace hydra
