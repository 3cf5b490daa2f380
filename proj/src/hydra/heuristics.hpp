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

#ifndef HYDRA_HEURISTICS_HPP_
#define HYDRA_HEURISTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/corpus.hpp"

namespace hydra {

enum class Combinator { kAll, kAny, kAbsent };

// Structural checks that plain regexes cannot express. Each one reports the
// source spans where its pattern occurs.
enum class BuiltinCheck {
  kUnguardedPointerDeref,  // pointer dereferenced with no prior null test
  kSharedPointerWrite,     // write through a pointer parameter or global
  kUncheckedIndex,         // a[i] with no prior comparison of i against a bound
  kUncheckedAllocation,    // *alloc result used before a null test
  kLogWithoutHalt,         // error logged inside a branch that keeps going
};

std::string_view builtin_check_name(BuiltinCheck check);
std::optional<BuiltinCheck> parse_builtin_check(std::string_view name);

struct Clause {
  Combinator combinator = Combinator::kAll;
  // Exactly one of `regex` / `builtin` is set.
  std::string regex;
  std::optional<BuiltinCheck> builtin;
  std::shared_ptr<const std::regex> compiled;
};

struct HeuristicRule {
  int index = 0;  // 1-based position in the vector
  std::string name;
  std::vector<std::string> cwe_tags;
  std::vector<Clause> clauses;
};

struct MatchEvidence {
  int rule_index = 0;
  int line_start = 0;
  int line_end = 0;
  std::string text;

  bool operator==(const MatchEvidence&) const = default;
};

struct HeuristicVector {
  std::vector<std::uint8_t> bits;
  std::vector<MatchEvidence> evidence;

  bool any() const;
  // 1-based index of the lowest set bit, 0 when none is set.
  int lowest_set() const;
  // e.g. "10010"
  std::string bit_string() const;
};

// Ordered, immutable collection of rules; the order defines the vector
// layout. Rules 1-5 of the default set are H1..H5.
class RuleSet {
 public:
  RuleSet() = default;

  // Validates and compiles `rule`; index is assigned as size()+1.
  void add(HeuristicRule rule);

  const std::vector<HeuristicRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  std::vector<std::string> names() const;

  // JSON description of every rule (index, name, cwe_tags, clauses).
  // A rule file (include_defaults = false) that reloads to exactly this set.
  std::string to_json() const;

  // Parses a rule file:
  //   {"include_defaults": true,
  //    "rules": [{"name": "...", "cwe_tags": ["CWE-n"],
  //               "clauses": [{"combinator": "ALL|ANY|ABSENT",
  //                            "regex": "..." | "builtin": "..."}]}]}
  // User rules are appended after the defaults.
  static RuleSet from_json(std::string_view json_text);
  static RuleSet load(const std::filesystem::path& path);

 private:
  std::vector<HeuristicRule> rules_;
};

RuleSet default_rules();

// Label text for rule index i ("H1".."Hn"); "None" for 0.
std::string heuristic_label(int index);
// Inverse of heuristic_label; throws kBadFormat.
int parse_heuristic_label(std::string_view label);

// bits[j] is set iff rule j+1 is satisfied. Evidence holds the first span of
// every satisfied positive clause.
HeuristicVector match_rules(std::string_view normalized_source, const RuleSet& rules);

// Every span of every positive clause of every satisfied rule. Empty iff the
// vector is all zero.
std::vector<MatchEvidence> explain(std::string_view normalized_source, const RuleSet& rules);

std::vector<HeuristicVector> match_corpus(const Corpus& corpus, const RuleSet& rules,
                                          std::size_t jobs = 1);

namespace detail {

struct Span {
  std::size_t begin = 0;  // byte offsets in the analysed text
  std::size_t end = 0;
  int line_start = 0;
  int line_end = 0;
  std::string text;
};

// Lexed function with its parameters and local declarations resolved. Built
// once per function and shared by every builtin check.
struct Analysis;
struct AnalysisDeleter {
  void operator()(Analysis* a) const;
};
using AnalysisPtr = std::unique_ptr<Analysis, AnalysisDeleter>;

AnalysisPtr analyze(std::string_view normalized_source);
std::vector<Span> run_builtin(BuiltinCheck check, const Analysis& analysis);
std::vector<Span> run_builtin(BuiltinCheck check, std::string_view normalized_source);

}  // namespace detail

}  // namespace hydra

#endif  // HYDRA_HEURISTICS_HPP_
