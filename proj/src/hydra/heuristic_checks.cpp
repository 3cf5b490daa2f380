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

// Structural matchers behind the default H1-H5 rules. They work on the
// lexeme stream of one normalized function; there is no parser, only local
// token patterns around parameters, declarations and guard conditions.

#include "hydra/heuristics.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "hydra/c_lexer.hpp"

namespace hydra::detail {

struct Param {
  std::string name;
  bool pointer = false;
};

struct Analysis {
  std::string source;
  std::vector<Lexeme> lx;
  std::size_t body = 0;      // opening brace of the body, or 0 for fragments
  std::size_t body_end = 0;  // closing brace, or lx.size()
  std::vector<Param> params;
  std::map<std::string, bool, std::less<>> locals;  // name -> declared as pointer
  // (open, close) paren indices of if/while/for/assert-style conditions.
  std::vector<std::pair<std::size_t, std::size_t>> conditions;
};

void AnalysisDeleter::operator()(Analysis* a) const { delete a; }

namespace {

const std::set<std::string_view> kAssignOps = {"=",  "+=", "-=", "*=",  "/=", "%=",
                                               "&=", "|=", "^=", "<<=", ">>="};
const std::set<std::string_view> kComparisons = {"<", "<=", ">", ">="};
const std::set<std::string_view> kGuardCalls = {
    "if",       "while",        "for",          "assert",           "ASSERT",
    "BUG_ON",   "WARN_ON",      "WARN_ON_ONCE", "g_return_if_fail", "g_return_val_if_fail",
    "DCHECK",   "CHECK"};
const std::set<std::string_view> kWriterCalls = {"strcpy", "strncpy", "strcat",  "strncat",
                                                 "memcpy", "memmove", "memset",  "sprintf",
                                                 "snprintf", "strlcpy", "strlcat"};
const std::set<std::string_view> kHaltTokens = {"return", "exit",  "_exit",   "goto",
                                                "break",  "abort", "continue", "panic",
                                                "BUG",    "longjmp"};

bool is_ident(const Lexeme& t) { return t.kind == LexKind::kIdentifier; }

// Identifier that is not a member name (`x->name`, `x.name`, `ns::name`).
bool bare(const std::vector<Lexeme>& lx, std::size_t k) {
  if (!is_ident(lx[k])) return false;
  if (k == 0) return true;
  const std::string& p = lx[k - 1].text;
  return p != "->" && p != "." && p != "::";
}

bool value_end(const Lexeme& t) {
  switch (t.kind) {
    case LexKind::kIdentifier:
      return !is_c_keyword(t.text) || t.text == "NULL" || t.text == "nullptr";
    case LexKind::kNumber:
    case LexKind::kString:
    case LexKind::kChar:
      return true;
    case LexKind::kPunct:
      return t.text == ")" || t.text == "]" || t.text == "++" || t.text == "--";
  }
  return false;
}

bool unary_star(const std::vector<Lexeme>& lx, std::size_t s) {
  if (lx[s].text != "*") return false;
  return s == 0 || !value_end(lx[s - 1]);
}

bool is_null_literal(const Lexeme& t) {
  return t.text == "NULL" || t.text == "nullptr" || t.text == "0" || t.text == "0L";
}

std::size_t statement_end(const std::vector<Lexeme>& lx, std::size_t from, std::size_t limit) {
  int depth = 0;
  for (std::size_t i = from; i < limit; ++i) {
    const std::string& t = lx[i].text;
    if (lx[i].kind != LexKind::kPunct) continue;
    if (t == "(" || t == "[" || t == "{") ++depth;
    if (t == ")" || t == "]" || t == "}") {
      if (depth == 0) return i;
      --depth;
    }
    if (t == ";" && depth == 0) return i;
  }
  return limit == 0 ? 0 : limit - 1;
}

Span make_span(const Analysis& a, std::size_t first, std::size_t last) {
  last = std::min(last, a.lx.size() - 1);
  Span s;
  s.begin = a.lx[first].offset;
  s.end = a.lx[last].offset + a.lx[last].text.size();
  s.line_start = a.lx[first].line;
  s.line_end = a.lx[last].line;
  s.text = a.source.substr(s.begin, s.end - s.begin);
  return s;
}

// Does lexeme range [q, q+len) sit in a null test inside condition (open, close)?
bool null_test_at(const std::vector<Lexeme>& lx, std::size_t q, std::size_t len,
                  std::size_t open, std::size_t close) {
  const std::string& prev = lx[q - 1].text;
  const std::size_t after = q + len;
  const std::string& next = after < lx.size() ? lx[after].text : std::string();
  if (prev == "!") return true;
  if (next == "==" || next == "!=") {
    for (std::size_t j = after + 1; j < close && j <= after + 6; ++j) {
      if (lx[j].text == "&&" || lx[j].text == "||") break;
      if (is_null_literal(lx[j])) return true;
    }
  }
  if ((prev == "==" || prev == "!=") && q >= 2 && (is_null_literal(lx[q - 2]) || lx[q - 2].text == ")"))
    return true;
  const bool open_side = q - 1 == open || prev == "(" || prev == "&&" || prev == "||";
  const bool close_side = after == close || next == ")" || next == "&&" || next == "||";
  return open_side && close_side;
}

bool chain_matches(const std::vector<Lexeme>& lx, std::size_t at,
                   const std::vector<std::string>& chain) {
  if (at + chain.size() > lx.size()) return false;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (lx[at + i].text != chain[i]) return false;
  }
  return true;
}

// Is the chain null-tested by some condition that opens inside (after, before)?
bool null_tested_between(const Analysis& a, const std::vector<std::string>& chain,
                         std::size_t after, std::size_t before) {
  for (const auto& [open, close] : a.conditions) {
    if (open <= after || open >= before) continue;
    for (std::size_t q = open + 1; q < close; ++q) {
      if (bare(a.lx, q) && chain_matches(a.lx, q, chain) &&
          null_test_at(a.lx, q, chain.size(), open, close))
        return true;
    }
  }
  return false;
}

const Param* find_param(const Analysis& a, std::string_view name) {
  for (const Param& p : a.params) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool is_global(const Analysis& a, const std::string& name) {
  if (is_c_keyword(name) || name == "this") return false;
  return find_param(a, name) == nullptr && !a.locals.contains(name);
}

void parse_params(Analysis& a) {
  if (a.body == 0) return;
  std::size_t close = a.body;
  while (close > 0 && is_ident(a.lx[close - 1])) --close;  // const, noexcept, ...
  if (close == 0 || a.lx[close - 1].text != ")") return;
  --close;
  int depth = 0;
  std::size_t open = close;
  for (std::size_t j = close + 1; j-- > 0;) {
    if (a.lx[j].text == ")") ++depth;
    if (a.lx[j].text == "(" && --depth == 0) {
      open = j;
      break;
    }
  }
  if (open == close) return;
  std::size_t start = open + 1;
  depth = 0;
  for (std::size_t j = open + 1; j <= close; ++j) {
    const std::string& t = a.lx[j].text;
    if (t == "(" || t == "[") ++depth;
    if ((t == ")" || t == "]") && j != close) --depth;
    if ((t == "," && depth == 0) || j == close) {
      Param p;
      bool bracket = false;
      for (std::size_t q = start; q < j; ++q) {
        if (a.lx[q].text == "*") p.pointer = true;
        if (a.lx[q].text == "[") bracket = true;
        if (is_ident(a.lx[q]) && !is_c_keyword(a.lx[q].text) && !bracket) p.name = a.lx[q].text;
      }
      p.pointer = p.pointer || bracket;
      // `void`, `...` and unnamed parameters have no usable name.
      if (!p.name.empty() && j - start >= 2) a.params.push_back(p);
      start = j + 1;
    }
  }
}

void collect_locals(Analysis& a) {
  for (std::size_t k = a.body + 1; k < a.body_end; ++k) {
    if (!is_declarator(a.lx, k)) continue;
    if (a.lx[k + 1].text == "(") continue;  // prototype or call, not a variable
    bool pointer = false;
    for (std::size_t p = k; p-- > 0 && (a.lx[p].text == "*" || a.lx[p].text == "const");)
      pointer = pointer || a.lx[p].text == "*";
    if (a.lx[k + 1].text == "[") pointer = true;
    a.locals.emplace(a.lx[k].text, pointer);
  }
}

void collect_conditions(Analysis& a) {
  for (std::size_t k = 0; k + 1 < a.lx.size(); ++k) {
    if (!is_ident(a.lx[k]) || !kGuardCalls.contains(a.lx[k].text) || a.lx[k + 1].text != "(")
      continue;
    const std::size_t close = match_bracket(a.lx, k + 1);
    if (close < a.lx.size()) a.conditions.emplace_back(k + 1, close);
  }
}

// --- H1 -------------------------------------------------------------------

bool accessor_name(const std::string& callee) {
  static const std::regex kAccessor(
      R"(^(?:\w*_sk|\w*inet_\w*|\w*container_of\w*|\w*lookup\w*|\w*get_\w*)$)");
  return std::regex_match(callee, kAccessor);
}

// Index of the callee identifier in `x = callee(...)` / `x = (T *)callee(...)`,
// or 0 when the right-hand side is not a direct call.
std::size_t assigned_callee(const std::vector<Lexeme>& lx, std::size_t eq) {
  std::size_t c = eq + 1;
  if (c < lx.size() && lx[c].text == "(") {
    const std::size_t close = match_bracket(lx, c);
    if (close + 2 < lx.size() && is_ident(lx[close + 1]) && lx[close + 2].text == "(")
      c = close + 1;
  }
  if (c + 1 < lx.size() && is_ident(lx[c]) && lx[c + 1].text == "(") return c;
  return 0;
}

bool in_sizeof(const std::vector<Lexeme>& lx, std::size_t k) {
  return k >= 3 && lx[k - 2].text == "(" && lx[k - 3].text == "sizeof";
}

std::vector<Span> unguarded_pointer_deref(const Analysis& a) {
  // name -> index after which dereferences count
  std::map<std::string, std::size_t> candidates;
  for (const Param& p : a.params) {
    if (p.pointer) candidates.emplace(p.name, a.body);
  }
  for (std::size_t k = a.body + 1; k + 2 < a.body_end; ++k) {
    if (!bare(a.lx, k) || a.lx[k + 1].text != "=") continue;
    const std::size_t callee = assigned_callee(a.lx, k + 1);
    if (callee == 0 || !accessor_name(a.lx[callee].text)) continue;
    auto local = a.locals.find(a.lx[k].text);
    if (local != a.locals.end() && !local->second) continue;
    candidates.emplace(a.lx[k].text, k);
  }

  std::vector<std::pair<std::size_t, Span>> found;
  for (const auto& [name, start] : candidates) {
    for (std::size_t k = start + 1; k < a.body_end; ++k) {
      if (a.lx[k].text != name || !bare(a.lx, k)) continue;
      const bool arrow = k + 2 < a.lx.size() && a.lx[k + 1].text == "->";
      const bool star = unary_star(a.lx, k - 1) && !in_sizeof(a.lx, k);
      if (!arrow && !star) continue;
      if (!null_tested_between(a, {name}, start, k)) {
        found.emplace_back(k, arrow ? make_span(a, k, k + 2) : make_span(a, k - 1, k));
      }
      break;
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Span> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

// --- H2 -------------------------------------------------------------------

std::vector<Span> shared_pointer_write(const Analysis& a) {
  std::vector<Span> out;
  const auto& lx = a.lx;
  for (std::size_t k = a.body + 1; k + 2 < a.body_end; ++k) {
    if (!bare(lx, k) || is_c_keyword(lx[k].text)) continue;
    const std::string& op = lx[k + 1].text;
    if (op != "->" && op != ".") continue;
    std::size_t j = k + 1;
    while (j + 1 < lx.size() && (lx[j].text == "->" || lx[j].text == ".") && is_ident(lx[j + 1])) {
      j += 2;
      while (j < lx.size() && lx[j].text == "[") j = match_bracket(lx, j) + 1;
    }
    if (j >= lx.size()) break;
    const Param* param = find_param(a, lx[k].text);
    const bool through_param = param != nullptr && param->pointer && op == "->";
    if (!through_param && !is_global(a, lx[k].text)) continue;

    if (kAssignOps.contains(lx[j].text) || lx[j].text == "++" || lx[j].text == "--") {
      out.push_back(make_span(a, k, j));
    } else if (lx[k - 1].text == "++" || lx[k - 1].text == "--") {
      out.push_back(make_span(a, k - 1, j - 1));
    } else if (k >= 2 && lx[k - 1].text == "(" && kWriterCalls.contains(lx[k - 2].text)) {
      out.push_back(make_span(a, k - 2, match_bracket(lx, k - 1)));
    }
  }
  return out;
}

// --- H3 -------------------------------------------------------------------

bool condition_bounds(const Analysis& a, std::size_t open, std::size_t close) {
  for (std::size_t q = open + 1; q < close; ++q) {
    const std::string& t = a.lx[q].text;
    if (kComparisons.contains(t) || t == "sizeof") return true;
    if (is_ident(a.lx[q]) && (t.ends_with("_MAX") || t.ends_with("_SIZE") || t.ends_with("_LEN")))
      return true;
  }
  return false;
}

bool bounded_before(const Analysis& a, const std::string& name, std::size_t limit) {
  const auto& lx = a.lx;
  for (std::size_t q = a.body + 1; q < limit; ++q) {
    if (lx[q].text != name || !bare(lx, q)) continue;
    if (kComparisons.contains(lx[q - 1].text) || kComparisons.contains(lx[q + 1].text))
      return true;
    for (const auto& [open, close] : a.conditions) {
      if (open < q && q < close && condition_bounds(a, open, close)) return true;
    }
  }
  return false;
}

std::vector<Span> unchecked_index(const Analysis& a) {
  std::vector<Span> out;
  const auto& lx = a.lx;
  for (std::size_t k = a.body + 1; k < a.body_end; ++k) {
    if (lx[k].text != "[" || lx[k].kind != LexKind::kPunct) continue;
    const Lexeme& prev = lx[k - 1];
    const bool subscriptable = (is_ident(prev) && !is_c_keyword(prev.text)) ||
                               prev.text == "]" || prev.text == ")";
    if (!subscriptable) continue;
    if (is_ident(prev) && is_declarator(lx, k - 1)) continue;
    const std::size_t close = match_bracket(lx, k);
    if (close >= a.body_end) continue;

    bool unbounded = false;
    for (std::size_t q = k + 1; q < close; ++q) {
      if (!bare(lx, q) || is_c_keyword(lx[q].text) || is_constant_name(lx[q].text)) continue;
      if (lx[q + 1].text == "(") continue;  // callee name
      if (q >= 2 && lx[q - 1].text == "(" && lx[q - 2].text == "sizeof") continue;
      if (!bounded_before(a, lx[q].text, k)) {
        unbounded = true;
        break;
      }
    }
    if (!unbounded) continue;
    std::size_t first = k - 1;
    while (first > a.body + 1 && (lx[first - 1].text == "->" || lx[first - 1].text == ".") &&
           is_ident(lx[first - 2]))
      first -= 2;
    out.push_back(make_span(a, first, close));
  }
  return out;
}

// --- H4 -------------------------------------------------------------------

bool allocator_name(const std::string& callee) {
  static const std::regex kAlloc(R"(^\w*(?:malloc|calloc|realloc)$)");
  return std::regex_match(callee, kAlloc);
}

std::vector<Span> unchecked_allocation(const Analysis& a) {
  std::vector<Span> out;
  const auto& lx = a.lx;
  for (std::size_t k = a.body + 1; k + 1 < a.body_end; ++k) {
    if (!is_ident(lx[k]) || lx[k + 1].text != "(" || !allocator_name(lx[k].text)) continue;
    std::size_t p = k - 1;
    if (lx[p].text == ")") {  // cast
      int depth = 0;
      for (std::size_t j = p + 1; j-- > a.body;) {
        if (lx[j].text == ")") ++depth;
        if (lx[j].text == "(" && --depth == 0) {
          p = j - 1;
          break;
        }
      }
    }
    if (lx[p].text != "=" || p == 0) continue;
    std::size_t s = p - 1;
    if (!is_ident(lx[s])) continue;
    while (s >= 2 && (lx[s - 1].text == "->" || lx[s - 1].text == ".") && is_ident(lx[s - 2]))
      s -= 2;
    std::vector<std::string> chain;
    for (std::size_t q = s; q < p; ++q) chain.push_back(lx[q].text);

    const std::size_t stmt_end = statement_end(lx, k, a.body_end);
    std::size_t use = 0;
    for (std::size_t u = stmt_end + 1; u < a.body_end; ++u) {
      if (bare(lx, u) && chain_matches(lx, u, chain)) {
        use = u;
        break;
      }
    }
    if (use == 0 || lx[use - 1].text == "return") continue;
    if (null_tested_between(a, chain, stmt_end, use + 1)) continue;
    out.push_back(make_span(a, s, stmt_end));
  }
  return out;
}

// --- H5 -------------------------------------------------------------------

bool error_log_call(const std::vector<Lexeme>& lx, std::size_t k) {
  if (!is_ident(lx[k]) || k + 1 >= lx.size() || lx[k + 1].text != "(") return false;
  const std::string& name = lx[k].text;
  const std::string arg = k + 2 < lx.size() ? lx[k + 2].text : std::string();
  if (name == "fprintf") return arg == "stderr";
  if (name == "printk")
    return arg == "KERN_ERR" || arg == "KERN_CRIT" || arg == "KERN_ALERT" || arg == "KERN_EMERG";
  if (name == "syslog") return arg == "LOG_ERR" || arg == "LOG_CRIT";
  return name == "perror" || name == "log_error" || name == "pr_err" || name == "dev_err";
}

std::vector<Span> log_without_halt(const Analysis& a) {
  const auto& lx = a.lx;
  std::vector<std::pair<std::size_t, std::size_t>> bodies;
  auto add_body = [&](std::size_t b) {
    if (b >= a.body_end) return;
    if (lx[b].text == "{") {
      const std::size_t e = match_bracket(lx, b);
      if (e < lx.size()) bodies.emplace_back(b, e);
    } else {
      bodies.emplace_back(b, statement_end(lx, b, a.body_end));
    }
  };
  for (std::size_t k = a.body + 1; k + 1 < a.body_end; ++k) {
    if (lx[k].text == "if" && lx[k + 1].text == "(") {
      const std::size_t close = match_bracket(lx, k + 1);
      if (close < a.body_end) add_body(close + 1);
    } else if (lx[k].text == "else" && lx[k + 1].text != "if") {
      add_body(k + 1);
    }
  }

  std::vector<Span> out;
  for (std::size_t k = a.body + 1; k < a.body_end; ++k) {
    if (!error_log_call(lx, k)) continue;
    const std::pair<std::size_t, std::size_t>* inner = nullptr;
    for (const auto& b : bodies) {
      if (b.first <= k && k <= b.second &&
          (inner == nullptr || b.second - b.first < inner->second - inner->first))
        inner = &b;
    }
    if (inner == nullptr) continue;
    bool halts = false;
    for (std::size_t q = inner->first; q <= inner->second; ++q) {
      if (is_ident(lx[q]) && kHaltTokens.contains(lx[q].text)) {
        halts = true;
        break;
      }
    }
    if (!halts) out.push_back(make_span(a, k, statement_end(lx, k, a.body_end)));
  }
  return out;
}

}  // namespace

AnalysisPtr analyze(std::string_view normalized_source) {
  AnalysisPtr a(new Analysis);
  a->source = std::string(normalized_source);
  a->lx = lex_c(a->source);
  a->body_end = a->lx.size();
  for (std::size_t k = 0; k < a->lx.size(); ++k) {
    if (a->lx[k].text == "{" && a->lx[k].kind == LexKind::kPunct) {
      a->body = k;
      a->body_end = std::min(match_bracket(a->lx, k), a->lx.size());
      break;
    }
  }
  parse_params(*a);
  collect_locals(*a);
  collect_conditions(*a);
  return a;
}

std::vector<Span> run_builtin(BuiltinCheck check, const Analysis& a) {
  if (a.lx.size() < 2) return {};
  switch (check) {
    case BuiltinCheck::kUnguardedPointerDeref:
      return unguarded_pointer_deref(a);
    case BuiltinCheck::kSharedPointerWrite:
      return shared_pointer_write(a);
    case BuiltinCheck::kUncheckedIndex:
      return unchecked_index(a);
    case BuiltinCheck::kUncheckedAllocation:
      return unchecked_allocation(a);
    case BuiltinCheck::kLogWithoutHalt:
      return log_without_halt(a);
  }
  return {};
}

std::vector<Span> run_builtin(BuiltinCheck check, std::string_view normalized_source) {
  return run_builtin(check, *analyze(normalized_source));
}

}  // namespace hydra::detail
