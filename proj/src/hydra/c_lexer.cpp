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

#include "hydra/c_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace hydra {
namespace {

constexpr std::array<std::string_view, 24> kMultiCharPuncts = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::", "##"};

constexpr std::array<std::string_view, 44> kKeywords = {
    "auto",     "break",    "case",     "char",    "const",    "continue", "default",
    "do",       "double",   "else",     "enum",    "extern",   "float",    "for",
    "goto",     "if",       "inline",   "int",     "long",     "register", "restrict",
    "return",   "short",    "signed",   "sizeof",  "static",   "struct",   "switch",
    "typedef",  "union",    "unsigned", "void",    "volatile", "while",    "bool",
    "_Bool",    "nullptr",  "NULL",     "true",    "false",    "new",      "delete",
    "template", "typename"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

bool is_c_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_constant_name(std::string_view word) {
  bool has_upper = false;
  for (char c : word) {
    if (std::islower(static_cast<unsigned char>(c))) return false;
    if (std::isupper(static_cast<unsigned char>(c))) has_upper = true;
  }
  return has_upper;
}

std::vector<Lexeme> lex_c(std::string_view src) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  int line = 1;
  const std::size_t n = src.size();

  auto skip_quoted = [&](char quote) {
    // Terminates at the closing quote or at an unescaped newline.
    std::size_t j = i + 1;
    while (j < n) {
      if (src[j] == '\\' && j + 1 < n) {
        if (src[j + 1] == '\n') ++line;
        j += 2;
        continue;
      }
      if (src[j] == quote) return j + 1;
      if (src[j] == '\n') return j;
      ++j;
    }
    return n;
  };

  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      i = std::min(n, i + 2);
      continue;
    }
    const int start_line = line;
    const std::size_t start = i;
    if (c == '"' || c == '\'') {
      i = skip_quoted(c);
      out.push_back({c == '"' ? LexKind::kString : LexKind::kChar,
                     std::string(src.substr(start, i - start)), start, start_line});
      continue;
    }
    if (ident_start(c)) {
      while (i < n && ident_char(src[i])) ++i;
      out.push_back({LexKind::kIdentifier, std::string(src.substr(start, i - start)), start,
                     start_line});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      // pp-number
      ++i;
      while (i < n) {
        const char d = src[i];
        if ((d == '+' || d == '-') &&
            (src[i - 1] == 'e' || src[i - 1] == 'E' || src[i - 1] == 'p' || src[i - 1] == 'P')) {
          ++i;
        } else if (ident_char(d) || d == '.') {
          ++i;
        } else {
          break;
        }
      }
      out.push_back({LexKind::kNumber, std::string(src.substr(start, i - start)), start,
                     start_line});
      continue;
    }
    std::size_t len = 1;
    for (std::string_view p : kMultiCharPuncts) {
      if (src.substr(i, p.size()) == p) {
        len = p.size();
        break;
      }
    }
    out.push_back({LexKind::kPunct, std::string(src.substr(i, len)), start, start_line});
    i += len;
  }
  return out;
}

bool is_type_keyword(std::string_view t) {
  static constexpr std::array<std::string_view, 19> kTypes = {
      "char",   "short",  "int",      "long",   "float",    "double", "void",
      "signed", "unsigned", "bool",   "_Bool",  "const",    "volatile", "static",
      "register", "auto", "extern",   "inline", "restrict"};
  return std::find(kTypes.begin(), kTypes.end(), t) != kTypes.end();
}

bool is_declarator(const std::vector<Lexeme>& lx, std::size_t k) {
  if (k == 0 || k + 1 >= lx.size() || lx[k].kind != LexKind::kIdentifier) return false;
  if (is_c_keyword(lx[k].text)) return false;
  const std::string& next = lx[k + 1].text;
  if (next != "=" && next != ";" && next != "," && next != "[" && next != ")" && next != "(")
    return false;
  std::size_t p = k - 1;
  while (lx[p].text == "*" || lx[p].text == "const") {
    if (p == 0) return false;
    --p;
  }
  const Lexeme& t = lx[p];
  if (t.kind != LexKind::kIdentifier) return false;
  return !is_c_keyword(t.text) || is_type_keyword(t.text);
}

std::size_t match_bracket(const std::vector<Lexeme>& lx, std::size_t open) {
  if (open >= lx.size()) return lx.size();
  const std::string& o = lx[open].text;
  const char* close = o == "(" ? ")" : o == "[" ? "]" : o == "{" ? "}" : nullptr;
  if (close == nullptr) return lx.size();
  int depth = 0;
  for (std::size_t i = open; i < lx.size(); ++i) {
    if (lx[i].kind != LexKind::kPunct) continue;
    if (lx[i].text == o) {
      ++depth;
    } else if (lx[i].text == close) {
      if (--depth == 0) return i;
    }
  }
  return lx.size();
}

}  // namespace hydra
