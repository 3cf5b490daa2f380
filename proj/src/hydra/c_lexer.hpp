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

#ifndef HYDRA_C_LEXER_HPP_
#define HYDRA_C_LEXER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hydra {

enum class LexKind { kIdentifier, kNumber, kString, kChar, kPunct };

struct Lexeme {
  LexKind kind;
  std::string text;
  std::size_t offset = 0;  // byte offset into the lexed text
  int line = 1;            // 1-based
};

// Splits C source into lexemes. Comments and whitespace are skipped; string
// and character literals are kept whole (with quotes). Punctuators use
// maximal munch over the C operator set plus `::`.
std::vector<Lexeme> lex_c(std::string_view source);

bool is_c_keyword(std::string_view word);

// True for ALL_CAPS names such as MAX_POOLS, conventionally macros/constants.
bool is_constant_name(std::string_view word);

// True when lexemes[k] is the declared name in a declaration such as
// `struct sock *sk,`, `int n = 0;` or `char buf[16];`.
bool is_declarator(const std::vector<Lexeme>& lexemes, std::size_t k);

bool is_type_keyword(std::string_view word);

// Index of the lexeme closing the bracket opened at `open` ((, [ or {), or
// lexemes.size() when unbalanced.
std::size_t match_bracket(const std::vector<Lexeme>& lexemes, std::size_t open);

}  // namespace hydra

#endif  // HYDRA_C_LEXER_HPP_
