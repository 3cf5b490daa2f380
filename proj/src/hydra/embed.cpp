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

#include "hydra/embed.hpp"

#include <cmath>
#include <set>

#include "hydra/c_lexer.hpp"
#include "hydra/parallel.hpp"

namespace hydra {
namespace {

constexpr std::uint64_t kBucketSeed = 0x48594452415f6231ULL;
constexpr std::uint64_t kSignSeed = 0x48594452415f7332ULL;

bool is_assignment_op(std::string_view t) {
  static const std::set<std::string_view> kOps = {"=",  "+=", "-=", "*=",  "/=", "%=",
                                                  "&=", "|=", "^=", "<<=", ">>="};
  return kOps.contains(t);
}

bool is_assignment_target(const std::vector<Lexeme>& lx, std::size_t k) {
  std::size_t j = k + 1;
  while (j < lx.size() && lx[j].text == "[") {
    j = match_bracket(lx, j);
    if (j >= lx.size()) return false;
    ++j;
  }
  if (j >= lx.size()) return false;
  if (is_assignment_op(lx[j].text)) return true;
  if (j == k + 1 && (lx[j].text == "++" || lx[j].text == "--")) return true;
  return k > 0 && (lx[k - 1].text == "++" || lx[k - 1].text == "--");
}

void add_feature(std::vector<double>& v, std::string_view feature) {
  const std::uint64_t bucket = stable_hash(feature, kBucketSeed) % kEmbeddingDim;
  const double sign = (stable_hash(feature, kSignSeed) & 1U) ? 1.0 : -1.0;
  v[bucket] += sign;
}

}  // namespace

TokenStream tokenize(std::string_view normalized_source) {
  const std::vector<Lexeme> lx = lex_c(normalized_source);
  TokenStream ts;
  ts.tokens.reserve(lx.size());
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const Lexeme& t = lx[k];
    switch (t.kind) {
      case LexKind::kNumber:
        ts.tokens.emplace_back(kNumberToken);
        break;
      case LexKind::kString:
        ts.tokens.emplace_back(kStringToken);
        break;
      case LexKind::kChar:
        ts.tokens.emplace_back(kCharToken);
        break;
      case LexKind::kPunct:
        ts.tokens.push_back(t.text);
        break;
      case LexKind::kIdentifier:
        ts.tokens.push_back(t.text);
        if (is_c_keyword(t.text)) break;
        if (is_assignment_target(lx, k) || is_declarator(lx, k)) {
          ts.defs.emplace_back(t.text, k);
        } else {
          ts.uses.emplace_back(t.text, k);
        }
        break;
    }
  }
  return ts;
}

std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = h ^ (seed * 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> embed_hashed(const TokenStream& ts) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  if (ts.tokens.empty()) return v;

  std::string feature;
  for (const std::string& t : ts.tokens) {
    feature = "1:";
    feature += t;
    add_feature(v, feature);
  }
  for (std::size_t i = 0; i + 1 < ts.tokens.size(); ++i) {
    feature = "2:";
    feature += ts.tokens[i];
    feature += ' ';
    feature += ts.tokens[i + 1];
    add_feature(v, feature);
  }
  // Each use is linked to the closest preceding def of the same identifier.
  for (const auto& [name, use_pos] : ts.uses) {
    const std::pair<std::string, std::size_t>* def = nullptr;
    for (const auto& d : ts.defs) {
      if (d.second >= use_pos) break;
      if (d.first == name) def = &d;
    }
    if (def == nullptr) continue;
    feature = "3:";
    feature += ts.tokens[def->second + 1 < ts.tokens.size() ? def->second + 1 : def->second];
    feature += '>';
    feature += name;
    add_feature(v, feature);
  }

  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

Embedding HashedEmbeddingProvider::embed(const FunctionRecord& record) const {
  TokenStream ts = tokenize(record.normalized_source);
  if (ts.tokens.size() > max_tokens_) {
    ts.tokens.resize(max_tokens_);
    std::erase_if(ts.defs, [&](const auto& d) { return d.second >= max_tokens_; });
    std::erase_if(ts.uses, [&](const auto& u) { return u.second >= max_tokens_; });
  }
  return Embedding{embed_hashed(ts), id(), record.id};
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Embedding> embed_corpus(const EmbeddingProvider& provider, const Corpus& corpus,
                                    std::size_t jobs) {
  std::vector<Embedding> out(corpus.records.size());
  if (provider.concurrency() != 0) jobs = provider.concurrency();
  parallel_for(corpus.records.size(), jobs,
               [&](std::size_t i) { out[i] = provider.embed(corpus.records[i]); });
  return out;
}

}  // namespace hydra
