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

#ifndef HYDRA_EMBED_HPP_
#define HYDRA_EMBED_HPP_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hydra/corpus.hpp"

namespace hydra {

inline constexpr std::size_t kEmbeddingDim = 768;

struct Embedding {
  std::vector<double> values;  // always kEmbeddingDim long
  std::string provider_id;
  std::string function_id;
};

// Token sequence plus approximate data-flow relations. Positions index into
// `tokens` and are strictly increasing within each list.
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<std::pair<std::string, std::size_t>> defs;
  std::vector<std::pair<std::string, std::size_t>> uses;
};

inline constexpr std::string_view kNumberToken = "<num>";
inline constexpr std::string_view kStringToken = "<str>";
inline constexpr std::string_view kCharToken = "<chr>";

// Identifiers, operators and punctuation become tokens; numeric and string
// literals collapse to sentinels. An identifier is a def when it is the
// target of an assignment/increment or the declarator of a declaration, and a
// use otherwise. Keywords are neither.
TokenStream tokenize(std::string_view normalized_source);

// 64-bit FNV-1a over `bytes` followed by a splitmix64 finalizer keyed on
// `seed`. Stable across platforms.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed);

// Signed feature hashing of unigrams, bigrams and def-use pairs into 768
// buckets, L2-normalised. Empty input gives the zero vector.
std::vector<double> embed_hashed(const TokenStream& ts);

inline constexpr std::string_view kHashedProviderId = "hashed-ngram-v1";

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Embedding embed(const FunctionRecord& record) const = 0;
  // Stable identifier recorded in reports and model artifacts.
  virtual std::string id() const = 0;
  virtual bool is_remote() const { return false; }
  // Upper bound on concurrent embed() calls; 0 means "use the caller's jobs".
  virtual std::size_t concurrency() const { return 0; }
};

class HashedEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashedEmbeddingProvider(std::size_t max_tokens = 8192) : max_tokens_(max_tokens) {}
  Embedding embed(const FunctionRecord& record) const override;
  std::string id() const override { return std::string(kHashedProviderId); }

 private:
  std::size_t max_tokens_;
};

// Cosine similarity; 0 when either vector is zero.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// Embeds every record of `corpus`, fanning out over `jobs` threads (or the
// provider's own concurrency bound). Output order matches the corpus.
std::vector<Embedding> embed_corpus(const EmbeddingProvider& provider, const Corpus& corpus,
                                    std::size_t jobs = 1);

}  // namespace hydra

#endif  // HYDRA_EMBED_HPP_
