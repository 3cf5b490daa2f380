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

#ifndef HYDRA_PIPELINE_HPP_
#define HYDRA_PIPELINE_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/cluster.hpp"
#include "hydra/config.hpp"
#include "hydra/corpus.hpp"
#include "hydra/embed.hpp"
#include "hydra/heuristics.hpp"
#include "hydra/latent.hpp"
#include "hydra/report.hpp"

namespace hydra {

// What each variant clusters:
//   M1     heuristic bits
//   M2     embeddings
//   M3     [embedding | bits]; test vectors have zeroed bit slots
//   HYDRA  VAE posterior means of the M3 vectors
enum class Variant { kM1, kM2, kM3, kHydra };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);  // throws kConfig
bool needs_provider(Variant v);

struct VariantSpec {
  Variant variant = Variant::kHydra;
};

// Everything learned from the training corpus.
struct TrainedModel {
  Variant variant = Variant::kHydra;
  std::vector<std::string> rule_names;
  std::string provider_id;  // empty for M1
  std::size_t representation_dim = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::optional<VaeModel> vae;
  ClusterModel clusters;
  std::string train_corpus;
};

struct LearnOutput {
  TrainedModel model;
  PointSet train_points;
  std::vector<HeuristicVector> train_heuristics;
  LossTrace trace;
};

// Builds the provider named by cfg.provider; throws kConfig for a remote
// provider without an endpoint.
std::unique_ptr<EmbeddingProvider> make_provider(const HydraConfig& cfg);

// Learning phase. `provider` may be null for M1 and is required otherwise
// (kVariantProviderMissing).
LearnOutput learn(const Corpus& train, VariantSpec spec, const HydraConfig& cfg, const RuleSet& rules,
                  const EmbeddingProvider* provider);

// Testing phase. Throws kRuleSetMismatch when `rules` differs from the rule
// set the model was trained with.
RiskReport apply(const TrainedModel& model, const Corpus& test, const HydraConfig& cfg,
                 const RuleSet& rules, const EmbeddingProvider* provider,
                 const LearnOutput* learned = nullptr);

RiskReport run_variant(const Corpus& train, const Corpus& test, VariantSpec spec,
                       const HydraConfig& cfg, const RuleSet& rules,
                       const EmbeddingProvider* provider);

}  // namespace hydra

#endif  // HYDRA_PIPELINE_HPP_
