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

#include "hydra/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hydra/error.hpp"
#include "hydra/metrics.hpp"
#include "hydra/remote_embedder.hpp"

namespace hydra {

namespace {

std::vector<Embedding> embeddings_for(const Corpus& corpus, Variant v, const EmbeddingProvider* provider,
                                      std::size_t jobs) {
  if (!needs_provider(v)) return {};
  if (provider == nullptr) {
    fail(ErrorCode::kVariantProviderMissing,
         "variant " + std::string(variant_name(v)) + " needs an embedding provider");
  }
  return embed_corpus(*provider, corpus, jobs);
}

Point bits_point(const HeuristicVector& h) {
  Point p;
  for (std::uint8_t b : h.bits) p.push_back(b ? 1.0 : 0.0);
  return p;
}

std::optional<ClusteringEvaluation> try_evaluate(const PointSet& points,
                                                 const std::vector<std::size_t>& assignments,
                                                 std::string_view which,
                                                 std::vector<std::string>& notes) {
  try {
    return evaluate(points, assignments);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingleCluster && e.code() != ErrorCode::kTooFewPoints) throw;
    notes.push_back(std::string(which) + " evaluation skipped: " + e.what());
    return std::nullopt;
  }
}

void note_infinite_chi(const std::optional<ClusteringEvaluation>& e, std::string_view which,
                       std::vector<std::string>& notes) {
  if (e && std::isinf(e->chi)) {
    notes.push_back(std::string(which) +
                    " chi is reported as \"inf\": every cluster has zero within-cluster dispersion "
                    "(all members identical), so the Calinski-Harabasz ratio is unbounded; "
                    "a finite value such as 1.00 would misstate this degenerate case");
  }
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kM1:
      return "m1";
    case Variant::kM2:
      return "m2";
    case Variant::kM3:
      return "m3";
    case Variant::kHydra:
      return "hydra";
  }
  return "hydra";
}

Variant parse_variant(std::string_view name) {
  if (name == "m1" || name == "M1") return Variant::kM1;
  if (name == "m2" || name == "M2") return Variant::kM2;
  if (name == "m3" || name == "M3") return Variant::kM3;
  if (name == "hydra" || name == "HYDRA") return Variant::kHydra;
  fail(ErrorCode::kConfig, "unknown variant '" + std::string(name) + "' (expected m1, m2, m3 or hydra)");
}

bool needs_provider(Variant v) { return v != Variant::kM1; }

std::unique_ptr<EmbeddingProvider> make_provider(const HydraConfig& cfg) {
  if (cfg.provider == "remote") {
    if (cfg.endpoint.empty()) fail(ErrorCode::kConfig, "provider 'remote' needs an endpoint");
    return std::make_unique<RemoteEmbeddingProvider>(
        cfg.endpoint, std::chrono::milliseconds(cfg.timeout_ms), std::max<std::size_t>(1, cfg.max_in_flight));
  }
  if (cfg.provider != "hashed") fail(ErrorCode::kConfig, "unknown provider '" + cfg.provider + "'");
  return std::make_unique<HashedEmbeddingProvider>(cfg.max_tokens);
}

LearnOutput learn(const Corpus& train, VariantSpec spec, const HydraConfig& cfg, const RuleSet& rules,
                  const EmbeddingProvider* provider) {
  if (train.records.empty()) fail(ErrorCode::kEmptyCorpus, "training corpus is empty");
  const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
  LearnOutput out;
  TrainedModel& m = out.model;
  m.variant = spec.variant;
  m.rule_names = rules.names();
  m.seed = cfg.seed;
  m.config_hash = config_hash(cfg);
  m.train_corpus = train.name;

  out.train_heuristics = match_corpus(train, rules, jobs);
  const std::vector<Embedding> emb = embeddings_for(train, spec.variant, provider, jobs);
  if (provider != nullptr && needs_provider(spec.variant)) m.provider_id = provider->id();

  const std::size_t n = train.records.size();
  PointSet& points = out.train_points;
  switch (spec.variant) {
    case Variant::kM1:
      for (const auto& h : out.train_heuristics) points.push_back(bits_point(h));
      break;
    case Variant::kM2:
      for (const auto& e : emb) points.push_back(e.values);
      break;
    case Variant::kM3:
      for (std::size_t i = 0; i < n; ++i) points.push_back(fuse(emb[i], out.train_heuristics[i]).values);
      break;
    case Variant::kHydra: {
      std::vector<FusedVector> fused;
      for (std::size_t i = 0; i < n; ++i) fused.push_back(fuse(emb[i], out.train_heuristics[i]));
      VaeConfig vc = cfg.vae;
      vc.seed = cfg.seed;
      TrainResult tr = train_vae(fused, vc);
      for (const auto& f : fused) points.push_back(encode_latent(tr.model, f).values);
      m.vae = std::move(tr.model);
      out.trace = std::move(tr.trace);
      break;
    }
  }
  m.representation_dim = points.front().size();
  m.clusters = kmeans_fit(points, cfg.k, cfg.seed, cfg.cluster_max_iter, cfg.cluster_tol);
  label_clusters(m.clusters, points, out.train_heuristics, cfg.match_threshold);
  return out;
}

RiskReport apply(const TrainedModel& model, const Corpus& test, const HydraConfig& cfg,
                 const RuleSet& rules, const EmbeddingProvider* provider, const LearnOutput* learned) {
  if (test.records.empty()) fail(ErrorCode::kEmptyCorpus, "test corpus is empty");
  if (rules.names() != model.rule_names) {
    fail(ErrorCode::kRuleSetMismatch, "model was trained with " + std::to_string(model.rule_names.size()) +
                                          " rules; the configured rule set differs");
  }
  if (needs_provider(model.variant) && provider != nullptr && provider->id() != model.provider_id) {
    fail(ErrorCode::kVariantProviderMissing, "model was trained with embedding provider '" +
                                                 model.provider_id + "' but '" + provider->id() +
                                                 "' is configured");
  }
  const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
  const std::vector<HeuristicVector> heur = match_corpus(test, rules, jobs);
  const std::vector<Embedding> emb = embeddings_for(test, model.variant, provider, jobs);
  const std::size_t width = rules.size();

  PointSet points;
  for (std::size_t i = 0; i < test.records.size(); ++i) {
    switch (model.variant) {
      case Variant::kM1:
        points.push_back(bits_point(heur[i]));
        break;
      case Variant::kM2:
        points.push_back(emb[i].values);
        break;
      case Variant::kM3:
        points.push_back(project_for_test(emb[i], width).values);
        break;
      case Variant::kHydra:
        points.push_back(encode_latent(*model.vae, project_for_test(emb[i], width)).values);
        break;
    }
  }

  RiskReport report;
  ReportSummary& s = report.summary;
  std::vector<std::size_t> assignments;
  for (std::size_t i = 0; i < test.records.size(); ++i) {
    const FunctionRecord& rec = test.records[i];
    RiskLabel r = predict_label(model.clusters, points[i], &heur[i]);
    if (model.variant == Variant::kM1 && !heur[i].any()) r.label = 0;
    ReportRow row;
    row.id = rec.id;
    row.project = rec.project;
    row.bits = heur[i].bit_string();
    row.label = r.label;
    row.aligned = r.aligned;
    row.confidence = r.confidence;
    row.cluster = r.cluster;
    if (model.variant == Variant::kHydra) row.latent = points[i];
    report.rows.push_back(std::move(row));
    assignments.push_back(r.cluster);
  }
  if (points.size() >= 2) {
    const Projection proj = project_2d(points);
    for (std::size_t i = 0; i < points.size(); ++i) report.rows[i].projection = proj.coords[i];
    if (proj.degenerate) s.notes.push_back("projection is degenerate: test points have no variance");
  }

  for (std::size_t c = 0; c < model.clusters.k; ++c) {
    const ClusterAlignment& a = model.clusters.alignment[c];
    s.clusters.push_back(ClusterSummary{c, a.size, model.clusters.labels[c], a.heuristic, a.count,
                                        a.fraction, a.size - a.matched, 0});
  }
  s.test_evaluation = try_evaluate(points, assignments, "test", s.notes);
  if (learned != nullptr) {
    s.train_evaluation =
        try_evaluate(learned->train_points, model.clusters.assignments, "train", s.notes);
  }
  note_infinite_chi(s.train_evaluation, "train", s.notes);
  note_infinite_chi(s.test_evaluation, "test", s.notes);

  ReportMetadata& md = report.metadata;
  md.variant = std::string(variant_name(model.variant));
  md.seed = model.seed;
  md.vae_seed = model.seed;
  md.kmeans_seed = model.clusters.seed;
  md.config_hash = model.config_hash;
  md.provider_id = model.provider_id;
  md.rule_names = model.rule_names;
  md.representation_dim = model.representation_dim;
  md.k = model.clusters.k;
  md.best_epoch = model.vae ? model.vae->best_epoch : 0;
  md.train_corpus = model.train_corpus;
  md.test_corpus = test.name;
  summarize_rows(report);
  return report;
}

RiskReport run_variant(const Corpus& train, const Corpus& test, VariantSpec spec,
                       const HydraConfig& cfg, const RuleSet& rules,
                       const EmbeddingProvider* provider) {
  if (needs_provider(spec.variant) && provider == nullptr) {
    fail(ErrorCode::kVariantProviderMissing,
         "variant " + std::string(variant_name(spec.variant)) + " needs an embedding provider");
  }
  if (test.records.empty()) fail(ErrorCode::kEmptyCorpus, "test corpus is empty");
  const LearnOutput learned = learn(train, spec, cfg, rules, provider);
  return apply(learned.model, test, cfg, rules, provider, &learned);
}

}  // namespace hydra
