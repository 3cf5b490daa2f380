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


#include <cmath>
#include <string>

#include "doctest.h"
#include "hydra/config.hpp"
#include "hydra/error.hpp"
#include "hydra/heuristics.hpp"
#include "hydra/model_io.hpp"
#include "hydra/pipeline.hpp"
#include "hydra/report.hpp"
#include "hydra/synth.hpp"
#include "test_util.hpp"

namespace {

hydra::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const hydra::Error& e) {
    return e.code();
  }
  FAIL("expected hydra::Error");
  return hydra::ErrorCode::kInternal;
}

hydra::HydraConfig quick_config(const std::string& variant) {
  hydra::HydraConfig cfg;
  cfg.variant = variant;
  cfg.vae.epochs = 15;
  return cfg;
}

const hydra::Corpus& train_corpus() {
  static const hydra::Corpus c = hydra::synth_corpus(hydra::synth_functions(90, 42, "train"), "train");
  return c;
}

const hydra::Corpus& test_corpus() {
  static const hydra::Corpus c = hydra::synth_corpus(hydra::synth_functions(30, 7, "test"), "test");
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("variant names") {
  CHECK(hydra::parse_variant("m1") == hydra::Variant::kM1);
  CHECK(hydra::parse_variant("hydra") == hydra::Variant::kHydra);
  CHECK(hydra::variant_name(hydra::Variant::kM3) == "m3");
  CHECK_FALSE(hydra::needs_provider(hydra::Variant::kM1));
  CHECK(hydra::needs_provider(hydra::Variant::kM2));
  CHECK(code_of([] { hydra::parse_variant("m4"); }) == hydra::ErrorCode::kConfig);
}

TEST_CASE("config documents round-trip and override in order") {
  hydra::HydraConfig cfg;
  const auto parsed = hydra::parse_config(hydra::serialize_config(cfg));
  CHECK(hydra::serialize_config(parsed) == hydra::serialize_config(cfg));
  CHECK(hydra::config_keys().size() == 23);

  const auto custom = hydra::parse_config("# comment\nseed = 7\nvae.hidden_dims = 32,8\ncluster.tol = 1e-4\n");
  CHECK(custom.seed == 7);
  CHECK(custom.vae.hidden_dims == std::vector<std::size_t>{32, 8});
  CHECK(custom.cluster_tol == 1e-4);
  CHECK(hydra::get_config_value(custom, "vae.hidden_dims") == "32,8");
  const auto layered = hydra::parse_config("k = 3\n", custom);
  CHECK(layered.k == 3);
  CHECK(layered.seed == 7);

  CHECK(code_of([] { hydra::parse_config("nope = 1\n"); }) == hydra::ErrorCode::kConfig);
  CHECK(code_of([] { hydra::parse_config("k = two\n"); }) == hydra::ErrorCode::kConfig);
  CHECK(code_of([] { hydra::parse_config("variant = m9\n"); }) == hydra::ErrorCode::kConfig);
  CHECK(code_of([] { hydra::parse_config("just words\n"); }) == hydra::ErrorCode::kConfig);
}

TEST_CASE("config hash ignores execution-only settings") {
  hydra::HydraConfig a;
  hydra::HydraConfig b = a;
  b.jobs = 8;
  b.timeout_ms = 5;
  CHECK(hydra::config_hash(a) == hydra::config_hash(b));
  b.seed = 43;
  CHECK(hydra::config_hash(a) != hydra::config_hash(b));
  CHECK(hydra::config_hash(a).size() == 16);
}

TEST_CASE("synthetic templates set exactly their injected bit") {
  const auto rules = hydra::default_rules();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto fns = hydra::synth_functions(60, seed, "s");
    std::vector<int> per_family(6, 0);
    for (const auto& f : fns) {
      CAPTURE(f.id);
      const auto v = hydra::match_rules(hydra::normalize(f.source), rules);
      std::string expected(5, '0');
      if (f.injected > 0) expected[static_cast<std::size_t>(f.injected - 1)] = '1';
      CHECK(v.bit_string() == expected);
      ++per_family[static_cast<std::size_t>(f.injected)];
    }
    for (int c : per_family) CHECK(c == 10);
  }
  const auto a = hydra::synth_functions(20, 5, "x");
  const auto b = hydra::synth_functions(20, 5, "x");
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].source == b[i].source);
  CHECK(a[0].id.rfind("x-", 0) == 0);
}

TEST_CASE("M1 clusters bit patterns and labels only symbolic matches") {
  auto cfg = quick_config("m1");
  cfg.k = 6;
  const auto report = hydra::run_variant(train_corpus(), test_corpus(), {hydra::Variant::kM1}, cfg,
                                         hydra::default_rules(), nullptr);
  std::size_t zero_rows = 0;
  for (const auto& r : report.rows) {
    if (r.bits == "00000") {
      ++zero_rows;
      CHECK(r.label == 0);
    } else {
      CHECK(r.label == static_cast<int>(r.bits.find('1')) + 1);
    }
  }
  CHECK(report.summary.none == zero_rows);
  REQUIRE(report.summary.test_evaluation);
  CHECK(report.summary.test_evaluation->silhouette == 1.0);
  CHECK(report.summary.test_evaluation->dbi == 0.0);
  CHECK(std::isinf(report.summary.test_evaluation->chi));
  CHECK(report.metadata.provider_id.empty());
  CHECK(report.metadata.representation_dim == 5);
  bool noted = false;
  for (const auto& n : report.summary.notes) noted = noted || n.find("\"inf\"") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("M2 and M3 use embedding-space representations") {
  const hydra::HashedEmbeddingProvider provider;
  const auto rules = hydra::default_rules();
  const auto m2 = hydra::learn(train_corpus(), {hydra::Variant::kM2}, quick_config("m2"), rules, &provider);
  CHECK(m2.model.representation_dim == 768);
  CHECK(m2.model.provider_id == "hashed-ngram-v1");
  const auto m3 = hydra::learn(train_corpus(), {hydra::Variant::kM3}, quick_config("m3"), rules, &provider);
  CHECK(m3.model.representation_dim == 773);
  const auto report = hydra::apply(m3.model, test_corpus(), quick_config("m3"), rules, &provider, &m3);
  CHECK(report.rows.size() == test_corpus().records.size());
  CHECK(report.summary.train_evaluation.has_value());
}

TEST_CASE("HYDRA model artifacts reproduce predictions") {
  const hydra::HashedEmbeddingProvider provider;
  const auto rules = hydra::default_rules();
  const auto cfg = quick_config("hydra");
  const auto learned = hydra::learn(train_corpus(), {hydra::Variant::kHydra}, cfg, rules, &provider);
  REQUIRE(learned.model.vae);
  CHECK(learned.trace.size() == 15);
  CHECK(learned.model.representation_dim == 16);

  const std::string text = hydra::serialize_model(learned.model);
  const auto loaded = hydra::deserialize_model(text);
  CHECK(hydra::serialize_model(loaded) == text);

  const auto direct = hydra::apply(learned.model, test_corpus(), cfg, rules, &provider);
  const auto reloaded = hydra::apply(loaded, test_corpus(), cfg, rules, &provider);
  CHECK(hydra::report_to_json(direct) == hydra::report_to_json(reloaded));
  for (const auto& r : direct.rows) CHECK(r.latent.size() == 16);

  testutil::TempDir dir;
  hydra::save_model(learned.model, dir / "m.txt");
  CHECK(hydra::serialize_model(hydra::load_model(dir / "m.txt")) == text);
}

TEST_CASE("damaged model artifacts are rejected") {
  const auto learned = hydra::learn(train_corpus(), {hydra::Variant::kM1}, quick_config("m1"),
                                    hydra::default_rules(), nullptr);
  const std::string text = hydra::serialize_model(learned.model);
  CHECK(code_of([] { hydra::deserialize_model("garbage"); }) == hydra::ErrorCode::kBadFormat);
  CHECK(code_of([&] { hydra::deserialize_model(text.substr(0, text.size() / 2)); }) == hydra::ErrorCode::kBadFormat);
  std::string wrong_version = text;
  wrong_version.replace(0, std::string("HYDRA-MODEL 1").size(), "HYDRA-MODEL 9");
  CHECK(code_of([&] { hydra::deserialize_model(wrong_version); }) == hydra::ErrorCode::kBadFormat);
  CHECK(code_of([] { hydra::load_model("/nonexistent/model"); }) == hydra::ErrorCode::kIo);
}

TEST_CASE("test-time guards") {
  const hydra::HashedEmbeddingProvider provider;
  const auto rules = hydra::default_rules();
  const auto cfg = quick_config("m2");
  const auto learned = hydra::learn(train_corpus(), {hydra::Variant::kM2}, cfg, rules, &provider);

  auto fewer = hydra::RuleSet::from_json(R"json({"include_defaults": false, "rules": [{"name": "x", "clauses": [{"regex": "x"}]}]})json");
  CHECK(code_of([&] { hydra::apply(learned.model, test_corpus(), cfg, fewer, &provider); }) ==
        hydra::ErrorCode::kRuleSetMismatch);

  struct Renamed final : hydra::EmbeddingProvider {
    hydra::Embedding embed(const hydra::FunctionRecord& r) const override { return inner.embed(r); }
    std::string id() const override { return "other"; }
    hydra::HashedEmbeddingProvider inner;
  } renamed;
  CHECK(code_of([&] { hydra::apply(learned.model, test_corpus(), cfg, rules, &renamed); }) ==
        hydra::ErrorCode::kVariantProviderMissing);
  CHECK(code_of([&] { hydra::apply(learned.model, test_corpus(), cfg, rules, nullptr); }) ==
        hydra::ErrorCode::kVariantProviderMissing);
  CHECK(code_of([&] {
          hydra::run_variant(train_corpus(), test_corpus(), {hydra::Variant::kHydra}, cfg, rules, nullptr);
        }) == hydra::ErrorCode::kVariantProviderMissing);
  CHECK(code_of([&] { hydra::apply(learned.model, hydra::Corpus{}, cfg, rules, &provider); }) ==
        hydra::ErrorCode::kEmptyCorpus);
}

TEST_CASE("thread count does not change results") {
  const hydra::HashedEmbeddingProvider provider;
  auto one = quick_config("m3");
  auto four = one;
  four.jobs = 4;
  const auto a = hydra::run_variant(train_corpus(), test_corpus(), {hydra::Variant::kM3}, one,
                                    hydra::default_rules(), &provider);
  const auto b = hydra::run_variant(train_corpus(), test_corpus(), {hydra::Variant::kM3}, four,
                                    hydra::default_rules(), &provider);
  CHECK(hydra::report_to_json(a) == hydra::report_to_json(b));
}

}  // TEST_SUITE
