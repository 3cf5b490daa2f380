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

#include "hydra/hydra.h"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "json.hpp"

#include "hydra/config.hpp"
#include "hydra/corpus.hpp"
#include "hydra/csv.hpp"
#include "hydra/embed.hpp"
#include "hydra/error.hpp"
#include "hydra/heuristics.hpp"
#include "hydra/model_io.hpp"
#include "hydra/pipeline.hpp"
#include "hydra/remote_embedder.hpp"
#include "hydra/report.hpp"
#include "hydra/synth.hpp"

struct hydra_config {
  hydra::HydraConfig value;
};
struct hydra_corpus {
  hydra::Corpus value;
};
struct hydra_rules {
  hydra::RuleSet value;
};
struct hydra_model {
  hydra::TrainedModel value;
  hydra::LossTrace trace;
};
struct hydra_report {
  hydra::RiskReport value;
};

namespace {

thread_local std::string g_last_error;

hydra_status to_status(hydra::ErrorCode code) { return static_cast<hydra_status>(code); }

template <typename Fn>
hydra_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HYDRA_OK;
  } catch (const hydra::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HYDRA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HYDRA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return HYDRA_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) hydra::fail(hydra::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

nlohmann::ordered_json evidence_json(const std::vector<hydra::MatchEvidence>& ev) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : ev) {
    arr.push_back({{"rule", hydra::heuristic_label(e.rule_index)},
                   {"line_start", e.line_start},
                   {"line_end", e.line_end},
                   {"text", e.text}});
  }
  return arr;
}

}  // namespace

extern "C" {

const char* hydra_version(void) { return "0.1.0"; }

const char* hydra_status_name(hydra_status status) {
  if (status == HYDRA_OK) return "Ok";
  static thread_local std::string name;
  name = std::string(hydra::error_code_name(static_cast<hydra::ErrorCode>(status)));
  return name.c_str();
}

const char* hydra_last_error(void) { return g_last_error.c_str(); }

void hydra_string_free(char* s) { delete[] s; }

hydra_status hydra_config_create(hydra_config** out) {
  return guard([&] {
    require(out != nullptr, "out is null");
    *out = new hydra_config{};
  });
}

hydra_status hydra_config_load(hydra_config* cfg, const char* path) {
  return guard([&] {
    require(cfg != nullptr && path != nullptr, "config and path are required");
    cfg->value = hydra::load_config(path, cfg->value);
  });
}

hydra_status hydra_config_set(hydra_config* cfg, const char* key, const char* value) {
  return guard([&] {
    require(cfg != nullptr && key != nullptr && value != nullptr, "config, key and value are required");
    hydra::set_config_value(cfg->value, key, value);
  });
}

hydra_status hydra_config_get(const hydra_config* cfg, const char* key, char** out) {
  return guard([&] {
    require(cfg != nullptr && key != nullptr && out != nullptr, "config, key and out are required");
    *out = dup_string(hydra::get_config_value(cfg->value, key));
  });
}

hydra_status hydra_config_serialize(const hydra_config* cfg, char** out) {
  return guard([&] {
    require(cfg != nullptr && out != nullptr, "config and out are required");
    *out = dup_string(hydra::serialize_config(cfg->value));
  });
}

void hydra_config_free(hydra_config* cfg) { delete cfg; }

hydra_status hydra_corpus_load(const char* path, const hydra_config* cfg, hydra_corpus** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path and out are required");
    const hydra::HydraConfig c = cfg ? cfg->value : hydra::HydraConfig{};
    auto corpus = std::make_unique<hydra_corpus>();
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) {
      corpus->value = hydra::scan_source_tree(path);
    } else {
      hydra::CsvLoadOptions opts;
      opts.column = c.column;
      if (!c.id_column.empty()) opts.id_column = c.id_column;
      corpus->value = hydra::load_csv_corpus(path, opts);
    }
    *out = corpus.release();
  });
}

hydra_status hydra_corpus_write_csv(const hydra_corpus* corpus, const char* path) {
  return guard([&] {
    require(corpus != nullptr && path != nullptr, "corpus and path are required");
    hydra::write_csv_corpus(corpus->value, path);
  });
}

size_t hydra_corpus_size(const hydra_corpus* corpus) {
  return corpus ? corpus->value.records.size() : 0;
}

size_t hydra_corpus_skipped(const hydra_corpus* corpus) {
  return corpus ? corpus->value.skipped_count : 0;
}

hydra_status hydra_corpus_record(const hydra_corpus* corpus, size_t index, const char** id,
                                 const char** project, const char** normalized_source) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    require(index < corpus->value.records.size(), "record index out of range");
    const auto& r = corpus->value.records[index];
    if (id) *id = r.id.c_str();
    if (project) *project = r.project.c_str();
    if (normalized_source) *normalized_source = r.normalized_source.c_str();
  });
}

void hydra_corpus_free(hydra_corpus* corpus) { delete corpus; }

hydra_status hydra_normalize(const char* source, char** out) {
  return guard([&] {
    require(source != nullptr && out != nullptr, "source and out are required");
    *out = dup_string(hydra::normalize(source));
  });
}

hydra_status hydra_synth_write(const char* path, size_t count, uint64_t seed, const char* split) {
  return guard([&] {
    require(path != nullptr, "path is null");
    require(count > 0, "count must be positive");
    hydra::write_synth_csv(hydra::synth_functions(count, seed, split ? split : "synth"), path);
  });
}

hydra_status hydra_rules_default(hydra_rules** out) {
  return guard([&] {
    require(out != nullptr, "out is null");
    *out = new hydra_rules{hydra::default_rules()};
  });
}

hydra_status hydra_rules_load(const char* path, hydra_rules** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path and out are required");
    *out = new hydra_rules{hydra::RuleSet::load(path)};
  });
}

size_t hydra_rules_count(const hydra_rules* rules) { return rules ? rules->value.size() : 0; }

hydra_status hydra_rules_describe_json(const hydra_rules* rules, char** out) {
  return guard([&] {
    require(rules != nullptr && out != nullptr, "rules and out are required");
    *out = dup_string(rules->value.to_json());
  });
}

hydra_status hydra_rules_match(const hydra_rules* rules, const char* normalized_source, uint8_t* bits,
                               size_t bits_len) {
  return guard([&] {
    require(rules != nullptr && normalized_source != nullptr && bits != nullptr,
            "rules, source and bits are required");
    if (bits_len != rules->value.size()) {
      hydra::fail(hydra::ErrorCode::kDimensionMismatch, "bits_len must equal the rule count");
    }
    const auto v = hydra::match_rules(normalized_source, rules->value);
    std::memcpy(bits, v.bits.data(), bits_len);
  });
}

hydra_status hydra_rules_explain_json(const hydra_rules* rules, const char* normalized_source, char** out) {
  return guard([&] {
    require(rules != nullptr && normalized_source != nullptr && out != nullptr,
            "rules, source and out are required");
    *out = dup_string(evidence_json(hydra::explain(normalized_source, rules->value)).dump(2));
  });
}

hydra_status hydra_rules_scan_json(const hydra_rules* rules, const hydra_corpus* corpus, size_t jobs,
                                   char** out) {
  return guard([&] {
    require(rules != nullptr && corpus != nullptr && out != nullptr, "rules, corpus and out are required");
    const auto& recs = corpus->value.records;
    const auto vectors = hydra::match_corpus(corpus->value, rules->value, jobs == 0 ? 1 : jobs);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < recs.size(); ++i) {
      arr.push_back({{"id", recs[i].id},
                     {"bits", vectors[i].bit_string()},
                     {"label", hydra::heuristic_label(vectors[i].lowest_set())},
                     {"evidence", evidence_json(vectors[i].any()
                                                    ? hydra::explain(recs[i].normalized_source, rules->value)
                                                    : std::vector<hydra::MatchEvidence>{})}});
    }
    *out = dup_string(arr.dump(2));
  });
}

void hydra_rules_free(hydra_rules* rules) { delete rules; }

size_t hydra_embedding_dim(void) { return hydra::kEmbeddingDim; }

hydra_status hydra_embed_hashed(const char* normalized_source, double* out, size_t len) {
  return guard([&] {
    require(normalized_source != nullptr && out != nullptr, "source and out are required");
    if (len != hydra::kEmbeddingDim) hydra::fail(hydra::ErrorCode::kDimensionMismatch, "len must be 768");
    const auto v = hydra::embed_hashed(hydra::tokenize(normalized_source));
    std::memcpy(out, v.data(), len * sizeof(double));
  });
}

hydra_status hydra_embed_remote(const char* endpoint, const char* id, const char* source, int timeout_ms,
                                double* out, size_t len) {
  return guard([&] {
    require(endpoint != nullptr && id != nullptr && source != nullptr && out != nullptr,
            "endpoint, id, source and out are required");
    if (len != hydra::kEmbeddingDim) hydra::fail(hydra::ErrorCode::kDimensionMismatch, "len must be 768");
    const auto rec = hydra::make_record(id, "", std::nullopt, source);
    const auto e = hydra::embed_remote(rec, endpoint, std::chrono::milliseconds(timeout_ms));
    std::memcpy(out, e.values.data(), len * sizeof(double));
  });
}

hydra_status hydra_corpus_embed_write(const hydra_corpus* corpus, const hydra_config* cfg, const char* path) {
  return guard([&] {
    require(corpus != nullptr && cfg != nullptr && path != nullptr, "corpus, config and path are required");
    const auto provider = hydra::make_provider(cfg->value);
    const auto emb = hydra::embed_corpus(*provider, corpus->value, std::max<std::size_t>(1, cfg->value.jobs));
    std::vector<std::string> header = {"id", "provider"};
    for (std::size_t i = 0; i < hydra::kEmbeddingDim; ++i) header.push_back("e" + std::to_string(i));
    std::string text = hydra::csv::join_row(header) + "\n";
    for (const auto& e : emb) {
      std::vector<std::string> row = {e.function_id, e.provider_id};
      for (double v : e.values) row.push_back(hydra::format_double(v));
      text += hydra::csv::join_row(row) + "\n";
    }
    hydra::write_text_file(path, text);
  });
}

hydra_status hydra_model_train(const hydra_corpus* train, const hydra_rules* rules, const hydra_config* cfg,
                               hydra_model** out) {
  return guard([&] {
    require(train != nullptr && rules != nullptr && cfg != nullptr && out != nullptr,
            "train, rules, config and out are required");
    const hydra::Variant variant = hydra::parse_variant(cfg->value.variant);
    std::unique_ptr<hydra::EmbeddingProvider> provider;
    if (hydra::needs_provider(variant)) provider = hydra::make_provider(cfg->value);
    auto learned = hydra::learn(train->value, {variant}, cfg->value, rules->value, provider.get());
    *out = new hydra_model{std::move(learned.model), std::move(learned.trace)};
  });
}

hydra_status hydra_model_save(const hydra_model* model, const char* path) {
  return guard([&] {
    require(model != nullptr && path != nullptr, "model and path are required");
    hydra::save_model(model->value, path);
  });
}

hydra_status hydra_model_load(const char* path, hydra_model** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path and out are required");
    *out = new hydra_model{hydra::load_model(path), {}};
  });
}

hydra_status hydra_model_summary_json(const hydra_model* model, char** out) {
  return guard([&] {
    require(model != nullptr && out != nullptr, "model and out are required");
    const auto& m = model->value;
    nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < m.clusters.k; ++c) {
      const auto& a = m.clusters.alignment[c];
      clusters.push_back({{"id", c},
                          {"size", a.size},
                          {"label", hydra::heuristic_label(m.clusters.labels[c])},
                          {"dominant_heuristic", a.heuristic ? nlohmann::ordered_json(hydra::heuristic_label(a.heuristic))
                                                             : nlohmann::ordered_json(nullptr)},
                          {"dominant_count", a.count},
                          {"dominant_fraction", a.fraction},
                          {"none_count", a.size - a.matched}});
    }
    nlohmann::ordered_json doc{{"variant", hydra::variant_name(m.variant)},
                               {"provider_id", m.provider_id},
                               {"rule_names", m.rule_names},
                               {"representation_dim", m.representation_dim},
                               {"seed", m.seed},
                               {"config_hash", m.config_hash},
                               {"k", m.clusters.k},
                               {"inertia", m.clusters.inertia},
                               {"iterations", m.clusters.iterations},
                               {"best_epoch", m.vae ? m.vae->best_epoch : 0},
                               {"clusters", std::move(clusters)}};
    if (!model->trace.empty()) {
      const auto& first = model->trace.front();
      const auto& best = model->trace[m.vae->best_epoch - 1];
      doc["validation_loss"] = {{"epoch_1", first.validation.total}, {"best", best.validation.total}};
    }
    *out = dup_string(doc.dump(2));
  });
}

hydra_status hydra_model_trace_write(const hydra_model* model, const char* path) {
  return guard([&] {
    require(model != nullptr && path != nullptr, "model and path are required");
    if (model->trace.empty()) {
      hydra::fail(hydra::ErrorCode::kInvalidArgument, "no loss trace: the model was not trained in this session or has no VAE");
    }
    std::string text = hydra::csv::join_row({"epoch", "train_total", "train_reconstruction", "train_kl",
                                             "val_total", "val_reconstruction", "val_kl"}) + "\n";
    for (std::size_t i = 0; i < model->trace.size(); ++i) {
      const auto& e = model->trace[i];
      text += hydra::csv::join_row({std::to_string(i + 1), hydra::format_double(e.train.total),
                                    hydra::format_double(e.train.reconstruction), hydra::format_double(e.train.kl),
                                    hydra::format_double(e.validation.total),
                                    hydra::format_double(e.validation.reconstruction),
                                    hydra::format_double(e.validation.kl)}) + "\n";
    }
    hydra::write_text_file(path, text);
  });
}

hydra_status hydra_model_predict(const hydra_model* model, const hydra_corpus* test, const hydra_rules* rules,
                                 const hydra_config* cfg, hydra_report** out) {
  return guard([&] {
    require(model != nullptr && test != nullptr && rules != nullptr && cfg != nullptr && out != nullptr,
            "model, test, rules, config and out are required");
    std::unique_ptr<hydra::EmbeddingProvider> provider;
    if (hydra::needs_provider(model->value.variant)) provider = hydra::make_provider(cfg->value);
    *out = new hydra_report{hydra::apply(model->value, test->value, cfg->value, rules->value, provider.get())};
  });
}

void hydra_model_free(hydra_model* model) { delete model; }

hydra_status hydra_run_variant(const hydra_corpus* train, const hydra_corpus* test, const hydra_rules* rules,
                               const hydra_config* cfg, hydra_report** out) {
  return guard([&] {
    require(train != nullptr && test != nullptr && rules != nullptr && cfg != nullptr && out != nullptr,
            "train, test, rules, config and out are required");
    const hydra::Variant variant = hydra::parse_variant(cfg->value.variant);
    std::unique_ptr<hydra::EmbeddingProvider> provider;
    if (hydra::needs_provider(variant)) provider = hydra::make_provider(cfg->value);
    *out = new hydra_report{
        hydra::run_variant(train->value, test->value, {variant}, cfg->value, rules->value, provider.get())};
  });
}

hydra_status hydra_report_write(const hydra_report* report, const char* path, const char* format) {
  return guard([&] {
    require(report != nullptr && path != nullptr, "report and path are required");
    const std::string f = format ? format : "json";
    if (f != "json" && f != "csv") hydra::fail(hydra::ErrorCode::kInvalidArgument, "format must be json or csv");
    hydra::emit_report(report->value, f == "csv" ? hydra::ReportFormat::kCsv : hydra::ReportFormat::kJson, path);
  });
}

hydra_status hydra_report_write_projection(const hydra_report* report, const char* csv_path,
                                           const char* svg_path) {
  return guard([&] {
    require(report != nullptr && csv_path != nullptr, "report and csv_path are required");
    const auto points = hydra::plot_points(report->value);
    hydra::emit_projection_plot(points, csv_path);
    if (svg_path != nullptr) hydra::write_text_file(svg_path, hydra::projection_svg(points));
  });
}

hydra_status hydra_report_json(const hydra_report* report, char** out) {
  return guard([&] {
    require(report != nullptr && out != nullptr, "report and out are required");
    *out = dup_string(hydra::report_to_json(report->value));
  });
}

hydra_status hydra_report_evaluation_json(const hydra_report* report, char** out) {
  return guard([&] {
    require(report != nullptr && out != nullptr, "report and out are required");
    *out = dup_string(hydra::evaluation_to_json(report->value));
  });
}

void hydra_report_free(hydra_report* report) { delete report; }

}  // extern "C"
