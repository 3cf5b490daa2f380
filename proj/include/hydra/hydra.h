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

/* C interface to the hydra library. Every call returns a hydra_status;
 * HYDRA_OK is zero. On failure hydra_last_error() describes the problem for
 * the calling thread. Strings returned through char** are owned by the
 * caller and released with hydra_string_free(). */

#ifndef HYDRA_HYDRA_H_
#define HYDRA_HYDRA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HYDRA_BUILDING_LIBRARY)
#    define HYDRA_API __declspec(dllexport)
#  else
#    define HYDRA_API __declspec(dllimport)
#  endif
#else
#  define HYDRA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hydra_status {
  HYDRA_OK = 0,
  HYDRA_ERR_INVALID_ARGUMENT = 1,
  HYDRA_ERR_IO = 2,
  HYDRA_ERR_MISSING_COLUMN = 3,
  HYDRA_ERR_EMPTY_CORPUS = 4,
  HYDRA_ERR_DIMENSION_MISMATCH = 5,
  HYDRA_ERR_TOO_FEW_SAMPLES = 6,
  HYDRA_ERR_NON_FINITE_LOSS = 7,
  HYDRA_ERR_TOO_FEW_POINTS = 8,
  HYDRA_ERR_SINGLE_CLUSTER = 9,
  HYDRA_ERR_EMPTY_CLUSTER = 10,
  HYDRA_ERR_UNLABELED_MODEL = 11,
  HYDRA_ERR_BRIDGE_UNREACHABLE = 12,
  HYDRA_ERR_BRIDGE_BAD_RESPONSE = 13,
  HYDRA_ERR_TIMEOUT = 14,
  HYDRA_ERR_VARIANT_PROVIDER_MISSING = 15,
  HYDRA_ERR_RULESET_MISMATCH = 16,
  HYDRA_ERR_BAD_FORMAT = 17,
  HYDRA_ERR_CONFIG = 18,
  HYDRA_ERR_INTERNAL = 19
} hydra_status;

typedef struct hydra_config hydra_config;
typedef struct hydra_corpus hydra_corpus;
typedef struct hydra_rules hydra_rules;
typedef struct hydra_model hydra_model;
typedef struct hydra_report hydra_report;

HYDRA_API const char* hydra_version(void);
HYDRA_API const char* hydra_status_name(hydra_status status);
/* Message of the last failed call on this thread; "" if none. */
HYDRA_API const char* hydra_last_error(void);
HYDRA_API void hydra_string_free(char* s);

/* ---- configuration (flat "key = value" documents) ---- */
HYDRA_API hydra_status hydra_config_create(hydra_config** out);
/* Applies a config file on top of the current values. */
HYDRA_API hydra_status hydra_config_load(hydra_config* cfg, const char* path);
HYDRA_API hydra_status hydra_config_set(hydra_config* cfg, const char* key, const char* value);
HYDRA_API hydra_status hydra_config_get(const hydra_config* cfg, const char* key, char** out);
HYDRA_API hydra_status hydra_config_serialize(const hydra_config* cfg, char** out);
HYDRA_API void hydra_config_free(hydra_config* cfg);

/* ---- corpora ---- */
/* A directory is scanned for C sources; anything else is read as a CSV with
 * the code column named by corpus.column (and corpus.id_column if set). */
HYDRA_API hydra_status hydra_corpus_load(const char* path, const hydra_config* cfg, hydra_corpus** out);
/* Columns id, project, file_path, raw_source. */
HYDRA_API hydra_status hydra_corpus_write_csv(const hydra_corpus* corpus, const char* path);
HYDRA_API size_t hydra_corpus_size(const hydra_corpus* corpus);
HYDRA_API size_t hydra_corpus_skipped(const hydra_corpus* corpus);
/* Borrowed pointers, valid until hydra_corpus_free. */
HYDRA_API hydra_status hydra_corpus_record(const hydra_corpus* corpus, size_t index, const char** id,
                                           const char** project, const char** normalized_source);
HYDRA_API void hydra_corpus_free(hydra_corpus* corpus);
HYDRA_API hydra_status hydra_normalize(const char* source, char** out);

/* Writes `count` generated functions (columns id, project, injected,
 * func_after). */
HYDRA_API hydra_status hydra_synth_write(const char* path, size_t count, uint64_t seed, const char* split);

/* ---- heuristic rules ---- */
HYDRA_API hydra_status hydra_rules_default(hydra_rules** out);
/* Rule file in JSON; see the README for the format. */
HYDRA_API hydra_status hydra_rules_load(const char* path, hydra_rules** out);
HYDRA_API size_t hydra_rules_count(const hydra_rules* rules);
HYDRA_API hydra_status hydra_rules_describe_json(const hydra_rules* rules, char** out);
/* bits_len must equal hydra_rules_count(). */
HYDRA_API hydra_status hydra_rules_match(const hydra_rules* rules, const char* normalized_source,
                                         uint8_t* bits, size_t bits_len);
HYDRA_API hydra_status hydra_rules_explain_json(const hydra_rules* rules, const char* normalized_source,
                                                char** out);
/* Per-function bits and evidence for a whole corpus, as a JSON array. */
HYDRA_API hydra_status hydra_rules_scan_json(const hydra_rules* rules, const hydra_corpus* corpus,
                                             size_t jobs, char** out);
HYDRA_API void hydra_rules_free(hydra_rules* rules);

/* ---- embeddings ---- */
HYDRA_API size_t hydra_embedding_dim(void);
HYDRA_API hydra_status hydra_embed_hashed(const char* normalized_source, double* out, size_t len);
HYDRA_API hydra_status hydra_embed_remote(const char* endpoint, const char* id, const char* source,
                                          int timeout_ms, double* out, size_t len);
/* CSV: id, provider, e0..e767. Uses the provider named in cfg. */
HYDRA_API hydra_status hydra_corpus_embed_write(const hydra_corpus* corpus, const hydra_config* cfg,
                                                const char* path);

/* ---- models ---- */
/* Learning phase for cfg's variant. The provider is built from cfg. */
HYDRA_API hydra_status hydra_model_train(const hydra_corpus* train, const hydra_rules* rules,
                                         const hydra_config* cfg, hydra_model** out);
HYDRA_API hydra_status hydra_model_save(const hydra_model* model, const char* path);
HYDRA_API hydra_status hydra_model_load(const char* path, hydra_model** out);
HYDRA_API hydra_status hydra_model_summary_json(const hydra_model* model, char** out);
/* Per-epoch losses of the VAE (CSV). Only available right after training. */
HYDRA_API hydra_status hydra_model_trace_write(const hydra_model* model, const char* path);
HYDRA_API hydra_status hydra_model_predict(const hydra_model* model, const hydra_corpus* test,
                                           const hydra_rules* rules, const hydra_config* cfg,
                                           hydra_report** out);
HYDRA_API void hydra_model_free(hydra_model* model);

/* ---- reports ---- */
/* Learning on `train` followed by testing on `test`. */
HYDRA_API hydra_status hydra_run_variant(const hydra_corpus* train, const hydra_corpus* test,
                                         const hydra_rules* rules, const hydra_config* cfg,
                                         hydra_report** out);
/* format is "json" or "csv"; csv also writes <path>.summary.json. */
HYDRA_API hydra_status hydra_report_write(const hydra_report* report, const char* path, const char* format);
/* svg_path may be NULL. */
HYDRA_API hydra_status hydra_report_write_projection(const hydra_report* report, const char* csv_path,
                                                     const char* svg_path);
HYDRA_API hydra_status hydra_report_json(const hydra_report* report, char** out);
HYDRA_API hydra_status hydra_report_evaluation_json(const hydra_report* report, char** out);
HYDRA_API void hydra_report_free(hydra_report* report);

#ifdef __cplusplus
}
#endif

#endif /* HYDRA_HYDRA_H_ */
