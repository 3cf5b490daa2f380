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


// Drives the shared library through hydra.h only.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hydra/hydra.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  hydra_string_free(s);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hydra-capi-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(hydra_version()) == "0.1.0");
  CHECK(std::string(hydra_status_name(HYDRA_OK)) == "Ok");
  CHECK(std::string(hydra_status_name(HYDRA_ERR_RULESET_MISMATCH)) == "RuleSetMismatch");
  CHECK(std::string(hydra_status_name(HYDRA_ERR_INTERNAL)) == "Internal");
  hydra_corpus* c = nullptr;
  CHECK(hydra_corpus_load("/nonexistent.csv", nullptr, &c) == HYDRA_ERR_IO);
  CHECK(c == nullptr);
  CHECK(std::string(hydra_last_error()).find("nonexistent") != std::string::npos);
  CHECK(hydra_config_create(nullptr) == HYDRA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config handles") {
  hydra_config* cfg = nullptr;
  REQUIRE(hydra_config_create(&cfg) == HYDRA_OK);
  CHECK(hydra_config_set(cfg, "k", "3") == HYDRA_OK);
  char* v = nullptr;
  REQUIRE(hydra_config_get(cfg, "k", &v) == HYDRA_OK);
  CHECK(take(v) == "3");
  CHECK(hydra_config_set(cfg, "bogus", "1") == HYDRA_ERR_CONFIG);
  CHECK(hydra_config_set(cfg, "k", "x") == HYDRA_ERR_CONFIG);
  const auto path = scratch("cfg.txt");
  std::ofstream(path) << "seed = 9\nvariant = m1\n";
  CHECK(hydra_config_load(cfg, path.string().c_str()) == HYDRA_OK);
  char* doc = nullptr;
  REQUIRE(hydra_config_serialize(cfg, &doc) == HYDRA_OK);
  const std::string text = take(doc);
  CHECK(text.find("seed = 9\n") != std::string::npos);
  CHECK(text.find("k = 3\n") != std::string::npos);
  hydra_config_free(cfg);
}

TEST_CASE("rules and embeddings through the C API") {
  hydra_rules* rules = nullptr;
  REQUIRE(hydra_rules_default(&rules) == HYDRA_OK);
  CHECK(hydra_rules_count(rules) == 5);
  char* norm = nullptr;
  REQUIRE(hydra_normalize("void f(int *p)\n{\n  /* c */ p->x = 1;\n}\n", &norm) == HYDRA_OK);
  const std::string src = take(norm);
  uint8_t bits[5] = {9, 9, 9, 9, 9};
  REQUIRE(hydra_rules_match(rules, src.c_str(), bits, 5) == HYDRA_OK);
  CHECK(bits[0] == 1);
  CHECK(hydra_rules_match(rules, src.c_str(), bits, 4) == HYDRA_ERR_DIMENSION_MISMATCH);
  char* explain = nullptr;
  REQUIRE(hydra_rules_explain_json(rules, src.c_str(), &explain) == HYDRA_OK);
  CHECK(take(explain).find("\"H1\"") != std::string::npos);
  char* desc = nullptr;
  REQUIRE(hydra_rules_describe_json(rules, &desc) == HYDRA_OK);
  CHECK(take(desc).find("missing-null-check") != std::string::npos);

  std::vector<double> e(hydra_embedding_dim());
  REQUIRE(hydra_embed_hashed(src.c_str(), e.data(), e.size()) == HYDRA_OK);
  double n2 = 0;
  for (double x : e) n2 += x * x;
  CHECK(n2 == doctest::Approx(1.0));
  CHECK(hydra_embed_hashed(src.c_str(), e.data(), 10) == HYDRA_ERR_DIMENSION_MISMATCH);
  CHECK(hydra_embed_remote("http://127.0.0.1:1", "id", src.c_str(), 200, e.data(), e.size()) ==
        HYDRA_ERR_BRIDGE_UNREACHABLE);
  hydra_rules_free(rules);
}

TEST_CASE("train, save, load, predict and report") {
  const auto train_csv = scratch("train.csv");
  const auto test_csv = scratch("test.csv");
  REQUIRE(hydra_synth_write(train_csv.string().c_str(), 60, 42, "train") == HYDRA_OK);
  REQUIRE(hydra_synth_write(test_csv.string().c_str(), 20, 7, "test") == HYDRA_OK);

  hydra_config* cfg = nullptr;
  REQUIRE(hydra_config_create(&cfg) == HYDRA_OK);
  REQUIRE(hydra_config_set(cfg, "corpus.id_column", "id") == HYDRA_OK);
  REQUIRE(hydra_config_set(cfg, "vae.epochs", "10") == HYDRA_OK);

  hydra_corpus* train = nullptr;
  hydra_corpus* test = nullptr;
  REQUIRE(hydra_corpus_load(train_csv.string().c_str(), cfg, &train) == HYDRA_OK);
  REQUIRE(hydra_corpus_load(test_csv.string().c_str(), cfg, &test) == HYDRA_OK);
  CHECK(hydra_corpus_size(train) == 60);
  const char* id = nullptr;
  REQUIRE(hydra_corpus_record(test, 0, &id, nullptr, nullptr) == HYDRA_OK);
  CHECK(std::string(id) == "test-0000");
  CHECK(hydra_corpus_record(test, 99, &id, nullptr, nullptr) == HYDRA_ERR_INVALID_ARGUMENT);

  hydra_rules* rules = nullptr;
  REQUIRE(hydra_rules_default(&rules) == HYDRA_OK);
  char* scan = nullptr;
  REQUIRE(hydra_rules_scan_json(rules, test, 2, &scan) == HYDRA_OK);
  CHECK(take(scan).find("\"test-0000\"") != std::string::npos);

  hydra_model* model = nullptr;
  REQUIRE(hydra_model_train(train, rules, cfg, &model) == HYDRA_OK);
  const auto model_path = scratch("model.txt");
  REQUIRE(hydra_model_save(model, model_path.string().c_str()) == HYDRA_OK);
  REQUIRE(hydra_model_trace_write(model, scratch("trace.csv").string().c_str()) == HYDRA_OK);
  CHECK(slurp(scratch("trace.csv")).rfind("epoch,train_total", 0) == 0);
  char* summary = nullptr;
  REQUIRE(hydra_model_summary_json(model, &summary) == HYDRA_OK);
  CHECK(take(summary).find("\"best_epoch\"") != std::string::npos);

  hydra_model* loaded = nullptr;
  REQUIRE(hydra_model_load(model_path.string().c_str(), &loaded) == HYDRA_OK);
  CHECK(hydra_model_trace_write(loaded, scratch("x.csv").string().c_str()) == HYDRA_ERR_INVALID_ARGUMENT);

  hydra_report* a = nullptr;
  hydra_report* b = nullptr;
  REQUIRE(hydra_model_predict(model, test, rules, cfg, &a) == HYDRA_OK);
  REQUIRE(hydra_model_predict(loaded, test, rules, cfg, &b) == HYDRA_OK);
  char* ja = nullptr;
  char* jb = nullptr;
  REQUIRE(hydra_report_json(a, &ja) == HYDRA_OK);
  REQUIRE(hydra_report_json(b, &jb) == HYDRA_OK);
  CHECK(take(ja) == take(jb));

  REQUIRE(hydra_report_write(a, scratch("r.csv").string().c_str(), "csv") == HYDRA_OK);
  CHECK(std::filesystem::exists(scratch("r.csv.summary.json")));
  CHECK(hydra_report_write(a, scratch("r.xml").string().c_str(), "xml") == HYDRA_ERR_INVALID_ARGUMENT);
  REQUIRE(hydra_report_write_projection(a, scratch("p.csv").string().c_str(), scratch("p.svg").string().c_str()) ==
          HYDRA_OK);
  CHECK(slurp(scratch("p.svg")).rfind("<svg", 0) == 0);
  char* ev = nullptr;
  REQUIRE(hydra_report_evaluation_json(a, &ev) == HYDRA_OK);
  CHECK(take(ev).find("\"silhouette\"") != std::string::npos);

  // Same model, different rule set.
  const auto rule_file = scratch("rules.json");
  std::ofstream(rule_file) << R"json({"rules": [{"name": "extra", "clauses": [{"regex": "gets"}]}]})json";
  hydra_rules* extended = nullptr;
  REQUIRE(hydra_rules_load(rule_file.string().c_str(), &extended) == HYDRA_OK);
  CHECK(hydra_rules_count(extended) == 6);
  hydra_report* mismatch = nullptr;
  CHECK(hydra_model_predict(model, test, extended, cfg, &mismatch) == HYDRA_ERR_RULESET_MISMATCH);
  CHECK(mismatch == nullptr);

  REQUIRE(hydra_config_set(cfg, "variant", "m1") == HYDRA_OK);
  hydra_report* m1 = nullptr;
  REQUIRE(hydra_run_variant(train, test, rules, cfg, &m1) == HYDRA_OK);
  char* m1json = nullptr;
  REQUIRE(hydra_report_json(m1, &m1json) == HYDRA_OK);
  CHECK(take(m1json).find("\"variant\": \"m1\"") != std::string::npos);

  REQUIRE(hydra_config_set(cfg, "provider", "remote") == HYDRA_OK);
  REQUIRE(hydra_config_set(cfg, "variant", "m2") == HYDRA_OK);
  hydra_report* remote = nullptr;
  CHECK(hydra_run_variant(train, test, rules, cfg, &remote) == HYDRA_ERR_CONFIG);

  const auto emb_path = scratch("emb.csv");
  REQUIRE(hydra_config_set(cfg, "provider", "hashed") == HYDRA_OK);
  REQUIRE(hydra_corpus_embed_write(test, cfg, emb_path.string().c_str()) == HYDRA_OK);
  const std::string emb = slurp(emb_path);
  CHECK(emb.rfind("id,provider,e0,e1,", 0) == 0);
  CHECK(emb.find("\ntest-0000,hashed-ngram-v1,") != std::string::npos);

  hydra_report_free(m1);
  hydra_report_free(a);
  hydra_report_free(b);
  hydra_model_free(model);
  hydra_model_free(loaded);
  hydra_rules_free(rules);
  hydra_rules_free(extended);
  hydra_corpus_free(train);
  hydra_corpus_free(test);
  hydra_config_free(cfg);
  std::filesystem::remove_all(scratch("").parent_path());
}

TEST_CASE("free functions accept null") {
  hydra_config_free(nullptr);
  hydra_corpus_free(nullptr);
  hydra_rules_free(nullptr);
  hydra_model_free(nullptr);
  hydra_report_free(nullptr);
  hydra_string_free(nullptr);
  CHECK(hydra_corpus_size(nullptr) == 0);
}
