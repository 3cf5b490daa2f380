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


// Command-line front end. Talks to the library only through hydra.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hydra/hydra.h"
#include "json.hpp"

namespace {

// Thrown after a failed library call; main() turns it into the exit code.
struct CallFailed {
  hydra_status status;
};

void check(hydra_status status, const std::string& what) {
  if (status == HYDRA_OK) return;
  std::fprintf(stderr, "hydra: %s: %s: %s\n", what.c_str(), hydra_status_name(status), hydra_last_error());
  throw CallFailed{status};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<hydra_config, Deleter<hydra_config, hydra_config_free>>;
using CorpusPtr = std::unique_ptr<hydra_corpus, Deleter<hydra_corpus, hydra_corpus_free>>;
using RulesPtr = std::unique_ptr<hydra_rules, Deleter<hydra_rules, hydra_rules_free>>;
using ModelPtr = std::unique_ptr<hydra_model, Deleter<hydra_model, hydra_model_free>>;
using ReportPtr = std::unique_ptr<hydra_report, Deleter<hydra_report, hydra_report_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  hydra_string_free(s);
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

struct GlobalOptions {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<std::size_t> k;
  std::optional<std::string> provider;
  std::optional<std::string> endpoint;
  std::optional<std::size_t> jobs;
  std::vector<std::string> overrides;  // key=value
};

ConfigPtr build_config(const GlobalOptions& g) {
  hydra_config* raw = nullptr;
  check(hydra_config_create(&raw), "config");
  ConfigPtr cfg(raw);
  if (!g.config_file.empty()) check(hydra_config_load(cfg.get(), g.config_file.c_str()), g.config_file);
  auto set = [&](const std::string& key, const std::string& value) {
    check(hydra_config_set(cfg.get(), key.c_str(), value.c_str()), "--" + key);
  };
  for (const std::string& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "hydra: --set expects key=value, got '%s'\n", kv.c_str());
      throw CallFailed{HYDRA_ERR_CONFIG};
    }
    set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) set("seed", std::to_string(*g.seed));
  if (g.variant) set("variant", *g.variant);
  if (g.k) set("k", std::to_string(*g.k));
  if (g.provider) set("provider", *g.provider);
  if (g.endpoint) set("endpoint", *g.endpoint);
  if (g.jobs) set("jobs", std::to_string(*g.jobs));
  return cfg;
}

std::string config_value(const hydra_config* cfg, const char* key) {
  char* out = nullptr;
  check(hydra_config_get(cfg, key, &out), key);
  return take(out);
}

CorpusPtr load_corpus(const std::string& path, const hydra_config* cfg) {
  hydra_corpus* raw = nullptr;
  check(hydra_corpus_load(path.c_str(), cfg, &raw), path);
  return CorpusPtr(raw);
}

RulesPtr load_rules(const std::string& flag, const hydra_config* cfg) {
  const std::string path = flag.empty() ? config_value(cfg, "rules.file") : flag;
  hydra_rules* raw = nullptr;
  if (path.empty()) {
    check(hydra_rules_default(&raw), "rules");
  } else {
    check(hydra_rules_load(path.c_str(), &raw), path);
  }
  return RulesPtr(raw);
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::printf("%s\n", text.c_str());
    return;
  }
  const std::string body = text + "\n";
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f || std::fwrite(body.data(), 1, body.size(), f) != body.size() || std::fclose(f) != 0) {
    std::fprintf(stderr, "hydra: cannot write %s\n", path.c_str());
    throw CallFailed{HYDRA_ERR_IO};
  }
}

struct ReportOutputs {
  std::string out;
  std::string format = "json";
  std::string projection;
  std::string svg;
};

void add_report_outputs(CLI::App* cmd, ReportOutputs& r) {
  cmd->add_option("-o,--out", r.out, "Report path")->required();
  cmd->add_option("--format", r.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--projection", r.projection, "Also write 2-D projection points (CSV)");
  cmd->add_option("--svg", r.svg, "Also render the projection as SVG (needs --projection)");
}

void write_report(const hydra_report* report, const ReportOutputs& r) {
  check(hydra_report_write(report, r.out.c_str(), r.format.c_str()), r.out);
  if (!r.projection.empty()) {
    check(hydra_report_write_projection(report, r.projection.c_str(), r.svg.empty() ? nullptr : r.svg.c_str()),
          r.projection);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid symbolic and latent vulnerability-risk triage for C code"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(hydra_version()));

  GlobalOptions g;
  app.add_option("--config", g.config_file, "Flat key = value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--variant", g.variant, "Model variant")->check(CLI::IsMember({"m1", "m2", "m3", "hydra"}));
  app.add_option("--k", g.k, "Number of clusters");
  app.add_option("--provider", g.provider, "Embedding provider")->check(CLI::IsMember({"hashed", "remote"}));
  app.add_option("--endpoint", g.endpoint, "Embedding bridge URL");
  app.add_option("--jobs", g.jobs, "Worker threads for matching and embedding");
  app.add_option("--set", g.overrides, "Override any config key (key=value)");

  // synth
  std::string synth_out, synth_split = "train";
  std::size_t synth_count = 150;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with injected weaknesses");
  synth->add_option("-o,--out", synth_out, "CSV path")->required();
  synth->add_option("--count", synth_count, "Number of functions")->check(CLI::PositiveNumber);
  synth->add_option("--split", synth_split, "Id prefix");

  // ingest
  std::string ingest_in, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Load a CSV dataset or source tree and normalise it");
  ingest->add_option("input", ingest_in, "CSV file or source directory")->required();
  ingest->add_option("-o,--out", ingest_out, "Write the normalised corpus as CSV");

  // rules
  std::string rules_in, rules_file, rules_out;
  bool rules_describe = false;
  auto* rules = app.add_subcommand("rules", "Run the heuristic rules and print bits with evidence");
  rules->add_option("input", rules_in, "CSV file or source directory");
  rules->add_option("--rules", rules_file, "JSON rule file");
  rules->add_flag("--describe", rules_describe, "Print the active rule set and exit");
  rules->add_option("-o,--out", rules_out, "Write JSON here instead of stdout");

  // embed
  std::string embed_in, embed_out;
  auto* embed = app.add_subcommand("embed", "Embed every function of a corpus");
  embed->add_option("input", embed_in, "CSV file or source directory")->required();
  embed->add_option("-o,--out", embed_out, "Embedding CSV")->required();

  // train
  std::string train_in, train_model, train_trace, train_rules;
  auto* train = app.add_subcommand("train", "Learning phase: fit the model for one variant");
  train->add_option("input", train_in, "Training corpus")->required();
  train->add_option("-m,--model", train_model, "Model artifact path")->required();
  train->add_option("--trace", train_trace, "Per-epoch VAE losses (CSV)");
  train->add_option("--rules", train_rules, "JSON rule file");

  // predict
  std::string predict_model, predict_in, predict_rules;
  ReportOutputs predict_outputs;
  auto* predict = app.add_subcommand("predict", "Testing phase: label a corpus with a trained model");
  predict->add_option("model", predict_model, "Model artifact")->required()->check(CLI::ExistingFile);
  predict->add_option("input", predict_in, "Test corpus")->required();
  predict->add_option("--rules", predict_rules, "JSON rule file");
  add_report_outputs(predict, predict_outputs);

  // evaluate
  std::string eval_train, eval_test, eval_rules, eval_out;
  bool eval_all = false;
  auto* evaluate = app.add_subcommand("evaluate", "Train and test, then print clustering metrics");
  evaluate->add_option("train", eval_train, "Training corpus")->required();
  evaluate->add_option("test", eval_test, "Test corpus")->required();
  evaluate->add_option("--rules", eval_rules, "JSON rule file");
  evaluate->add_flag("--all", eval_all, "Compare m1, m2, m3 and hydra");
  evaluate->add_option("-o,--out", eval_out, "Write JSON here instead of stdout");

  // report
  std::string report_train, report_test, report_rules;
  ReportOutputs report_outputs;
  auto* report = app.add_subcommand("report", "Train and test in one go and write the risk report");
  report->add_option("train", report_train, "Training corpus")->required();
  report->add_option("test", report_test, "Test corpus")->required();
  report->add_option("--rules", report_rules, "JSON rule file");
  add_report_outputs(report, report_outputs);

  CLI11_PARSE(app, argc, argv);

  try {
    const ConfigPtr cfg = build_config(g);

    if (*synth) {
      const std::uint64_t seed = std::strtoull(config_value(cfg.get(), "seed").c_str(), nullptr, 10);
      check(hydra_synth_write(synth_out.c_str(), synth_count, seed, synth_split.c_str()), synth_out);
      std::printf("wrote %zu functions to %s\n", synth_count, synth_out.c_str());
    } else if (*ingest) {
      const CorpusPtr corpus = load_corpus(ingest_in, cfg.get());
      std::printf("functions: %zu\nskipped: %zu\n", hydra_corpus_size(corpus.get()),
                  hydra_corpus_skipped(corpus.get()));
      if (!ingest_out.empty()) check(hydra_corpus_write_csv(corpus.get(), ingest_out.c_str()), ingest_out);
    } else if (*rules) {
      const RulesPtr rs = load_rules(rules_file, cfg.get());
      char* out = nullptr;
      if (rules_describe || rules_in.empty()) {
        check(hydra_rules_describe_json(rs.get(), &out), "rules");
      } else {
        const CorpusPtr corpus = load_corpus(rules_in, cfg.get());
        const std::size_t jobs = std::strtoull(config_value(cfg.get(), "jobs").c_str(), nullptr, 10);
        check(hydra_rules_scan_json(rs.get(), corpus.get(), jobs, &out), "rules");
      }
      write_or_print(take(out), rules_out);
    } else if (*embed) {
      const CorpusPtr corpus = load_corpus(embed_in, cfg.get());
      check(hydra_corpus_embed_write(corpus.get(), cfg.get(), embed_out.c_str()), embed_out);
      std::printf("embedded %zu functions into %s\n", hydra_corpus_size(corpus.get()), embed_out.c_str());
    } else if (*train) {
      const CorpusPtr corpus = load_corpus(train_in, cfg.get());
      const RulesPtr rs = load_rules(train_rules, cfg.get());
      hydra_model* raw = nullptr;
      check(hydra_model_train(corpus.get(), rs.get(), cfg.get(), &raw), "train");
      const ModelPtr model(raw);
      check(hydra_model_save(model.get(), train_model.c_str()), train_model);
      if (!train_trace.empty()) check(hydra_model_trace_write(model.get(), train_trace.c_str()), train_trace);
      char* summary = nullptr;
      check(hydra_model_summary_json(model.get(), &summary), "summary");
      std::printf("%s\n", take(summary).c_str());
    } else if (*predict) {
      hydra_model* raw = nullptr;
      check(hydra_model_load(predict_model.c_str(), &raw), predict_model);
      const ModelPtr model(raw);
      const CorpusPtr corpus = load_corpus(predict_in, cfg.get());
      const RulesPtr rs = load_rules(predict_rules, cfg.get());
      hydra_report* rep = nullptr;
      check(hydra_model_predict(model.get(), corpus.get(), rs.get(), cfg.get(), &rep), "predict");
      const ReportPtr owned(rep);
      write_report(owned.get(), predict_outputs);
    } else if (*evaluate) {
      const CorpusPtr tr = load_corpus(eval_train, cfg.get());
      const CorpusPtr te = load_corpus(eval_test, cfg.get());
      const RulesPtr rs = load_rules(eval_rules, cfg.get());
      std::vector<std::string> variants;
      if (eval_all) {
        variants = {"m1", "m2", "m3", "hydra"};
      } else {
        variants = {config_value(cfg.get(), "variant")};
      }
      nlohmann::ordered_json combined = nlohmann::ordered_json::object();
      std::string text;
      for (const std::string& v : variants) {
        check(hydra_config_set(cfg.get(), "variant", v.c_str()), "variant");
        hydra_report* rep = nullptr;
        check(hydra_run_variant(tr.get(), te.get(), rs.get(), cfg.get(), &rep), v);
        const ReportPtr owned(rep);
        char* out = nullptr;
        check(hydra_report_evaluation_json(owned.get(), &out), "evaluate");
        text = take(out);
        if (eval_all) combined[v] = nlohmann::ordered_json::parse(text);
      }
      if (eval_all) text = combined.dump(2);
      write_or_print(text, eval_out);
    } else if (*report) {
      const CorpusPtr tr = load_corpus(report_train, cfg.get());
      const CorpusPtr te = load_corpus(report_test, cfg.get());
      const RulesPtr rs = load_rules(report_rules, cfg.get());
      hydra_report* rep = nullptr;
      check(hydra_run_variant(tr.get(), te.get(), rs.get(), cfg.get(), &rep), "report");
      const ReportPtr owned(rep);
      write_report(owned.get(), report_outputs);
    }
  } catch (const CallFailed& f) {
    return static_cast<int>(f.status);
  }
  return 0;
}
