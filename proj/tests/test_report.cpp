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
#include "hydra/corpus.hpp"
#include "hydra/csv.hpp"
#include "hydra/error.hpp"
#include "hydra/report.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace {

hydra::RiskReport sample_report() {
  hydra::RiskReport r;
  r.metadata.variant = "hydra";
  r.metadata.seed = 42;
  r.metadata.vae_seed = 42;
  r.metadata.kmeans_seed = 42;
  r.metadata.config_hash = "0123456789abcdef";
  r.metadata.provider_id = "hashed-ngram-v1";
  r.metadata.rule_names = {"a", "b", "c"};
  r.metadata.representation_dim = 2;
  r.metadata.k = 2;
  r.metadata.best_epoch = 17;
  r.metadata.train_corpus = "train";
  r.metadata.test_corpus = "test";
  r.summary.clusters = {{0, 10, 1, 1, 6, 0.6, 3, 0}, {1, 8, 0, 2, 2, 0.25, 5, 0}};
  r.rows = {
      {"f1", "p", "100", 1, 1, 1.0, 0, {0.5, -0.25}, {1.5, 0.0}},
      {"f2", "p", "000", 0, 2, 0.25, 1, {0.125, 3.0}, {-1.5, 0.5}},
      {"f,3", "q", "011", 2, std::nullopt, 1.0, 1, {1e-300, -7.0}, {0.0, -0.5}},
  };
  hydra::ClusteringEvaluation e;
  e.silhouette = 1.0;
  e.chi = hydra::kInfinity;
  e.dbi = 0.0;
  e.n_points = 3;
  e.k = 2;
  r.summary.test_evaluation = e;
  r.summary.notes = {"a note"};
  hydra::summarize_rows(r);
  return r;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("percentages reproduce the published tables") {
  // Matched shares: Chrome 788 and 1126 of 16387, ImageMagick 273 and 378 of 1703.
  CHECK(hydra::format_percent(788, 16387) == "4.80%");
  CHECK(hydra::format_percent(1126, 16387) == "6.87%");
  CHECK(hydra::format_percent(921, 16387) == "5.62%");
  CHECK(hydra::format_percent(273, 1703) == "16.03%");
  CHECK(hydra::format_percent(378, 1703) == "22.19%");
  CHECK(hydra::format_percent(351, 1703) == "20.61%");
  // None shares of the same runs: 15599 of 16387 and 1430 of 1703.
  CHECK(hydra::format_complement_percent(788, 16387) == "95.20%");
  CHECK(hydra::format_complement_percent(273, 1703) == "83.97%");
  CHECK(hydra::format_percent(0, 0) == "0.00%");
  CHECK(hydra::format_percent(5, 5) == "100.00%");
  CHECK(hydra::format_complement_percent(0, 7) == "100.00%");
}

TEST_CASE("summaries count bits, labels and cluster membership") {
  const auto r = sample_report();
  CHECK(r.summary.n == 3);
  CHECK(r.summary.heuristic_counts == std::vector<std::size_t>{1, 1, 1});
  CHECK(r.summary.label_counts == std::vector<std::size_t>{1, 1, 1, 0});
  CHECK(r.summary.matched == 2);
  CHECK(r.summary.none == 1);
  CHECK(r.summary.matched + r.summary.none == r.summary.n);
  CHECK(r.summary.matched_percent == "66.66%");
  CHECK(r.summary.none_percent == "33.34%");
  CHECK(r.summary.clusters[0].test_members == 1);
  CHECK(r.summary.clusters[1].test_members == 2);
}

TEST_CASE("json round-trips losslessly, infinity included") {
  const auto r = sample_report();
  const std::string text = hydra::report_to_json(r);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["summary"]["evaluation"]["test"]["chi"] == "inf");
  CHECK(doc["rows"][1]["label"] == "None");
  CHECK(doc["rows"][1]["aligned_heuristic"] == "H2");
  CHECK(doc["rows"][2]["aligned_heuristic"].is_null());
  const auto back = hydra::report_from_json(text);
  CHECK(back == r);
  CHECK(hydra::report_to_json(back) == text);
}

TEST_CASE("malformed report json is rejected") {
  CHECK_THROWS_AS(hydra::report_from_json("{}"), hydra::Error);
  CHECK_THROWS_AS(hydra::report_from_json("[1,2"), hydra::Error);
}

TEST_CASE("csv rows use the documented column order and a sidecar summary") {
  const auto r = sample_report();
  testutil::TempDir dir;
  const auto path = dir / "report.csv";
  hydra::emit_report(r, hydra::ReportFormat::kCsv, path);
  const std::string text = hydra::read_text_file(path);
  hydra::csv::Reader reader(text);
  std::vector<std::string> row;
  bool bad = false;
  REQUIRE(reader.next(row, bad));
  CHECK(row == std::vector<std::string>{"id", "project", "bits", "label", "aligned_heuristic", "confidence",
                                        "cluster", "x", "y", "latent"});
  REQUIRE(reader.next(row, bad));
  CHECK(row[0] == "f1");
  CHECK(row[3] == "H1");
  CHECK(row[9] == "0.5;-0.25");
  REQUIRE(reader.next(row, bad));
  REQUIRE(reader.next(row, bad));
  CHECK(row[0] == "f,3");
  CHECK(row[4].empty());
  CHECK_FALSE(reader.next(row, bad));
  const auto side = nlohmann::json::parse(hydra::read_text_file(dir / "report.csv.summary.json"));
  CHECK(side["summary"]["matched"]["percent"] == "66.66%");
}

TEST_CASE("projection exports") {
  const auto r = sample_report();
  const auto pts = hydra::plot_points(r);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].label == "None");
  CHECK(pts[1].aligned == "H2");
  testutil::TempDir dir;
  hydra::emit_projection_plot(pts, dir / "p.csv");
  CHECK(hydra::read_text_file(dir / "p.csv").rfind("id,x,y,label,aligned_heuristic,cluster\n", 0) == 0);
  const std::string svg = hydra::projection_svg(pts);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find(">None<") != std::string::npos);
  CHECK_THROWS_AS(hydra::emit_projection_plot({pts[0]}, dir / "q.csv"), hydra::Error);
}

}  // TEST_SUITE
