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

#ifndef HYDRA_REPORT_HPP_
#define HYDRA_REPORT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/metrics.hpp"

namespace hydra {

inline constexpr int kReportSchemaVersion = 1;

struct ReportRow {
  std::string id;
  std::string project;
  std::string bits;             // e.g. "10000"
  int label = 0;                // rule index, 0 = None
  std::optional<int> aligned;   // cluster H_A
  double confidence = 0.0;
  std::size_t cluster = 0;
  std::vector<double> latent;   // HYDRA only
  std::array<double, 2> projection = {0.0, 0.0};

  bool operator==(const ReportRow&) const = default;
};

struct ClusterSummary {
  std::size_t id = 0;
  std::size_t size = 0;          // training members
  int label = 0;
  int heuristic = 0;             // H_A, 0 when none
  std::size_t count = 0;
  double fraction = 0.0;
  std::size_t none_count = 0;    // training members with no bit set
  std::size_t test_members = 0;

  bool operator==(const ClusterSummary&) const = default;
};

struct ReportSummary {
  std::size_t n = 0;
  std::vector<std::size_t> heuristic_counts;  // column sums of the bits
  std::vector<std::size_t> label_counts;      // [None, H1, H2, ...]
  std::size_t matched = 0;                    // rows labeled with a rule
  std::size_t none = 0;                       // rows labeled None
  std::string matched_percent;                // "4.80%"
  std::string none_percent;
  std::vector<ClusterSummary> clusters;
  std::optional<ClusteringEvaluation> test_evaluation;
  std::optional<ClusteringEvaluation> train_evaluation;
  std::vector<std::string> notes;

  bool operator==(const ReportSummary&) const = default;
};

struct ReportMetadata {
  int schema_version = kReportSchemaVersion;
  std::string variant;
  std::uint64_t seed = 0;
  std::uint64_t vae_seed = 0;
  std::uint64_t kmeans_seed = 0;
  std::string config_hash;
  std::string provider_id;  // empty when no embedding provider was used
  std::vector<std::string> rule_names;
  std::size_t representation_dim = 0;
  std::size_t k = 0;
  std::size_t best_epoch = 0;
  std::string train_corpus;
  std::string test_corpus;

  bool operator==(const ReportMetadata&) const = default;
};

struct RiskReport {
  ReportMetadata metadata;
  std::vector<ReportRow> rows;
  ReportSummary summary;

  bool operator==(const RiskReport&) const = default;
};

// m/n as a percentage truncated (not rounded) to two decimals: 788 of 16387
// gives "4.80%". "0.00%" when n is 0.
std::string format_percent(std::size_t m, std::size_t n);
// 100% minus format_percent(m, n), so a matched share and its remainder
// always add up to exactly 100.00%.
std::string format_complement_percent(std::size_t m, std::size_t n);

// Recomputes the count fields of `summary` from the rows.
void summarize_rows(RiskReport& report);

std::string report_to_json(const RiskReport& report);
RiskReport report_from_json(std::string_view json_text);
std::string evaluation_to_json(const RiskReport& report);

// Columns: id, project, bits, label, aligned_heuristic, confidence, cluster,
// x, y, latent (values joined with ';').
std::string report_to_csv(const RiskReport& report);

enum class ReportFormat { kJson, kCsv };

// CSV output also writes `<path>.summary.json` holding metadata and summary.
void emit_report(const RiskReport& report, ReportFormat format, const std::filesystem::path& path);

struct PlotPoint {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  std::string label;
  std::string aligned;
  std::size_t cluster = 0;
};

std::vector<PlotPoint> plot_points(const RiskReport& report);

// Columns: id, x, y, label, aligned_heuristic, cluster. Throws
// kTooFewPoints for fewer than two points.
void emit_projection_plot(const std::vector<PlotPoint>& points, const std::filesystem::path& csv_path);
std::string projection_svg(const std::vector<PlotPoint>& points);

}  // namespace hydra

#endif  // HYDRA_REPORT_HPP_
