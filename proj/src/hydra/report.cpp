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

#include "hydra/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "hydra/config.hpp"
#include "hydra/corpus.hpp"
#include "hydra/csv.hpp"
#include "hydra/error.hpp"
#include "hydra/heuristics.hpp"

namespace hydra {

namespace {

using Json = nlohmann::ordered_json;

Json metric_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double metric_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    fail(ErrorCode::kBadFormat, "bad metric value '" + s + "'");
  }
  return j.get<double>();
}

Json label_json(int label) { return heuristic_label(label); }

Json aligned_json(const std::optional<int>& a) {
  return a ? Json(heuristic_label(*a)) : Json(nullptr);
}

std::optional<int> aligned_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_heuristic_label(j.get<std::string>());
}

Json evaluation_json(const std::optional<ClusteringEvaluation>& e) {
  if (!e) return nullptr;
  return Json{{"silhouette", metric_value(e->silhouette)},
              {"chi", metric_value(e->chi)},
              {"dbi", metric_value(e->dbi)},
              {"n_points", e->n_points},
              {"k", e->k}};
}

std::optional<ClusteringEvaluation> evaluation_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  ClusteringEvaluation e;
  e.silhouette = metric_from(j.at("silhouette"));
  e.chi = metric_from(j.at("chi"));
  e.dbi = metric_from(j.at("dbi"));
  e.n_points = j.at("n_points").get<std::size_t>();
  e.k = j.at("k").get<std::size_t>();
  return e;
}

Json metadata_json(const ReportMetadata& m) {
  return Json{{"schema_version", m.schema_version},
              {"variant", m.variant},
              {"seeds", {{"seed", m.seed}, {"vae", m.vae_seed}, {"kmeans", m.kmeans_seed}}},
              {"config_hash", m.config_hash},
              {"provider_id", m.provider_id.empty() ? Json(nullptr) : Json(m.provider_id)},
              {"rule_names", m.rule_names},
              {"representation_dim", m.representation_dim},
              {"k", m.k},
              {"best_epoch", m.best_epoch},
              {"train_corpus", m.train_corpus},
              {"test_corpus", m.test_corpus}};
}

ReportMetadata metadata_from(const Json& j) {
  ReportMetadata m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kReportSchemaVersion) {
    fail(ErrorCode::kBadFormat, "unsupported report schema_version " + std::to_string(m.schema_version));
  }
  m.variant = j.at("variant").get<std::string>();
  m.seed = j.at("seeds").at("seed").get<std::uint64_t>();
  m.vae_seed = j.at("seeds").at("vae").get<std::uint64_t>();
  m.kmeans_seed = j.at("seeds").at("kmeans").get<std::uint64_t>();
  m.config_hash = j.at("config_hash").get<std::string>();
  if (!j.at("provider_id").is_null()) m.provider_id = j.at("provider_id").get<std::string>();
  m.rule_names = j.at("rule_names").get<std::vector<std::string>>();
  m.representation_dim = j.at("representation_dim").get<std::size_t>();
  m.k = j.at("k").get<std::size_t>();
  m.best_epoch = j.at("best_epoch").get<std::size_t>();
  m.train_corpus = j.at("train_corpus").get<std::string>();
  m.test_corpus = j.at("test_corpus").get<std::string>();
  return m;
}

Json summary_json(const ReportSummary& s) {
  Json heur = Json::object();
  for (std::size_t j = 0; j < s.heuristic_counts.size(); ++j) {
    heur[heuristic_label(static_cast<int>(j) + 1)] = s.heuristic_counts[j];
  }
  Json labels = Json::object();
  for (std::size_t j = 0; j < s.label_counts.size(); ++j) {
    labels[heuristic_label(static_cast<int>(j))] = s.label_counts[j];
  }
  Json clusters = Json::array();
  for (const ClusterSummary& c : s.clusters) {
    clusters.push_back({{"id", c.id},
                        {"size", c.size},
                        {"label", label_json(c.label)},
                        {"dominant_heuristic", c.heuristic ? Json(heuristic_label(c.heuristic)) : Json(nullptr)},
                        {"dominant_count", c.count},
                        {"dominant_fraction", c.fraction},
                        {"none_count", c.none_count},
                        {"test_members", c.test_members}});
  }
  return Json{{"n", s.n},
              {"heuristic_counts", std::move(heur)},
              {"label_counts", std::move(labels)},
              {"matched", {{"count", s.matched}, {"percent", s.matched_percent}}},
              {"none", {{"count", s.none}, {"percent", s.none_percent}}},
              {"clusters", std::move(clusters)},
              {"evaluation", {{"test", evaluation_json(s.test_evaluation)},
                              {"train", evaluation_json(s.train_evaluation)}}},
              {"notes", s.notes}};
}

ReportSummary summary_from(const Json& j) {
  ReportSummary s;
  s.n = j.at("n").get<std::size_t>();
  for (const auto& [key, value] : j.at("heuristic_counts").items()) {
    const auto idx = static_cast<std::size_t>(parse_heuristic_label(key));
    if (idx == 0) fail(ErrorCode::kBadFormat, "heuristic_counts cannot hold None");
    if (s.heuristic_counts.size() < idx) s.heuristic_counts.resize(idx, 0);
    s.heuristic_counts[idx - 1] = value.get<std::size_t>();
  }
  for (const auto& [key, value] : j.at("label_counts").items()) {
    const auto idx = static_cast<std::size_t>(parse_heuristic_label(key));
    if (s.label_counts.size() <= idx) s.label_counts.resize(idx + 1, 0);
    s.label_counts[idx] = value.get<std::size_t>();
  }
  s.matched = j.at("matched").at("count").get<std::size_t>();
  s.matched_percent = j.at("matched").at("percent").get<std::string>();
  s.none = j.at("none").at("count").get<std::size_t>();
  s.none_percent = j.at("none").at("percent").get<std::string>();
  for (const auto& c : j.at("clusters")) {
    ClusterSummary cs;
    cs.id = c.at("id").get<std::size_t>();
    cs.size = c.at("size").get<std::size_t>();
    cs.label = parse_heuristic_label(c.at("label").get<std::string>());
    cs.heuristic = c.at("dominant_heuristic").is_null()
                       ? 0
                       : parse_heuristic_label(c.at("dominant_heuristic").get<std::string>());
    cs.count = c.at("dominant_count").get<std::size_t>();
    cs.fraction = c.at("dominant_fraction").get<double>();
    cs.none_count = c.at("none_count").get<std::size_t>();
    cs.test_members = c.at("test_members").get<std::size_t>();
    s.clusters.push_back(cs);
  }
  s.test_evaluation = evaluation_from(j.at("evaluation").at("test"));
  s.train_evaluation = evaluation_from(j.at("evaluation").at("train"));
  s.notes = j.at("notes").get<std::vector<std::string>>();
  return s;
}

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

}  // namespace

std::string format_basis_points(unsigned long long basis) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%llu.%02llu%%", basis / 100, basis % 100);
  return buf;
}

std::string format_percent(std::size_t m, std::size_t n) {
  if (n == 0) return "0.00%";
  // Integer arithmetic keeps the truncation exact.
  return format_basis_points(static_cast<unsigned long long>(m) * 10000ULL / n);
}

std::string format_complement_percent(std::size_t m, std::size_t n) {
  if (n == 0) return "0.00%";
  return format_basis_points(10000ULL - static_cast<unsigned long long>(m) * 10000ULL / n);
}

void summarize_rows(RiskReport& report) {
  ReportSummary& s = report.summary;
  const std::size_t width = report.metadata.rule_names.size();
  s.n = report.rows.size();
  s.heuristic_counts.assign(width, 0);
  s.label_counts.assign(width + 1, 0);
  s.matched = 0;
  s.none = 0;
  for (auto& c : s.clusters) c.test_members = 0;
  for (const ReportRow& r : report.rows) {
    if (r.bits.size() != width) fail(ErrorCode::kDimensionMismatch, "row bits do not match the rule set");
    for (std::size_t j = 0; j < width; ++j) s.heuristic_counts[j] += r.bits[j] == '1' ? 1 : 0;
    if (r.label < 0 || static_cast<std::size_t>(r.label) > width) {
      fail(ErrorCode::kInternal, "row label outside the rule set");
    }
    ++s.label_counts[static_cast<std::size_t>(r.label)];
    (r.label == 0 ? s.none : s.matched) += 1;
    if (r.cluster < s.clusters.size()) ++s.clusters[r.cluster].test_members;
  }
  s.matched_percent = format_percent(s.matched, s.n);
  s.none_percent = format_complement_percent(s.matched, s.n);
}

std::string report_to_json(const RiskReport& report) {
  Json rows = Json::array();
  for (const ReportRow& r : report.rows) {
    rows.push_back({{"id", r.id},
                    {"project", r.project},
                    {"bits", r.bits},
                    {"label", label_json(r.label)},
                    {"aligned_heuristic", aligned_json(r.aligned)},
                    {"confidence", r.confidence},
                    {"cluster", r.cluster},
                    {"latent", r.latent},
                    {"projection", {r.projection[0], r.projection[1]}}});
  }
  Json doc{{"schema_version", kReportSchemaVersion},
           {"metadata", metadata_json(report.metadata)},
           {"summary", summary_json(report.summary)},
           {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

RiskReport report_from_json(std::string_view json_text) {
  RiskReport r;
  try {
    const Json doc = Json::parse(json_text);
    r.metadata = metadata_from(doc.at("metadata"));
    r.summary = summary_from(doc.at("summary"));
    for (const auto& jr : doc.at("rows")) {
      ReportRow row;
      row.id = jr.at("id").get<std::string>();
      row.project = jr.at("project").get<std::string>();
      row.bits = jr.at("bits").get<std::string>();
      row.label = parse_heuristic_label(jr.at("label").get<std::string>());
      row.aligned = aligned_from(jr.at("aligned_heuristic"));
      row.confidence = jr.at("confidence").get<double>();
      row.cluster = jr.at("cluster").get<std::size_t>();
      row.latent = jr.at("latent").get<std::vector<double>>();
      row.projection = {jr.at("projection").at(0).get<double>(), jr.at("projection").at(1).get<double>()};
      r.rows.push_back(std::move(row));
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kBadFormat, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string evaluation_to_json(const RiskReport& report) {
  Json doc{{"variant", report.metadata.variant},
           {"k", report.metadata.k},
           {"test", evaluation_json(report.summary.test_evaluation)},
           {"train", evaluation_json(report.summary.train_evaluation)},
           {"notes", report.summary.notes}};
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const RiskReport& report) {
  std::string out = csv::join_row({"id", "project", "bits", "label", "aligned_heuristic", "confidence",
                                   "cluster", "x", "y", "latent"}) +
                    "\n";
  for (const ReportRow& r : report.rows) {
    std::string latent;
    for (std::size_t i = 0; i < r.latent.size(); ++i) {
      if (i) latent += ";";
      latent += format_double(r.latent[i]);
    }
    out += csv::join_row({r.id, r.project, r.bits, heuristic_label(r.label),
                          r.aligned ? heuristic_label(*r.aligned) : std::string(),
                          format_double(r.confidence), std::to_string(r.cluster),
                          csv_number(r.projection[0]), csv_number(r.projection[1]), latent}) +
           "\n";
  }
  return out;
}

void emit_report(const RiskReport& report, ReportFormat format, const std::filesystem::path& path) {
  if (format == ReportFormat::kJson) {
    write_text_file(path, report_to_json(report));
    return;
  }
  write_text_file(path, report_to_csv(report));
  const Json sidecar{{"schema_version", kReportSchemaVersion},
                     {"metadata", metadata_json(report.metadata)},
                     {"summary", summary_json(report.summary)}};
  std::filesystem::path side = path;
  side += ".summary.json";
  write_text_file(side, sidecar.dump(2) + "\n");
}

std::vector<PlotPoint> plot_points(const RiskReport& report) {
  std::vector<PlotPoint> out;
  for (const ReportRow& r : report.rows) {
    out.push_back(PlotPoint{r.id, r.projection[0], r.projection[1], heuristic_label(r.label),
                            r.aligned ? heuristic_label(*r.aligned) : std::string(), r.cluster});
  }
  return out;
}

void emit_projection_plot(const std::vector<PlotPoint>& points, const std::filesystem::path& csv_path) {
  if (points.size() < 2) fail(ErrorCode::kTooFewPoints, "a projection plot needs at least two points");
  std::string out = csv::join_row({"id", "x", "y", "label", "aligned_heuristic", "cluster"}) + "\n";
  for (const PlotPoint& p : points) {
    out += csv::join_row({p.id, csv_number(p.x), csv_number(p.y), p.label, p.aligned,
                          std::to_string(p.cluster)}) +
           "\n";
  }
  write_text_file(csv_path, out);
}

std::string projection_svg(const std::vector<PlotPoint>& points) {
  static constexpr std::array<std::string_view, 8> kPalette = {
      "#7f7f7f", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
  constexpr double kSize = 480.0;
  constexpr double kMargin = 30.0;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == 0 || points[i].x < xmin) xmin = points[i].x;
    if (i == 0 || points[i].x > xmax) xmax = points[i].x;
    if (i == 0 || points[i].y < ymin) ymin = points[i].y;
    if (i == 0 || points[i].y > ymax) ymax = points[i].y;
  }
  const double xspan = xmax > xmin ? xmax - xmin : 1.0;
  const double yspan = ymax > ymin ? ymax - ymin : 1.0;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n",
                static_cast<int>(kSize + 140), static_cast<int>(kSize));
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::map<std::string, std::size_t> seen;
  for (const PlotPoint& p : points) {
    const int idx = p.label == "None" ? 0 : parse_heuristic_label(p.label);
    const std::string_view color = kPalette[static_cast<std::size_t>(idx) % kPalette.size()];
    seen.emplace(p.label, static_cast<std::size_t>(idx));
    const double cx = kMargin + (p.x - xmin) / xspan * (kSize - 2 * kMargin);
    const double cy = kSize - kMargin - (p.y - ymin) / yspan * (kSize - 2 * kMargin);
    const char* shape = p.cluster % 2 == 0 ? "circle" : "rect";
    if (shape[0] == 'c') {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%.*s\"/>\n", cx,
                    cy, static_cast<int>(color.size()), color.data());
    } else {
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"7\" height=\"7\" fill=\"%.*s\"/>\n",
                    cx - 3.5, cy - 3.5, static_cast<int>(color.size()), color.data());
    }
    out += buf;
  }
  double ly = kMargin;
  for (const auto& [label, idx] : seen) {
    const std::string_view color = kPalette[idx % kPalette.size()];
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.0f\" cy=\"%.0f\" r=\"5\" fill=\"%.*s\"/>"
                  "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">%s</text>\n",
                  kSize + 20, ly, static_cast<int>(color.size()), color.data(), kSize + 32, ly + 4,
                  label.c_str());
    out += buf;
    ly += 18;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hydra
