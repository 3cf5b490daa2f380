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

#include "hydra/cluster.hpp"

#include <limits>
#include <string>

#include "hydra/error.hpp"
#include "hydra/rng.hpp"

namespace hydra {

namespace {

std::vector<std::size_t> assign_all(const PointSet& points, const PointSet& centroids,
                                    double& inertia) {
  std::vector<std::size_t> out(points.size());
  inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best) {
        best = d;
        out[i] = c;
      }
    }
    inertia += best;
  }
  return out;
}

PointSet kmeans_plus_plus(const PointSet& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<bool> chosen(n, false);
  PointSet centers;
  std::size_t first = rng.below(n);
  centers.push_back(points[first]);
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);
  while (centers.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
  }
  return centers;
}

}  // namespace

ClusterModel kmeans_fit(const PointSet& points, std::size_t k, std::uint64_t seed,
                        std::size_t max_iter, double tol) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (points.size() < k) {
    fail(ErrorCode::kTooFewPoints, "k-means with k=" + std::to_string(k) + " needs at least " +
                                       std::to_string(k) + " points, got " +
                                       std::to_string(points.size()));
  }
  check_points(points);

  ClusterModel model;
  model.k = k;
  model.seed = seed;
  Rng rng(seed);
  model.centroids = kmeans_plus_plus(points, k, rng);

  double inertia = 0.0;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    model.assignments = assign_all(points, model.centroids, inertia);
    if (!model.inertia_history.empty() &&
        inertia > model.inertia_history.back() * (1.0 + 1e-12) + 1e-300) {
      fail(ErrorCode::kInternal, "k-means inertia increased between Lloyd steps");
    }
    model.inertia_history.push_back(inertia);
    model.iterations = iter + 1;

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < points.size(); ++i) members[model.assignments[i]].push_back(i);
    std::vector<bool> taken(points.size(), false);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      Point next;
      if (members[c].empty()) {
        // Re-seed at the point farthest from its current centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double d = squared_distance(points[i], model.centroids[model.assignments[i]]);
          if (!taken[i] && d > far_d) {
            far_d = d;
            far = i;
          }
        }
        taken[far] = true;
        next = points[far];
      } else {
        next = group_mean(points, members[c]);
      }
      shift = std::max(shift, distance(next, model.centroids[c]));
      model.centroids[c] = std::move(next);
    }
    if (shift < tol) break;
  }
  model.assignments = assign_all(points, model.centroids, inertia);
  model.inertia = inertia;
  return model;
}

std::size_t nearest_centroid(const ClusterModel& model, const Point& p) {
  if (model.centroids.empty()) fail(ErrorCode::kInvalidArgument, "cluster model has no centroids");
  if (p.size() != model.centroids.front().size()) {
    fail(ErrorCode::kDimensionMismatch, "point width " + std::to_string(p.size()) +
                                            " does not match centroid width " +
                                            std::to_string(model.centroids.front().size()));
  }
  std::size_t best_c = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    const double d = squared_distance(p, model.centroids[c]);
    if (d < best) {
      best = d;
      best_c = c;
    }
  }
  return best_c;
}

void label_clusters(ClusterModel& model, const PointSet& points,
                    const std::vector<HeuristicVector>& heuristics, double match_threshold) {
  if (points.size() != heuristics.size()) {
    fail(ErrorCode::kDimensionMismatch, "one heuristic vector is needed per training point");
  }
  if (!(match_threshold >= 0.0 && match_threshold <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "match_threshold must lie in [0, 1]");
  }
  const std::size_t width = heuristics.empty() ? 0 : heuristics.front().bits.size();
  std::vector<ClusterAlignment> align(model.k);
  for (auto& a : align) a.rule_counts.assign(width, 0);
  model.assignments.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t c = nearest_centroid(model, points[i]);
    model.assignments[i] = c;
    const HeuristicVector& h = heuristics[i];
    if (h.bits.size() != width) fail(ErrorCode::kDimensionMismatch, "heuristic vectors differ in length");
    ClusterAlignment& a = align[c];
    ++a.size;
    if (h.any()) ++a.matched;
    for (std::size_t j = 0; j < width; ++j) a.rule_counts[j] += h.bits[j] ? 1 : 0;
  }
  model.labels.assign(model.k, 0);
  for (std::size_t c = 0; c < model.k; ++c) {
    ClusterAlignment& a = align[c];
    if (a.size == 0) fail(ErrorCode::kEmptyCluster, "cluster " + std::to_string(c) + " has no members");
    for (std::size_t j = 0; j < width; ++j) {
      if (a.rule_counts[j] > a.count) {
        a.count = a.rule_counts[j];
        a.heuristic = static_cast<int>(j) + 1;
      }
    }
    a.fraction = static_cast<double>(a.count) / static_cast<double>(a.size);
    const double matched = static_cast<double>(a.matched) / static_cast<double>(a.size);
    if (a.heuristic != 0 && matched >= match_threshold) model.labels[c] = a.heuristic;
  }
  model.alignment = std::move(align);
  model.match_threshold = match_threshold;
}

RiskLabel predict_label(const ClusterModel& model, const Point& p, const HeuristicVector* h_test) {
  if (!model.labeled()) fail(ErrorCode::kUnlabeledModel, "cluster model has no labels; run label_clusters first");
  RiskLabel r;
  r.cluster = nearest_centroid(model, p);
  const ClusterAlignment& a = model.alignment[r.cluster];
  if (a.heuristic != 0) r.aligned = a.heuristic;
  if (h_test != nullptr && h_test->any()) {
    r.label = h_test->lowest_set();
    r.confidence = 1.0;
  } else {
    r.label = model.labels[r.cluster];
    r.confidence = a.fraction;
  }
  return r;
}

}  // namespace hydra
