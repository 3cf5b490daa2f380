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

#ifndef HYDRA_CLUSTER_HPP_
#define HYDRA_CLUSTER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hydra/geometry.hpp"
#include "hydra/heuristics.hpp"

namespace hydra {

// Heuristic prevalence inside one cluster. `heuristic` is the dominant rule
// index H_A (0 when no member matched anything).
struct ClusterAlignment {
  int heuristic = 0;
  std::size_t count = 0;     // members whose bit for H_A is set
  double fraction = 0.0;     // count / size
  std::size_t size = 0;
  std::size_t matched = 0;   // members with any bit set
  std::vector<std::size_t> rule_counts;

  bool operator==(const ClusterAlignment&) const = default;
};

struct ClusterModel {
  std::size_t k = 0;
  PointSet centroids;
  std::uint64_t seed = 0;
  double inertia = 0.0;
  std::size_t iterations = 0;
  // Training-point assignments and the inertia after every Lloyd step.
  std::vector<std::size_t> assignments;
  std::vector<double> inertia_history;

  // Filled by label_clusters. Labels are rule indices, 0 meaning None.
  std::vector<int> labels;
  std::vector<ClusterAlignment> alignment;
  double match_threshold = 0.5;

  bool labeled() const { return labels.size() == k && alignment.size() == k && k > 0; }
};

// k-means++ seeding followed by Lloyd iterations. Ties between equidistant
// centroids go to the lower index. Throws kTooFewPoints (n < k),
// kDimensionMismatch and kInvalidArgument (k == 0).
ClusterModel kmeans_fit(const PointSet& points, std::size_t k, std::uint64_t seed,
                        std::size_t max_iter = 300, double tol = 1e-6);

std::size_t nearest_centroid(const ClusterModel& model, const Point& p);

// Assigns every training point and derives per-cluster labels: H_A is the
// rule matched by the most members (lowest index on ties); the label is H_A
// when at least `match_threshold` of the members match some rule, else None.
void label_clusters(ClusterModel& model, const PointSet& points,
                    const std::vector<HeuristicVector>& heuristics, double match_threshold = 0.5);

struct RiskLabel {
  int label = 0;                    // rule index; 0 = None
  std::optional<int> aligned;       // cluster H_A, if the cluster has one
  double confidence = 0.0;
  std::size_t cluster = 0;

  bool operator==(const RiskLabel&) const = default;
};

// Nearest-centroid lookup. A nonzero `h_test` overrides the cluster label
// with its lowest set rule at confidence 1. Throws kUnlabeledModel.
RiskLabel predict_label(const ClusterModel& model, const Point& p,
                        const HeuristicVector* h_test = nullptr);

}  // namespace hydra

#endif  // HYDRA_CLUSTER_HPP_
