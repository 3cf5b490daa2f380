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

#ifndef HYDRA_METRICS_HPP_
#define HYDRA_METRICS_HPP_

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "hydra/geometry.hpp"

namespace hydra {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Cluster ids in `assignments` may be any values; k is the number of
// distinct ids. All three throw kSingleCluster when k < 2.

// Mean silhouette. s(i) is 0 for members of singleton clusters and when
// a(i) = b(i) = 0.
double silhouette(const PointSet& points, const std::vector<std::size_t>& assignments);

// Calinski-Harabasz. +inf when within-cluster dispersion is zero and
// between-cluster dispersion is not; 0 when the latter is zero. Throws
// kTooFewPoints when n <= k.
double chi(const PointSet& points, const std::vector<std::size_t>& assignments);

// Davies-Bouldin with sigma = mean distance to the centroid. +inf when two
// centroids coincide.
double dbi(const PointSet& points, const std::vector<std::size_t>& assignments);

struct ClusteringEvaluation {
  double silhouette = 0.0;
  double chi = 0.0;
  double dbi = 0.0;
  std::size_t n_points = 0;
  std::size_t k = 0;

  bool operator==(const ClusteringEvaluation&) const = default;
};

ClusteringEvaluation evaluate(const PointSet& points, const std::vector<std::size_t>& assignments);

struct Projection {
  std::vector<std::array<double, 2>> coords;
  // Set when the points have no variance; coords are then all zero.
  bool degenerate = false;
};

// Scores on the top two principal components of the centered data. Each
// component is oriented so that its first nonzero loading is positive.
Projection project_2d(const PointSet& points);

}  // namespace hydra

#endif  // HYDRA_METRICS_HPP_
