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

#ifndef HYDRA_GEOMETRY_HPP_
#define HYDRA_GEOMETRY_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hydra/error.hpp"

namespace hydra {

using Point = std::vector<double>;
using PointSet = std::vector<Point>;

inline double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

// Throws kDimensionMismatch unless every point has the same width, and
// kInvalidArgument on non-finite coordinates. Returns the width.
inline std::size_t check_points(const PointSet& points) {
  if (points.empty()) return 0;
  const std::size_t d = points.front().size();
  for (const Point& p : points) {
    if (p.size() != d) fail(ErrorCode::kDimensionMismatch, "points differ in dimension");
    for (double v : p) {
      if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "non-finite coordinate");
    }
  }
  return d;
}

// Mean of the selected points, accumulated as offsets from the first member
// so that a group of identical points has exactly that point as its mean.
inline Point group_mean(const PointSet& points, const std::vector<std::size_t>& members) {
  if (members.empty()) return {};
  const Point& anchor = points[members.front()];
  Point offset(anchor.size(), 0.0);
  for (std::size_t m : members) {
    for (std::size_t j = 0; j < anchor.size(); ++j) offset[j] += points[m][j] - anchor[j];
  }
  Point mean(anchor.size());
  const double n = static_cast<double>(members.size());
  for (std::size_t j = 0; j < anchor.size(); ++j) mean[j] = anchor[j] + offset[j] / n;
  return mean;
}

}  // namespace hydra

#endif  // HYDRA_GEOMETRY_HPP_
