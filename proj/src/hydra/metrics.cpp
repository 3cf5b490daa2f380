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

#include "hydra/metrics.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "hydra/error.hpp"

namespace hydra {

namespace {

struct Groups {
  std::vector<std::vector<std::size_t>> members;  // by dense cluster index
  std::vector<std::size_t> dense;                 // dense index per point
};

Groups group(const PointSet& points, const std::vector<std::size_t>& assignments) {
  if (points.size() != assignments.size()) {
    fail(ErrorCode::kDimensionMismatch, "one assignment is needed per point");
  }
  check_points(points);
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t a : assignments) ids.emplace(a, 0);
  if (ids.size() < 2) {
    fail(ErrorCode::kSingleCluster, "clustering metrics need at least two clusters");
  }
  std::size_t next = 0;
  for (auto& [id, dense] : ids) dense = next++;
  Groups g;
  g.members.resize(ids.size());
  g.dense.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    g.dense[i] = ids[assignments[i]];
    g.members[g.dense[i]].push_back(i);
  }
  return g;
}

PointSet centroids_of(const PointSet& points, const Groups& g) {
  PointSet c;
  for (const auto& m : g.members) c.push_back(group_mean(points, m));
  return c;
}

}  // namespace

double silhouette(const PointSet& points, const std::vector<std::size_t>& assignments) {
  const Groups g = group(points, assignments);
  const std::size_t k = g.members.size();
  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t own = g.dense[i];
    if (g.members[own].size() == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) sums[g.dense[j]] += distance(points[i], points[j]);
    }
    const double a = sums[own] / static_cast<double>(g.members[own].size() - 1);
    double b = kInfinity;
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(g.members[c].size()));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(points.size());
}

double chi(const PointSet& points, const std::vector<std::size_t>& assignments) {
  const Groups g = group(points, assignments);
  const std::size_t n = points.size();
  const std::size_t k = g.members.size();
  if (n <= k) {
    fail(ErrorCode::kTooFewPoints, "Calinski-Harabasz needs more points than clusters");
  }
  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  const Point overall = group_mean(points, everyone);
  const PointSet cents = centroids_of(points, g);
  double between = 0.0;
  double within = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    between += static_cast<double>(g.members[c].size()) * squared_distance(cents[c], overall);
    for (std::size_t m : g.members[c]) within += squared_distance(points[m], cents[c]);
  }
  if (between == 0.0) return 0.0;
  if (within == 0.0) return kInfinity;
  return (between / within) * static_cast<double>(n - k) / static_cast<double>(k - 1);
}

double dbi(const PointSet& points, const std::vector<std::size_t>& assignments) {
  const Groups g = group(points, assignments);
  const std::size_t k = g.members.size();
  const PointSet cents = centroids_of(points, g);
  std::vector<double> sigma(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t m : g.members[c]) sigma[c] += distance(points[m], cents[c]);
    sigma[c] /= static_cast<double>(g.members[c].size());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double d = distance(cents[i], cents[j]);
      if (d == 0.0) return kInfinity;
      worst = std::max(worst, (sigma[i] + sigma[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

ClusteringEvaluation evaluate(const PointSet& points, const std::vector<std::size_t>& assignments) {
  ClusteringEvaluation e;
  e.silhouette = silhouette(points, assignments);
  e.chi = chi(points, assignments);
  e.dbi = dbi(points, assignments);
  e.n_points = points.size();
  e.k = group(points, assignments).members.size();
  return e;
}

Projection project_2d(const PointSet& points) {
  if (points.size() < 2) fail(ErrorCode::kTooFewPoints, "projection needs at least two points");
  const std::size_t d = check_points(points);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  x.rowwise() -= x.colwise().mean();

  Projection out;
  out.coords.assign(points.size(), {0.0, 0.0});
  if (d == 0 || x.cwiseAbs().maxCoeff() == 0.0) {
    out.degenerate = true;
    return out;
  }
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kInternal, "eigendecomposition failed");
  // Eigenvalues come back ascending.
  const Eigen::Index dims = std::min<Eigen::Index>(2, static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < dims; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(static_cast<Eigen::Index>(d) - 1 - c);
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (std::abs(v(j)) > 1e-12) {
        if (v(j) < 0.0) v = -v;
        break;
      }
    }
    const Eigen::VectorXd scores = x * v;
    for (Eigen::Index i = 0; i < n; ++i) out.coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = scores(i);
  }
  return out;
}

}  // namespace hydra
