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


// Brute-force clustering metrics written straight from their textbook
// definitions. They share no code with the library so they can serve as
// independent references.

#ifndef HYDRA_TESTS_ORACLES_HPP_
#define HYDRA_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

namespace oracle {

using Pt = std::vector<double>;

inline double dist(const Pt& a, const Pt& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline std::map<std::size_t, std::vector<std::size_t>> groups(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::vector<std::size_t>> g;
  for (std::size_t i = 0; i < labels.size(); ++i) g[labels[i]].push_back(i);
  return g;
}

inline Pt mean_of(const std::vector<Pt>& x, const std::vector<std::size_t>& idx) {
  Pt m(x[0].size(), 0.0);
  for (std::size_t i : idx)
    for (std::size_t d = 0; d < m.size(); ++d) m[d] += x[i][d];
  for (double& v : m) v /= static_cast<double>(idx.size());
  return m;
}

// Rousseeuw (1987): s(i) = (b - a) / max(a, b), with s(i) = 0 for singletons.
inline double silhouette(const std::vector<Pt>& x, const std::vector<std::size_t>& labels) {
  const auto g = groups(labels);
  double total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& own = g.at(labels[i]);
    if (own.size() == 1) continue;
    double a = 0;
    for (std::size_t j : own)
      if (j != i) a += dist(x[i], x[j]);
    a /= static_cast<double>(own.size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [c, members] : g) {
      if (c == labels[i]) continue;
      double s = 0;
      for (std::size_t j : members) s += dist(x[i], x[j]);
      b = std::min(b, s / static_cast<double>(members.size()));
    }
    const double den = std::max(a, b);
    if (den > 0) total += (b - a) / den;
  }
  return total / static_cast<double>(x.size());
}

// Calinski-Harabasz: [tr(B) / (k - 1)] / [tr(W) / (n - k)].
inline double chi(const std::vector<Pt>& x, const std::vector<std::size_t>& labels) {
  const auto g = groups(labels);
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) all[i] = i;
  const Pt overall = mean_of(x, all);
  double between = 0, within = 0;
  for (const auto& [c, members] : g) {
    const Pt m = mean_of(x, members);
    const double d = dist(m, overall);
    between += static_cast<double>(members.size()) * d * d;
    for (std::size_t i : members) within += dist(x[i], m) * dist(x[i], m);
  }
  const double n = static_cast<double>(x.size());
  const double k = static_cast<double>(g.size());
  if (between == 0) return 0.0;
  if (within == 0) return std::numeric_limits<double>::infinity();
  return (between / (k - 1)) / (within / (n - k));
}

// Davies-Bouldin: mean over clusters of max_j (S_i + S_j) / M_ij, where S is
// the mean distance of members to their centroid.
inline double dbi(const std::vector<Pt>& x, const std::vector<std::size_t>& labels) {
  const auto g = groups(labels);
  std::vector<Pt> centre;
  std::vector<double> scatter;
  for (const auto& [c, members] : g) {
    centre.push_back(mean_of(x, members));
    double s = 0;
    for (std::size_t i : members) s += dist(x[i], centre.back());
    scatter.push_back(s / static_cast<double>(members.size()));
  }
  double total = 0;
  for (std::size_t i = 0; i < centre.size(); ++i) {
    double worst = 0;
    for (std::size_t j = 0; j < centre.size(); ++j) {
      if (j == i) continue;
      const double m = dist(centre[i], centre[j]);
      if (m == 0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, (scatter[i] + scatter[j]) / m);
    }
    total += worst;
  }
  return total / static_cast<double>(centre.size());
}

// |a - b| <= tol * max(1, |a|, |b|), with equal infinities accepted.
inline bool close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace oracle

#endif  // HYDRA_TESTS_ORACLES_HPP_
