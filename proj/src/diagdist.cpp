/*
 * Copyright 2026 The GALE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gale/diagdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gale/error.hpp"

namespace gale::diagdist {

namespace {

double LInf(const DiagramPoint& p, const DiagramPoint& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

double ToDiagonal(const DiagramPoint& p) { return 0.5 * p.persistence(); }

// Hopcroft-Karp on an explicit bipartite graph with equal side sizes.
class Matching {
 public:
  explicit Matching(std::size_t n) : adj_(n), match_l_(n), match_r_(n), dist_(n) {}

  void AddEdge(int l, int r) { adj_[static_cast<std::size_t>(l)].push_back(r); }

  bool Perfect() {
    std::fill(match_l_.begin(), match_l_.end(), -1);
    std::fill(match_r_.begin(), match_r_.end(), -1);
    std::size_t size = 0;
    while (Bfs()) {
      for (std::size_t l = 0; l < adj_.size(); ++l) {
        if (match_l_[l] < 0 && Dfs(static_cast<int>(l))) ++size;
      }
    }
    return size == adj_.size();
  }

 private:
  bool Bfs() {
    std::queue<int> q;
    bool found = false;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      if (match_l_[l] < 0) {
        dist_[l] = 0;
        q.push(static_cast<int>(l));
      } else {
        dist_[l] = -1;
      }
    }
    while (!q.empty()) {
      const int l = q.front();
      q.pop();
      for (int r : adj_[static_cast<std::size_t>(l)]) {
        const int next = match_r_[static_cast<std::size_t>(r)];
        if (next < 0) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(next)] < 0) {
          dist_[static_cast<std::size_t>(next)] = dist_[static_cast<std::size_t>(l)] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool Dfs(int l) {
    for (int r : adj_[static_cast<std::size_t>(l)]) {
      const int next = match_r_[static_cast<std::size_t>(r)];
      if (next < 0 || (dist_[static_cast<std::size_t>(next)] == dist_[static_cast<std::size_t>(l)] + 1 && Dfs(next))) {
        match_l_[static_cast<std::size_t>(l)] = r;
        match_r_[static_cast<std::size_t>(r)] = l;
        return true;
      }
    }
    dist_[static_cast<std::size_t>(l)] = -1;
    return false;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> match_l_;
  std::vector<int> match_r_;
  std::vector<int> dist_;
};

// Left side: points of a, then diagonal copies of b. Right side: points of b,
// then diagonal copies of a.
bool Feasible(const PersistenceDiagram& a, const PersistenceDiagram& b, double t) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  Matching mt(static_cast<std::size_t>(n + m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (LInf(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]) <= t) mt.AddEdge(i, j);
    }
    if (ToDiagonal(a[static_cast<std::size_t>(i)]) <= t) mt.AddEdge(i, m + i);
  }
  for (int j = 0; j < m; ++j) {
    if (ToDiagonal(b[static_cast<std::size_t>(j)]) <= t) mt.AddEdge(n + j, j);
    for (int i = 0; i < n; ++i) mt.AddEdge(n + j, m + i);
  }
  return mt.Perfect();
}

PersistenceDiagram OfClass(const PersistenceDiagram& d, PointClass c) {
  PersistenceDiagram out;
  for (const auto& p : d) {
    if (p.cls == c) out.push_back(p);
  }
  return out;
}

double Distance(const PersistenceDiagram& a, const PersistenceDiagram& b, bool per_class) {
  return per_class ? BottleneckPerClass(a, b) : Bottleneck(a, b);
}

void CheckLabels(const std::vector<std::string>& labels,
                 const std::vector<PersistenceDiagram>& diagrams) {
  if (diagrams.size() < 2) throw ShapeError("pairwise matrix needs at least two diagrams");
  if (labels.size() != diagrams.size()) throw ShapeError("one label per diagram required");
}

}  // namespace

double Bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::vector<double> candidates{0.0};
  candidates.reserve(a.size() * b.size() + a.size() + b.size() + 1);
  for (const auto& p : a) candidates.push_back(ToDiagonal(p));
  for (const auto& q : b) candidates.push_back(ToDiagonal(q));
  for (const auto& p : a) {
    for (const auto& q : b) candidates.push_back(LInf(p, q));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Matching every point to the diagonal is feasible at the largest diagonal
  // distance, so the search always terminates on a candidate.
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (Feasible(a, b, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

double BottleneckPerClass(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  double d = 0.0;
  for (PointClass c : {PointClass::kOrd0, PointClass::kRel1, PointClass::kExt0, PointClass::kExt1}) {
    d = std::max(d, Bottleneck(OfClass(a, c), OfClass(b, c)));
  }
  return d;
}

DistanceMatrix PairwiseMatrix(const std::vector<std::string>& labels,
                              const std::vector<PersistenceDiagram>& diagrams,
                              const PairwiseOptions& options) {
  CheckLabels(labels, diagrams);
  const int n = static_cast<int>(diagrams.size());
  DistanceMatrix m{labels, Matrix::Zero(n, n)};
  const int pairs = n * (n - 1) / 2;

#pragma omp parallel for schedule(dynamic) num_threads(options.jobs) if (options.jobs > 1)
  for (int k = 0; k < pairs; ++k) {
    // Unrank k into (i, j) with i < j.
    int i = 0;
    int rem = k;
    while (rem >= n - 1 - i) {
      rem -= n - 1 - i;
      ++i;
    }
    const int j = i + 1 + rem;
    const double d = Distance(diagrams[static_cast<std::size_t>(i)],
                              diagrams[static_cast<std::size_t>(j)], options.per_class);
    m.values(i, j) = d;
    m.values(j, i) = d;
  }
  return m;
}

std::vector<double> RowSums(const DistanceMatrix& m) {
  std::vector<double> sums(m.size(), 0.0);
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) sums[static_cast<std::size_t>(i)] += m.values(i, j);
  }
  return sums;
}

DistanceMatrix MeanMatrices(const std::vector<DistanceMatrix>& ms) {
  if (ms.empty()) throw ShapeError("mean of zero matrices");
  DistanceMatrix mean = ms.front();
  for (std::size_t k = 1; k < ms.size(); ++k) {
    if (ms[k].labels != mean.labels) throw AlignmentError("matrices have different labels");
    mean.values += ms[k].values;
  }
  mean.values /= static_cast<double>(ms.size());
  return mean;
}

namespace reference {

DistanceMatrix PairwiseMatrix(const std::vector<std::string>& labels,
                              const std::vector<PersistenceDiagram>& diagrams,
                              bool per_class) {
  CheckLabels(labels, diagrams);
  const auto n = static_cast<Eigen::Index>(diagrams.size());
  DistanceMatrix m{labels, Matrix::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = Distance(diagrams[static_cast<std::size_t>(i)],
                                diagrams[static_cast<std::size_t>(j)], per_class);
      m.values(i, j) = d;
      m.values(j, i) = d;
    }
  }
  return m;
}

}  // namespace reference

}  // namespace gale::diagdist
