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

#include "gale/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "gale/error.hpp"
#include "gale/union_find.hpp"

namespace gale::mapper {

namespace {

constexpr double kDegenerateHalfWidth = 1e-9;

std::vector<int> PointsInInterval(std::span<const double> lens, const Interval& iv) {
  std::vector<int> pts;
  for (std::size_t i = 0; i < lens.size(); ++i) {
    if (iv.Contains(lens[i])) pts.push_back(static_cast<int>(i));
  }
  return pts;
}

double NodeLensMean(std::span<const double> lens, const std::vector<int>& members) {
  double sum = 0.0;
  for (int m : members) sum += lens[static_cast<std::size_t>(m)];
  return sum / static_cast<double>(members.size());
}

// Turns per-interval clusters (in interval order) into the final graph.
MapperGraph Assemble(std::span<const double> lens,
                     std::vector<std::vector<std::vector<int>>>& clusters_per_interval) {
  MapperGraph g;
  std::vector<std::vector<int>> nodes_of_point(lens.size());
  for (auto& clusters : clusters_per_interval) {
    for (auto& members : clusters) {
      std::sort(members.begin(), members.end());
      MapperNode node;
      node.id = static_cast<int>(g.nodes.size());
      node.lens_mean = NodeLensMean(lens, members);
      for (int m : members) nodes_of_point[static_cast<std::size_t>(m)].push_back(node.id);
      node.members = std::move(members);
      g.nodes.push_back(std::move(node));
    }
  }
  std::set<std::pair<int, int>> edges;
  for (const auto& ids : nodes_of_point) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        edges.emplace(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
      }
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

void CheckInputs(const Matrix& values, std::span<const double> lens, const MapperParams& p) {
  p.Validate();
  if (static_cast<std::size_t>(values.rows()) != lens.size()) {
    throw AlignmentError("explanation rows and lens length differ");
  }
}

}  // namespace

void MapperParams::Validate() const {
  if (resolution < 1) throw ConfigError("resolution must be >= 1");
  if (!(gain >= 0.0 && gain < 0.5)) throw ConfigError("gain must lie in [0, 0.5)");
  if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0)) {
    throw ConfigError("threshold fraction must lie in (0, 1]");
  }
}

std::string MapperParams::ToString() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "r=%d g=%g t=%g", resolution, gain, threshold_fraction);
  return buf;
}

Cover BuildCover(double lo, double hi, int resolution, double gain) {
  MapperParams{resolution, gain, 1.0}.Validate();
  Cover cover;
  if (!(hi > lo)) {
    cover.intervals.push_back({lo - kDegenerateHalfWidth, lo + kDegenerateHalfWidth});
    return cover;
  }
  const double range = hi - lo;
  const double length = range / (resolution - (resolution - 1) * gain);
  const double step = length * (1.0 - gain);
  for (int i = 0; i < resolution; ++i) {
    const double start = lo + i * step;
    cover.intervals.push_back({start, start + length});
  }
  // Rounding must not open a gap between neighbours when gain is zero.
  for (int i = 0; i + 1 < resolution; ++i) {
    auto& iv = cover.intervals[i];
    iv.hi = std::max(iv.hi, cover.intervals[i + 1].lo);
  }
  cover.intervals.front().lo = lo;
  cover.intervals.back().hi = hi;
  return cover;
}

Cover BuildCover(std::span<const double> lens, int resolution, double gain, CoverAnchor anchor) {
  if (lens.empty()) throw ShapeError("cover needs at least one lens value");
  if (anchor == CoverAnchor::kUnit) return BuildCover(0.0, 1.0, resolution, gain);
  const auto [mn, mx] = std::minmax_element(lens.begin(), lens.end());
  return BuildCover(*mn, *mx, resolution, gain);
}

std::vector<std::vector<int>> SingleLinkageClusters(const Matrix& values,
                                                    std::span<const int> points,
                                                    double cut) {
  const std::size_t k = points.size();
  UnionFind uf(k);
  const double cut2 = cut * cut;
  for (std::size_t a = 0; a < k; ++a) {
    const auto ra = values.row(points[a]);
    for (std::size_t b = a + 1; b < k; ++b) {
      if (uf.Find(a) == uf.Find(b)) continue;
      if ((ra - values.row(points[b])).squaredNorm() <= cut2) uf.Union(a, b);
    }
  }
  std::vector<std::vector<int>> clusters;
  std::vector<int> slot(k, -1);
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t root = uf.Find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[root])].push_back(points[a]);
  }
  return clusters;
}

double ClusterCut(const Matrix& values, double threshold_fraction) {
  if (values.size() == 0) return 0.0;
  return threshold_fraction * (values.maxCoeff() - values.minCoeff());
}

MapperGraph BuildMapper(const Matrix& values, std::span<const double> lens,
                        const MapperParams& params, const MapperOptions& options) {
  CheckInputs(values, lens, params);
  const Cover cover = BuildCover(lens, params.resolution, params.gain, options.anchor);
  const double cut = ClusterCut(values, params.threshold_fraction);
  const int m = static_cast<int>(cover.intervals.size());
  std::vector<std::vector<std::vector<int>>> clusters(cover.intervals.size());

#pragma omp parallel for schedule(dynamic) num_threads(options.jobs) if (options.jobs > 1)
  for (int i = 0; i < m; ++i) {
    const auto pts = PointsInInterval(lens, cover.intervals[static_cast<std::size_t>(i)]);
    if (!pts.empty()) clusters[static_cast<std::size_t>(i)] = SingleLinkageClusters(values, pts, cut);
  }
  return Assemble(lens, clusters);
}

MapperGraph BuildMapper(const ExplanationMatrix& e, const LensVector& lens,
                        const MapperParams& params, const MapperOptions& options) {
  CheckPaired(e, lens);
  return BuildMapper(e.values, lens.values, params, options);
}

Components ConnectedComponents(const MapperGraph& g) {
  const std::size_t n = g.nodes.size();
  UnionFind uf(n);
  for (const auto& [u, v] : g.edges) uf.Union(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  Components c;
  c.label.assign(n, -1);
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.Find(i);
    if (slot[root] < 0) slot[root] = c.count++;
    c.label[i] = slot[root];
  }
  return c;
}

void ValidateGraph(const MapperGraph& g, std::span<const double> lens) {
  std::vector<char> covered(lens.size(), 0);
  std::vector<std::vector<int>> nodes_of_point(lens.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& node = g.nodes[i];
    if (node.id != static_cast<int>(i)) throw FormatError("node ids not dense");
    if (node.members.empty()) throw FormatError("node without members");
    for (int m : node.members) {
      if (m < 0 || static_cast<std::size_t>(m) >= lens.size()) throw FormatError("member out of range");
      covered[static_cast<std::size_t>(m)] = 1;
      nodes_of_point[static_cast<std::size_t>(m)].push_back(node.id);
    }
    if (std::abs(NodeLensMean(lens, node.members) - node.lens_mean) > 1e-12) {
      throw FormatError("node lens mean inconsistent with members");
    }
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw FormatError("some point belongs to no node");
  }
  std::set<std::pair<int, int>> expected;
  for (const auto& ids : nodes_of_point) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (ids[a] != ids[b]) expected.emplace(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
      }
    }
  }
  if (std::vector<std::pair<int, int>>(expected.begin(), expected.end()) != g.edges) {
    throw FormatError("edge set differs from shared-member pairs");
  }
}

namespace reference {

MapperGraph BuildMapper(const Matrix& values, std::span<const double> lens,
                        const MapperParams& params, CoverAnchor anchor) {
  CheckInputs(values, lens, params);
  const Cover cover = BuildCover(lens, params.resolution, params.gain, anchor);
  const double cut = ClusterCut(values, params.threshold_fraction);
  std::vector<std::vector<std::vector<int>>> clusters;
  for (const auto& iv : cover.intervals) {
    const auto pts = PointsInInterval(lens, iv);
    clusters.push_back(pts.empty() ? std::vector<std::vector<int>>{}
                                   : SingleLinkageClusters(values, pts, cut));
  }
  return Assemble(lens, clusters);
}

}  // namespace reference

}  // namespace gale::mapper
