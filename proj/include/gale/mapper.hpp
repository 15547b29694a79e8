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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "gale/types.hpp"

// Mapper graph of a scalar lens over the explanation space: the lens range is
// covered by overlapping intervals, the points of each interval are clustered
// by single linkage in explanation space, clusters become nodes and nodes that
// share a point are joined by an edge.
namespace gale::mapper {

struct MapperParams {
  int resolution = 10;             // number of cover intervals
  double gain = 0.3;               // overlap fraction of consecutive intervals
  double threshold_fraction = 0.3;  // cluster cut as a fraction of the value range

  // Throws ConfigError unless r >= 1, 0 <= g < 0.5 and 0 < t <= 1.
  void Validate() const;
  std::string ToString() const;
  friend bool operator==(const MapperParams&, const MapperParams&) = default;
};

// Where the cover is anchored. The observed range is the default because
// predicted probabilities rarely span the whole unit interval.
enum class CoverAnchor { kObserved, kUnit };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool Contains(double v) const { return v >= lo && v <= hi; }
};

struct Cover {
  std::vector<Interval> intervals;
};

struct MapperOptions {
  CoverAnchor anchor = CoverAnchor::kObserved;
  int jobs = 1;
};

Cover BuildCover(double lo, double hi, int resolution, double gain);
Cover BuildCover(std::span<const double> lens, int resolution, double gain,
                 CoverAnchor anchor = CoverAnchor::kObserved);

// Connected components of the graph that links two points when their
// Euclidean distance is at most `cut`; identical to cutting the single-linkage
// dendrogram at `cut`. `points` index rows of `values`. Clusters are returned
// with members in input order, clusters ordered by their first member.
std::vector<std::vector<int>> SingleLinkageClusters(const Matrix& values,
                                                    std::span<const int> points,
                                                    double cut);

// Cluster cut used by BuildMapper: fraction * (max entry - min entry).
double ClusterCut(const Matrix& values, double threshold_fraction);

MapperGraph BuildMapper(const Matrix& values, std::span<const double> lens,
                        const MapperParams& params, const MapperOptions& options = {});
MapperGraph BuildMapper(const ExplanationMatrix& e, const LensVector& lens,
                        const MapperParams& params, const MapperOptions& options = {});

struct Components {
  int count = 0;
  std::vector<int> label;  // component index per node, numbered by first node
};

Components ConnectedComponents(const MapperGraph& g);

// Full invariant check of a graph built over `lens` (members cover every point,
// edges exactly where members intersect, lens means consistent). Throws
// FormatError on the first violation.
void ValidateGraph(const MapperGraph& g, std::span<const double> lens);

namespace reference {

// Serial construction kept as the oracle for the OpenMP kernel.
MapperGraph BuildMapper(const Matrix& values, std::span<const double> lens,
                        const MapperParams& params,
                        CoverAnchor anchor = CoverAnchor::kObserved);

}  // namespace reference

}  // namespace gale::mapper
