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

#include <string>
#include <vector>

#include "gale/types.hpp"

namespace gale::diagdist {

// Exact bottleneck distance between two diagrams under the L-infinity ground
// metric, with matches to the diagonal allowed (cost |death - birth| / 2).
// Class tags are ignored: each diagram is one combined multiset.
double Bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

// Largest bottleneck distance over the four classes compared separately.
double BottleneckPerClass(const PersistenceDiagram& a, const PersistenceDiagram& b);

struct PairwiseOptions {
  bool per_class = false;
  int jobs = 1;
};

// Throws ShapeError when fewer than two diagrams or labels do not match.
DistanceMatrix PairwiseMatrix(const std::vector<std::string>& labels,
                              const std::vector<PersistenceDiagram>& diagrams,
                              const PairwiseOptions& options = {});

std::vector<double> RowSums(const DistanceMatrix& m);

// Entrywise mean; throws AlignmentError unless all label lists are identical.
DistanceMatrix MeanMatrices(const std::vector<DistanceMatrix>& ms);

namespace reference {

DistanceMatrix PairwiseMatrix(const std::vector<std::string>& labels,
                              const std::vector<PersistenceDiagram>& diagrams,
                              bool per_class = false);

}  // namespace reference

}  // namespace gale::diagdist
