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

#include <array>
#include <utility>
#include <vector>

#include "gale/types.hpp"

// Extended persistence of a graph with a scalar value on every node.
//
// Nodes enter in ascending (value, id) order and an edge enters with its later
// endpoint. The ascending sweep is followed by a descending sweep in relative
// form, so every feature is paired and all diagram points are finite:
//
//   ord0  component born at a local minimum, dies where it merges (death >= birth)
//   ext0  essential component: (component min, component max)
//   rel1  superlevel component born at a local maximum, dies at its merge
//         (death <= birth)
//   ext1  essential cycle: value where it closes in the ascending sweep, paired
//         with the value where it closes in the descending sweep (death <= birth)
namespace gale::persistence {

struct ScalarGraph {
  std::vector<double> values;
  std::vector<std::pair<int, int>> edges;
};

ScalarGraph FromMapper(const MapperGraph& g);

// Union-find sweeps for ord0/rel1/ext0 and Z/2 reduction of descending cycles
// against the ascending cycle basis for ext1. Zero-persistence points are
// dropped unless `keep_zero_persistence` is set.
PersistenceDiagram ExtendedPersistenceFast(const ScalarGraph& g,
                                           bool keep_zero_persistence = false);
PersistenceDiagram ExtendedPersistenceFast(const MapperGraph& g,
                                           bool keep_zero_persistence = false);

// Boundary-matrix reduction over the coned extended filtration. Quadratic in
// the number of simplices; kept as the oracle for the fast path.
PersistenceDiagram ExtendedPersistenceReference(const ScalarGraph& g,
                                                bool keep_zero_persistence = false);
PersistenceDiagram ExtendedPersistenceReference(const MapperGraph& g,
                                                bool keep_zero_persistence = false);

inline PersistenceDiagram ExtendedPersistence(const MapperGraph& g) {
  return ExtendedPersistenceFast(g);
}

struct DiagramStats {
  std::array<int, 4> count{};  // indexed by PointClass
  double max_persistence = 0.0;
  double total_persistence = 0.0;
};

DiagramStats ComputeStats(const PersistenceDiagram& d);

}  // namespace gale::persistence
