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

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace gale {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Row i is the local explanation of observation i.
struct ExplanationMatrix {
  Matrix values;
  std::vector<std::string> column_names;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }

  // Throws ShapeError / RangeError when n < 2, d < 1, names do not match or an
  // entry is not finite.
  void Validate() const;
};

// Predicted class-1 probabilities, index-aligned with an ExplanationMatrix.
struct LensVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  void Validate() const;
};

// Throws AlignmentError when the lens does not pair with the explanations.
void CheckPaired(const ExplanationMatrix& e, const LensVector& lens);

struct LabeledDataset {
  Matrix X;
  std::vector<int> y;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }
  // Generators may legitimately emit a single class (e.g. zero-label data with
  // a tiny zero rate); model training requires both.
  void Validate(bool require_both_classes = true) const;
};

struct MapperNode {
  int id = 0;
  std::vector<int> members;  // sorted point indices
  double lens_mean = 0.0;

  friend bool operator==(const MapperNode&, const MapperNode&) = default;
};

struct MapperGraph {
  std::vector<MapperNode> nodes;                // sorted by id, ids 0..n-1
  std::vector<std::pair<int, int>> edges;       // (u, v) with u < v, sorted

  friend bool operator==(const MapperGraph&, const MapperGraph&) = default;
};

enum class PointClass { kOrd0, kRel1, kExt0, kExt1 };

const char* ToString(PointClass c);
// Throws FormatError on an unknown tag.
PointClass ParsePointClass(const std::string& tag);

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  PointClass cls = PointClass::kOrd0;

  double persistence() const {
    return death > birth ? death - birth : birth - death;
  }
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

using PersistenceDiagram = std::vector<DiagramPoint>;

// Multiset equality of (birth, death, class) triples.
bool SameMultiset(PersistenceDiagram a, PersistenceDiagram b);
void SortDiagram(PersistenceDiagram& d);

struct DistanceMatrix {
  std::vector<std::string> labels;
  Matrix values;

  std::size_t size() const { return labels.size(); }
};

}  // namespace gale
