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

#include "gale/types.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gale/error.hpp"

namespace gale {

void ExplanationMatrix::Validate() const {
  if (values.rows() < 2) throw ShapeError("explanation matrix needs n >= 2 rows");
  if (values.cols() < 1) throw ShapeError("explanation matrix needs d >= 1 columns");
  if (!column_names.empty() &&
      column_names.size() != static_cast<std::size_t>(values.cols())) {
    throw ShapeError("explanation column names do not match column count");
  }
  if (!values.allFinite()) throw RangeError("explanation matrix has non-finite entries");
}

void LensVector::Validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw RangeError("lens value " + std::to_string(v) + " at index " +
                       std::to_string(i) + " is outside [0,1]");
    }
  }
}

void CheckPaired(const ExplanationMatrix& e, const LensVector& lens) {
  if (e.rows() != lens.size()) {
    throw AlignmentError("explanation rows (" + std::to_string(e.rows()) +
                         ") and lens length (" + std::to_string(lens.size()) +
                         ") differ");
  }
}

void LabeledDataset::Validate(bool require_both_classes) const {
  if (X.rows() != static_cast<Eigen::Index>(y.size())) {
    throw ShapeError("feature rows and label count differ");
  }
  if (!feature_names.empty() &&
      feature_names.size() != static_cast<std::size_t>(X.cols())) {
    throw ShapeError("feature names do not match column count");
  }
  if (!X.allFinite()) throw RangeError("dataset has non-finite features");
  bool has0 = false, has1 = false;
  for (int label : y) {
    if (label == 0) {
      has0 = true;
    } else if (label == 1) {
      has1 = true;
    } else {
      throw RangeError("labels must be 0 or 1");
    }
  }
  if (require_both_classes && (!has0 || !has1)) throw RangeError("dataset must contain both classes");
}

const char* ToString(PointClass c) {
  switch (c) {
    case PointClass::kOrd0: return "ord0";
    case PointClass::kRel1: return "rel1";
    case PointClass::kExt0: return "ext0";
    case PointClass::kExt1: return "ext1";
  }
  return "?";
}

PointClass ParsePointClass(const std::string& tag) {
  if (tag == "ord0") return PointClass::kOrd0;
  if (tag == "rel1") return PointClass::kRel1;
  if (tag == "ext0") return PointClass::kExt0;
  if (tag == "ext1") return PointClass::kExt1;
  throw FormatError("unknown diagram class tag '" + tag + "'");
}

void SortDiagram(PersistenceDiagram& d) {
  std::sort(d.begin(), d.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
    return std::tuple(static_cast<int>(a.cls), a.birth, a.death) <
           std::tuple(static_cast<int>(b.cls), b.birth, b.death);
  });
}

bool SameMultiset(PersistenceDiagram a, PersistenceDiagram b) {
  if (a.size() != b.size()) return false;
  SortDiagram(a);
  SortDiagram(b);
  return a == b;
}

}  // namespace gale
