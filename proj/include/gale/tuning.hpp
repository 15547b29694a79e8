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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gale/dataio.hpp"
#include "gale/mapper.hpp"
#include "gale/types.hpp"

// Bootstrap stability of Mapper parameters and greedy grid selection.
//
// For a parameter set, the base diagram D is built from all points. Each
// bootstrap iteration resamples (explanation row, lens value) pairs with
// replacement, rebuilds the Mapper graph G* and its diagram D*, and records
// bottleneck(D, D*) and the component count of G*. b_alpha and c_alpha are the
// ceil((1 - alpha) * B)-th order statistics (1-based) of those samples.
namespace gale::tuning {

struct BootstrapStats {
  double b_alpha = 0.0;
  int c_alpha = 0;
  double alpha = 0.05;
  int iterations = 0;
  std::vector<double> distances;
  std::vector<int> components;

  double MeanComponents() const;
  friend bool operator==(const BootstrapStats&, const BootstrapStats&) = default;
};

struct ParamGrid {
  std::vector<int> resolutions;
  std::vector<double> gains;
  std::vector<double> threshold_fractions;

  // Resolutions {5,...,25}, gains {0.1,...,0.4}, fractions {0.1,...,0.5}.
  static ParamGrid Default();
  void Validate() const;
  // Resolution-major enumeration order.
  std::vector<mapper::MapperParams> Enumerate() const;
};

struct TuningRow {
  mapper::MapperParams params;
  BootstrapStats stats;
  friend bool operator==(const TuningRow&, const TuningRow&) = default;
};

enum class SelectionRule {
  // Ascending by (c_alpha, b_alpha, -resolution, gain, threshold_fraction).
  kLexicographic,
  // Smallest b_alpha among rows with c_alpha <= cap; lexicographic fallback.
  kCappedComponents,
};

const char* ToString(SelectionRule rule);
SelectionRule ParseSelectionRule(const std::string& name);

struct TuningResult {
  std::vector<TuningRow> rows;
  mapper::MapperParams selected;
  SelectionRule rule = SelectionRule::kLexicographic;
};

struct BootstrapOptions {
  int iterations = 100;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int jobs = 1;
  mapper::CoverAnchor anchor = mapper::CoverAnchor::kObserved;
  SelectionRule rule = SelectionRule::kLexicographic;
  int component_cap = 1;

  // Throws ConfigError unless B >= 10 and 0 < alpha < 1.
  void Validate() const;
};

// ceil((1 - alpha) * samples.size())-th smallest value, 1-based.
double OrderStatistic(std::vector<double> samples, double alpha);
int OrderStatistic(std::vector<int> samples, double alpha);

// Row indices drawn with replacement for iteration `iteration` of grid cell
// `cell`; the stream depends only on (seed, cell, iteration).
std::vector<int> ResampleIndices(std::size_t n, std::uint64_t seed, std::size_t cell,
                                 std::size_t iteration);

BootstrapStats Bootstrap(const Matrix& values, std::span<const double> lens,
                         const mapper::MapperParams& params, const BootstrapOptions& options);
BootstrapStats Bootstrap(const ExplanationMatrix& e, const LensVector& lens,
                         const mapper::MapperParams& params, const BootstrapOptions& options);

TuningResult GridSearch(const Matrix& values, std::span<const double> lens,
                        const ParamGrid& grid, const BootstrapOptions& options);
TuningResult GridSearch(const ExplanationMatrix& e, const LensVector& lens,
                        const ParamGrid& grid, const BootstrapOptions& options);

mapper::MapperParams SelectParams(const std::vector<TuningRow>& rows,
                                  SelectionRule rule = SelectionRule::kLexicographic,
                                  int component_cap = 1);

// One row per grid cell: resolution,gain,threshold_fraction,b_alpha,c_alpha,
// mean_components.
void WriteTuningCsv(std::ostream& out, const TuningResult& result);
// {"rule", "selected", "alpha", "iterations", "grid": [...]}.
io::Json TuningToJson(const TuningResult& result);

namespace reference {

// Serial versions of the OpenMP kernels, identical results by construction of
// the per-(cell, iteration) random streams.
BootstrapStats Bootstrap(const Matrix& values, std::span<const double> lens,
                         const mapper::MapperParams& params, const BootstrapOptions& options);
TuningResult GridSearch(const Matrix& values, std::span<const double> lens,
                        const ParamGrid& grid, const BootstrapOptions& options);

}  // namespace reference

}  // namespace gale::tuning
