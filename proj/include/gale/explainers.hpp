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
#include <optional>
#include <string>

#include "gale/classifier.hpp"
#include "gale/dataio.hpp"
#include "gale/rng.hpp"
#include "gale/types.hpp"

// Local explanation methods producing one attribution vector per instance.
namespace gale::explain {

enum class BaselineTag { kZero, kMaxDistance, kGaussian, kUniform };

struct BaselineKind {
  BaselineTag tag = BaselineTag::kZero;
  double noise_scale = 1.0;  // gaussian only, in units of per-feature std

  // "zero", "max-distance", "gaussian", "gaussian-0.5", "uniform", ...
  std::string Label() const;
};

// Accepts the labels produced by BaselineKind::Label(); throws ConfigError.
BaselineKind ParseBaseline(const std::string& label);

struct FeatureStats {
  Vector mean;
  Vector stddev;
  Vector min;
  Vector max;

  static FeatureStats Of(const Matrix& X);
};

//  zero          all-zeros vector
//  max-distance  the row of X farthest from x (first one on ties)
//  gaussian      x + N(0, (noise_scale * std_j)^2) per feature
//  uniform       per-feature uniform draw in [min_j, max_j] of X
Vector MakeBaseline(const BaselineKind& kind, const Matrix& X, const FeatureStats& stats,
                    const Vector& x, Rng& rng);

// (x - baseline) times the midpoint Riemann mean of the model gradient along
// the straight path from baseline to x.
Vector IntegratedGradients(const model::Model& m, const Vector& x, const Vector& baseline,
                           int steps);

// (x - baseline) times the gradient at x.
Vector GradientTimesInput(const model::Model& m, const Vector& x, const Vector& baseline);

struct LimeParams {
  int k = 1;                  // features retained
  int n_samples = 50;         // neighborhood size
  double kernel_width = 0.0;  // <= 0 selects the default 0.75 * sqrt(d) * mean std

  void Validate(std::size_t d) const;  // 1 <= k <= d, n_samples >= d + 2
};

double DefaultKernelWidth(const FeatureStats& stats);

struct SurrogateResult {
  Vector attribution;
  bool ridge_fallback = false;
};

// Samples z ~ N(x, diag(std^2)), weights them by exp(-|z - x|^2 / width^2),
// picks k features by forward selection on weighted least squares and returns
// the weighted least-squares slopes of the predicted probability on them,
// zeros elsewhere.
SurrogateResult LimeLike(const model::Model& m, const Vector& x, const FeatureStats& stats,
                         const LimeParams& params, Rng& rng);

// Shapley-kernel weighted regression over feature coalitions with masked
// features imputed from `background` rows, constrained so the attributions sum
// to f(x) - mean f(background). All coalitions are enumerated when
// 2^d - 2 <= n_coalitions (exact Shapley values); otherwise coalitions are
// sampled from the kernel's size distribution.
SurrogateResult KernelShapLike(const model::Model& m, const Vector& x, const Matrix& background,
                               int n_coalitions, Rng& rng);

enum class Method { kIntegratedGradients, kGradientTimesInput, kKernelShap, kLime };

const char* ToString(Method m);
Method ParseMethod(const std::string& name);

struct MethodSpec {
  Method method = Method::kIntegratedGradients;
  // Required for the gradient methods. For kernel SHAP a baseline makes it the
  // per-instance background; without one a fixed sample of X is used.
  std::optional<BaselineKind> baseline;
  int steps = 64;
  // Attributions are averaged over this many baseline draws (stochastic
  // baselines only; deterministic ones are drawn once).
  int baseline_draws = 1;
  LimeParams lime;
  int n_coalitions = 2048;
  int background_size = 20;
  std::uint64_t seed = 0;

  std::string Label() const;
  io::Json ToJson() const;
  void Validate(std::size_t d) const;
};

struct Explanation {
  ExplanationMatrix matrix;
  LensVector lens;
  io::Json metadata;
};

// Row i explains row i of X; each row draws from the stream (seed, i), so the
// result does not depend on `jobs`.
Explanation ExplainDataset(const MethodSpec& spec, const model::Model& m, const Matrix& X,
                           int jobs = 1);

namespace reference {

Explanation ExplainDataset(const MethodSpec& spec, const model::Model& m, const Matrix& X);

}  // namespace reference

}  // namespace gale::explain
