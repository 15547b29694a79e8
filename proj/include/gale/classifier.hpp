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

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "gale/dataio.hpp"
#include "gale/types.hpp"

namespace gale::model {

// Per-feature affine map to zero mean and unit variance. Constant features
// keep a scale of 1.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer Fit(const Matrix& X);
  static Standardizer Identity(std::size_t dim);
  Matrix Apply(const Matrix& X) const;
  Vector Apply(const Vector& x) const;
};

// Binary classifier over raw (unstandardized) inputs. Implementations are
// immutable after construction and safe to share across threads.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t input_dim() const = 0;
  // Probability of class 1 for every row of X.
  virtual Vector PredictBatch(const Matrix& X) const = 0;
  // d P(x) / d x, with respect to the raw input.
  virtual Vector Gradient(const Vector& x) const = 0;
  virtual io::Json ToJson() const = 0;

  double Predict(const Vector& x) const;
  // Throws ShapeError when the column count differs from input_dim().
  LensVector PredictProba(const Matrix& X) const;
};

struct TrainConfig {
  int epochs = 500;
  double learning_rate = 0.1;
  double momentum = 0.9;
  int batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;

  void Validate() const;  // epochs >= 1, learning_rate >= 0
};

// m -> 64 -> 64 -> 1, rectifier hidden units, logistic output. The rectifier
// derivative at 0 is taken as 0.
class MlpModel final : public Model {
 public:
  static constexpr int kHidden = 64;

  MlpModel(Standardizer standardizer, Matrix w1, Vector b1, Matrix w2, Vector b2, Vector w3,
           double b3);
  // He-initialized network for `dim` inputs.
  static MlpModel Initialize(const Standardizer& standardizer, std::uint64_t seed);

  std::size_t input_dim() const override { return static_cast<std::size_t>(w1_.cols()); }
  Vector PredictBatch(const Matrix& X) const override;
  Vector Gradient(const Vector& x) const override;
  io::Json ToJson() const override;
  static MlpModel FromJson(const io::Json& j);

  // Prediction on inputs already mapped by the stored standardizer.
  Vector PredictStandardized(const Matrix& Z) const;
  const Standardizer& standardizer() const { return standardizer_; }
  // Binary cross-entropy on (raw) data.
  double Loss(const LabeledDataset& ds) const;

  friend MlpModel TrainMlp(const LabeledDataset& ds, const TrainConfig& cfg);
  friend bool operator==(const MlpModel& a, const MlpModel& b);

 private:
  Standardizer standardizer_;
  Matrix w1_;  // hidden x input
  Vector b1_;
  Matrix w2_;  // hidden x hidden
  Vector b2_;
  Vector w3_;
  double b3_;
};

// sigma(w . x + b) with w acting on standardized features.
class LogisticModel final : public Model {
 public:
  LogisticModel(Standardizer standardizer, Vector w, double b);

  std::size_t input_dim() const override { return static_cast<std::size_t>(w_.size()); }
  Vector PredictBatch(const Matrix& X) const override;
  Vector Gradient(const Vector& x) const override;
  io::Json ToJson() const override;
  static LogisticModel FromJson(const io::Json& j);

  const Standardizer& standardizer() const { return standardizer_; }
  const Vector& weights() const { return w_; }
  double bias() const { return b_; }
  // Weights and bias expressed on raw inputs: sigma(raw_weights . x + raw_bias).
  Vector raw_weights() const;
  double raw_bias() const;

 private:
  Standardizer standardizer_;
  Vector w_;
  double b_;
};

// Full-batch (or mini-batch) gradient descent with momentum on binary
// cross-entropy. Throws TrainingDivergence when the loss stops being finite.
MlpModel TrainMlp(const LabeledDataset& ds, const TrainConfig& cfg);

// L2-regularized logistic regression solved by damped Newton iterations from a
// seeded start; the objective is strictly convex, so the seed does not matter
// beyond solver tolerance.
LogisticModel TrainLogistic(const LabeledDataset& ds, const TrainConfig& cfg);

std::unique_ptr<Model> ModelFromJson(const io::Json& j);
void SaveModel(const Model& m, const std::string& path);
std::unique_ptr<Model> LoadModel(const std::string& path);

double Accuracy(const Model& m, const LabeledDataset& ds);

inline double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace gale::model
