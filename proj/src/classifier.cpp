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

#include "gale/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gale/error.hpp"
#include "gale/rng.hpp"

namespace gale::model {

namespace {

constexpr double kLogisticRidge = 1e-3;

io::Json MatrixToJson(const Matrix& m) {
  io::Json rows = io::Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(m.row(r).data(), m.row(r).data() + m.cols());
    rows.push_back(row);
  }
  return rows;
}

io::Json VectorToJson(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix MatrixFromJson(const io::Json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const auto cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw FormatError("ragged matrix in model JSON");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

Vector VectorFromJson(const io::Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

io::Json StandardizerToJson(const Standardizer& s) {
  return {{"mean", VectorToJson(s.mean)}, {"scale", VectorToJson(s.scale)}};
}

Standardizer StandardizerFromJson(const io::Json& j) {
  return {VectorFromJson(j.at("mean")), VectorFromJson(j.at("scale"))};
}

// Mean binary cross-entropy computed from logits.
double CrossEntropy(const Vector& logits, const Vector& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    s += softplus - y[i] * z;
  }
  return s / static_cast<double>(logits.size());
}

Vector Labels(const LabeledDataset& ds) {
  Vector y(static_cast<Eigen::Index>(ds.y.size()));
  for (std::size_t i = 0; i < ds.y.size(); ++i) y[static_cast<Eigen::Index>(i)] = ds.y[i];
  return y;
}

void CheckTrainable(const LabeledDataset& ds) {
  ds.Validate();
  if (ds.rows() < 2) throw ShapeError("training needs at least two rows");
}

}  // namespace

Standardizer Standardizer::Fit(const Matrix& X) {
  Standardizer s;
  s.mean = X.colwise().mean().transpose();
  s.scale.resize(X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double var = (X.col(c).array() - s.mean[c]).square().mean();
    s.scale[c] = var > 0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Standardizer Standardizer::Identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Vector::Zero(d), Vector::Ones(d)};
}

Matrix Standardizer::Apply(const Matrix& X) const {
  return ((X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array()).matrix();
}

Vector Standardizer::Apply(const Vector& x) const {
  return ((x - mean).array() / scale.array()).matrix();
}

double Model::Predict(const Vector& x) const {
  Matrix row = x.transpose();
  return PredictBatch(row)[0];
}

LensVector Model::PredictProba(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != input_dim()) {
    throw ShapeError("model expects " + std::to_string(input_dim()) + " features, got " +
                     std::to_string(X.cols()));
  }
  const Vector p = PredictBatch(X);
  return {std::vector<double>(p.data(), p.data() + p.size())};
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (batch_size < 0) throw ConfigError("batch size must be >= 0");
}

// ---------------------------------------------------------------- MlpModel

MlpModel::MlpModel(Standardizer standardizer, Matrix w1, Vector b1, Matrix w2, Vector b2, Vector w3,
                   double b3)
    : standardizer_(std::move(standardizer)),
      w1_(std::move(w1)),
      b1_(std::move(b1)),
      w2_(std::move(w2)),
      b2_(std::move(b2)),
      w3_(std::move(w3)),
      b3_(b3) {}

MlpModel MlpModel::Initialize(const Standardizer& standardizer, std::uint64_t seed) {
  const auto m = standardizer.mean.size();
  auto rng = StreamRng(seed, {0x317});
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](Eigen::Index rows, Eigen::Index cols, double stddev) {
    Matrix w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = stddev * normal(rng);
    }
    return w;
  };
  Matrix w1 = draw(kHidden, m, std::sqrt(2.0 / static_cast<double>(m)));
  Matrix w2 = draw(kHidden, kHidden, std::sqrt(2.0 / kHidden));
  Vector w3 = draw(kHidden, 1, std::sqrt(1.0 / kHidden)).col(0);
  return MlpModel(standardizer, std::move(w1), Vector::Zero(kHidden), std::move(w2),
                  Vector::Zero(kHidden), std::move(w3), 0.0);
}

Vector MlpModel::PredictStandardized(const Matrix& Z) const {
  Matrix h1 = ((Z * w1_.transpose()).rowwise() + b1_.transpose()).cwiseMax(0.0);
  Matrix h2 = ((h1 * w2_.transpose()).rowwise() + b2_.transpose()).cwiseMax(0.0);
  Vector logits = (h2 * w3_).array() + b3_;
  return logits.unaryExpr([](double z) { return Sigmoid(z); });
}

Vector MlpModel::PredictBatch(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != input_dim()) throw ShapeError("model input dimension mismatch");
  return PredictStandardized(standardizer_.Apply(X));
}

Vector MlpModel::Gradient(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim()) throw ShapeError("model input dimension mismatch");
  const Vector z = standardizer_.Apply(x);
  const Vector a1 = w1_ * z + b1_;
  const Vector h1 = a1.cwiseMax(0.0);
  const Vector a2 = w2_ * h1 + b2_;
  const Vector h2 = a2.cwiseMax(0.0);
  const double p = Sigmoid(h2.dot(w3_) + b3_);
  const Vector g_a2 = (a2.array() > 0.0).select(w3_.array(), 0.0).matrix();
  const Vector g_h1 = w2_.transpose() * g_a2;
  const Vector g_a1 = (a1.array() > 0.0).select(g_h1.array(), 0.0).matrix();
  const Vector g_z = w1_.transpose() * g_a1;
  return (p * (1.0 - p) * g_z.array() / standardizer_.scale.array()).matrix();
}

double MlpModel::Loss(const LabeledDataset& ds) const {
  const Matrix Z = standardizer_.Apply(ds.X);
  Matrix h1 = ((Z * w1_.transpose()).rowwise() + b1_.transpose()).cwiseMax(0.0);
  Matrix h2 = ((h1 * w2_.transpose()).rowwise() + b2_.transpose()).cwiseMax(0.0);
  Vector logits = (h2 * w3_).array() + b3_;
  return CrossEntropy(logits, Labels(ds));
}

io::Json MlpModel::ToJson() const {
  return {{"type", "mlp"},
          {"standardizer", StandardizerToJson(standardizer_)},
          {"layers",
           {{{"weights", MatrixToJson(w1_)}, {"bias", VectorToJson(b1_)}},
            {{"weights", MatrixToJson(w2_)}, {"bias", VectorToJson(b2_)}},
            {{"weights", MatrixToJson(w3_.transpose())}, {"bias", std::vector<double>{b3_}}}}}};
}

MlpModel MlpModel::FromJson(const io::Json& j) {
  try {
    const auto& layers = j.at("layers");
    if (layers.size() != 3) throw FormatError("mlp JSON needs three layers");
    Matrix out = MatrixFromJson(layers[2].at("weights"));
    const auto b3 = layers[2].at("bias").get<std::vector<double>>();
    if (out.rows() != 1 || b3.size() != 1) throw FormatError("mlp output layer must have one unit");
    MlpModel m(StandardizerFromJson(j.at("standardizer")), MatrixFromJson(layers[0].at("weights")),
               VectorFromJson(layers[0].at("bias")), MatrixFromJson(layers[1].at("weights")),
               VectorFromJson(layers[1].at("bias")), out.row(0).transpose(), b3[0]);
    if (m.w1_.rows() != kHidden || m.w2_.rows() != kHidden || m.w2_.cols() != kHidden ||
        m.w3_.size() != kHidden || m.standardizer_.mean.size() != m.w1_.cols()) {
      throw FormatError("mlp JSON has inconsistent layer shapes");
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed model JSON: ") + ex.what());
  }
}

bool operator==(const MlpModel& a, const MlpModel& b) {
  return a.standardizer_.mean == b.standardizer_.mean && a.standardizer_.scale == b.standardizer_.scale &&
         a.w1_ == b.w1_ && a.b1_ == b.b1_ && a.w2_ == b.w2_ && a.b2_ == b.b2_ && a.w3_ == b.w3_ &&
         a.b3_ == b.b3_;
}

MlpModel TrainMlp(const LabeledDataset& ds, const TrainConfig& cfg) {
  CheckTrainable(ds);
  cfg.Validate();
  MlpModel m = MlpModel::Initialize(Standardizer::Fit(ds.X), cfg.seed);
  const Matrix Z_all = m.standardizer_.Apply(ds.X);
  const Vector y_all = Labels(ds);
  const auto n = Z_all.rows();
  const Eigen::Index batch = cfg.batch_size <= 0 || cfg.batch_size >= n ? n : cfg.batch_size;

  Matrix v_w1 = Matrix::Zero(m.w1_.rows(), m.w1_.cols());
  Matrix v_w2 = Matrix::Zero(m.w2_.rows(), m.w2_.cols());
  Vector v_b1 = Vector::Zero(m.b1_.size());
  Vector v_b2 = Vector::Zero(m.b2_.size());
  Vector v_w3 = Vector::Zero(m.w3_.size());
  double v_b3 = 0.0;

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  auto shuffle_rng = StreamRng(cfg.seed, {0x5ff});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (batch < n) std::shuffle(perm.begin(), perm.end(), shuffle_rng);
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index count = std::min(batch, n - start);
      Matrix Z(count, Z_all.cols());
      Vector y(count);
      for (Eigen::Index i = 0; i < count; ++i) {
        Z.row(i) = Z_all.row(perm[static_cast<std::size_t>(start + i)]);
        y[i] = y_all[perm[static_cast<std::size_t>(start + i)]];
      }
      const Matrix a1 = (Z * m.w1_.transpose()).rowwise() + m.b1_.transpose();
      const Matrix h1 = a1.cwiseMax(0.0);
      const Matrix a2 = (h1 * m.w2_.transpose()).rowwise() + m.b2_.transpose();
      const Matrix h2 = a2.cwiseMax(0.0);
      const Vector logits = (h2 * m.w3_).array() + m.b3_;
      const double loss = CrossEntropy(logits, y);
      if (!std::isfinite(loss)) throw TrainingDivergence(epoch);

      const Vector dout =
          (logits.unaryExpr([](double z) { return Sigmoid(z); }) - y) / static_cast<double>(count);
      const Vector g_w3 = h2.transpose() * dout;
      const double g_b3 = dout.sum();
      const Matrix d_a2 = (a2.array() > 0.0).select((dout * m.w3_.transpose()).array(), 0.0).matrix();
      const Matrix g_w2 = d_a2.transpose() * h1;
      const Vector g_b2 = d_a2.colwise().sum().transpose();
      const Matrix d_a1 = (a1.array() > 0.0).select((d_a2 * m.w2_).array(), 0.0).matrix();
      const Matrix g_w1 = d_a1.transpose() * Z;
      const Vector g_b1 = d_a1.colwise().sum().transpose();

      const double lr = cfg.learning_rate;
      const double mu = cfg.momentum;
      v_w1 = mu * v_w1 - lr * g_w1;
      v_b1 = mu * v_b1 - lr * g_b1;
      v_w2 = mu * v_w2 - lr * g_w2;
      v_b2 = mu * v_b2 - lr * g_b2;
      v_w3 = mu * v_w3 - lr * g_w3;
      v_b3 = mu * v_b3 - lr * g_b3;
      m.w1_ += v_w1;
      m.b1_ += v_b1;
      m.w2_ += v_w2;
      m.b2_ += v_b2;
      m.w3_ += v_w3;
      m.b3_ += v_b3;
    }
    if (!m.w1_.allFinite() || !m.w2_.allFinite() || !m.w3_.allFinite() || !std::isfinite(m.b3_)) {
      throw TrainingDivergence(epoch);
    }
  }
  return m;
}

// ----------------------------------------------------------- LogisticModel

LogisticModel::LogisticModel(Standardizer standardizer, Vector w, double b)
    : standardizer_(std::move(standardizer)), w_(std::move(w)), b_(b) {}

Vector LogisticModel::PredictBatch(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != input_dim()) throw ShapeError("model input dimension mismatch");
  const Vector logits = (standardizer_.Apply(X) * w_).array() + b_;
  return logits.unaryExpr([](double z) { return Sigmoid(z); });
}

Vector LogisticModel::Gradient(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim()) throw ShapeError("model input dimension mismatch");
  const double p = Sigmoid(standardizer_.Apply(x).dot(w_) + b_);
  return p * (1.0 - p) * raw_weights();
}

Vector LogisticModel::raw_weights() const {
  return (w_.array() / standardizer_.scale.array()).matrix();
}

double LogisticModel::raw_bias() const {
  return b_ - (w_.array() * standardizer_.mean.array() / standardizer_.scale.array()).sum();
}

io::Json LogisticModel::ToJson() const {
  return {{"type", "logistic"},
          {"standardizer", StandardizerToJson(standardizer_)},
          {"weights", VectorToJson(w_)},
          {"bias", b_}};
}

LogisticModel LogisticModel::FromJson(const io::Json& j) {
  try {
    LogisticModel m(StandardizerFromJson(j.at("standardizer")), VectorFromJson(j.at("weights")),
                    j.at("bias").get<double>());
    if (m.w_.size() != m.standardizer_.mean.size()) throw FormatError("logistic JSON shape mismatch");
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed model JSON: ") + ex.what());
  }
}

LogisticModel TrainLogistic(const LabeledDataset& ds, const TrainConfig& cfg) {
  CheckTrainable(ds);
  cfg.Validate();
  const Standardizer s = Standardizer::Fit(ds.X);
  const Matrix Z = s.Apply(ds.X);
  const Vector y = Labels(ds);
  const auto n = Z.rows();
  const auto d = Z.cols();
  Matrix A(n, d + 1);
  A.leftCols(d) = Z;
  A.col(d).setOnes();

  auto rng = StreamRng(cfg.seed, {0x109});
  std::normal_distribution<double> normal(0.0, 0.1);
  Vector theta(d + 1);
  for (Eigen::Index i = 0; i <= d; ++i) theta[i] = normal(rng);

  Vector ridge = Vector::Constant(d + 1, kLogisticRidge);
  ridge[d] = 0.0;
  auto objective = [&](const Vector& t) {
    return CrossEntropy(A * t, y) + 0.5 * (ridge.array() * t.array().square()).sum();
  };

  double f = objective(theta);
  for (int it = 0; it < 200; ++it) {
    const Vector p = (A * theta).unaryExpr([](double z) { return Sigmoid(z); });
    const Vector grad = A.transpose() * (p - y) / static_cast<double>(n) + ridge.cwiseProduct(theta);
    if (grad.norm() < 1e-12) break;
    const Vector wdiag = (p.array() * (1.0 - p.array())).matrix();
    Matrix H = A.transpose() * wdiag.asDiagonal() * A / static_cast<double>(n);
    H.diagonal() += ridge;
    H.diagonal().array() += 1e-12;
    const Vector step = H.ldlt().solve(grad);
    double t = 1.0;
    Vector next = theta - step;
    double fn = objective(next);
    while (fn > f && t > 1e-10) {
      t *= 0.5;
      next = theta - t * step;
      fn = objective(next);
    }
    if (!std::isfinite(fn)) throw TrainingDivergence(it + 1);
    theta = next;
    f = fn;
  }
  return LogisticModel(s, theta.head(d), theta[d]);
}

std::unique_ptr<Model> ModelFromJson(const io::Json& j) {
  const auto type = j.value("type", std::string());
  if (type == "mlp") return std::make_unique<MlpModel>(MlpModel::FromJson(j));
  if (type == "logistic") return std::make_unique<LogisticModel>(LogisticModel::FromJson(j));
  throw FormatError("unknown model type '" + type + "'");
}

void SaveModel(const Model& m, const std::string& path) { io::WriteJson(m.ToJson(), path); }

std::unique_ptr<Model> LoadModel(const std::string& path) { return ModelFromJson(io::ReadJson(path)); }

double Accuracy(const Model& m, const LabeledDataset& ds) {
  const Vector p = m.PredictBatch(ds.X);
  int correct = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    correct += (p[i] > 0.5 ? 1 : 0) == ds.y[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(correct) / static_cast<double>(p.size());
}

}  // namespace gale::model
