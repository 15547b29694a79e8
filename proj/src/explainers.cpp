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

#include "gale/explainers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gale/error.hpp"

namespace gale::explain {

namespace {

void CheckDim(const model::Model& m, const Vector& x, const char* what) {
  if (static_cast<std::size_t>(x.size()) != m.input_dim()) {
    throw ShapeError(std::string(what) + " has dimension " + std::to_string(x.size()) +
                     ", model expects " + std::to_string(m.input_dim()));
  }
}

struct Solve {
  Vector beta;
  bool ridge = false;
};

// Weighted least squares min sum_s w_s (A_s beta - y_s)^2. Falls back to a
// ridge-stabilized normal-equation solve when A is rank deficient on the
// weighted rows.
Solve WeightedLeastSquares(const Eigen::MatrixXd& A, const Vector& y, const Vector& w) {
  const Vector sw = w.cwiseSqrt();
  const Eigen::MatrixXd Aw = sw.asDiagonal() * A;
  const Vector yw = sw.cwiseProduct(y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Aw);
  qr.setThreshold(1e-10);
  if (qr.rank() == A.cols()) return {qr.solve(yw), false};
  Eigen::MatrixXd normal = Aw.transpose() * Aw;
  const double lambda = 1e-8 * std::max(1.0, normal.diagonal().maxCoeff());
  normal.diagonal().array() += lambda;
  return {normal.ldlt().solve(Aw.transpose() * yw), true};
}

double WeightedSse(const Eigen::MatrixXd& A, const Vector& beta, const Vector& y, const Vector& w) {
  const Vector r = A * beta - y;
  return (w.array() * r.array().square()).sum();
}

Eigen::MatrixXd Design(const Matrix& Z, const std::vector<int>& cols) {
  Eigen::MatrixXd A(Z.rows(), static_cast<Eigen::Index>(cols.size()) + 1);
  A.col(0).setOnes();
  for (std::size_t c = 0; c < cols.size(); ++c) A.col(static_cast<Eigen::Index>(c) + 1) = Z.col(cols[c]);
  return A;
}

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double ShapleyKernel(int d, int s) {
  return (d - 1) / (Binomial(d, s) * s * (d - s));
}

}  // namespace

std::string BaselineKind::Label() const {
  switch (tag) {
    case BaselineTag::kZero: return "zero";
    case BaselineTag::kMaxDistance: return "max-distance";
    case BaselineTag::kUniform: return "uniform";
    case BaselineTag::kGaussian: {
      if (noise_scale == 1.0) return "gaussian";
      char buf[64];
      std::snprintf(buf, sizeof buf, "gaussian-%g", noise_scale);
      return buf;
    }
  }
  return "?";
}

BaselineKind ParseBaseline(const std::string& label) {
  if (label == "zero") return {BaselineTag::kZero, 1.0};
  if (label == "max-distance") return {BaselineTag::kMaxDistance, 1.0};
  if (label == "uniform") return {BaselineTag::kUniform, 1.0};
  if (label == "gaussian") return {BaselineTag::kGaussian, 1.0};
  const std::string prefix = "gaussian-";
  if (label.rfind(prefix, 0) == 0) {
    const std::string rest = label.substr(prefix.size());
    char* end = nullptr;
    const double s = std::strtod(rest.c_str(), &end);
    if (!rest.empty() && end && *end == '\0' && std::isfinite(s) && s > 0) {
      return {BaselineTag::kGaussian, s};
    }
  }
  throw ConfigError("unknown baseline '" + label +
                    "' (expected zero, max-distance, gaussian[-SCALE] or uniform)");
}

FeatureStats FeatureStats::Of(const Matrix& X) {
  if (X.rows() < 1) throw ShapeError("feature statistics need at least one row");
  FeatureStats s;
  s.mean = X.colwise().mean().transpose();
  s.stddev = ((X.rowwise() - s.mean.transpose()).array().square().colwise().mean().sqrt()).transpose();
  s.min = X.colwise().minCoeff().transpose();
  s.max = X.colwise().maxCoeff().transpose();
  return s;
}

Vector MakeBaseline(const BaselineKind& kind, const Matrix& X, const FeatureStats& stats,
                    const Vector& x, Rng& rng) {
  if (!x.allFinite()) throw RangeError("baseline instance has non-finite entries");
  if (x.size() != X.cols()) throw ShapeError("instance and feature matrix dimensions differ");
  switch (kind.tag) {
    case BaselineTag::kZero:
      return Vector::Zero(x.size());
    case BaselineTag::kMaxDistance: {
      Eigen::Index best = 0;
      double best_d = -1.0;
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double dist = (X.row(i).transpose() - x).squaredNorm();
        if (dist > best_d) {
          best_d = dist;
          best = i;
        }
      }
      return X.row(best).transpose();
    }
    case BaselineTag::kGaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      Vector b = x;
      for (Eigen::Index j = 0; j < x.size(); ++j) b[j] += kind.noise_scale * stats.stddev[j] * normal(rng);
      return b;
    }
    case BaselineTag::kUniform: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      Vector b(x.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        b[j] = stats.min[j] + unit(rng) * (stats.max[j] - stats.min[j]);
        b[j] = std::clamp(b[j], stats.min[j], stats.max[j]);
      }
      return b;
    }
  }
  throw ConfigError("unknown baseline tag");
}

Vector IntegratedGradients(const model::Model& m, const Vector& x, const Vector& baseline,
                           int steps) {
  if (steps < 1) throw ConfigError("integrated gradients needs steps >= 1");
  CheckDim(m, x, "instance");
  CheckDim(m, baseline, "baseline");
  const Vector delta = x - baseline;
  Vector total = Vector::Zero(x.size());
  for (int k = 0; k < steps; ++k) {
    const double a = (k + 0.5) / steps;
    total += m.Gradient(baseline + a * delta);
  }
  return delta.cwiseProduct(total / steps);
}

Vector GradientTimesInput(const model::Model& m, const Vector& x, const Vector& baseline) {
  CheckDim(m, x, "instance");
  CheckDim(m, baseline, "baseline");
  return (x - baseline).cwiseProduct(m.Gradient(x));
}

void LimeParams::Validate(std::size_t d) const {
  if (k < 1 || static_cast<std::size_t>(k) > d) {
    throw ConfigError("lime k must be in [1, " + std::to_string(d) + "], got " + std::to_string(k));
  }
  if (n_samples < static_cast<int>(d) + 2) {
    throw ConfigError("lime n_samples must be >= d + 2 = " + std::to_string(d + 2));
  }
  if (!std::isfinite(kernel_width)) throw ConfigError("lime kernel width must be finite");
}

double DefaultKernelWidth(const FeatureStats& stats) {
  const double d = static_cast<double>(stats.stddev.size());
  const double w = 0.75 * std::sqrt(d) * stats.stddev.mean();
  return w > 0 ? w : 1.0;
}

SurrogateResult LimeLike(const model::Model& m, const Vector& x, const FeatureStats& stats,
                         const LimeParams& params, Rng& rng) {
  CheckDim(m, x, "instance");
  const auto d = static_cast<std::size_t>(x.size());
  params.Validate(d);
  if (static_cast<std::size_t>(stats.stddev.size()) != d) throw ShapeError("feature stats dimension differs");
  const double width = params.kernel_width > 0 ? params.kernel_width : DefaultKernelWidth(stats);

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix Z(params.n_samples, static_cast<Eigen::Index>(d));
  for (int s = 0; s < params.n_samples; ++s) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      Z(s, jj) = x[jj] + stats.stddev[jj] * normal(rng);
    }
  }
  const Vector y = m.PredictBatch(Z);
  Vector w(params.n_samples);
  for (int s = 0; s < params.n_samples; ++s) {
    w[s] = std::exp(-(Z.row(s).transpose() - x).squaredNorm() / (width * width));
  }

  std::vector<int> selected;
  std::vector<bool> used(d, false);
  bool ridge = false;
  for (int step = 0; step < params.k; ++step) {
    int best = -1;
    double best_sse = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) {
      if (used[j]) continue;
      auto cols = selected;
      cols.push_back(static_cast<int>(j));
      const auto A = Design(Z, cols);
      const auto fit = WeightedLeastSquares(A, y, w);
      const double sse = WeightedSse(A, fit.beta, y, w);
      if (sse < best_sse) {
        best_sse = sse;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) best = static_cast<int>(std::find(used.begin(), used.end(), false) - used.begin());
    used[static_cast<std::size_t>(best)] = true;
    selected.push_back(best);
  }

  const auto fit = WeightedLeastSquares(Design(Z, selected), y, w);
  ridge = fit.ridge;
  SurrogateResult out{Vector::Zero(static_cast<Eigen::Index>(d)), ridge};
  for (std::size_t c = 0; c < selected.size(); ++c) {
    out.attribution[selected[c]] = fit.beta[static_cast<Eigen::Index>(c) + 1];
  }
  return out;
}

SurrogateResult KernelShapLike(const model::Model& m, const Vector& x, const Matrix& background,
                               int n_coalitions, Rng& rng) {
  CheckDim(m, x, "instance");
  const int d = static_cast<int>(x.size());
  if (background.rows() < 1) throw ShapeError("kernel shap needs a nonempty background");
  if (background.cols() != d) throw ShapeError("background and instance dimensions differ");
  if (n_coalitions < 2 * d) throw ConfigError("kernel shap needs n_coalitions >= 2d");

  const double fx = m.Predict(x);
  const double fbar = m.PredictBatch(background).mean();
  const double delta = fx - fbar;
  SurrogateResult out{Vector::Zero(d), false};
  if (d == 1) {
    out.attribution[0] = delta;
    return out;
  }

  // Coalition masks and regression weights. Empty and full coalitions enter
  // as hard constraints rather than rows.
  std::vector<std::vector<bool>> masks;
  std::vector<double> weights;
  const bool exact = d <= 12 && ((1LL << d) - 2) <= static_cast<long long>(n_coalitions);
  if (exact) {
    for (long long bits = 1; bits < (1LL << d) - 1; ++bits) {
      std::vector<bool> mask(static_cast<std::size_t>(d));
      int s = 0;
      for (int j = 0; j < d; ++j) {
        mask[static_cast<std::size_t>(j)] = (bits >> j) & 1;
        s += mask[static_cast<std::size_t>(j)];
      }
      masks.push_back(std::move(mask));
      weights.push_back(ShapleyKernel(d, s));
    }
  } else {
    std::vector<double> size_w;
    for (int s = 1; s < d; ++s) size_w.push_back((d - 1.0) / (s * (d - s)));
    std::discrete_distribution<int> size_dist(size_w.begin(), size_w.end());
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int c = 0; c < n_coalitions; ++c) {
      const int s = size_dist(rng) + 1;
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<bool> mask(static_cast<std::size_t>(d), false);
      // Partial Fisher-Yates: the first s entries form a uniform s-subset.
      for (int i = 0; i < s; ++i) {
        std::uniform_int_distribution<int> pick(i, d - 1);
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
        mask[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = true;
      }
      masks.push_back(std::move(mask));
      weights.push_back(1.0);
    }
  }

  const auto nb = background.rows();
  const auto nc = static_cast<Eigen::Index>(masks.size());
  Matrix batch(nc * nb, d);
  for (Eigen::Index c = 0; c < nc; ++c) {
    for (Eigen::Index b = 0; b < nb; ++b) {
      auto row = batch.row(c * nb + b);
      for (int j = 0; j < d; ++j) {
        row[j] = masks[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] ? x[j] : background(b, j);
      }
    }
  }
  const Vector preds = m.PredictBatch(batch);

  // phi_{d-1} = delta - sum_{j<d-1} phi_j removes the efficiency constraint.
  Eigen::MatrixXd A(nc, d - 1);
  Vector y(nc), w(nc);
  for (Eigen::Index c = 0; c < nc; ++c) {
    const auto& mask = masks[static_cast<std::size_t>(c)];
    const double last = mask[static_cast<std::size_t>(d - 1)] ? 1.0 : 0.0;
    for (int j = 0; j + 1 < d; ++j) A(c, j) = (mask[static_cast<std::size_t>(j)] ? 1.0 : 0.0) - last;
    y[c] = preds.segment(c * nb, nb).mean() - fbar - last * delta;
    w[c] = weights[static_cast<std::size_t>(c)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr((w.cwiseSqrt().asDiagonal() * A).eval());
  qr.setThreshold(1e-10);
  Vector phi;
  if (qr.rank() == A.cols()) {
    phi = qr.solve(w.cwiseSqrt().cwiseProduct(y));
  } else {
    const auto fit = WeightedLeastSquares(A, y, w);
    phi = fit.beta;
    out.ridge_fallback = true;
  }
  out.attribution.head(d - 1) = phi;
  out.attribution[d - 1] = delta - phi.sum();
  return out;
}

const char* ToString(Method m) {
  switch (m) {
    case Method::kIntegratedGradients: return "integrated-gradients";
    case Method::kGradientTimesInput: return "gradient-x-input";
    case Method::kKernelShap: return "kernel-shap";
    case Method::kLime: return "lime";
  }
  return "?";
}

Method ParseMethod(const std::string& name) {
  if (name == "integrated-gradients" || name == "ig") return Method::kIntegratedGradients;
  if (name == "gradient-x-input" || name == "gxi") return Method::kGradientTimesInput;
  if (name == "kernel-shap" || name == "shap") return Method::kKernelShap;
  if (name == "lime") return Method::kLime;
  throw ConfigError("unknown explanation method '" + name +
                    "' (expected integrated-gradients, gradient-x-input, kernel-shap or lime)");
}

std::string MethodSpec::Label() const {
  std::string s = ToString(method);
  if (method == Method::kLime) return s + "-k" + std::to_string(lime.k);
  if (baseline) s += "/" + baseline->Label();
  return s;
}

io::Json MethodSpec::ToJson() const {
  io::Json j;
  j["method"] = ToString(method);
  j["seed"] = seed;
  if (baseline) {
    j["baseline"] = baseline->Label();
    if (baseline->tag == BaselineTag::kGaussian) j["noise_scale"] = baseline->noise_scale;
  }
  switch (method) {
    case Method::kIntegratedGradients:
      j["steps"] = steps;
      break;
    case Method::kGradientTimesInput:
      break;
    case Method::kKernelShap:
      j["n_coalitions"] = n_coalitions;
      if (!baseline) j["background_size"] = background_size;
      break;
    case Method::kLime:
      j["k"] = lime.k;
      j["n_samples"] = lime.n_samples;
      break;
  }
  return j;
}

void MethodSpec::Validate(std::size_t d) const {
  switch (method) {
    case Method::kIntegratedGradients:
      if (steps < 1) throw ConfigError("integrated gradients needs steps >= 1");
      [[fallthrough]];
    case Method::kGradientTimesInput:
      if (baseline_draws < 1) throw ConfigError("baseline_draws must be >= 1");
      if (!baseline) throw ConfigError(std::string(ToString(method)) + " needs a baseline");
      break;
    case Method::kKernelShap:
      if (n_coalitions < 2 * static_cast<int>(d)) throw ConfigError("kernel shap needs n_coalitions >= 2d");
      if (!baseline && background_size < 1) throw ConfigError("kernel shap needs background_size >= 1");
      break;
    case Method::kLime:
      lime.Validate(d);
      break;
  }
}

namespace {

struct Context {
  const MethodSpec& spec;
  const model::Model& model;
  const Matrix& X;
  FeatureStats stats;
  Matrix background;  // kernel shap without a baseline
  double kernel_width = 0.0;
};

Context MakeContext(const MethodSpec& spec, const model::Model& m, const Matrix& X) {
  if (X.rows() < 1) throw ShapeError("cannot explain an empty dataset");
  if (static_cast<std::size_t>(X.cols()) != m.input_dim()) {
    throw ShapeError("dataset has " + std::to_string(X.cols()) + " features, model expects " +
                     std::to_string(m.input_dim()));
  }
  spec.Validate(static_cast<std::size_t>(X.cols()));
  Context ctx{spec, m, X, FeatureStats::Of(X), {}, 0.0};
  if (spec.method == Method::kLime) {
    ctx.kernel_width = spec.lime.kernel_width > 0 ? spec.lime.kernel_width : DefaultKernelWidth(ctx.stats);
  }
  if (spec.method == Method::kKernelShap && !spec.baseline) {
    const auto nb = std::min<Eigen::Index>(spec.background_size, X.rows());
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(X.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng = StreamRng(spec.seed, {0xbac6});
    std::shuffle(idx.begin(), idx.end(), rng);
    ctx.background.resize(nb, X.cols());
    for (Eigen::Index b = 0; b < nb; ++b) ctx.background.row(b) = X.row(idx[static_cast<std::size_t>(b)]);
  }
  return ctx;
}

bool ExplainRow(const Context& ctx, Eigen::Index i, Eigen::Ref<Eigen::RowVectorXd> out) {
  const auto& spec = ctx.spec;
  Rng rng = StreamRng(spec.seed, {static_cast<std::uint64_t>(i)});
  const Vector x = ctx.X.row(i).transpose();
  if (spec.method == Method::kLime) {
    LimeParams p = spec.lime;
    p.kernel_width = ctx.kernel_width;
    const auto r = LimeLike(ctx.model, x, ctx.stats, p, rng);
    out = r.attribution.transpose();
    return r.ridge_fallback;
  }
  if (spec.method == Method::kKernelShap && !spec.baseline) {
    const auto r = KernelShapLike(ctx.model, x, ctx.background, spec.n_coalitions, rng);
    out = r.attribution.transpose();
    return r.ridge_fallback;
  }
  const bool stochastic = spec.baseline->tag == BaselineTag::kGaussian ||
                          spec.baseline->tag == BaselineTag::kUniform;
  const int draws = stochastic ? spec.baseline_draws : 1;
  Vector total = Vector::Zero(x.size());
  bool ridge = false;
  for (int k = 0; k < draws; ++k) {
    const Vector baseline = MakeBaseline(*spec.baseline, ctx.X, ctx.stats, x, rng);
    switch (spec.method) {
      case Method::kIntegratedGradients:
        total += IntegratedGradients(ctx.model, x, baseline, spec.steps);
        break;
      case Method::kGradientTimesInput:
        total += GradientTimesInput(ctx.model, x, baseline);
        break;
      default: {
        const auto r = KernelShapLike(ctx.model, x, Matrix(baseline.transpose()), spec.n_coalitions, rng);
        total += r.attribution;
        ridge = ridge || r.ridge_fallback;
      }
    }
  }
  out = (total / draws).transpose();
  return ridge;
}

Explanation Finish(const Context& ctx, Matrix values, const std::vector<char>& ridge,
                   const std::vector<std::string>& names) {
  Explanation e;
  e.matrix.values = std::move(values);
  e.matrix.column_names = names;
  e.lens = ctx.model.PredictProba(ctx.X);
  e.metadata = ctx.spec.ToJson();
  e.metadata["label"] = ctx.spec.Label();
  e.metadata["rows"] = ctx.X.rows();
  e.metadata["cols"] = ctx.X.cols();
  if (ctx.spec.method == Method::kLime) e.metadata["kernel_width"] = ctx.kernel_width;
  e.metadata["ridge_fallbacks"] = std::count(ridge.begin(), ridge.end(), 1);
  return e;
}

}  // namespace

Explanation ExplainDataset(const MethodSpec& spec, const model::Model& m, const Matrix& X,
                           int jobs) {
  const auto ctx = MakeContext(spec, m, X);
  const Eigen::Index n = X.rows();
  Matrix values(n, X.cols());
  std::vector<char> ridge(static_cast<std::size_t>(n), 0);
  // Exceptions cannot cross the parallel region; the first message is rethrown.
  std::string failure;
  int failed = 0;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      ridge[static_cast<std::size_t>(i)] = ExplainRow(ctx, i, values.row(i));
    } catch (const std::exception& ex) {
#pragma omp critical(gale_explain_failure)
      if (!failed++) failure = ex.what();
    }
  }
  if (failed) throw Error("explanation failed: " + failure);
  return Finish(ctx, std::move(values), ridge, {});
}

namespace reference {

Explanation ExplainDataset(const MethodSpec& spec, const model::Model& m, const Matrix& X) {
  const auto ctx = MakeContext(spec, m, X);
  Matrix values(X.rows(), X.cols());
  std::vector<char> ridge(static_cast<std::size_t>(X.rows()), 0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    ridge[static_cast<std::size_t>(i)] = ExplainRow(ctx, i, values.row(i));
  }
  return Finish(ctx, std::move(values), ridge, {});
}

}  // namespace reference

}  // namespace gale::explain
