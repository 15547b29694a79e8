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

#include "gale/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gale/error.hpp"
#include "gale/rng.hpp"

namespace gale::synth {

namespace {

constexpr int kToyFeatures = 6;

LabeledDataset TwoD(int n) {
  LabeledDataset ds;
  ds.X.resize(n, 2);
  ds.y.resize(static_cast<std::size_t>(n));
  ds.feature_names = {"x0", "x1"};
  return ds;
}

// Class of row i when the sample is split into two balanced halves.
int HalfClass(int i, int n) { return i < (n + 1) / 2 ? 0 : 1; }

LabeledDataset Circles(const SynthSpec& s, Rng& rng) {
  auto ds = TwoD(s.n);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int i = 0; i < s.n; ++i) {
    const int c = HalfClass(i, s.n);
    const double r = c == 0 ? 1.0 : 0.5;
    const double a = angle(rng);
    ds.X(i, 0) = r * std::cos(a) + s.noise * jitter(rng);
    ds.X(i, 1) = r * std::sin(a) + s.noise * jitter(rng);
    ds.y[static_cast<std::size_t>(i)] = c;
  }
  return ds;
}

LabeledDataset Spirals(const SynthSpec& s, Rng& rng) {
  auto ds = TwoD(s.n);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int i = 0; i < s.n; ++i) {
    const int c = HalfClass(i, s.n);
    // Radius grows with the swept angle; the second arm is rotated by pi.
    const double t = 0.15 + 0.85 * std::sqrt(pos(rng));
    const double a = 3.0 * std::numbers::pi * t + c * std::numbers::pi;
    ds.X(i, 0) = t * std::cos(a) + s.noise * jitter(rng);
    ds.X(i, 1) = t * std::sin(a) + s.noise * jitter(rng);
    ds.y[static_cast<std::size_t>(i)] = c;
  }
  return ds;
}

LabeledDataset Corners(const SynthSpec& s, Rng& rng) {
  auto ds = TwoD(s.n);
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int i = 0; i < s.n; ++i) {
    const int corner = i % 4;
    const double sx = (corner & 1) ? 1.0 : -1.0;
    const double sy = (corner & 2) ? 1.0 : -1.0;
    ds.X(i, 0) = sx + s.noise * jitter(rng);
    ds.X(i, 1) = sy + s.noise * jitter(rng);
    ds.y[static_cast<std::size_t>(i)] = sx != sy ? 1 : 0;
  }
  return ds;
}

LabeledDataset Linear(const SynthSpec& s, Rng& rng) {
  auto ds = TwoD(s.n);
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int i = 0; i < s.n; ++i) {
    const int c = HalfClass(i, s.n);
    ds.X(i, 0) = (c == 0 ? -1.0 : 1.0) + s.noise * jitter(rng);
    ds.X(i, 1) = s.noise * jitter(rng);
    ds.y[static_cast<std::size_t>(i)] = c;
  }
  return ds;
}

LabeledDataset Toy(const SynthSpec& s, Rng& rng) {
  LabeledDataset ds;
  ds.X.resize(s.n, kToyFeatures);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < kToyFeatures; ++j) ds.X(i, j) = normal(rng);
  }
  for (int j = 0; j < kToyFeatures; ++j) ds.feature_names.push_back("x" + std::to_string(j + 1));
  std::vector<double> score(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) score[static_cast<std::size_t>(i)] = ToyScore(s.kind, ds.X.row(i).data());
  std::vector<double> sorted = score;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  ds.y.resize(score.size());
  for (std::size_t i = 0; i < score.size(); ++i) ds.y[i] = score[i] > median ? 1 : 0;
  return ds;
}

LabeledDataset ZeroLabel(const SynthSpec& s, Rng& rng) {
  LabeledDataset ds;
  ds.X.resize(s.n, s.d);
  ds.y.assign(static_cast<std::size_t>(s.n), 0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> grid(1, 100);
  for (int j = 0; j < s.d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.d; ++j) {
      const bool zero = coin(rng) < s.zero_rate;
      const int k = grid(rng);
      ds.X(i, j) = zero ? 0.0 : k / 10.0;
      if (zero) ds.y[static_cast<std::size_t>(i)] = 1;
    }
  }
  return ds;
}

}  // namespace

const char* ToString(Kind k) {
  switch (k) {
    case Kind::kCircles: return "circles";
    case Kind::kSpirals: return "spirals";
    case Kind::kCorners: return "corners";
    case Kind::kLinear: return "linear";
    case Kind::kToyIndependent: return "toy-independent";
    case Kind::kToyFlip: return "toy-flip";
    case Kind::kToyInteraction: return "toy-interaction";
    case Kind::kZeroLabel: return "zero-label";
  }
  return "?";
}

Kind ParseKind(const std::string& name) {
  for (Kind k : {Kind::kCircles, Kind::kSpirals, Kind::kCorners, Kind::kLinear,
                 Kind::kToyIndependent, Kind::kToyFlip, Kind::kToyInteraction, Kind::kZeroLabel}) {
    if (name == ToString(k)) return k;
  }
  throw ConfigError("unknown dataset kind '" + name + "'");
}

void SynthSpec::Validate() const {
  if (n < 10) throw ConfigError("synthetic datasets need n >= 10");
  if (!(noise >= 0.0)) throw ConfigError("noise must be >= 0");
  if (kind == Kind::kZeroLabel) {
    if (d < 1) throw ConfigError("zero-label data needs d >= 1");
    if (!(zero_rate > 0.0 && zero_rate < 1.0)) throw ConfigError("zero_rate must lie in (0, 1)");
  }
}

double ToyScore(Kind kind, const double* x) {
  switch (kind) {
    case Kind::kToyIndependent:
      return x[0] + x[1] + x[2] + x[3];
    case Kind::kToyFlip:
      return x[0] - x[1] + x[2] - x[3];
    case Kind::kToyInteraction: {
      double s = x[0] + x[1] + x[2] + x[3];
      for (int j = 1; j < 4; ++j) s += 10.0 * x[0] * x[j];
      return s;
    }
    default:
      throw ConfigError("toy score requested for a non-toy kind");
  }
}

LabeledDataset Generate(const SynthSpec& spec) {
  spec.Validate();
  Rng rng(StreamSeed(spec.seed, {0x5e7}));
  LabeledDataset ds;
  switch (spec.kind) {
    case Kind::kCircles: ds = Circles(spec, rng); break;
    case Kind::kSpirals: ds = Spirals(spec, rng); break;
    case Kind::kCorners: ds = Corners(spec, rng); break;
    case Kind::kLinear: ds = Linear(spec, rng); break;
    case Kind::kToyIndependent:
    case Kind::kToyFlip:
    case Kind::kToyInteraction: ds = Toy(spec, rng); break;
    case Kind::kZeroLabel: ds = ZeroLabel(spec, rng); break;
  }
  ds.Validate(/*require_both_classes=*/false);
  return ds;
}

double LabelRate(const LabeledDataset& ds) {
  if (ds.y.empty()) return 0.0;
  double s = 0.0;
  for (int v : ds.y) s += v;
  return s / static_cast<double>(ds.y.size());
}

}  // namespace gale::synth
