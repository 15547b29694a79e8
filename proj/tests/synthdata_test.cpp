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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gale/error.hpp"
#include "gale/synthdata.hpp"

namespace gale::synth {
namespace {

SynthSpec Spec(Kind kind, int n, std::uint64_t seed) {
  SynthSpec s;
  s.kind = kind;
  s.n = n;
  s.seed = seed;
  return s;
}

int Positives(const LabeledDataset& ds) { return std::accumulate(ds.y.begin(), ds.y.end(), 0); }

TEST(Synth, ToyIndependentShapeAndBalance) {
  const auto ds = Generate(Spec(Kind::kToyIndependent, 300, 7));
  EXPECT_EQ(ds.rows(), 300u);
  EXPECT_EQ(ds.cols(), 6u);
  EXPECT_EQ(Positives(ds), 150);
  EXPECT_EQ(ds.feature_names.front(), "x1");
}

TEST(Synth, ToyLabelsFollowScoreMedian) {
  for (Kind k : {Kind::kToyIndependent, Kind::kToyFlip, Kind::kToyInteraction}) {
    const auto ds = Generate(Spec(k, 101, 3));
    std::vector<double> scores;
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) scores.push_back(ToyScore(k, ds.X.row(i).data()));
    auto sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[50];
    for (std::size_t i = 0; i < scores.size(); ++i) EXPECT_EQ(ds.y[i], scores[i] > median ? 1 : 0);
  }
}

TEST(Synth, ToyScoresMatchFormulas) {
  const double x[6] = {1.0, 2.0, -1.0, 0.5, 9.0, 9.0};
  EXPECT_DOUBLE_EQ(ToyScore(Kind::kToyIndependent, x), 2.5);
  EXPECT_DOUBLE_EQ(ToyScore(Kind::kToyFlip, x), 1.0 - 2.0 - 1.0 - 0.5);
  EXPECT_DOUBLE_EQ(ToyScore(Kind::kToyInteraction, x), 2.5 + 10.0 * (2.0 - 1.0 + 0.5));
  EXPECT_THROW(ToyScore(Kind::kCircles, x), ConfigError);
}

TEST(Synth, ToyKindsShareFeatures) {
  const auto a = Generate(Spec(Kind::kToyIndependent, 50, 9));
  const auto b = Generate(Spec(Kind::kToyFlip, 50, 9));
  const auto c = Generate(Spec(Kind::kToyInteraction, 50, 9));
  EXPECT_TRUE((a.X.array() == b.X.array()).all());
  EXPECT_TRUE((a.X.array() == c.X.array()).all());
  EXPECT_NE(a.y, b.y);
}

TEST(Synth, ZeroLabelVanishingRateGivesNoPositives) {
  auto s = Spec(Kind::kZeroLabel, 100, 1);
  s.zero_rate = 1e-12;
  const auto ds = Generate(s);
  EXPECT_EQ(Positives(ds), 0);
  EXPECT_DOUBLE_EQ(LabelRate(ds), 0.0);
}

TEST(Synth, ZeroLabelPositivesContainExactZero) {
  auto s = Spec(Kind::kZeroLabel, 400, 2);
  s.zero_rate = 0.15;
  const auto ds = Generate(s);
  ASSERT_EQ(ds.cols(), 5u);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    const bool has_zero = (ds.X.row(i).array() == 0.0).any();
    EXPECT_EQ(ds.y[static_cast<std::size_t>(i)], has_zero ? 1 : 0);
    EXPECT_TRUE((ds.X.row(i).array() >= 0.0).all());
  }
}

TEST(Synth, ZeroLabelRateMatchesBernoulliClosedForm) {
  // P(label 1) = 1 - (1 - p)^d; check within a 3-sigma binomial band.
  for (double p : {0.05, 0.1, 0.2}) {
    auto s = Spec(Kind::kZeroLabel, 4000, 17);
    s.zero_rate = p;
    const auto ds = Generate(s);
    const double expected = 1.0 - std::pow(1.0 - p, 5);
    const double sigma = std::sqrt(expected * (1.0 - expected) / 4000.0);
    EXPECT_NEAR(LabelRate(ds), expected, 3.0 * sigma) << "p=" << p;
  }
}

TEST(Synth, LabelRateExamples) {
  LabeledDataset ds;
  ds.X = Matrix::Zero(4, 1);
  ds.y = {0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(LabelRate(ds), 0.0);
  ds.y = {0, 1, 1, 0};
  EXPECT_DOUBLE_EQ(LabelRate(ds), 0.5);
}

TEST(Synth, TwoDimensionalKindsAreBalanced) {
  for (Kind k : {Kind::kCircles, Kind::kSpirals, Kind::kCorners, Kind::kLinear}) {
    const auto ds = Generate(Spec(k, 200, 4));
    EXPECT_EQ(ds.cols(), 2u) << ToString(k);
    EXPECT_EQ(Positives(ds), 100) << ToString(k);
  }
}

TEST(Synth, CirclesRadii) {
  auto s = Spec(Kind::kCircles, 100, 5);
  s.noise = 0.0;
  const auto ds = Generate(s);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    const double r = ds.X.row(i).norm();
    EXPECT_NEAR(r, ds.y[static_cast<std::size_t>(i)] ? 0.5 : 1.0, 1e-12);
  }
}

TEST(Synth, CornersXorAssignment) {
  auto s = Spec(Kind::kCorners, 100, 5);
  s.noise = 0.0;
  const auto ds = Generate(s);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    const bool differ = (ds.X(i, 0) > 0) != (ds.X(i, 1) > 0);
    EXPECT_EQ(ds.y[static_cast<std::size_t>(i)], differ ? 1 : 0);
  }
}

TEST(Synth, Determinism) {
  for (Kind k : {Kind::kCircles, Kind::kSpirals, Kind::kCorners, Kind::kLinear, Kind::kToyIndependent,
                 Kind::kZeroLabel}) {
    const auto a = Generate(Spec(k, 60, 11));
    const auto b = Generate(Spec(k, 60, 11));
    const auto c = Generate(Spec(k, 60, 12));
    EXPECT_TRUE((a.X.array() == b.X.array()).all());
    EXPECT_EQ(a.y, b.y);
    EXPECT_FALSE((a.X.array() == c.X.array()).all()) << ToString(k);
  }
}

TEST(Synth, KindNamesRoundTrip) {
  for (Kind k : {Kind::kCircles, Kind::kSpirals, Kind::kCorners, Kind::kLinear, Kind::kToyIndependent,
                 Kind::kToyFlip, Kind::kToyInteraction, Kind::kZeroLabel}) {
    EXPECT_EQ(ParseKind(ToString(k)), k);
  }
  EXPECT_THROW(ParseKind("moons"), ConfigError);
}

TEST(Synth, SpecValidation) {
  auto s = Spec(Kind::kCircles, 9, 1);
  EXPECT_THROW(Generate(s), ConfigError);
  s.n = 20;
  s.noise = -0.1;
  EXPECT_THROW(Generate(s), ConfigError);
  s = Spec(Kind::kZeroLabel, 20, 1);
  s.zero_rate = 1.0;
  EXPECT_THROW(Generate(s), ConfigError);
}

}  // namespace
}  // namespace gale::synth
