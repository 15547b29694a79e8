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
#include <string>

#include "gale/types.hpp"

namespace gale::synth {

enum class Kind {
  kCircles,
  kSpirals,
  kCorners,
  kLinear,
  kToyIndependent,
  kToyFlip,
  kToyInteraction,
  kZeroLabel,
};

const char* ToString(Kind k);
Kind ParseKind(const std::string& name);  // throws ConfigError

struct SynthSpec {
  Kind kind = Kind::kCircles;
  int n = 100;
  double noise = 0.1;      // standard deviation, 2-D kinds only
  int d = 5;               // feature count, zero-label only
  double zero_rate = 0.1;  // per-entry probability of an exact zero, zero-label only
  std::uint64_t seed = 0;

  // Throws ConfigError unless n >= 10, noise >= 0, d >= 1, 0 < zero_rate < 1.
  void Validate() const;
};

// Deterministic given the seed.
//  circles          two concentric rings (radii 1 and 0.5), inner ring is class 1
//  spirals          two interleaved arms, one per class
//  corners          Gaussian blobs at (+-1, +-1), class 1 where the signs differ
//  linear           Gaussian blobs at (-1, 0) and (1, 0)
//  toy-*            six independent standard normal features; the label is 1
//                   when the score exceeds the sample median
//  zero-label       entries are 0 with probability zero_rate, otherwise k/10 for
//                   k uniform in 1..100; the label is 1 iff a row has a zero
// The toy kinds draw the same feature matrix for the same seed.
LabeledDataset Generate(const SynthSpec& spec);

// Continuous toy score for one row (kinds kToy* only).
double ToyScore(Kind kind, const double* row);

double LabelRate(const LabeledDataset& ds);

}  // namespace gale::synth
