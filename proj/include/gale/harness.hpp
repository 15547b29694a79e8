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
#include <vector>

#include "gale/classifier.hpp"
#include "gale/dataio.hpp"
#include "gale/explainers.hpp"
#include "gale/synthdata.hpp"
#include "gale/tuning.hpp"
#include "gale/types.hpp"

// End-to-end experiment recipes. Each recipe trains a model, explains it,
// tunes a Mapper per explanation table, compares the resulting diagrams and
// optionally writes an experiment directory:
//
//   report.json        inputs, configuration, summary, artifact list
//   matrices/*.csv     distance matrices
//   graphs/*.json      Mapper graphs at the selected parameters
//   diagrams/*.json    extended persistence diagrams
//
// Everything written is a function of the inputs and seeds; wall-clock time is
// kept in memory only so re-runs produce byte-identical directories.
namespace gale::harness {

struct HarnessConfig {
  tuning::ParamGrid grid = tuning::ParamGrid::Default();
  int bootstrap_iterations = 100;
  double alpha = 0.05;
  tuning::SelectionRule rule = tuning::SelectionRule::kLexicographic;
  int component_cap = 1;
  mapper::CoverAnchor anchor = mapper::CoverAnchor::kObserved;
  // Lighter than the model defaults: a fully fitted network saturates its
  // probabilities at 0 and 1, which leaves the lens nothing to cover.
  model::TrainConfig train{200, 0.01, 0.9, 0, 0};
  int n = 100;           // rows per generated dataset
  int lime_samples = 50;  // neighborhood size
  int shap_coalitions = 256;
  int ig_steps = 64;
  int baseline_draws = 1;  // averaged draws for gaussian and uniform baselines
  int jobs = 1;
  std::string out_dir;  // empty: nothing is written

  void Validate() const;
  io::Json ToJson() const;
};

template <typename T>
struct Named {
  std::string name;
  T value;
};

struct ExperimentReport {
  std::string id;
  io::Json inputs;
  io::Json summary;
  std::vector<std::string> skipped;  // "<item>: <reason>"
  std::vector<Named<MapperGraph>> graphs;
  std::vector<Named<PersistenceDiagram>> diagrams;
  std::vector<Named<DistanceMatrix>> matrices;
  std::vector<std::string> artifacts;  // paths relative to the experiment directory
  double wall_clock_seconds = 0.0;

  // Throws Error when no artifact of that name exists.
  const DistanceMatrix& Matrix(const std::string& name) const;
  const PersistenceDiagram& Diagram(const std::string& name) const;
  io::Json ToJson() const;
};

// Zero-label data, 3 methods x 5 baselines, mean 15 x 15 matrix.
//   summary.row_mean_offdiag[label], summary.datasets_used
ExperimentReport RunBaselineComparison(int n_datasets, std::uint64_t seed,
                                       const HarnessConfig& cfg);

// Labels of the baseline-comparison matrix in their fixed order.
std::vector<std::string> BaselineComparisonLabels();

struct ExternalTable {
  std::string label;
  ExplanationMatrix table;
};

struct ConsensusInput {
  std::string name;
  LabeledDataset data;
  std::vector<ExternalTable> external;  // extra explanation tables, same rows
};

// LIME-like vs kernel-SHAP-like (plus external tables) per dataset.
//   summary.datasets[name].matrix, summary.datasets[name].lime_vs_shap
ExperimentReport RunMethodConsensus(const std::vector<ConsensusInput>& inputs,
                                    std::uint64_t seed, const HarnessConfig& cfg);

// Greedy-tuned vs fixed (r=15, g=0.3, t=0.3) Mapper over `runs` LIME-like
// explanation tables that differ only in the explainer seed (all identical
// when `same_explainer_seed`).
//   summary.{greedy,fixed}.{avg_row_sum,avg_components}
ExperimentReport RunStabilityBenchmark(const synth::SynthSpec& data, int runs,
                                       std::uint64_t seed, const HarnessConfig& cfg,
                                       bool same_explainer_seed = false);

// LIME-like tables keeping k features for each k in `ks`, all drawn from the
// same explainer seed.
//   summary.row_sums[k]
ExperimentReport RunExplainerSweep(const synth::SynthSpec& data, const std::vector<int>& ks,
                                   std::uint64_t seed, const HarnessConfig& cfg);

// Reloads every artifact listed in report.json under `dir` and compares it
// with the in-memory report; throws FormatError on the first mismatch.
void AuditExperimentDir(const ExperimentReport& report, const std::string& dir);

// Named recipes used by the command line: "baseline-comparison",
// "method-consensus", "stability", "explainer-sweep".
std::vector<std::string> RecipeNames();
ExperimentReport RunRecipe(const std::string& name, std::uint64_t seed, const HarnessConfig& cfg);

}  // namespace gale::harness
