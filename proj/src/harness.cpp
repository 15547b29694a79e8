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

#include "gale/harness.hpp"

#include <chrono>
#include <filesystem>
#include <numeric>

#include "gale/diagdist.hpp"
#include "gale/error.hpp"
#include "gale/mapper.hpp"
#include "gale/persistence.hpp"
#include "gale/rng.hpp"

namespace gale::harness {

namespace fs = std::filesystem;

namespace {

// Seed streams, one tag per pipeline stage.
enum Stage : std::uint64_t { kData = 1, kTrain = 2, kExplain = 3, kTune = 4 };

struct Tuned {
  mapper::MapperParams params;
  MapperGraph graph;
  PersistenceDiagram diagram;
  int components = 0;
};

Tuned Tune(const ExplanationMatrix& e, const LensVector& lens, const HarnessConfig& cfg,
           std::uint64_t seed) {
  tuning::BootstrapOptions opt;
  opt.iterations = cfg.bootstrap_iterations;
  opt.alpha = cfg.alpha;
  opt.seed = seed;
  opt.jobs = cfg.jobs;
  opt.anchor = cfg.anchor;
  opt.rule = cfg.rule;
  opt.component_cap = cfg.component_cap;
  const auto result = tuning::GridSearch(e, lens, cfg.grid, opt);
  Tuned t;
  t.params = result.selected;
  t.graph = mapper::BuildMapper(e, lens, t.params, {cfg.anchor, cfg.jobs});
  t.diagram = persistence::ExtendedPersistence(t.graph);
  t.components = mapper::ConnectedComponents(t.graph).count;
  return t;
}

Tuned Fixed(const ExplanationMatrix& e, const LensVector& lens, const mapper::MapperParams& p,
            const HarnessConfig& cfg) {
  Tuned t;
  t.params = p;
  t.graph = mapper::BuildMapper(e, lens, p, {cfg.anchor, cfg.jobs});
  t.diagram = persistence::ExtendedPersistence(t.graph);
  t.components = mapper::ConnectedComponents(t.graph).count;
  return t;
}

io::Json ParamsJson(const mapper::MapperParams& p) {
  return {{"resolution", p.resolution}, {"gain", p.gain}, {"threshold_fraction", p.threshold_fraction}};
}

DistanceMatrix Pairwise(const std::vector<std::string>& labels,
                        const std::vector<PersistenceDiagram>& diagrams, int jobs) {
  if (diagrams.size() == 1) return {labels, gale::Matrix::Zero(1, 1)};
  return diagdist::PairwiseMatrix(labels, diagrams, {false, jobs});
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string FileStem(std::string name) {
  for (char& c : name) {
    if (c == '/' || c == ' ' || c == '\\') c = '_';
  }
  return name;
}

std::unique_ptr<model::MlpModel> Train(const LabeledDataset& ds, const HarnessConfig& cfg,
                                       std::uint64_t seed) {
  auto tc = cfg.train;
  tc.seed = seed;
  return std::make_unique<model::MlpModel>(model::TrainMlp(ds, tc));
}

using Clock = std::chrono::steady_clock;

void Finish(ExperimentReport& r, const HarnessConfig& cfg, Clock::time_point start) {
  for (const auto& g : r.graphs) r.artifacts.push_back("graphs/" + FileStem(g.name) + ".json");
  for (const auto& d : r.diagrams) r.artifacts.push_back("diagrams/" + FileStem(d.name) + ".json");
  for (const auto& m : r.matrices) r.artifacts.push_back("matrices/" + FileStem(m.name) + ".csv");
  if (!cfg.out_dir.empty()) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    for (const char* sub : {"graphs", "diagrams", "matrices"}) {
      fs::create_directories(dir / sub, ec);
      if (ec) throw IoError("cannot create " + (dir / sub).string() + ": " + ec.message());
    }
    for (const auto& g : r.graphs) {
      io::SaveGraph(g.value, io::GraphFormat::kJson, (dir / "graphs" / (FileStem(g.name) + ".json")).string());
    }
    for (const auto& d : r.diagrams) {
      io::SaveDiagram(d.value, (dir / "diagrams" / (FileStem(d.name) + ".json")).string());
    }
    for (const auto& m : r.matrices) {
      io::SaveDistanceMatrix(m.value, (dir / "matrices" / (FileStem(m.name) + ".csv")).string());
    }
    io::WriteJson(r.ToJson(), (dir / "report.json").string());
    AuditExperimentDir(r, cfg.out_dir);
  }
  r.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
const T& Find(const std::vector<Named<T>>& items, const std::string& name, const char* what) {
  for (const auto& it : items) {
    if (it.name == name) return it.value;
  }
  throw Error(std::string("no ") + what + " named '" + name + "' in report");
}

const std::vector<explain::BaselineKind>& Baselines() {
  static const std::vector<explain::BaselineKind> kinds = {
      {explain::BaselineTag::kZero, 1.0},     {explain::BaselineTag::kMaxDistance, 1.0},
      {explain::BaselineTag::kGaussian, 1.0}, {explain::BaselineTag::kGaussian, 0.5},
      {explain::BaselineTag::kUniform, 1.0},
  };
  return kinds;
}

constexpr explain::Method kBaselineMethods[] = {explain::Method::kIntegratedGradients,
                                                explain::Method::kGradientTimesInput,
                                                explain::Method::kKernelShap};

}  // namespace

void HarnessConfig::Validate() const {
  grid.Validate();
  tuning::BootstrapOptions opt;
  opt.iterations = bootstrap_iterations;
  opt.alpha = alpha;
  opt.Validate();
  train.Validate();
  if (n < 10) throw ConfigError("harness datasets need n >= 10");
  if (lime_samples < 1 || shap_coalitions < 1 || ig_steps < 1 || baseline_draws < 1) {
    throw ConfigError("explainer sample counts must be positive");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

io::Json HarnessConfig::ToJson() const {
  return {
      {"grid", {{"resolutions", grid.resolutions}, {"gains", grid.gains},
                {"threshold_fractions", grid.threshold_fractions}}},
      {"bootstrap_iterations", bootstrap_iterations},
      {"alpha", alpha},
      {"rule", tuning::ToString(rule)},
      {"component_cap", component_cap},
      {"cover_range", anchor == mapper::CoverAnchor::kUnit ? "unit" : "observed"},
      {"train", {{"epochs", train.epochs}, {"learning_rate", train.learning_rate},
                 {"momentum", train.momentum}, {"batch_size", train.batch_size}}},
      {"n", n},
      {"lime_samples", lime_samples},
      {"shap_coalitions", shap_coalitions},
      {"ig_steps", ig_steps},
      {"baseline_draws", baseline_draws},
  };
}

const DistanceMatrix& ExperimentReport::Matrix(const std::string& name) const {
  return Find(matrices, name, "matrix");
}

const PersistenceDiagram& ExperimentReport::Diagram(const std::string& name) const {
  return Find(diagrams, name, "diagram");
}

io::Json ExperimentReport::ToJson() const {
  return {{"experiment", id}, {"inputs", inputs},      {"summary", summary},
          {"skipped", skipped}, {"artifacts", artifacts}};
}

std::vector<std::string> BaselineComparisonLabels() {
  std::vector<std::string> labels;
  for (auto m : kBaselineMethods) {
    for (const auto& b : Baselines()) {
      explain::MethodSpec spec;
      spec.method = m;
      spec.baseline = b;
      labels.push_back(spec.Label());
    }
  }
  return labels;
}

ExperimentReport RunBaselineComparison(int n_datasets, std::uint64_t seed,
                                       const HarnessConfig& cfg) {
  cfg.Validate();
  if (n_datasets < 1) throw ConfigError("baseline comparison needs at least one dataset");
  const auto start = Clock::now();
  ExperimentReport r;
  r.id = "baseline-comparison";
  r.inputs = {{"seed", seed}, {"n_datasets", n_datasets}, {"config", cfg.ToJson()}};
  const auto labels = BaselineComparisonLabels();
  std::vector<DistanceMatrix> per_dataset;
  for (int ds = 0; ds < n_datasets; ++ds) {
    const auto uds = static_cast<std::uint64_t>(ds);
    synth::SynthSpec spec;
    spec.kind = synth::Kind::kZeroLabel;
    spec.n = cfg.n;
    spec.seed = StreamSeed(seed, {kData, uds});
    // Datasets differ in their positive rate: zero rates 0.04 .. 0.2.
    spec.zero_rate = n_datasets == 1 ? 0.1 : 0.04 + 0.16 * ds / (n_datasets - 1);
    const auto data = synth::Generate(spec);
    const std::string tag = "ds" + std::to_string(ds);
    std::unique_ptr<model::MlpModel> model;
    try {
      data.Validate();
      model = Train(data, cfg, StreamSeed(seed, {kTrain, uds}));
    } catch (const Error& e) {
      r.skipped.push_back(tag + ": " + e.what());
      continue;
    }
    std::vector<PersistenceDiagram> diagrams;
    std::size_t table = 0;
    for (auto m : kBaselineMethods) {
      for (const auto& b : Baselines()) {
        explain::MethodSpec ms;
        ms.method = m;
        ms.baseline = b;
        ms.steps = cfg.ig_steps;
        ms.baseline_draws = cfg.baseline_draws;
        ms.n_coalitions = cfg.shap_coalitions;
        ms.seed = StreamSeed(seed, {kExplain, uds, table});
        const auto ex = explain::ExplainDataset(ms, *model, data.X, cfg.jobs);
        const auto t = Tune(ex.matrix, ex.lens, cfg, StreamSeed(seed, {kTune, uds, table}));
        const std::string name = tag + "_" + labels[table];
        r.graphs.push_back({name, t.graph});
        r.diagrams.push_back({name, t.diagram});
        r.summary["selected"][name] = ParamsJson(t.params);
        diagrams.push_back(t.diagram);
        ++table;
      }
    }
    per_dataset.push_back(Pairwise(labels, diagrams, cfg.jobs));
    r.matrices.push_back({tag, per_dataset.back()});
  }
  if (per_dataset.empty()) throw Error("baseline comparison: every dataset was skipped");
  const auto mean = per_dataset.size() == 1 ? per_dataset.front() : diagdist::MeanMatrices(per_dataset);
  r.matrices.push_back({"mean", mean});
  const auto sums = diagdist::RowSums(mean);
  const double denom = static_cast<double>(labels.size() - 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    r.summary["row_mean_offdiag"][labels[i]] = sums[i] / denom;
  }
  r.summary["datasets_used"] = per_dataset.size();
  Finish(r, cfg, start);
  return r;
}

ExperimentReport RunMethodConsensus(const std::vector<ConsensusInput>& inputs,
                                    std::uint64_t seed, const HarnessConfig& cfg) {
  cfg.Validate();
  if (inputs.empty()) throw ConfigError("method consensus needs at least one dataset");
  const auto start = Clock::now();
  ExperimentReport r;
  r.id = "method-consensus";
  r.inputs = {{"seed", seed}, {"config", cfg.ToJson()}};
  for (std::size_t di = 0; di < inputs.size(); ++di) {
    const auto& in = inputs[di];
    r.inputs["datasets"].push_back({{"name", in.name}, {"rows", in.data.rows()}, {"cols", in.data.cols()}});
    in.data.Validate();
    for (const auto& ext : in.external) {
      if (ext.table.rows() != in.data.rows()) {
        throw ShapeError("dataset " + in.name + ": external table '" + ext.label + "' has " +
                         std::to_string(ext.table.rows()) + " rows, expected " +
                         std::to_string(in.data.rows()));
      }
    }
    const auto model = Train(in.data, cfg, StreamSeed(seed, {kTrain, di}));
    const auto d = static_cast<int>(in.data.cols());

    explain::MethodSpec lime;
    lime.method = explain::Method::kLime;
    lime.lime.k = d;
    lime.lime.n_samples = std::max(cfg.lime_samples, d + 2);
    lime.seed = StreamSeed(seed, {kExplain, di, 0});
    explain::MethodSpec shap;
    shap.method = explain::Method::kKernelShap;
    shap.n_coalitions = std::max(cfg.shap_coalitions, 2 * d);
    shap.seed = StreamSeed(seed, {kExplain, di, 1});

    std::vector<std::string> labels = {"lime", "kernel-shap"};
    std::vector<ExplanationMatrix> tables;
    const auto le = explain::ExplainDataset(lime, *model, in.data.X, cfg.jobs);
    const auto se = explain::ExplainDataset(shap, *model, in.data.X, cfg.jobs);
    tables.push_back(le.matrix);
    tables.push_back(se.matrix);
    for (const auto& ext : in.external) {
      labels.push_back(ext.label);
      tables.push_back(ext.table);
    }
    std::vector<PersistenceDiagram> diagrams;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      tables[t].Validate();
      const auto tuned = Tune(tables[t], le.lens, cfg, StreamSeed(seed, {kTune, di, t}));
      const std::string name = in.name + "_" + labels[t];
      r.graphs.push_back({name, tuned.graph});
      r.diagrams.push_back({name, tuned.diagram});
      r.summary["datasets"][in.name]["selected"][labels[t]] = ParamsJson(tuned.params);
      diagrams.push_back(tuned.diagram);
    }
    const auto m = Pairwise(labels, diagrams, cfg.jobs);
    r.matrices.push_back({in.name, m});
    r.summary["datasets"][in.name]["lime_vs_shap"] = m.values(0, 1);
  }
  Finish(r, cfg, start);
  return r;
}

ExperimentReport RunStabilityBenchmark(const synth::SynthSpec& data_spec, int runs,
                                       std::uint64_t seed, const HarnessConfig& cfg,
                                       bool same_explainer_seed) {
  cfg.Validate();
  if (runs < 3) throw ConfigError("stability benchmark needs runs >= 3");
  const auto start = Clock::now();
  ExperimentReport r;
  r.id = "stability";
  const auto data = synth::Generate(data_spec);
  data.Validate();
  r.inputs = {{"seed", seed},
              {"dataset", {{"kind", synth::ToString(data_spec.kind)}, {"n", data_spec.n},
                           {"seed", data_spec.seed}}},
              {"runs", runs},
              {"same_explainer_seed", same_explainer_seed},
              {"config", cfg.ToJson()}};
  const auto model = Train(data, cfg, StreamSeed(seed, {kTrain}));
  const mapper::MapperParams fixed{15, 0.3, 0.3};
  std::vector<std::string> labels;
  std::vector<PersistenceDiagram> greedy_d, fixed_d;
  std::vector<double> greedy_c, fixed_c;
  for (int run = 0; run < runs; ++run) {
    const auto urun = static_cast<std::uint64_t>(same_explainer_seed ? 0 : run);
    explain::MethodSpec lime;
    lime.method = explain::Method::kLime;
    lime.lime.k = static_cast<int>(data.cols());
    lime.lime.n_samples = std::max(cfg.lime_samples, lime.lime.k + 2);
    lime.seed = StreamSeed(seed, {kExplain, urun});
    const auto ex = explain::ExplainDataset(lime, *model, data.X, cfg.jobs);
    const auto g = Tune(ex.matrix, ex.lens, cfg, StreamSeed(seed, {kTune, urun}));
    const auto f = Fixed(ex.matrix, ex.lens, fixed, cfg);
    const std::string label = "run" + std::to_string(run);
    labels.push_back(label);
    r.graphs.push_back({label + "_greedy", g.graph});
    r.graphs.push_back({label + "_fixed", f.graph});
    r.diagrams.push_back({label + "_greedy", g.diagram});
    r.diagrams.push_back({label + "_fixed", f.diagram});
    r.summary["greedy"]["selected"].push_back(ParamsJson(g.params));
    greedy_d.push_back(g.diagram);
    fixed_d.push_back(f.diagram);
    greedy_c.push_back(g.components);
    fixed_c.push_back(f.components);
  }
  const auto gm = Pairwise(labels, greedy_d, cfg.jobs);
  const auto fm = Pairwise(labels, fixed_d, cfg.jobs);
  r.matrices.push_back({"greedy", gm});
  r.matrices.push_back({"fixed", fm});
  r.summary["greedy"]["avg_row_sum"] = Mean(diagdist::RowSums(gm));
  r.summary["greedy"]["avg_components"] = Mean(greedy_c);
  r.summary["fixed"]["avg_row_sum"] = Mean(diagdist::RowSums(fm));
  r.summary["fixed"]["avg_components"] = Mean(fixed_c);
  r.summary["fixed"]["params"] = ParamsJson(fixed);
  Finish(r, cfg, start);
  return r;
}

ExperimentReport RunExplainerSweep(const synth::SynthSpec& data_spec, const std::vector<int>& ks,
                                   std::uint64_t seed, const HarnessConfig& cfg) {
  cfg.Validate();
  if (ks.empty()) throw ConfigError("explainer sweep needs at least one k");
  const auto start = Clock::now();
  ExperimentReport r;
  r.id = "explainer-sweep";
  const auto data = synth::Generate(data_spec);
  data.Validate();
  const auto d = static_cast<int>(data.cols());
  for (int k : ks) {
    if (k < 1 || k > d) throw ConfigError("sweep k=" + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
  r.inputs = {{"seed", seed},
              {"dataset", {{"kind", synth::ToString(data_spec.kind)}, {"n", data_spec.n},
                           {"seed", data_spec.seed}}},
              {"ks", ks},
              {"config", cfg.ToJson()}};
  const auto model = Train(data, cfg, StreamSeed(seed, {kTrain}));
  std::vector<std::string> labels;
  std::vector<PersistenceDiagram> diagrams;
  for (int k : ks) {
    explain::MethodSpec lime;
    lime.method = explain::Method::kLime;
    lime.lime.k = k;
    lime.lime.n_samples = std::max(cfg.lime_samples, d + 2);
    lime.seed = StreamSeed(seed, {kExplain});
    const auto ex = explain::ExplainDataset(lime, *model, data.X, cfg.jobs);
    const auto t = Tune(ex.matrix, ex.lens, cfg, StreamSeed(seed, {kTune}));
    const std::string label = "k" + std::to_string(k);
    labels.push_back(label);
    r.graphs.push_back({label, t.graph});
    r.diagrams.push_back({label, t.diagram});
    r.summary["selected"][label] = ParamsJson(t.params);
    diagrams.push_back(t.diagram);
  }
  const auto m = Pairwise(labels, diagrams, cfg.jobs);
  r.matrices.push_back({"sweep", m});
  const auto sums = diagdist::RowSums(m);
  for (std::size_t i = 0; i < labels.size(); ++i) r.summary["row_sums"][labels[i]] = sums[i];
  Finish(r, cfg, start);
  return r;
}

void AuditExperimentDir(const ExperimentReport& report, const std::string& dir) {
  const fs::path root(dir);
  const auto j = io::ReadJson((root / "report.json").string());
  if (j != report.ToJson()) throw FormatError("report.json does not match the in-memory report");
  for (const auto& rel : j.at("artifacts")) {
    const std::string path = (root / rel.get<std::string>()).string();
    const std::string name = fs::path(rel.get<std::string>()).stem().string();
    const std::string kind = fs::path(rel.get<std::string>()).parent_path().string();
    auto fail = [&] { throw FormatError("artifact " + path + " does not reload to its in-memory value"); };
    if (kind == "graphs") {
      bool ok = false;
      const auto g = io::LoadGraph(path);
      for (const auto& it : report.graphs) ok = ok || (FileStem(it.name) == name && it.value == g);
      if (!ok) fail();
    } else if (kind == "diagrams") {
      bool ok = false;
      const auto d = io::LoadDiagram(path);
      for (const auto& it : report.diagrams) ok = ok || (FileStem(it.name) == name && it.value == d);
      if (!ok) fail();
    } else if (kind == "matrices") {
      bool ok = false;
      const auto m = io::LoadDistanceMatrix(path);
      for (const auto& it : report.matrices) {
        ok = ok || (FileStem(it.name) == name && it.value.labels == m.labels && it.value.values == m.values);
      }
      if (!ok) fail();
    } else {
      throw FormatError("unknown artifact kind in " + path);
    }
  }
}

std::vector<std::string> RecipeNames() {
  return {"baseline-comparison", "method-consensus", "stability", "explainer-sweep"};
}

ExperimentReport RunRecipe(const std::string& name, std::uint64_t seed, const HarnessConfig& cfg) {
  if (name == "baseline-comparison") return RunBaselineComparison(20, seed, cfg);
  if (name == "method-consensus") {
    std::vector<ConsensusInput> inputs;
    const std::pair<const char*, synth::Kind> kinds[] = {
        {"linear", synth::Kind::kLinear},          {"spirals", synth::Kind::kSpirals},
        {"circles", synth::Kind::kCircles},        {"corners", synth::Kind::kCorners},
        {"toy", synth::Kind::kToyIndependent},     {"toy-flip", synth::Kind::kToyFlip},
        {"toy-interaction", synth::Kind::kToyInteraction},
    };
    std::uint64_t i = 0;
    for (const auto& [label, kind] : kinds) {
      synth::SynthSpec s;
      s.kind = kind;
      s.n = cfg.n;
      s.seed = StreamSeed(seed, {kData, i++});
      inputs.push_back({label, synth::Generate(s), {}});
    }
    return RunMethodConsensus(inputs, seed, cfg);
  }
  if (name == "stability") {
    synth::SynthSpec s;
    s.kind = synth::Kind::kCircles;
    s.n = cfg.n;
    s.seed = StreamSeed(seed, {kData});
    return RunStabilityBenchmark(s, 30, seed, cfg);
  }
  if (name == "explainer-sweep") {
    synth::SynthSpec s;
    s.kind = synth::Kind::kToyIndependent;
    s.n = cfg.n;
    s.seed = StreamSeed(seed, {kData});
    return RunExplainerSweep(s, {2, 3, 4, 5, 6}, seed, cfg);
  }
  throw ConfigError("unknown experiment '" + name +
                    "' (expected baseline-comparison, method-consensus, stability or explainer-sweep)");
}

}  // namespace gale::harness
