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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gale/classifier.hpp"
#include "gale/dataio.hpp"
#include "gale/diagdist.hpp"
#include "gale/error.hpp"
#include "gale/explainers.hpp"
#include "gale/harness.hpp"
#include "gale/mapper.hpp"
#include "gale/persistence.hpp"
#include "gale/synthdata.hpp"
#include "gale/tuning.hpp"

namespace gale::cli {

namespace fs = std::filesystem;

struct Cli::Options {
  // Shared by every subcommand.
  std::uint64_t seed = 0;
  int jobs = 1;

  // synth
  std::string kind;
  int n = 100;
  double noise = 0.1;
  int d = 5;
  double zero_rate = 0.1;

  // train
  std::string data;
  std::string model_type = "mlp";
  int epochs = 500;
  double learning_rate = 0.1;
  double momentum = 0.9;
  int batch_size = 0;

  // explain
  std::string model;
  std::string method = "integrated-gradients";
  std::string baseline;
  int steps = 64;
  int baseline_draws = 1;
  int k = 0;
  int samples = 50;
  double kernel_width = 0.0;
  int coalitions = 2048;
  int background = 20;
  std::string lens_out;

  // mapper / tune
  std::string explanations;
  std::string lens;
  int resolution = 10;
  double gain = 0.3;
  double threshold_fraction = 0.3;
  std::string cover = "observed";
  std::string dot;

  // persistence
  std::string graph;
  bool keep_zero = false;
  bool reference = false;

  // compare
  std::vector<std::string> diagrams;
  std::vector<std::string> labels;
  bool per_class = false;

  // tune / experiment
  std::vector<int> resolutions;
  std::vector<double> gains;
  std::vector<double> fractions;
  int bootstrap = 100;
  double alpha = 0.05;
  std::string rule = "lexicographic";
  int cap = 1;
  std::string json_out;

  // experiment
  std::string recipe;

  std::string out;
};

namespace {

const std::vector<std::string> kCoverChoices = {"observed", "unit"};

std::string OutPath(const std::string& given, const std::string& fallback) {
  const fs::path p = given.empty() ? fs::path(OutputDir()) / fallback : fs::path(given);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create " + p.parent_path().string() + ": " + ec.message());
  }
  return p.string();
}

mapper::CoverAnchor Anchor(const std::string& name) {
  return name == "unit" ? mapper::CoverAnchor::kUnit : mapper::CoverAnchor::kObserved;
}

void AddCommon(CLI::App* sub, std::uint64_t& seed, int& jobs) {
  sub->add_option("--seed", seed, "Random seed")->capture_default_str();
  sub->add_option("--jobs", jobs, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

std::string OutputDir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? std::string(env) : std::string(".");
}

Cli::Cli() : opt_(std::make_unique<Options>()), app_(std::make_unique<CLI::App>("Topological comparison of local explanations", "gale")) {
  auto& o = *opt_;
  auto* app = app_.get();
  app->require_subcommand(1);
  app->footer("Output files default to $" + std::string(kOutputDirEnv) +
              " (or the working directory). Exit codes: 0 ok, 1 usage, 2 data error.");

  auto* synth = app->add_subcommand("synth", "Generate a synthetic labeled dataset (CSV, label column y)");
  synth->add_option("--kind", o.kind, "circles|spirals|corners|linear|toy-independent|toy-flip|toy-interaction|zero-label")
      ->required();
  synth->add_option("--n", o.n, "Number of rows")->capture_default_str();
  synth->add_option("--noise", o.noise, "Noise standard deviation (2-D kinds)")->capture_default_str();
  synth->add_option("--d", o.d, "Feature count (zero-label)")->capture_default_str();
  synth->add_option("--zero-rate", o.zero_rate, "Per-entry zero probability (zero-label)")->capture_default_str();
  synth->add_option("--out", o.out, "Output CSV (default dataset.csv)");
  AddCommon(synth, o.seed, o.jobs);

  auto* train = app->add_subcommand("train", "Fit a classifier and write it as JSON");
  train->add_option("--data", o.data, "Dataset CSV with a y column")->required();
  train->add_option("--model", o.model_type, "mlp|logistic")
      ->check(CLI::IsMember({"mlp", "logistic"}))
      ->capture_default_str();
  train->add_option("--epochs", o.epochs, "Training epochs (mlp)")->capture_default_str();
  train->add_option("--lr", o.learning_rate, "Learning rate (mlp)")->capture_default_str();
  train->add_option("--momentum", o.momentum, "Momentum (mlp)")->capture_default_str();
  train->add_option("--batch-size", o.batch_size, "Mini-batch size, 0 for full batch (mlp)")->capture_default_str();
  train->add_option("--out", o.out, "Output model JSON (default model.json)");
  AddCommon(train, o.seed, o.jobs);

  auto* explain = app->add_subcommand("explain", "Compute local explanations and the probability lens");
  explain->add_option("--model", o.model, "Model JSON written by train")->required();
  explain->add_option("--data", o.data, "Dataset CSV (a y column is ignored)")->required();
  explain->add_option("--method", o.method, "integrated-gradients|gradient-x-input|kernel-shap|lime")
      ->capture_default_str();
  explain->add_option("--baseline", o.baseline, "zero|max-distance|gaussian|gaussian-<scale>|uniform");
  explain->add_option("--steps", o.steps, "Integration steps (integrated-gradients)")->capture_default_str();
  explain->add_option("--baseline-draws", o.baseline_draws, "Averaged draws for stochastic baselines")
      ->capture_default_str();
  explain->add_option("--k", o.k, "Features kept by lime (default: all)");
  explain->add_option("--samples", o.samples, "Neighborhood size (lime)")->capture_default_str();
  explain->add_option("--kernel-width", o.kernel_width, "Kernel width (lime; 0 picks a default)")
      ->capture_default_str();
  explain->add_option("--coalitions", o.coalitions, "Coalition budget (kernel-shap)")->capture_default_str();
  explain->add_option("--background", o.background, "Background rows without a baseline (kernel-shap)")
      ->capture_default_str();
  explain->add_option("--out", o.out, "Output explanations CSV (default explanations.csv)");
  explain->add_option("--lens-out", o.lens_out, "Output lens CSV (default lens.csv)");
  AddCommon(explain, o.seed, o.jobs);

  auto* mapper = app->add_subcommand("mapper", "Build a Mapper graph");
  mapper->add_option("--explanations", o.explanations, "Explanations CSV")->required();
  mapper->add_option("--lens", o.lens, "Lens CSV")->required();
  mapper->add_option("--resolution", o.resolution, "Number of cover intervals")->capture_default_str();
  mapper->add_option("--gain", o.gain, "Interval overlap fraction")->capture_default_str();
  mapper->add_option("--threshold-fraction", o.threshold_fraction, "Cluster cut as a fraction of the value range")
      ->capture_default_str();
  mapper->add_option("--cover", o.cover, "Cover range: observed|unit")
      ->check(CLI::IsMember(kCoverChoices))
      ->capture_default_str();
  mapper->add_option("--out", o.out, "Output graph JSON (default graph.json)");
  mapper->add_option("--dot", o.dot, "Also write the graph in DOT format");
  AddCommon(mapper, o.seed, o.jobs);

  auto* pers = app->add_subcommand("persistence", "Extended persistence diagram of a Mapper graph");
  pers->add_option("--graph", o.graph, "Graph JSON")->required();
  pers->add_flag("--keep-zero", o.keep_zero, "Keep zero-persistence points");
  pers->add_flag("--reference", o.reference, "Use the boundary-matrix reduction");
  pers->add_option("--out", o.out, "Output diagram JSON (default diagram.json)");
  AddCommon(pers, o.seed, o.jobs);

  auto* compare = app->add_subcommand("compare", "Pairwise bottleneck distances between diagrams");
  compare->add_option("diagrams", o.diagrams, "Two or more diagram JSON files")->required();
  compare->add_option("--labels", o.labels, "Matrix labels (default: file stems)");
  compare->add_flag("--per-class", o.per_class, "Largest per-class distance instead of the combined one");
  compare->add_option("--out", o.out, "Output matrix CSV (default distances.csv)");
  AddCommon(compare, o.seed, o.jobs);

  auto* tune = app->add_subcommand("tune", "Bootstrap grid search over Mapper parameters");
  tune->add_option("--explanations", o.explanations, "Explanations CSV")->required();
  tune->add_option("--lens", o.lens, "Lens CSV")->required();
  tune->add_option("--resolutions", o.resolutions, "Resolution grid (default 5 10 15 20 25)");
  tune->add_option("--gains", o.gains, "Gain grid (default 0.1 0.2 0.3 0.4)");
  tune->add_option("--fractions", o.fractions, "Threshold fraction grid (default 0.1 0.2 0.3 0.4 0.5)");
  tune->add_option("--bootstrap", o.bootstrap, "Bootstrap iterations")->capture_default_str();
  tune->add_option("--alpha", o.alpha, "Tail probability")->capture_default_str();
  tune->add_option("--rule", o.rule, "lexicographic|capped-components")->capture_default_str();
  tune->add_option("--cap", o.cap, "Component cap (capped-components)")->capture_default_str();
  tune->add_option("--cover", o.cover, "Cover range: observed|unit")
      ->check(CLI::IsMember(kCoverChoices))
      ->capture_default_str();
  tune->add_option("--out", o.out, "Output grid CSV (default tuning.csv)");
  tune->add_option("--json", o.json_out, "Output JSON with the selection (default tuning.json)");
  AddCommon(tune, o.seed, o.jobs);

  auto* exp = app->add_subcommand("experiment", "Run a named recipe into an experiment directory");
  exp->add_option("recipe", o.recipe, "baseline-comparison|method-consensus|stability|explainer-sweep")->required();
  exp->add_option("--n", o.n, "Rows per generated dataset")->capture_default_str();
  exp->add_option("--resolutions", o.resolutions, "Resolution grid (default 5 10 15 20 25)");
  exp->add_option("--gains", o.gains, "Gain grid (default 0.1 0.2 0.3 0.4)");
  exp->add_option("--fractions", o.fractions, "Threshold fraction grid (default 0.1 0.2 0.3 0.4 0.5)");
  exp->add_option("--bootstrap", o.bootstrap, "Bootstrap iterations")->capture_default_str();
  exp->add_option("--alpha", o.alpha, "Tail probability")->capture_default_str();
  exp->add_option("--rule", o.rule, "lexicographic|capped-components")->capture_default_str();
  exp->add_option("--cap", o.cap, "Component cap (capped-components)")->capture_default_str();
  exp->add_option("--cover", o.cover, "Cover range: observed|unit")
      ->check(CLI::IsMember(kCoverChoices))
      ->capture_default_str();
  exp->add_option("--out", o.out, "Experiment directory (default <output dir>/<recipe>)");
  AddCommon(exp, o.seed, o.jobs);
}

Cli::~Cli() = default;

namespace {

tuning::ParamGrid Grid(const Cli::Options& o) {
  auto g = tuning::ParamGrid::Default();
  if (!o.resolutions.empty()) g.resolutions = o.resolutions;
  if (!o.gains.empty()) g.gains = o.gains;
  if (!o.fractions.empty()) g.threshold_fractions = o.fractions;
  return g;
}

void RunSynth(const Cli::Options& o, std::ostream& err) {
  synth::SynthSpec s;
  s.kind = synth::ParseKind(o.kind);
  s.n = o.n;
  s.noise = o.noise;
  s.d = o.d;
  s.zero_rate = o.zero_rate;
  s.seed = o.seed;
  const auto ds = synth::Generate(s);
  const auto path = OutPath(o.out, "dataset.csv");
  io::SaveDataset(ds, path);
  err << "wrote " << ds.rows() << " rows x " << ds.cols() << " features to " << path
      << " (positive rate " << synth::LabelRate(ds) << ")\n";
}

void RunTrain(const Cli::Options& o, std::ostream& err) {
  const auto ds = io::LoadDataset(o.data);
  model::TrainConfig cfg{o.epochs, o.learning_rate, o.momentum, o.batch_size, o.seed};
  const auto path = OutPath(o.out, "model.json");
  if (o.model_type == "logistic") {
    const auto m = model::TrainLogistic(ds, cfg);
    model::SaveModel(m, path);
    err << "logistic model, training accuracy " << model::Accuracy(m, ds) << ", wrote " << path << "\n";
  } else {
    const auto m = model::TrainMlp(ds, cfg);
    model::SaveModel(m, path);
    err << "mlp model, training accuracy " << model::Accuracy(m, ds) << ", wrote " << path << "\n";
  }
}

void RunExplain(const Cli::Options& o, std::ostream& err) {
  const auto m = model::LoadModel(o.model);
  const auto ds = io::LoadDataset(o.data);
  explain::MethodSpec spec;
  spec.method = explain::ParseMethod(o.method);
  if (!o.baseline.empty()) spec.baseline = explain::ParseBaseline(o.baseline);
  spec.steps = o.steps;
  spec.baseline_draws = o.baseline_draws;
  spec.lime.k = o.k > 0 ? o.k : static_cast<int>(ds.cols());
  spec.lime.n_samples = o.samples;
  spec.lime.kernel_width = o.kernel_width;
  spec.n_coalitions = o.coalitions;
  spec.background_size = o.background;
  spec.seed = o.seed;
  const auto e = explain::ExplainDataset(spec, *m, ds.X, o.jobs);
  const auto epath = OutPath(o.out, "explanations.csv");
  const auto lpath = OutPath(o.lens_out, "lens.csv");
  io::SaveExplanations(e.matrix, epath);
  io::SaveLens(e.lens, lpath);
  err << spec.Label() << ": " << e.matrix.rows() << " explanations to " << epath << ", lens to " << lpath;
  if (e.metadata.contains("ridge_fallbacks") && e.metadata["ridge_fallbacks"].get<int>() > 0) {
    err << " (" << e.metadata["ridge_fallbacks"] << " ridge fallbacks)";
  }
  err << "\n";
}

void RunMapper(const Cli::Options& o, std::ostream& err) {
  const auto e = io::LoadExplanations(o.explanations);
  const auto lens = io::LoadLens(o.lens);
  const mapper::MapperParams p{o.resolution, o.gain, o.threshold_fraction};
  const auto g = mapper::BuildMapper(e, lens, p, {Anchor(o.cover), o.jobs});
  const auto path = OutPath(o.out, "graph.json");
  io::SaveGraph(g, io::GraphFormat::kJson, path);
  if (!o.dot.empty()) io::SaveGraph(g, io::GraphFormat::kDot, OutPath(o.dot, "graph.dot"));
  err << p.ToString() << ": " << g.nodes.size() << " nodes, " << g.edges.size() << " edges, "
      << mapper::ConnectedComponents(g).count << " components, wrote " << path << "\n";
}

void RunPersistence(const Cli::Options& o, std::ostream& err) {
  const auto g = io::LoadGraph(o.graph);
  const auto d = o.reference ? persistence::ExtendedPersistenceReference(g, o.keep_zero)
                             : persistence::ExtendedPersistenceFast(g, o.keep_zero);
  const auto path = OutPath(o.out, "diagram.json");
  io::SaveDiagram(d, path);
  const auto s = persistence::ComputeStats(d);
  err << d.size() << " points (ord0 " << s.count[0] << ", rel1 " << s.count[1] << ", ext0 " << s.count[2]
      << ", ext1 " << s.count[3] << "), wrote " << path << "\n";
}

int RunCompare(const Cli::Options& o, std::ostream& err) {
  if (o.diagrams.size() < 2) {
    err << "compare: need at least two diagram files\n";
    return kExitUsage;
  }
  std::vector<std::string> labels = o.labels;
  if (labels.empty()) {
    for (const auto& f : o.diagrams) labels.push_back(fs::path(f).stem().string());
  }
  if (labels.size() != o.diagrams.size()) {
    err << "compare: " << labels.size() << " labels for " << o.diagrams.size() << " diagrams\n";
    return kExitUsage;
  }
  std::vector<PersistenceDiagram> ds;
  for (const auto& f : o.diagrams) ds.push_back(io::LoadDiagram(f));
  const auto m = diagdist::PairwiseMatrix(labels, ds, {o.per_class, o.jobs});
  const auto path = OutPath(o.out, "distances.csv");
  io::SaveDistanceMatrix(m, path);
  err << m.size() << "x" << m.size() << " bottleneck matrix, wrote " << path << "\n";
  return kExitOk;
}

void RunTune(const Cli::Options& o, std::ostream& err) {
  const auto e = io::LoadExplanations(o.explanations);
  const auto lens = io::LoadLens(o.lens);
  tuning::BootstrapOptions opt;
  opt.iterations = o.bootstrap;
  opt.alpha = o.alpha;
  opt.seed = o.seed;
  opt.jobs = o.jobs;
  opt.anchor = Anchor(o.cover);
  opt.rule = tuning::ParseSelectionRule(o.rule);
  opt.component_cap = o.cap;
  const auto result = tuning::GridSearch(e, lens, Grid(o), opt);
  const auto csv = OutPath(o.out, "tuning.csv");
  std::ostringstream table;
  tuning::WriteTuningCsv(table, result);
  io::WriteText(table.str(), csv);
  const auto json = OutPath(o.json_out, "tuning.json");
  io::WriteJson(tuning::TuningToJson(result), json);
  err << result.rows.size() << " parameter sets, selected " << result.selected.ToString() << " ("
      << tuning::ToString(result.rule) << "), wrote " << csv << " and " << json << "\n";
}

void RunExperiment(const Cli::Options& o, std::ostream& err) {
  harness::HarnessConfig cfg;
  cfg.grid = Grid(o);
  cfg.bootstrap_iterations = o.bootstrap;
  cfg.alpha = o.alpha;
  cfg.rule = tuning::ParseSelectionRule(o.rule);
  cfg.component_cap = o.cap;
  cfg.anchor = Anchor(o.cover);
  cfg.n = o.n;
  cfg.jobs = o.jobs;
  cfg.out_dir = o.out.empty() ? (fs::path(OutputDir()) / o.recipe).string() : o.out;
  const auto r = harness::RunRecipe(o.recipe, o.seed, cfg);
  for (const auto& s : r.skipped) err << "skipped " << s << "\n";
  err << r.id << ": " << r.artifacts.size() << " artifacts in " << cfg.out_dir << " ("
      << r.wall_clock_seconds << " s)\n";
}

}  // namespace

int Cli::Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"gale"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app_->parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app_->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app_->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto parsed = app_->get_subcommands();
    err << (parsed.empty() ? app_->help() : parsed.front()->help());
    return kExitUsage;
  }
  const auto* sub = app_->get_subcommands().front();
  const auto& o = *opt_;
  const std::string name = sub->get_name();
  try {
    if (name == "synth") RunSynth(o, err);
    else if (name == "train") RunTrain(o, err);
    else if (name == "explain") RunExplain(o, err);
    else if (name == "mapper") RunMapper(o, err);
    else if (name == "persistence") RunPersistence(o, err);
    else if (name == "compare") return RunCompare(o, err);
    else if (name == "tune") RunTune(o, err);
    else if (name == "experiment") RunExperiment(o, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli;
  return cli.Run(args, out, err);
}

}  // namespace gale::cli
