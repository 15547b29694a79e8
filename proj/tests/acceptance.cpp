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

// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
//
//   acceptance [--only N[,N...]] [--allow-fail N[,N...]]
//
// Exit status is 0 when every criterion passes, except those listed in
// --allow-fail, which are still reported as FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gale/classifier.hpp"
#include "gale/diagdist.hpp"
#include "gale/explainers.hpp"
#include "gale/harness.hpp"
#include "gale/persistence.hpp"
#include "gale/synthdata.hpp"
#include "oracles.hpp"

namespace {

using namespace gale;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// f(x) = w . x + b.
class LinearScore final : public model::Model {
 public:
  LinearScore(Vector w, double b) : w_(std::move(w)), b_(b) {}
  std::size_t input_dim() const override { return static_cast<std::size_t>(w_.size()); }
  Vector PredictBatch(const Matrix& X) const override { return (X * w_).array() + b_; }
  Vector Gradient(const Vector&) const override { return w_; }
  io::Json ToJson() const override { return {{"type", "linear-score"}}; }

 private:
  Vector w_;
  double b_;
};

PersistenceDiagram OfClass(const PersistenceDiagram& d, PointClass c) {
  PersistenceDiagram out;
  for (const auto& p : d) {
    if (p.cls == c) out.push_back(p);
  }
  return out;
}

Outcome PersistenceOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const auto g = oracle::RandomGraph(rng, 20, 30, i % 2 == 0);
    agree += SameMultiset(persistence::ExtendedPersistenceFast(g), persistence::ExtendedPersistenceReference(g));
  }
  const double t = Seconds(start);
  return {agree == 200 && t < 10.0, std::to_string(agree) + "/200 graphs agree, " + Fmt("%.2f s", t)};
}

Outcome CycleLaw() {
  std::mt19937_64 rng(1002);
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = oracle::RandomGraph(rng, 20, 30, i % 3 == 0);
    const int n = static_cast<int>(g.values.size());
    const int comps = oracle::CountComponents(n, g.edges);
    const auto kept = persistence::ExtendedPersistenceFast(g, true);
    const auto dropped = persistence::ExtendedPersistenceFast(g);
    const int ext1 = static_cast<int>(OfClass(dropped, PointClass::kExt1).size());
    const int ext0 = static_cast<int>(OfClass(kept, PointClass::kExt0).size());
    ok += ext1 == static_cast<int>(g.edges.size()) - n + comps && ext0 == comps;
  }
  return {ok == 100, std::to_string(ok) + "/100 graphs satisfy both counts"};
}

Outcome BottleneckCorrectness() {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::RandomDiagram(rng, 6);
    const auto b = oracle::RandomDiagram(rng, 6);
    worst = std::max(worst, std::abs(diagdist::Bottleneck(a, b) - oracle::BruteBottleneck(a, b)));
  }
  int symmetric = 0;
  double triangle_excess = -INFINITY;
  for (int i = 0; i < 200; ++i) {
    const auto a = oracle::RandomDiagram(rng, 8);
    const auto b = oracle::RandomDiagram(rng, 8);
    const auto c = oracle::RandomDiagram(rng, 8);
    symmetric += diagdist::Bottleneck(a, b) == diagdist::Bottleneck(b, a);
    triangle_excess = std::max(triangle_excess, diagdist::Bottleneck(a, c) - diagdist::Bottleneck(a, b) -
                                                    diagdist::Bottleneck(b, c));
  }
  return {worst <= 1e-9 && symmetric == 200 && triangle_excess <= 1e-9,
          "max |fast - brute| " + Fmt("%.2e", worst) + " over 500 pairs, symmetric " +
              std::to_string(symmetric) + "/200, max triangle excess " + Fmt("%.2e", triangle_excess)};
}

Outcome StabilityProbe() {
  std::mt19937_64 rng(1004);
  double worst_ratio = 0.0;
  for (double eps : {1e-3, 1e-2}) {
    std::uniform_real_distribution<double> jitter(-eps, eps);
    for (int i = 0; i < 100; ++i) {
      const auto a = oracle::RandomDiagram(rng, 10);
      const auto b = oracle::RandomDiagram(rng, 10);
      auto ap = a;
      for (auto& p : ap) {
        p.birth += jitter(rng);
        p.death += jitter(rng);
      }
      const double change = std::abs(diagdist::Bottleneck(ap, b) - diagdist::Bottleneck(a, b));
      worst_ratio = std::max(worst_ratio, change / eps);
    }
  }
  return {worst_ratio <= 1.0 + 1e-9, "max change / eps " + Fmt("%.4f", worst_ratio) + " over 200 trials"};
}

Outcome IgCompleteness() {
  synth::SynthSpec s;
  s.kind = synth::Kind::kZeroLabel;
  s.n = 100;
  s.seed = 5;
  const auto ds = synth::Generate(s);
  model::TrainConfig cfg{200, 0.01, 0.9, 0, 5};
  const auto m = model::TrainMlp(ds, cfg);
  double worst_mlp = 0.0;
  for (Eigen::Index i = 0; i < 50; ++i) {
    const Vector x = ds.X.row(i).transpose();
    const Vector b = Vector::Zero(x.size());
    const auto a = explain::IntegratedGradients(m, x, b, 256);
    worst_mlp = std::max(worst_mlp, std::abs(a.sum() - (m.Predict(x) - m.Predict(b))));
  }
  std::mt19937_64 rng(1005);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_linear = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vector w(4), x(4), b(4);
    for (int j = 0; j < 4; ++j) {
      w[j] = normal(rng);
      x[j] = normal(rng);
      b[j] = normal(rng);
    }
    const LinearScore f(w, normal(rng));
    for (int steps : {1, 3, 16, 256}) {
      const auto a = explain::IntegratedGradients(f, x, b, steps);
      worst_linear = std::max(worst_linear, std::abs(a.sum() - (f.Predict(x) - f.Predict(b))));
    }
  }
  return {worst_mlp <= 1e-3 && worst_linear <= 1e-9,
          "mlp max gap " + Fmt("%.2e", worst_mlp) + " (50 rows, 256 steps), linear max gap " +
              Fmt("%.2e", worst_linear) + " (steps 1..256)"};
}

Outcome ExplainerOracles() {
  std::mt19937_64 rng(1006);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_shap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 6;
    Vector w(d);
    for (int j = 0; j < d; ++j) w[j] = (j % 2 ? -1.0 : 1.0) * (0.5 + std::abs(normal(rng)));
    const LinearScore f(w, normal(rng));
    Matrix bg(50, d);
    for (Eigen::Index i = 0; i < bg.size(); ++i) bg.data()[i] = normal(rng);
    Vector x(d);
    for (int j = 0; j < d; ++j) x[j] = (normal(rng) > 0 ? 2.0 : -2.0) + 0.5 * normal(rng);
    Rng stream(static_cast<std::uint64_t>(trial));
    const auto r = explain::KernelShapLike(f, x, bg, 40, stream);
    const Vector expected = w.cwiseProduct(x - bg.colwise().mean().transpose());
    for (int j = 0; j < d; ++j) {
      worst_shap = std::max(worst_shap, std::abs(r.attribution[j] - expected[j]) / std::abs(expected[j]));
    }
  }
  double worst_cos = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 5;
    Vector w(d), x(d);
    for (int j = 0; j < d; ++j) {
      w[j] = normal(rng);
      x[j] = 0.5 * normal(rng);
    }
    const model::LogisticModel m(model::Standardizer::Identity(d), w, 0.5 * normal(rng));
    explain::FeatureStats stats;
    stats.mean = Vector::Zero(d);
    stats.stddev = Vector::Constant(d, 0.05);
    stats.min = Vector::Constant(d, -3.0);
    stats.max = Vector::Constant(d, 3.0);
    explain::LimeParams p;
    p.k = d;
    p.n_samples = 500;
    Rng stream(static_cast<std::uint64_t>(100 + trial));
    const auto r = explain::LimeLike(m, x, stats, p, stream);
    const Vector g = m.Gradient(x);
    worst_cos = std::min(worst_cos, r.attribution.dot(g) / (r.attribution.norm() * g.norm()));
  }
  return {worst_shap <= 0.1 && worst_cos >= 0.99,
          "kernel-shap max relative error " + Fmt("%.4f", worst_shap) + " (sampled, 10 models), lime min cosine " +
              Fmt("%.5f", worst_cos) + " (20 logistic models)"};
}

Outcome ZeroBaselineSeparation() {
  const auto start = Clock::now();
  harness::HarnessConfig cfg;
  int passing = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = harness::RunBaselineComparison(3, seed, cfg);
    double min_zero = INFINITY, max_other = -INFINITY;
    for (const auto& label : harness::BaselineComparisonLabels()) {
      const double v = r.summary["row_mean_offdiag"][label];
      if (label.ends_with("/zero")) {
        min_zero = std::min(min_zero, v);
      } else {
        max_other = std::max(max_other, v);
      }
    }
    passing += min_zero > max_other;
    detail << (seed ? ", " : "") << "s" << seed << " " << Fmt("%.3f", min_zero) << " vs " << Fmt("%.3f", max_other);
  }
  const double t = Seconds(start);
  return {passing >= 4 && t < 300.0, std::to_string(passing) + "/5 seeds (min zero row vs max other row: " +
                                         detail.str() + "), " + Fmt("%.0f s", t)};
}

Outcome Consensus() {
  harness::HarnessConfig cfg;
  int passing = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<harness::ConsensusInput> inputs;
    std::uint64_t i = 0;
    for (auto kind : {synth::Kind::kLinear, synth::Kind::kSpirals}) {
      synth::SynthSpec s;
      s.kind = kind;
      s.n = cfg.n;
      s.seed = StreamSeed(seed, {1, i++});
      inputs.push_back({synth::ToString(kind), synth::Generate(s), {}});
    }
    const auto r = harness::RunMethodConsensus(inputs, seed, cfg);
    const double lin = r.summary["datasets"]["linear"]["lime_vs_shap"];
    const double spi = r.summary["datasets"]["spirals"]["lime_vs_shap"];
    passing += lin <= 0.05 && spi <= 0.05;
    detail << (seed ? ", " : "") << Fmt("%.3f", lin) << "/" << Fmt("%.3f", spi);
  }
  return {passing >= 4, std::to_string(passing) + "/5 seeds (linear/spirals: " + detail.str() + ")"};
}

Outcome SweepPlateau() {
  harness::HarnessConfig cfg;
  int passing = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    synth::SynthSpec s;
    s.kind = synth::Kind::kToyIndependent;
    s.n = cfg.n;
    s.seed = StreamSeed(seed, {1});
    const auto r = harness::RunExplainerSweep(s, {2, 4, 5, 6}, seed, cfg);
    const auto& k4 = r.Diagram("k4");
    const auto& k5 = r.Diagram("k5");
    const auto& k6 = r.Diagram("k6");
    const double plateau = std::max({diagdist::Bottleneck(k4, k5), diagdist::Bottleneck(k4, k6),
                                     diagdist::Bottleneck(k5, k6)});
    const double rs2 = r.summary["row_sums"]["k2"];
    const double rs4 = r.summary["row_sums"]["k4"];
    passing += plateau <= 1e-9 && rs2 > rs4;
    detail << (seed ? ", " : "") << "s" << seed << " plateau " << Fmt("%.3g", plateau) << " rs2 " << Fmt("%.3f", rs2)
           << " rs4 " << Fmt("%.3f", rs4);
  }
  return {passing >= 4, std::to_string(passing) + "/5 seeds (" + detail.str() + ")"};
}

Outcome StabilityBenchmark() {
  const auto start = Clock::now();
  harness::HarnessConfig cfg;
  bool ok = true;
  std::ostringstream detail;
  for (auto kind : {synth::Kind::kCircles, synth::Kind::kToyIndependent}) {
    synth::SynthSpec s;
    s.kind = kind;
    s.n = cfg.n;
    s.seed = StreamSeed(0, {1});
    const auto r = harness::RunStabilityBenchmark(s, 10, 0, cfg);
    const double grs = r.summary["greedy"]["avg_row_sum"], frs = r.summary["fixed"]["avg_row_sum"];
    const double gc = r.summary["greedy"]["avg_components"], fc = r.summary["fixed"]["avg_components"];
    ok = ok && (grs <= frs || gc <= fc);
    detail << synth::ToString(kind) << " row sum " << Fmt("%.3f", grs) << " vs " << Fmt("%.3f", frs)
           << ", components " << Fmt("%.1f", gc) << " vs " << Fmt("%.1f", fc) << "; ";
  }
  const double t = Seconds(start);
  return {ok && t < 600.0, detail.str() + "greedy vs fixed, " + Fmt("%.0f s", t)};
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

Outcome CliDeterminism() {
  const fs::path root = fs::temp_directory_path() / ("gale_accept_" + std::to_string(std::random_device{}()));
  // One full pipeline per run directory; inputs of later stages come from the
  // first run so every invocation sees identical inputs.
  const fs::path in = root / "inputs";
  fs::create_directories(in);
  std::ostringstream sink;
  auto gale = [&](std::vector<std::string> args) { return cli::Run(args, sink, sink); };
  auto p = [](const fs::path& dir, const char* f) { return (dir / f).string(); };
  bool ok = gale({"synth", "--kind", "circles", "--n", "60", "--seed", "1", "--out", p(in, "d.csv")}) == 0 &&
            gale({"train", "--data", p(in, "d.csv"), "--epochs", "100", "--lr", "0.01", "--out", p(in, "m.json")}) == 0 &&
            gale({"explain", "--model", p(in, "m.json"), "--data", p(in, "d.csv"), "--method", "lime", "--seed", "3",
                  "--out", p(in, "e.csv"), "--lens-out", p(in, "p.csv")}) == 0 &&
            gale({"mapper", "--explanations", p(in, "e.csv"), "--lens", p(in, "p.csv"), "--out", p(in, "g.json")}) == 0 &&
            gale({"persistence", "--graph", p(in, "g.json"), "--out", p(in, "a.json")}) == 0 &&
            gale({"mapper", "--explanations", p(in, "e.csv"), "--lens", p(in, "p.csv"), "--resolution", "6", "--out",
                  p(in, "g2.json")}) == 0 &&
            gale({"persistence", "--graph", p(in, "g2.json"), "--out", p(in, "b.json")}) == 0;
  if (!ok) {
    fs::remove_all(root);
    return {false, "could not prepare inputs: " + sink.str()};
  }
  auto invocations = [&](const fs::path& o, const std::string& jobs) {
    const std::vector<std::vector<std::string>> cmds = {
        {"synth", "--kind", "zero-label", "--n", "50", "--seed", "7", "--out", p(o, "synth.csv")},
        {"train", "--data", p(in, "d.csv"), "--epochs", "50", "--seed", "2", "--out", p(o, "model.json")},
        {"explain", "--model", p(in, "m.json"), "--data", p(in, "d.csv"), "--method", "kernel-shap", "--coalitions",
         "64", "--seed", "4", "--out", p(o, "shap.csv"), "--lens-out", p(o, "shap_lens.csv")},
        {"explain", "--model", p(in, "m.json"), "--data", p(in, "d.csv"), "--method", "integrated-gradients",
         "--baseline", "gaussian", "--seed", "4", "--out", p(o, "ig.csv"), "--lens-out", p(o, "ig_lens.csv")},
        {"explain", "--model", p(in, "m.json"), "--data", p(in, "d.csv"), "--method", "lime", "--seed", "4", "--out",
         p(o, "lime.csv"), "--lens-out", p(o, "lime_lens.csv")},
        {"mapper", "--explanations", p(in, "e.csv"), "--lens", p(in, "p.csv"), "--out", p(o, "graph.json"), "--dot",
         p(o, "graph.dot")},
        {"persistence", "--graph", p(in, "g.json"), "--out", p(o, "diagram.json")},
        {"compare", p(in, "a.json"), p(in, "b.json"), "--out", p(o, "distances.csv")},
        {"tune", "--explanations", p(in, "e.csv"), "--lens", p(in, "p.csv"), "--resolutions", "5", "10", "--gains",
         "0.2", "0.3", "--fractions", "0.3", "--bootstrap", "20", "--seed", "5", "--out", p(o, "tuning.csv"), "--json",
         p(o, "tuning.json")},
        {"experiment", "explainer-sweep", "--n", "40", "--resolutions", "5", "10", "--gains", "0.3", "--fractions",
         "0.3", "--bootstrap", "10", "--seed", "6", "--out", p(o, "experiment")},
    };
    int failures = 0;
    for (auto cmd : cmds) {
      cmd.push_back("--jobs");
      cmd.push_back(jobs);
      failures += gale(cmd) != 0;
    }
    return failures;
  };
  const int f1 = invocations(root / "run1", "1");
  const int f2 = invocations(root / "run2", "1");
  const int f8 = invocations(root / "run8", "8");
  const auto s1 = Snapshot(root / "run1");
  const auto s2 = Snapshot(root / "run2");
  const auto s8 = Snapshot(root / "run8");
  fs::remove_all(root);
  const bool same = s1 == s2 && s1 == s8;
  return {f1 + f2 + f8 == 0 && same && s1.size() >= 15,
          std::to_string(s1.size()) + " files from 10 invocations; repeat run " + (s1 == s2 ? "identical" : "DIFFERS") +
              ", --jobs 8 " + (s1 == s8 ? "identical" : "DIFFERS") +
              (f1 + f2 + f8 ? ", " + std::to_string(f1 + f2 + f8) + " invocations failed" : "")};
}

std::set<int> ParseList(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, allowed;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") {
      only = ParseList(argv[i + 1]);
    } else if (flag == "--allow-fail") {
      allowed = ParseList(argv[i + 1]);
    } else {
      std::cerr << "usage: acceptance [--only N,...] [--allow-fail N,...]\n";
      return 1;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"persistence oracle equivalence", PersistenceOracle},
      {"cycle-count law", CycleLaw},
      {"bottleneck correctness", BottleneckCorrectness},
      {"diagram stability probe", StabilityProbe},
      {"integrated-gradients completeness", IgCompleteness},
      {"explainer oracles", ExplainerOracles},
      {"zero-baseline separation", ZeroBaselineSeparation},
      {"lime/shap consensus", Consensus},
      {"explainer sweep plateau", SweepPlateau},
      {"greedy vs fixed stability", StabilityBenchmark},
      {"cli determinism", CliDeterminism},
  };
  const auto start = Clock::now();
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool tolerated = !o.pass && allowed.count(id);
    if (!o.pass && !tolerated) ++unexpected;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail << " ["
              << Fmt("%.1f s", Seconds(t0)) << "]" << (tolerated ? " (known failure)" : "") << std::endl;
  }
  std::cout << "total " << Fmt("%.0f s", Seconds(start)) << std::endl;
  return unexpected == 0 ? 0 : 1;
}
