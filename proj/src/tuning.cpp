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

#include "gale/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "gale/diagdist.hpp"
#include "gale/error.hpp"
#include "gale/persistence.hpp"
#include "gale/rng.hpp"

namespace gale::tuning {

namespace {

std::size_t OrderIndex(std::size_t count, double alpha) {
  // The small slack keeps (1 - 0.05) * 100 at 95 despite binary rounding.
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(count) - 1e-9));
  return std::clamp<std::size_t>(k, 1, count) - 1;
}

struct Sample {
  double distance;
  int components;
};

Sample RunIteration(const Matrix& values, std::span<const double> lens,
                    const mapper::MapperParams& params, const BootstrapOptions& options,
                    const PersistenceDiagram& base, std::size_t cell, std::size_t iteration) {
  const auto idx = ResampleIndices(lens.size(), options.seed, cell, iteration);
  Matrix sample_values(values.rows(), values.cols());
  std::vector<double> sample_lens(lens.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    sample_values.row(static_cast<Eigen::Index>(i)) = values.row(idx[i]);
    sample_lens[i] = lens[static_cast<std::size_t>(idx[i])];
  }
  const auto g = mapper::reference::BuildMapper(sample_values, sample_lens, params, options.anchor);
  const auto d = persistence::ExtendedPersistenceFast(g);
  return {diagdist::Bottleneck(base, d), mapper::ConnectedComponents(g).count};
}

PersistenceDiagram BaseDiagram(const Matrix& values, std::span<const double> lens,
                               const mapper::MapperParams& params, const BootstrapOptions& options) {
  return persistence::ExtendedPersistenceFast(
      mapper::reference::BuildMapper(values, lens, params, options.anchor));
}

BootstrapStats Summarize(const std::vector<Sample>& samples, double alpha) {
  BootstrapStats s;
  s.alpha = alpha;
  s.iterations = static_cast<int>(samples.size());
  for (const auto& x : samples) {
    s.distances.push_back(x.distance);
    s.components.push_back(x.components);
  }
  s.b_alpha = OrderStatistic(s.distances, alpha);
  s.c_alpha = OrderStatistic(s.components, alpha);
  return s;
}

BootstrapStats SerialCell(const Matrix& values, std::span<const double> lens,
                          const mapper::MapperParams& params, const BootstrapOptions& options,
                          std::size_t cell) {
  const auto base = BaseDiagram(values, lens, params, options);
  std::vector<Sample> samples;
  for (int b = 0; b < options.iterations; ++b) {
    samples.push_back(RunIteration(values, lens, params, options, base, cell, static_cast<std::size_t>(b)));
  }
  return Summarize(samples, options.alpha);
}

void CheckInputs(const Matrix& values, std::span<const double> lens, const BootstrapOptions& options) {
  options.Validate();
  if (static_cast<std::size_t>(values.rows()) != lens.size()) {
    throw AlignmentError("explanation rows and lens length differ");
  }
  if (lens.empty()) throw ShapeError("bootstrap needs at least one point");
}

auto SortKey(const TuningRow& r) {
  return std::tuple(r.stats.c_alpha, r.stats.b_alpha, -r.params.resolution, r.params.gain,
                    r.params.threshold_fraction);
}

}  // namespace

double BootstrapStats::MeanComponents() const {
  if (components.empty()) return 0.0;
  double s = 0.0;
  for (int c : components) s += c;
  return s / static_cast<double>(components.size());
}

ParamGrid ParamGrid::Default() {
  return {{5, 10, 15, 20, 25}, {0.1, 0.2, 0.3, 0.4}, {0.1, 0.2, 0.3, 0.4, 0.5}};
}

void ParamGrid::Validate() const {
  if (resolutions.empty() || gains.empty() || threshold_fractions.empty()) {
    throw ConfigError("parameter grid axes must be nonempty");
  }
  for (const auto& p : Enumerate()) p.Validate();
}

std::vector<mapper::MapperParams> ParamGrid::Enumerate() const {
  std::vector<mapper::MapperParams> out;
  for (int r : resolutions) {
    for (double g : gains) {
      for (double t : threshold_fractions) out.push_back({r, g, t});
    }
  }
  return out;
}

const char* ToString(SelectionRule rule) {
  return rule == SelectionRule::kLexicographic ? "lexicographic" : "capped-components";
}

SelectionRule ParseSelectionRule(const std::string& name) {
  if (name == "lexicographic") return SelectionRule::kLexicographic;
  if (name == "capped-components") return SelectionRule::kCappedComponents;
  throw ConfigError("unknown selection rule '" + name + "'");
}

void BootstrapOptions::Validate() const {
  if (iterations < 10) throw ConfigError("bootstrap needs at least 10 iterations");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

double OrderStatistic(std::vector<double> samples, double alpha) {
  if (samples.empty()) throw ShapeError("order statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  return samples[OrderIndex(samples.size(), alpha)];
}

int OrderStatistic(std::vector<int> samples, double alpha) {
  if (samples.empty()) throw ShapeError("order statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  return samples[OrderIndex(samples.size(), alpha)];
}

std::vector<int> ResampleIndices(std::size_t n, std::uint64_t seed, std::size_t cell,
                                 std::size_t iteration) {
  auto rng = StreamRng(seed, {cell, iteration});
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::vector<int> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

BootstrapStats Bootstrap(const Matrix& values, std::span<const double> lens,
                         const mapper::MapperParams& params, const BootstrapOptions& options) {
  CheckInputs(values, lens, options);
  params.Validate();
  const auto base = BaseDiagram(values, lens, params, options);
  std::vector<Sample> samples(static_cast<std::size_t>(options.iterations));

#pragma omp parallel for schedule(dynamic) num_threads(options.jobs) if (options.jobs > 1)
  for (int b = 0; b < options.iterations; ++b) {
    samples[static_cast<std::size_t>(b)] =
        RunIteration(values, lens, params, options, base, 0, static_cast<std::size_t>(b));
  }
  return Summarize(samples, options.alpha);
}

BootstrapStats Bootstrap(const ExplanationMatrix& e, const LensVector& lens,
                         const mapper::MapperParams& params, const BootstrapOptions& options) {
  CheckPaired(e, lens);
  return Bootstrap(e.values, lens.values, params, options);
}

TuningResult GridSearch(const Matrix& values, std::span<const double> lens,
                        const ParamGrid& grid, const BootstrapOptions& options) {
  CheckInputs(values, lens, options);
  grid.Validate();
  const auto cells = grid.Enumerate();
  TuningResult result;
  result.rule = options.rule;
  result.rows.resize(cells.size());
  const int count = static_cast<int>(cells.size());

#pragma omp parallel for schedule(dynamic) num_threads(options.jobs) if (options.jobs > 1)
  for (int c = 0; c < count; ++c) {
    const auto& p = cells[static_cast<std::size_t>(c)];
    result.rows[static_cast<std::size_t>(c)] = {p, SerialCell(values, lens, p, options, static_cast<std::size_t>(c))};
  }
  result.selected = SelectParams(result.rows, options.rule, options.component_cap);
  return result;
}

TuningResult GridSearch(const ExplanationMatrix& e, const LensVector& lens,
                        const ParamGrid& grid, const BootstrapOptions& options) {
  CheckPaired(e, lens);
  return GridSearch(e.values, lens.values, grid, options);
}

mapper::MapperParams SelectParams(const std::vector<TuningRow>& rows, SelectionRule rule,
                                  int component_cap) {
  if (rows.empty()) throw ShapeError("no tuning rows to select from");
  auto lexicographic = [](const TuningRow& a, const TuningRow& b) { return SortKey(a) < SortKey(b); };
  if (rule == SelectionRule::kCappedComponents) {
    const TuningRow* best = nullptr;
    for (const auto& r : rows) {
      if (r.stats.c_alpha > component_cap) continue;
      if (!best || std::tuple(r.stats.b_alpha, SortKey(r)) < std::tuple(best->stats.b_alpha, SortKey(*best))) {
        best = &r;
      }
    }
    if (best) return best->params;
  }
  return std::min_element(rows.begin(), rows.end(), lexicographic)->params;
}

void WriteTuningCsv(std::ostream& out, const TuningResult& result) {
  out << "resolution,gain,threshold_fraction,b_alpha,c_alpha,mean_components\n";
  for (const auto& r : result.rows) {
    out << r.params.resolution << ',' << io::FormatNumber(r.params.gain) << ','
        << io::FormatNumber(r.params.threshold_fraction) << ',' << io::FormatNumber(r.stats.b_alpha) << ','
        << r.stats.c_alpha << ',' << io::FormatNumber(r.stats.MeanComponents()) << '\n';
  }
}

io::Json TuningToJson(const TuningResult& result) {
  auto params = [](const mapper::MapperParams& p) {
    return io::Json{{"resolution", p.resolution}, {"gain", p.gain}, {"threshold_fraction", p.threshold_fraction}};
  };
  io::Json j;
  j["rule"] = ToString(result.rule);
  j["selected"] = params(result.selected);
  j["alpha"] = result.rows.empty() ? 0.0 : result.rows.front().stats.alpha;
  j["iterations"] = result.rows.empty() ? 0 : result.rows.front().stats.iterations;
  j["grid"] = io::Json::array();
  for (const auto& r : result.rows) {
    auto row = params(r.params);
    row["b_alpha"] = r.stats.b_alpha;
    row["c_alpha"] = r.stats.c_alpha;
    row["mean_components"] = r.stats.MeanComponents();
    j["grid"].push_back(row);
  }
  return j;
}

namespace reference {

BootstrapStats Bootstrap(const Matrix& values, std::span<const double> lens,
                         const mapper::MapperParams& params, const BootstrapOptions& options) {
  CheckInputs(values, lens, options);
  params.Validate();
  return SerialCell(values, lens, params, options, 0);
}

TuningResult GridSearch(const Matrix& values, std::span<const double> lens,
                        const ParamGrid& grid, const BootstrapOptions& options) {
  CheckInputs(values, lens, options);
  grid.Validate();
  TuningResult result;
  result.rule = options.rule;
  std::size_t cell = 0;
  for (const auto& p : grid.Enumerate()) {
    result.rows.push_back({p, SerialCell(values, lens, p, options, cell++)});
  }
  result.selected = SelectParams(result.rows, options.rule, options.component_cap);
  return result;
}

}  // namespace reference

}  // namespace gale::tuning
