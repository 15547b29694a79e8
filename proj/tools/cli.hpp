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

#include <CLI11.hpp>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

// The `gale` command line: one subcommand per pipeline stage.
//
//   synth        generate a synthetic labeled dataset
//   train        fit a classifier to a dataset
//   explain      compute local explanations and the probability lens
//   mapper       build a Mapper graph from explanations and a lens
//   persistence  extended persistence diagram of a Mapper graph
//   compare      pairwise bottleneck distances between diagrams
//   tune         bootstrap grid search over Mapper parameters
//   experiment   run a named end-to-end recipe
//
// Files are written under $GALE_OUTPUT_DIR (default: the working directory)
// unless an explicit path is given.
namespace gale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr const char* kOutputDirEnv = "GALE_OUTPUT_DIR";

// $GALE_OUTPUT_DIR when set and non-empty, else ".".
std::string OutputDir();

class Cli {
 public:
  Cli();
  ~Cli();
  Cli(const Cli&) = delete;
  Cli& operator=(const Cli&) = delete;

  // The full command tree, for help output and flag inventories.
  const CLI::App& app() const { return *app_; }

  // `args` excludes the program name. Results go to files; human summaries
  // and errors go to `err`, help text to `out`.
  int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

  // Parsed flag values, filled by Run.
  struct Options;

 private:
  std::unique_ptr<Options> opt_;
  std::unique_ptr<CLI::App> app_;
};

// Convenience wrapper: a fresh Cli per call.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gale::cli
