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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "gale/dataio.hpp"

namespace gale::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gale_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv(kOutputDirEnv);
    fs::remove_all(dir_);
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }
  int Gale(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const std::vector<std::string> kSubcommands = {"synth",   "train", "explain", "mapper",
                                               "persistence", "compare", "tune", "experiment"};

TEST_F(CliTest, EverySubcommandDocumentsEveryFlag) {
  Cli cli;
  std::vector<std::string> names;
  for (const auto* sub : const_cast<CLI::App&>(cli.app()).get_subcommands([](CLI::App*) { return true; })) {
    names.push_back(sub->get_name());
  }
  EXPECT_EQ(names, kSubcommands);
  for (const auto& name : kSubcommands) {
    ASSERT_EQ(Gale({name, "--help"}), kExitOk) << name;
    const std::string help = out_.str();
    const auto* sub = cli.app().get_subcommand(name);
    int documented = 0;
    for (const auto* opt : sub->get_options()) {
      for (const auto& l : opt->get_lnames()) {
        EXPECT_NE(help.find("--" + l), std::string::npos) << name << " --" << l;
        ++documented;
      }
    }
    for (const char* common : {"--seed", "--jobs", "--help"}) {
      EXPECT_NE(help.find(common), std::string::npos) << name << " " << common;
    }
    EXPECT_GE(documented, 3) << name;
  }
}

TEST_F(CliTest, NoSubcommandOrUnknownFlagIsUsageError) {
  EXPECT_EQ(Gale({}), kExitUsage);
  EXPECT_EQ(Gale({"frobnicate"}), kExitUsage);
  EXPECT_EQ(Gale({"synth", "--kind", "circles", "--bogus"}), kExitUsage);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_EQ(Gale({"synth"}), kExitUsage);  // --kind is required
  EXPECT_EQ(Gale({"mapper", "--explanations", "e.csv", "--lens", "p.csv", "--jobs", "0"}), kExitUsage);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(Gale({"persistence", "--graph", P("missing.json")}), kExitData);
  EXPECT_EQ(Gale({"synth", "--kind", "moons", "--out", P("d.csv")}), kExitData);
  EXPECT_NE(err_.str().find("moons"), std::string::npos);
}

TEST_F(CliTest, SynthWritesRequestedRows) {
  ASSERT_EQ(Gale({"synth", "--kind", "circles", "--n", "100", "--seed", "1", "--out", P("d.csv")}), kExitOk);
  const auto ds = io::LoadDataset(P("d.csv"));
  EXPECT_EQ(ds.rows(), 100u);
  EXPECT_EQ(ds.cols(), 2u);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  setenv(kOutputDirEnv, P("outdir").c_str(), 1);
  ASSERT_EQ(Gale({"synth", "--kind", "linear", "--n", "20"}), kExitOk);
  EXPECT_TRUE(fs::exists(P("outdir/dataset.csv")));
}

TEST_F(CliTest, CompareIdenticalDiagramsGivesZero) {
  io::SaveDiagram({{0.1, 0.9, PointClass::kExt0}, {0.3, 0.4, PointClass::kOrd0}}, P("a.json"));
  ASSERT_EQ(Gale({"compare", P("a.json"), P("a.json"), "--labels", "x", "y", "--out", P("m.csv")}), kExitOk);
  const auto m = io::LoadDistanceMatrix(P("m.csv"));
  EXPECT_EQ(m.labels, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(m.values(0, 1), 0.0);
  EXPECT_EQ(Gale({"compare", P("a.json")}), kExitUsage);
}

TEST_F(CliTest, PipelineEndToEnd) {
  ASSERT_EQ(Gale({"synth", "--kind", "linear", "--n", "40", "--seed", "3", "--out", P("d.csv")}), kExitOk);
  ASSERT_EQ(Gale({"train", "--data", P("d.csv"), "--epochs", "50", "--out", P("m.json")}), kExitOk);
  ASSERT_EQ(Gale({"explain", "--model", P("m.json"), "--data", P("d.csv"), "--method", "lime", "--seed", "2",
                  "--out", P("e.csv"), "--lens-out", P("p.csv")}),
            kExitOk);
  ASSERT_EQ(Gale({"mapper", "--explanations", P("e.csv"), "--lens", P("p.csv"), "--resolution", "6", "--out",
                  P("g.json"), "--dot", P("g.dot")}),
            kExitOk);
  EXPECT_TRUE(fs::exists(P("g.dot")));
  ASSERT_EQ(Gale({"persistence", "--graph", P("g.json"), "--out", P("dg.json")}), kExitOk);
  ASSERT_EQ(Gale({"persistence", "--graph", P("g.json"), "--reference", "--out", P("dr.json")}), kExitOk);
  EXPECT_TRUE(SameMultiset(io::LoadDiagram(P("dg.json")), io::LoadDiagram(P("dr.json"))));
  ASSERT_EQ(Gale({"tune", "--explanations", P("e.csv"), "--lens", P("p.csv"), "--resolutions", "5", "10", "--gains",
                  "0.2", "--fractions", "0.2", "0.4", "--bootstrap", "10", "--alpha", "0.05", "--out", P("t.csv"),
                  "--json", P("t.json")}),
            kExitOk);
  const auto j = io::ReadJson(P("t.json"));
  EXPECT_EQ(j["rule"], "lexicographic");
  EXPECT_EQ(j["grid"].size(), 4u);
  EXPECT_TRUE(j["selected"].contains("resolution"));
  EXPECT_EQ(io::ReadCsv(P("t.csv")).rows.size(), 4u);
}

TEST_F(CliTest, TrainRejectsUnknownModelType) {
  ASSERT_EQ(Gale({"synth", "--kind", "linear", "--n", "20", "--out", P("d.csv")}), kExitOk);
  EXPECT_EQ(Gale({"train", "--data", P("d.csv"), "--model", "forest"}), kExitUsage);
}

}  // namespace
}  // namespace gale::cli
