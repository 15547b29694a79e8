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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gale/dataio.hpp"
#include "gale/error.hpp"

namespace gale {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("gale_dataio_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(DataIo, ParsesExplanationTable) {
  std::istringstream in("a,b\n0.1,0.2\n0.3,0.4\n0.5,0.6");
  const auto e = io::ParseExplanations(in);
  EXPECT_EQ(e.rows(), 3u);
  EXPECT_EQ(e.cols(), 2u);
  EXPECT_EQ(e.column_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(e.values(2, 1), 0.6);
}

TEST(DataIo, ParsesLens) {
  std::istringstream in("p\n0.0\n1.0\n");
  const auto lens = io::ParseLens(in);
  EXPECT_EQ(lens.values, (std::vector<double>{0.0, 1.0}));
}

TEST(DataIo, LensOutOfRangeIsRangeError) {
  std::istringstream in("p\n0.5\n1.5\n");
  EXPECT_THROW(io::ParseLens(in), RangeError);
}

TEST(DataIo, LensNeedsOneColumn) {
  std::istringstream in("p,q\n0.5,0.1\n");
  EXPECT_THROW(io::ParseLens(in), ParseError);
}

TEST(DataIo, MalformedNumberReportsRowAndColumn) {
  std::istringstream in("a,b\n0.1,0.2\n0.3,x4\n");
  try {
    io::ParseExplanations(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3);
    EXPECT_EQ(e.col(), 2);
  }
}

TEST(DataIo, RaggedRowIsParseError) {
  std::istringstream in("a,b\n0.1,0.2\n0.3\n");
  EXPECT_THROW(io::ParseExplanations(in), ParseError);
}

TEST(DataIo, DatasetUsesYColumnAsLabel) {
  std::istringstream in("y,x0,x1\n1,0.5,0.25\n0,1.5,2\n");
  const auto ds = io::ParseDataset(in);
  EXPECT_EQ(ds.y, (std::vector<int>{1, 0}));
  EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"x0", "x1"}));
  EXPECT_DOUBLE_EQ(ds.X(1, 1), 2.0);
}

TEST(DataIo, DatasetRejectsNonBinaryLabels) {
  std::istringstream in("x0,y\n0.5,2\n0.1,0\n");
  try {
    io::ParseDataset(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.col(), 2u);
  }
}

TEST(DataIo, DatasetNeedsBothClasses) {
  std::istringstream in("x0,y\n0.5,1\n0.1,1\n");
  EXPECT_THROW(io::ParseDataset(in), RangeError);
}

TEST(DataIo, EmptyGraphJson) {
  EXPECT_EQ(io::GraphToJson(MapperGraph{}).dump(), R"({"nodes":[],"edges":[]})");
}

TEST(DataIo, SingleNodeGraphRoundTrips) {
  MapperGraph g;
  g.nodes.push_back({0, {0, 1}, 0.5});
  const auto j = io::GraphToJson(g);
  EXPECT_EQ(j.dump(), R"({"nodes":[{"id":0,"members":[0,1],"lens_mean":0.5}],"edges":[]})");
  EXPECT_EQ(io::GraphFromJson(j), g);
}

TEST(DataIo, DotHasOneStatementPerNodeAndEdge) {
  MapperGraph g;
  g.nodes.push_back({0, {0, 1}, 0.12345});
  g.nodes.push_back({1, {1, 2}, 0.5});
  g.edges.push_back({0, 1});
  const auto dot = io::GraphToDot(g);
  EXPECT_EQ(dot.rfind("graph g {", 0), 0u);
  int node_lines = 0, edge_lines = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find("--") != std::string::npos) {
      ++edge_lines;
    } else if (line.find("label=") != std::string::npos) {
      ++node_lines;
    }
  }
  EXPECT_EQ(node_lines, 2);
  EXPECT_EQ(edge_lines, 1);
  EXPECT_NE(dot.find("0.123"), std::string::npos);
}

TEST(DataIo, GraphFileRoundTrip) {
  TempDir tmp;
  MapperGraph g;
  g.nodes.push_back({0, {0, 3}, 0.1 + 0.2});
  g.nodes.push_back({1, {3, 4, 9}, 1.0 / 3.0});
  g.nodes.push_back({2, {5}, 0.7});
  g.edges.push_back({0, 1});
  io::SaveGraph(g, io::GraphFormat::kJson, tmp.File("g.json"));
  EXPECT_EQ(io::LoadGraph(tmp.File("g.json")), g);
  io::SaveGraph(g, io::GraphFormat::kDot, tmp.File("g.dot"));
  EXPECT_EQ(Slurp(tmp.File("g.dot")), io::GraphToDot(g));
}

TEST(DataIo, GraphLoadRejectsBrokenStructure) {
  auto j = io::Json::parse(R"({"nodes":[{"id":0,"members":[1,0],"lens_mean":0.5}],"edges":[]})");
  EXPECT_THROW(io::GraphFromJson(j), FormatError);
  j = io::Json::parse(R"({"nodes":[{"id":0,"members":[0],"lens_mean":0.5}],"edges":[[0,0]]})");
  EXPECT_THROW(io::GraphFromJson(j), FormatError);
}

TEST(DataIo, DiagramRoundTrips) {
  TempDir tmp;
  const std::vector<PersistenceDiagram> cases = {
      {},
      {{0.2, 0.5, PointClass::kOrd0}},
      {{0.0, 1.0, PointClass::kExt0}, {0.0, 1.0, PointClass::kExt0}},
      {{0.7, 0.0, PointClass::kExt1}, {0.3, 0.1, PointClass::kRel1}, {0.1 + 0.2, 1.0 / 3.0, PointClass::kOrd0}},
  };
  for (const auto& d : cases) {
    io::SaveDiagram(d, tmp.File("d.json"));
    const auto back = io::LoadDiagram(tmp.File("d.json"));
    EXPECT_EQ(back, d);
    EXPECT_TRUE(SameMultiset(back, d));
  }
}

TEST(DataIo, DiagramUnknownClassIsFormatError) {
  const auto j = io::Json::parse(R"([{"birth":0.0,"death":1.0,"class":"ord7"}])");
  EXPECT_THROW(io::DiagramFromJson(j), FormatError);
}

TEST(DataIo, RandomTablesRoundTripBitExact) {
  TempDir tmp;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    ExplanationMatrix e;
    e.values.resize(7 + trial, 3);
    for (Eigen::Index i = 0; i < e.values.size(); ++i) e.values.data()[i] = u(rng) / (trial + 1.7);
    io::SaveExplanations(e, tmp.File("e.csv"));
    const auto back = io::LoadExplanations(tmp.File("e.csv"));
    ASSERT_EQ(back.rows(), e.rows());
    EXPECT_TRUE((back.values.array() == e.values.array()).all());

    LensVector lens;
    for (int i = 0; i < 7 + trial; ++i) lens.values.push_back(p(rng));
    io::SaveLens(lens, tmp.File("p.csv"));
    EXPECT_EQ(io::LoadLens(tmp.File("p.csv")).values, lens.values);

    DistanceMatrix m;
    m.labels = {"a", "b", "c"};
    m.values = Matrix::Zero(3, 3);
    m.values(0, 1) = m.values(1, 0) = p(rng);
    m.values(1, 2) = m.values(2, 1) = p(rng) * 1e-7;
    io::SaveDistanceMatrix(m, tmp.File("m.csv"));
    const auto mb = io::LoadDistanceMatrix(tmp.File("m.csv"));
    EXPECT_EQ(mb.labels, m.labels);
    EXPECT_TRUE((mb.values.array() == m.values.array()).all());
  }
}

TEST(DataIo, DatasetRoundTrip) {
  TempDir tmp;
  LabeledDataset ds;
  ds.X.resize(3, 2);
  ds.X << 0.1, -2.5, 3.0, 1e-300, 7.25, 0.0;
  ds.y = {0, 1, 0};
  io::SaveDataset(ds, tmp.File("d.csv"));
  const auto back = io::LoadDataset(tmp.File("d.csv"));
  EXPECT_TRUE((back.X.array() == ds.X.array()).all());
  EXPECT_EQ(back.y, ds.y);
}

TEST(DataIo, RowCountPreserved) {
  std::string text = "a\n";
  for (int i = 0; i < 250; ++i) text += std::to_string(i) + "\n";
  std::istringstream in(text);
  EXPECT_EQ(io::ParseExplanations(in).rows(), 250u);
}

TEST(DataIo, LoadTableDispatchesOnKind) {
  TempDir tmp;
  io::WriteText("p\n0.25\n0.75\n", tmp.File("p.csv"));
  const auto t = io::LoadTable(tmp.File("p.csv"), io::TableKind::kLens);
  ASSERT_TRUE(std::holds_alternative<LensVector>(t));
  EXPECT_EQ(std::get<LensVector>(t).values, (std::vector<double>{0.25, 0.75}));
}

TEST(DataIo, MissingFileIsIoError) {
  EXPECT_THROW(io::LoadExplanations("/nonexistent/dir/e.csv"), IoError);
}

TEST(DataIo, UnwritablePathIsIoError) {
  EXPECT_THROW(io::SaveDiagram({}, "/nonexistent/dir/d.json"), IoError);
  EXPECT_THROW(io::SaveGraph({}, io::GraphFormat::kJson, "/nonexistent/dir/g.json"), IoError);
}

TEST(DataIo, PairingMismatchIsAlignmentError) {
  ExplanationMatrix e;
  e.values = Matrix::Zero(3, 2);
  LensVector lens{{0.1, 0.2}};
  EXPECT_THROW(CheckPaired(e, lens), AlignmentError);
}

}  // namespace
}  // namespace gale
