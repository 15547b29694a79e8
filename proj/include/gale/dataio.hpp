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

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "gale/types.hpp"

// CSV and JSON interchange for every structure that crosses a process
// boundary. CSV files are comma separated with a mandatory header row; numbers
// are written with 17 significant digits so binary64 values round-trip.
namespace gale::io {

using Json = nlohmann::ordered_json;

enum class TableKind { kExplanations, kLens, kDataset };
enum class GraphFormat { kJson, kDot };

using Table = std::variant<ExplanationMatrix, LensVector, LabeledDataset>;

std::string FormatNumber(double v);

// Raw numeric CSV: header names plus rows of values. Throws ParseError naming
// the 1-based file row and column of the first malformed cell.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
Csv ParseCsv(std::istream& in);
Csv ReadCsv(const std::string& path);

ExplanationMatrix ParseExplanations(std::istream& in);
LensVector ParseLens(std::istream& in);
// The label column is the one named "y", or the last column if none is.
LabeledDataset ParseDataset(std::istream& in);

Table LoadTable(const std::string& path, TableKind kind);
ExplanationMatrix LoadExplanations(const std::string& path);
LensVector LoadLens(const std::string& path);
LabeledDataset LoadDataset(const std::string& path);

void WriteExplanations(std::ostream& out, const ExplanationMatrix& e);
void WriteLens(std::ostream& out, const LensVector& lens);
void WriteDataset(std::ostream& out, const LabeledDataset& ds);
void SaveExplanations(const ExplanationMatrix& e, const std::string& path);
void SaveLens(const LensVector& lens, const std::string& path);
void SaveDataset(const LabeledDataset& ds, const std::string& path);

// Graph JSON: {"nodes":[{"id","members","lens_mean"}],"edges":[[u,v]]}.
Json GraphToJson(const MapperGraph& g);
MapperGraph GraphFromJson(const Json& j);
std::string GraphToDot(const MapperGraph& g);
void SaveGraph(const MapperGraph& g, GraphFormat format, const std::string& path);
MapperGraph LoadGraph(const std::string& path);

// Diagram JSON: [{"birth","death","class"}], class in ord0|rel1|ext0|ext1.
Json DiagramToJson(const PersistenceDiagram& d);
PersistenceDiagram DiagramFromJson(const Json& j);
void SaveDiagram(const PersistenceDiagram& d, const std::string& path);
PersistenceDiagram LoadDiagram(const std::string& path);

// Matrix CSV: header "label,<l1>,...,<ln>", then one row per label.
void WriteDistanceMatrix(std::ostream& out, const DistanceMatrix& m);
void SaveDistanceMatrix(const DistanceMatrix& m, const std::string& path);
DistanceMatrix LoadDistanceMatrix(const std::string& path);

Json ReadJson(const std::string& path);
void WriteJson(const Json& j, const std::string& path);
void WriteText(const std::string& text, const std::string& path);

}  // namespace gale::io
