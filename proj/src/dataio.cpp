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

#include "gale/dataio.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gale/error.hpp"

namespace gale::io {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseCell(const std::string& cell, std::size_t row, std::size_t col) {
  if (cell.empty()) throw ParseError("empty numeric cell", row, col);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE) {
    throw ParseError("malformed number '" + cell + "'", row, col);
  }
  return v;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void Finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void WriteRow(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

// Structural checks every graph must pass before it is written or after it is
// read: dense ids in order, nonempty sorted members, canonical edges.
void CheckGraphStructure(const MapperGraph& g) {
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    if (n.id != static_cast<int>(i)) throw FormatError("graph node ids must be 0..n-1 in order");
    if (n.members.empty()) throw FormatError("graph node " + std::to_string(i) + " has no members");
    if (!std::is_sorted(n.members.begin(), n.members.end())) {
      throw FormatError("graph node " + std::to_string(i) + " members are not sorted");
    }
  }
  const int n = static_cast<int>(g.nodes.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto [u, v] = g.edges[k];
    if (u < 0 || v >= n || u >= v) throw FormatError("graph edge endpoints invalid");
    if (k > 0 && !(g.edges[k - 1] < g.edges[k])) {
      throw FormatError("graph edges must be sorted and unique");
    }
  }
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Csv ParseCsv(std::istream& in) {
  Csv csv;
  std::string line;
  if (!std::getline(in, line) || Trim(line).empty()) {
    throw ParseError("missing header row", 1);
  }
  csv.header = SplitCommas(Trim(line));
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCommas(Trim(line));
    if (cells.size() != csv.header.size()) {
      throw ParseError("expected " + std::to_string(csv.header.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       row);
    }
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      values[c] = ParseCell(cells[c], row, c + 1);
    }
    csv.rows.push_back(std::move(values));
  }
  return csv;
}

Csv ReadCsv(const std::string& path) {
  auto in = OpenIn(path);
  return ParseCsv(in);
}

ExplanationMatrix ParseExplanations(std::istream& in) {
  const Csv csv = ParseCsv(in);
  ExplanationMatrix e;
  e.column_names = csv.header;
  e.values.resize(static_cast<Eigen::Index>(csv.rows.size()),
                  static_cast<Eigen::Index>(csv.header.size()));
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
      e.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = csv.rows[r][c];
    }
  }
  e.Validate();
  return e;
}

LensVector ParseLens(std::istream& in) {
  const Csv csv = ParseCsv(in);
  if (csv.header.size() != 1) {
    throw ParseError("lens file must have exactly one value column", 1);
  }
  LensVector lens;
  lens.values.reserve(csv.rows.size());
  for (const auto& r : csv.rows) lens.values.push_back(r[0]);
  lens.Validate();
  return lens;
}

LabeledDataset ParseDataset(std::istream& in) {
  const Csv csv = ParseCsv(in);
  if (csv.header.size() < 2) throw ParseError("dataset needs a feature and a label column", 1);
  std::size_t label_col = csv.header.size() - 1;
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (csv.header[c] == "y") label_col = c;
  }
  LabeledDataset ds;
  const auto n = static_cast<Eigen::Index>(csv.rows.size());
  const auto m = static_cast<Eigen::Index>(csv.header.size() - 1);
  ds.X.resize(n, m);
  ds.y.resize(csv.rows.size());
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (c != label_col) ds.feature_names.push_back(csv.header[c]);
  }
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    Eigen::Index out = 0;
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
      if (c == label_col) {
        const double v = csv.rows[r][c];
        if (v != 0.0 && v != 1.0) {
          throw ParseError("label must be 0 or 1", r + 2, c + 1);
        }
        ds.y[r] = static_cast<int>(v);
      } else {
        ds.X(static_cast<Eigen::Index>(r), out++) = csv.rows[r][c];
      }
    }
  }
  ds.Validate();
  return ds;
}

ExplanationMatrix LoadExplanations(const std::string& path) {
  auto in = OpenIn(path);
  return ParseExplanations(in);
}

LensVector LoadLens(const std::string& path) {
  auto in = OpenIn(path);
  return ParseLens(in);
}

LabeledDataset LoadDataset(const std::string& path) {
  auto in = OpenIn(path);
  return ParseDataset(in);
}

Table LoadTable(const std::string& path, TableKind kind) {
  switch (kind) {
    case TableKind::kExplanations: return LoadExplanations(path);
    case TableKind::kLens: return LoadLens(path);
    case TableKind::kDataset: return LoadDataset(path);
  }
  throw ConfigError("unknown table kind");
}

void WriteExplanations(std::ostream& out, const ExplanationMatrix& e) {
  std::vector<std::string> header = e.column_names;
  if (header.empty()) {
    for (std::size_t c = 0; c < e.cols(); ++c) header.push_back("e" + std::to_string(c));
  }
  WriteRow(out, header);
  std::vector<std::string> cells(e.cols());
  for (Eigen::Index r = 0; r < e.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.values.cols(); ++c) {
      cells[static_cast<std::size_t>(c)] = FormatNumber(e.values(r, c));
    }
    WriteRow(out, cells);
  }
}

void WriteLens(std::ostream& out, const LensVector& lens) {
  out << "p\n";
  for (double v : lens.values) out << FormatNumber(v) << '\n';
}

void WriteDataset(std::ostream& out, const LabeledDataset& ds) {
  std::vector<std::string> header = ds.feature_names;
  if (header.empty()) {
    for (std::size_t c = 0; c < ds.cols(); ++c) header.push_back("x" + std::to_string(c));
  }
  header.push_back("y");
  WriteRow(out, header);
  std::vector<std::string> cells(ds.cols() + 1);
  for (Eigen::Index r = 0; r < ds.X.rows(); ++r) {
    for (Eigen::Index c = 0; c < ds.X.cols(); ++c) {
      cells[static_cast<std::size_t>(c)] = FormatNumber(ds.X(r, c));
    }
    cells.back() = std::to_string(ds.y[static_cast<std::size_t>(r)]);
    WriteRow(out, cells);
  }
}

void SaveExplanations(const ExplanationMatrix& e, const std::string& path) {
  auto out = OpenOut(path);
  WriteExplanations(out, e);
  Finish(out, path);
}

void SaveLens(const LensVector& lens, const std::string& path) {
  auto out = OpenOut(path);
  WriteLens(out, lens);
  Finish(out, path);
}

void SaveDataset(const LabeledDataset& ds, const std::string& path) {
  auto out = OpenOut(path);
  WriteDataset(out, ds);
  Finish(out, path);
}

Json GraphToJson(const MapperGraph& g) {
  CheckGraphStructure(g);
  Json nodes = Json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"id", n.id}, {"members", n.members}, {"lens_mean", n.lens_mean}});
  }
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

MapperGraph GraphFromJson(const Json& j) {
  MapperGraph g;
  try {
    for (const auto& n : j.at("nodes")) {
      g.nodes.push_back({n.at("id").get<int>(), n.at("members").get<std::vector<int>>(),
                         n.at("lens_mean").get<double>()});
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("graph edge must be a pair");
      g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed graph JSON: ") + ex.what());
  }
  std::sort(g.nodes.begin(), g.nodes.end(),
            [](const MapperNode& a, const MapperNode& b) { return a.id < b.id; });
  CheckGraphStructure(g);
  return g;
}

std::string GraphToDot(const MapperGraph& g) {
  CheckGraphStructure(g);
  std::ostringstream out;
  out << "graph g {\n";
  char label[64];
  for (const auto& n : g.nodes) {
    std::snprintf(label, sizeof(label), "%.3f", n.lens_mean);
    out << "  " << n.id << " [label=\"" << label << "\", size=" << n.members.size() << "];\n";
  }
  for (const auto& [u, v] : g.edges) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

void SaveGraph(const MapperGraph& g, GraphFormat format, const std::string& path) {
  if (format == GraphFormat::kJson) {
    WriteJson(GraphToJson(g), path);
  } else {
    WriteText(GraphToDot(g), path);
  }
}

MapperGraph LoadGraph(const std::string& path) { return GraphFromJson(ReadJson(path)); }

Json DiagramToJson(const PersistenceDiagram& d) {
  Json arr = Json::array();
  for (const auto& p : d) {
    if (!std::isfinite(p.birth) || !std::isfinite(p.death)) {
      throw RangeError("diagram points must be finite");
    }
    arr.push_back({{"birth", p.birth}, {"death", p.death}, {"class", ToString(p.cls)}});
  }
  return arr;
}

PersistenceDiagram DiagramFromJson(const Json& j) {
  if (!j.is_array()) throw FormatError("diagram JSON must be an array");
  PersistenceDiagram d;
  try {
    for (const auto& p : j) {
      d.push_back({p.at("birth").get<double>(), p.at("death").get<double>(),
                   ParsePointClass(p.at("class").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed diagram JSON: ") + ex.what());
  }
  return d;
}

void SaveDiagram(const PersistenceDiagram& d, const std::string& path) {
  WriteJson(DiagramToJson(d), path);
}

PersistenceDiagram LoadDiagram(const std::string& path) {
  return DiagramFromJson(ReadJson(path));
}

void WriteDistanceMatrix(std::ostream& out, const DistanceMatrix& m) {
  std::vector<std::string> header{"label"};
  header.insert(header.end(), m.labels.begin(), m.labels.end());
  WriteRow(out, header);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<std::string> row{m.labels[i]};
    for (std::size_t j = 0; j < m.size(); ++j) {
      row.push_back(FormatNumber(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
    WriteRow(out, row);
  }
}

void SaveDistanceMatrix(const DistanceMatrix& m, const std::string& path) {
  auto out = OpenOut(path);
  WriteDistanceMatrix(out, m);
  Finish(out, path);
}

DistanceMatrix LoadDistanceMatrix(const std::string& path) {
  auto in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row", 1);
  auto header = SplitCommas(Trim(line));
  if (header.empty() || header[0] != "label") throw ParseError("matrix header must start with 'label'", 1);
  DistanceMatrix m;
  m.labels.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(m.labels.size());
  m.values = Matrix::Zero(n, n);
  Eigen::Index r = 0;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCommas(Trim(line));
    if (r >= n || cells.size() != header.size()) throw ParseError("matrix row has wrong shape", row);
    if (cells[0] != m.labels[static_cast<std::size_t>(r)]) throw ParseError("matrix row label mismatch", row, 1);
    for (Eigen::Index c = 0; c < n; ++c) {
      m.values(r, c) = ParseCell(cells[static_cast<std::size_t>(c) + 1], row, static_cast<std::size_t>(c) + 2);
    }
    ++r;
  }
  if (r != n) throw ParseError("matrix has " + std::to_string(r) + " rows, expected " + std::to_string(n));
  return m;
}

Json ReadJson(const std::string& path) {
  auto in = OpenIn(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw FormatError("'" + path + "' is not valid JSON: " + ex.what());
  }
}

void WriteJson(const Json& j, const std::string& path) {
  WriteText(j.dump() + "\n", path);
}

void WriteText(const std::string& text, const std::string& path) {
  auto out = OpenOut(path);
  out << text;
  Finish(out, path);
}

}  // namespace gale::io
