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

#include "gale/persistence.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>

#include "gale/error.hpp"
#include "gale/union_find.hpp"

namespace gale::persistence {

namespace {

struct Edge {
  int lo;  // endpoint earlier in the ascending order
  int hi;  // endpoint later in the ascending order
};

// Ascending filtration order shared by both implementations.
struct Filtration {
  std::vector<int> order;  // nodes by (value, id)
  std::vector<int> rank;   // inverse of order
  std::vector<Edge> edges;  // deduplicated, endpoints oriented by rank
};

Filtration MakeFiltration(const ScalarGraph& g) {
  const int n = static_cast<int>(g.values.size());
  Filtration f;
  f.order.resize(static_cast<std::size_t>(n));
  std::iota(f.order.begin(), f.order.end(), 0);
  std::sort(f.order.begin(), f.order.end(), [&](int a, int b) {
    const double va = g.values[static_cast<std::size_t>(a)];
    const double vb = g.values[static_cast<std::size_t>(b)];
    return va < vb || (va == vb && a < b);
  });
  f.rank.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.rank[static_cast<std::size_t>(f.order[static_cast<std::size_t>(i)])] = i;

  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw FormatError("edge endpoint out of range");
    if (u == v) throw FormatError("self-loop in graph");
    if (f.rank[static_cast<std::size_t>(u)] > f.rank[static_cast<std::size_t>(v)]) std::swap(u, v);
    if (seen.emplace(u, v).second) f.edges.push_back({u, v});
  }
  return f;
}

double Val(const ScalarGraph& g, int v) { return g.values[static_cast<std::size_t>(v)]; }

void Emit(PersistenceDiagram& out, double birth, double death, PointClass cls, bool keep_zero) {
  if (keep_zero || birth != death) out.push_back({birth, death, cls});
}

class Bitset {
 public:
  explicit Bitset(std::size_t bits) : words_((bits + 63) / 64, 0) {}
  void Flip(std::size_t i) { words_[i / 64] ^= (std::uint64_t{1} << (i % 64)); }
  void Xor(const Bitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  }
  // Highest set bit, or -1 when empty.
  long Highest() const {
    for (std::size_t w = words_.size(); w-- > 0;) {
      if (words_[w]) return static_cast<long>(w * 64 + 63 - std::countl_zero(words_[w]));
    }
    return -1;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace

ScalarGraph FromMapper(const MapperGraph& g) {
  ScalarGraph s;
  s.values.reserve(g.nodes.size());
  for (const auto& n : g.nodes) s.values.push_back(n.lens_mean);
  s.edges = g.edges;
  return s;
}

PersistenceDiagram ExtendedPersistenceFast(const ScalarGraph& g, bool keep_zero) {
  const Filtration f = MakeFiltration(g);
  const std::size_t n = g.values.size();
  const auto& rank = f.rank;
  PersistenceDiagram out;

  // Ascending edge order: by later endpoint, then earlier endpoint.
  std::vector<std::size_t> asc(f.edges.size());
  std::iota(asc.begin(), asc.end(), std::size_t{0});
  std::sort(asc.begin(), asc.end(), [&](std::size_t a, std::size_t b) {
    const Edge& ea = f.edges[a];
    const Edge& eb = f.edges[b];
    return std::pair(rank[ea.hi], rank[ea.lo]) < std::pair(rank[eb.hi], rank[eb.lo]);
  });
  std::vector<std::size_t> asc_pos(f.edges.size());
  for (std::size_t i = 0; i < asc.size(); ++i) asc_pos[asc[i]] = i;

  // Sublevel sweep: elder rule keeps the component with the lower minimum.
  {
    UnionFind uf(n);
    std::vector<int> oldest(n);
    std::iota(oldest.begin(), oldest.end(), 0);
    for (std::size_t idx : asc) {
      const Edge& e = f.edges[idx];
      const std::size_t a = uf.Find(static_cast<std::size_t>(e.lo));
      const std::size_t b = uf.Find(static_cast<std::size_t>(e.hi));
      if (a == b) continue;
      const int ba = oldest[a];
      const int bb = oldest[b];
      const int elder = rank[ba] < rank[bb] ? ba : bb;
      const int younger = elder == ba ? bb : ba;
      Emit(out, Val(g, younger), Val(g, e.hi), PointClass::kOrd0, keep_zero);
      uf.Union(a, b);
      oldest[uf.Find(a)] = elder;
    }
    // Essential components span from their minimum to their maximum.
    std::vector<int> lo(n, -1), hi(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t r = uf.Find(v);
      const int iv = static_cast<int>(v);
      if (lo[r] < 0 || rank[iv] < rank[lo[r]]) lo[r] = iv;
      if (hi[r] < 0 || rank[iv] > rank[hi[r]]) hi[r] = iv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (lo[r] >= 0 && uf.Find(r) == r) Emit(out, Val(g, lo[r]), Val(g, hi[r]), PointClass::kExt0, keep_zero);
    }
  }

  // Superlevel sweep: edges enter with their earlier endpoint, in descending
  // order. Merges pair local maxima (rel1); edges closing a cycle pair it with
  // an ascending cycle through reduction in the ascending edge basis (ext1).
  std::vector<std::size_t> desc(f.edges.size());
  std::iota(desc.begin(), desc.end(), std::size_t{0});
  std::sort(desc.begin(), desc.end(), [&](std::size_t a, std::size_t b) {
    const Edge& ea = f.edges[a];
    const Edge& eb = f.edges[b];
    return std::pair(rank[ea.lo], rank[ea.hi]) > std::pair(rank[eb.lo], rank[eb.hi]);
  });

  UnionFind uf(n);
  std::vector<int> peak(n);
  std::iota(peak.begin(), peak.end(), 0);
  std::vector<std::vector<std::pair<int, std::size_t>>> forest(n);  // (neighbor, edge idx)
  std::vector<Bitset> basis;
  std::vector<long> basis_of_pivot(f.edges.size(), -1);

  std::vector<int> parent_node(n);
  std::vector<std::size_t> parent_edge(n);
  std::vector<char> visited(n);

  for (std::size_t idx : desc) {
    const Edge& e = f.edges[idx];
    const std::size_t a = uf.Find(static_cast<std::size_t>(e.lo));
    const std::size_t b = uf.Find(static_cast<std::size_t>(e.hi));
    if (a != b) {
      const int pa = peak[a];
      const int pb = peak[b];
      const int elder = rank[pa] > rank[pb] ? pa : pb;
      const int younger = elder == pa ? pb : pa;
      Emit(out, Val(g, younger), Val(g, e.lo), PointClass::kRel1, keep_zero);
      uf.Union(a, b);
      peak[uf.Find(a)] = elder;
      forest[static_cast<std::size_t>(e.lo)].emplace_back(e.hi, idx);
      forest[static_cast<std::size_t>(e.hi)].emplace_back(e.lo, idx);
      continue;
    }

    // Cycle = this edge plus the forest path between its endpoints.
    std::fill(visited.begin(), visited.end(), 0);
    std::deque<int> queue{e.lo};
    visited[static_cast<std::size_t>(e.lo)] = 1;
    while (!queue.empty() && !visited[static_cast<std::size_t>(e.hi)]) {
      const int x = queue.front();
      queue.pop_front();
      for (const auto& [y, via] : forest[static_cast<std::size_t>(x)]) {
        if (visited[static_cast<std::size_t>(y)]) continue;
        visited[static_cast<std::size_t>(y)] = 1;
        parent_node[static_cast<std::size_t>(y)] = x;
        parent_edge[static_cast<std::size_t>(y)] = via;
        queue.push_back(y);
      }
    }
    Bitset cycle(f.edges.size());
    cycle.Flip(asc_pos[idx]);
    for (int x = e.hi; x != e.lo; x = parent_node[static_cast<std::size_t>(x)]) {
      cycle.Flip(asc_pos[parent_edge[static_cast<std::size_t>(x)]]);
    }
    long pivot = cycle.Highest();
    while (pivot >= 0 && basis_of_pivot[static_cast<std::size_t>(pivot)] >= 0) {
      cycle.Xor(basis[static_cast<std::size_t>(basis_of_pivot[static_cast<std::size_t>(pivot)])]);
      pivot = cycle.Highest();
    }
    if (pivot < 0) continue;  // unreachable: the cycle always contains this edge
    const Edge& closing = f.edges[asc[static_cast<std::size_t>(pivot)]];
    Emit(out, Val(g, closing.hi), Val(g, e.lo), PointClass::kExt1, keep_zero);
    basis_of_pivot[static_cast<std::size_t>(pivot)] = static_cast<long>(basis.size());
    basis.push_back(std::move(cycle));
  }
  return out;
}

PersistenceDiagram ExtendedPersistenceReference(const ScalarGraph& g, bool keep_zero) {
  const Filtration f = MakeFiltration(g);
  const int n = static_cast<int>(g.values.size());
  const auto& rank = f.rank;

  enum class Kind { kApex, kVertex, kEdge, kConeEdge, kConeTriangle };
  struct Simplex {
    Kind kind;
    double value;
    std::vector<int> boundary;  // indices of faces, sorted
  };
  std::vector<Simplex> cells;
  std::vector<int> vertex_cell(static_cast<std::size_t>(n));
  std::vector<int> cone_cell(static_cast<std::size_t>(n));
  std::vector<int> edge_cell(f.edges.size());

  std::vector<std::vector<std::size_t>> edges_by_hi(static_cast<std::size_t>(n));
  std::vector<std::vector<std::size_t>> edges_by_lo(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    edges_by_hi[static_cast<std::size_t>(f.edges[i].hi)].push_back(i);
    edges_by_lo[static_cast<std::size_t>(f.edges[i].lo)].push_back(i);
  }

  cells.push_back({Kind::kApex, 0.0, {}});
  for (int v : f.order) {
    vertex_cell[static_cast<std::size_t>(v)] = static_cast<int>(cells.size());
    cells.push_back({Kind::kVertex, Val(g, v), {}});
    auto& es = edges_by_hi[static_cast<std::size_t>(v)];
    std::sort(es.begin(), es.end(), [&](std::size_t a, std::size_t b) {
      return rank[f.edges[a].lo] < rank[f.edges[b].lo];
    });
    for (std::size_t i : es) {
      std::vector<int> bd{vertex_cell[static_cast<std::size_t>(f.edges[i].lo)],
                          vertex_cell[static_cast<std::size_t>(v)]};
      std::sort(bd.begin(), bd.end());
      edge_cell[i] = static_cast<int>(cells.size());
      cells.push_back({Kind::kEdge, Val(g, v), std::move(bd)});
    }
  }
  for (auto it = f.order.rbegin(); it != f.order.rend(); ++it) {
    const int v = *it;
    cone_cell[static_cast<std::size_t>(v)] = static_cast<int>(cells.size());
    cells.push_back({Kind::kConeEdge, Val(g, v), {0, vertex_cell[static_cast<std::size_t>(v)]}});
    auto& es = edges_by_lo[static_cast<std::size_t>(v)];
    std::sort(es.begin(), es.end(), [&](std::size_t a, std::size_t b) {
      return rank[f.edges[a].hi] > rank[f.edges[b].hi];
    });
    for (std::size_t i : es) {
      std::vector<int> bd{edge_cell[i], cone_cell[static_cast<std::size_t>(f.edges[i].lo)],
                          cone_cell[static_cast<std::size_t>(f.edges[i].hi)]};
      std::sort(bd.begin(), bd.end());
      cells.push_back({Kind::kConeTriangle, Val(g, v), std::move(bd)});
    }
  }

  // Standard left-to-right column reduction over Z/2.
  std::vector<std::vector<int>> columns(cells.size());
  std::vector<int> column_of_low(cells.size(), -1);
  PersistenceDiagram out;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    std::vector<int> col = cells[j].boundary;
    while (!col.empty() && column_of_low[static_cast<std::size_t>(col.back())] >= 0) {
      const auto& other = columns[static_cast<std::size_t>(column_of_low[static_cast<std::size_t>(col.back())])];
      std::vector<int> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(sum));
      col = std::move(sum);
    }
    if (col.empty()) continue;
    const int low = col.back();
    column_of_low[static_cast<std::size_t>(low)] = static_cast<int>(j);
    columns[j] = std::move(col);

    const Simplex& birth = cells[static_cast<std::size_t>(low)];
    const Simplex& death = cells[j];
    PointClass cls;
    if (birth.kind == Kind::kVertex && death.kind == Kind::kEdge) {
      cls = PointClass::kOrd0;
    } else if (birth.kind == Kind::kVertex && death.kind == Kind::kConeEdge) {
      cls = PointClass::kExt0;
    } else if (birth.kind == Kind::kEdge && death.kind == Kind::kConeTriangle) {
      cls = PointClass::kExt1;
    } else if (birth.kind == Kind::kConeEdge && death.kind == Kind::kConeTriangle) {
      cls = PointClass::kRel1;
    } else {
      throw Error("unexpected pairing in extended filtration");
    }
    Emit(out, birth.value, death.value, cls, keep_zero);
  }
  return out;
}

PersistenceDiagram ExtendedPersistenceFast(const MapperGraph& g, bool keep_zero) {
  return ExtendedPersistenceFast(FromMapper(g), keep_zero);
}

PersistenceDiagram ExtendedPersistenceReference(const MapperGraph& g, bool keep_zero) {
  return ExtendedPersistenceReference(FromMapper(g), keep_zero);
}

DiagramStats ComputeStats(const PersistenceDiagram& d) {
  DiagramStats s;
  for (const auto& p : d) {
    ++s.count[static_cast<std::size_t>(p.cls)];
    s.max_persistence = std::max(s.max_persistence, p.persistence());
    s.total_persistence += p.persistence();
  }
  return s;
}

}  // namespace gale::persistence
