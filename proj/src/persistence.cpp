#include "rtda/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace rtda {

bool pair_less(const PersistencePair& a, const PersistencePair& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

std::vector<PersistencePair> PersistenceDiagram::of_dim(int dim) const {
  std::vector<PersistencePair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
               [dim](const PersistencePair& p) { return p.dim == dim; });
  return out;
}

bool is_zero_length(double birth, double death) {
  if (!std::isfinite(death)) return false;
  return std::abs(death - birth) <= 1e-12 * std::max(std::abs(birth), std::abs(death));
}

namespace {

using Column = std::vector<std::size_t>;  // ascending; pivot is back()

// a ^= b over GF(2)
void add_column(Column& a, const Column& b) {
  Column out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a.swap(out);
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

void push_pair(PersistenceDiagram& diagram, int dim, double birth, double death) {
  if (!is_zero_length(birth, death)) diagram.pairs.push_back({dim, birth, death});
}

void finish(PersistenceDiagram& diagram) {
  std::sort(diagram.pairs.begin(), diagram.pairs.end(), pair_less);
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

PersistenceDiagram compute_diagram(const FilteredComplex& complex) {
  const auto& simplices = complex.simplices();
  const std::size_t m = simplices.size();

  std::map<std::array<std::uint32_t, 3>, std::size_t> index_of;
  for (std::size_t k = 0; k < m; ++k) index_of.emplace(simplices[k].vertices, k);
  constexpr auto none = FilteredSimplex::kNoVertex;
  auto face = [&](std::uint32_t a, std::uint32_t b) {
    const auto it = index_of.find({a, b, none});
    if (it == index_of.end()) throw std::invalid_argument("compute_diagram: missing face");
    return it->second;
  };

  std::vector<Column> columns(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& s = simplices[k];
    const auto& v = s.vertices;
    if (s.dim == 1) {
      columns[k] = {face(v[0], none), face(v[1], none)};
    } else if (s.dim == 2) {
      columns[k] = {face(v[0], v[1]), face(v[0], v[2]), face(v[1], v[2])};
    }
    for (std::size_t f : columns[k])
      if (f >= k) throw std::invalid_argument("compute_diagram: face does not precede its coface");
    std::sort(columns[k].begin(), columns[k].end());
  }

  std::vector<std::size_t> owner(m, kNone);  // owner[row] = column whose pivot is row
  std::vector<bool> cleared(m, false);
  auto reduce = [&](int dim) {
    for (std::size_t j = 0; j < m; ++j) {
      if (simplices[j].dim != dim || cleared[j]) continue;
      Column& col = columns[j];
      while (!col.empty() && owner[col.back()] != kNone) add_column(col, columns[owner[col.back()]]);
      if (!col.empty()) {
        owner[col.back()] = j;
        // Clearing: a pivot row's own column reduces to zero.
        cleared[col.back()] = true;
        columns[col.back()].clear();
      }
    }
  };
  reduce(2);
  reduce(1);

  PersistenceDiagram diagram;
  diagram.n_vertices = complex.n_vertices();
  for (std::size_t k = 0; k < m; ++k) {
    const auto& s = simplices[k];
    if (s.dim > 1) continue;
    if (owner[k] != kNone) {
      push_pair(diagram, s.dim, s.scale, simplices[owner[k]].scale);
    } else if (columns[k].empty()) {
      diagram.pairs.push_back({s.dim, s.scale, std::numeric_limits<double>::infinity()});
    }
  }
  finish(diagram);
  return diagram;
}

PersistenceDiagram compute_flag_diagram(const std::vector<ScaledEdge>& input_edges, std::size_t n) {
  validate_edges(input_edges, n);
  const std::vector<ScaledEdge> edges = sort_by_scale(input_edges);
  const std::size_t n_edges = edges.size();

  // order[i * n + j] = filtration index of edge (i, j), kNone if absent.
  std::vector<std::size_t> order(n * n, kNone);
  for (std::size_t e = 0; e < n_edges; ++e) {
    order[edges[e].i * n + edges[e].j] = e;
    order[edges[e].j * n + edges[e].i] = e;
  }

  PersistenceDiagram diagram;
  diagram.n_vertices = n;
  UnionFind components(n);

  // Triangles are ordered by (youngest edge, third vertex). Each reduced
  // column's pivot is an edge that created a cycle; `unclaimed` holds the
  // cycle-creating edges not yet killed. A column whose pivot drops below
  // every unclaimed edge can only reduce to zero.
  std::vector<std::size_t> owner(n_edges, kNone);
  std::vector<Column> reduced;
  std::set<std::size_t> unclaimed;

  for (std::size_t p = 0; p < n_edges; ++p) {
    const auto [i, j, scale] = edges[p];
    const std::size_t ri = components.find(i);
    const std::size_t rj = components.find(j);
    if (ri != rj) {
      // No triangle can have p as its youngest edge: that would need an
      // older path i - k - j.
      components.parent[std::max(ri, rj)] = std::min(ri, rj);
      push_pair(diagram, 0, 0.0, scale);
      continue;
    }
    unclaimed.insert(p);

    for (std::size_t k = 0; k < n && !unclaimed.empty(); ++k) {
      const std::size_t a = order[i * n + k];
      const std::size_t b = order[j * n + k];
      if (a == kNone || b == kNone || a > p || b > p) continue;

      Column col{std::min(a, b), std::max(a, b), p};
      while (!col.empty()) {
        const std::size_t low = col.back();
        if (low < *unclaimed.begin()) {
          col.clear();
          break;
        }
        if (owner[low] == kNone) break;
        add_column(col, reduced[owner[low]]);
      }
      if (col.empty()) continue;
      const std::size_t low = col.back();
      owner[low] = reduced.size();
      reduced.push_back(std::move(col));
      unclaimed.erase(low);
      push_pair(diagram, 1, edges[low].scale, scale);
    }
  }

  for (std::size_t v = 0; v < n; ++v)
    if (components.find(v) == v) diagram.pairs.push_back({0, 0.0, std::numeric_limits<double>::infinity()});
  for (std::size_t e : unclaimed) diagram.pairs.push_back({1, edges[e].scale, std::numeric_limits<double>::infinity()});
  finish(diagram);
  return diagram;
}

PersistencePair most_persistent_feature(const PersistenceDiagram& diagram, int dim) {
  const PersistencePair* best = nullptr;
  for (const auto& p : diagram.pairs) {
    if (p.dim != dim || !p.is_finite()) continue;
    if (!best) {
      best = &p;
      continue;
    }
    const double lp = p.persistence();
    const double lb = best->persistence();
    // lifespans within 1e-12 relative count as tied
    const bool tied = is_zero_length(lb, lp);
    if ((!tied && lp > lb) || (tied && (p.death > best->death || (p.death == best->death && p.birth > best->birth))))
      best = &p;
  }
  if (!best) throw NoRecurrentLoop();
  return *best;
}

}  // namespace rtda
