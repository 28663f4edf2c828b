#include "rtda/filtration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

namespace rtda {

FilteredSimplex FilteredSimplex::vertex(std::uint32_t v) {
  FilteredSimplex s;
  s.vertices[0] = v;
  return s;
}

FilteredSimplex FilteredSimplex::edge(std::uint32_t a, std::uint32_t b, double scale) {
  FilteredSimplex s;
  s.vertices = {std::min(a, b), std::max(a, b), kNoVertex};
  s.dim = 1;
  s.scale = scale;
  return s;
}

FilteredSimplex FilteredSimplex::triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c, double scale) {
  FilteredSimplex s;
  s.vertices = {a, b, c};
  std::sort(s.vertices.begin(), s.vertices.end());
  s.dim = 2;
  s.scale = scale;
  return s;
}

bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.scale != b.scale) return a.scale < b.scale;
  if (a.dim != b.dim) return a.dim < b.dim;
  return a.vertices < b.vertices;
}

FilteredComplex::FilteredComplex(std::size_t n_vertices, std::vector<FilteredSimplex> simplices)
    : n_vertices_(n_vertices), simplices_(std::move(simplices)) {
  using Key = std::array<std::uint32_t, 3>;
  std::map<Key, double> scale_of;
  for (const auto& s : simplices_) {
    if (s.dim > 2) throw std::invalid_argument("FilteredComplex: dimension > 2");
    if (!(s.scale >= 0.0) || !std::isfinite(s.scale))
      throw std::invalid_argument("FilteredComplex: scale must be finite and >= 0");
    for (std::size_t k = 0; k < 3; ++k) {
      const bool used = k < s.size();
      if (used && s.vertices[k] >= n_vertices_) throw std::invalid_argument("FilteredComplex: vertex out of range");
      if (!used && s.vertices[k] != FilteredSimplex::kNoVertex)
        throw std::invalid_argument("FilteredComplex: unused vertex slot must be empty");
      if (used && k > 0 && !(s.vertices[k - 1] < s.vertices[k]))
        throw std::invalid_argument("FilteredComplex: vertices must be strictly increasing");
    }
    if (!scale_of.emplace(s.vertices, s.scale).second)
      throw std::invalid_argument("FilteredComplex: duplicate simplex");
  }

  auto face_scale = [&](Key face) {
    auto it = scale_of.find(face);
    if (it == scale_of.end()) throw std::invalid_argument("FilteredComplex: missing face");
    return it->second;
  };
  constexpr auto none = FilteredSimplex::kNoVertex;
  std::size_t vertex_count = 0;
  for (const auto& s : simplices_) {
    const auto& v = s.vertices;
    if (s.dim == 0) {
      if (s.scale != 0.0) throw std::invalid_argument("FilteredComplex: vertices must enter at scale 0");
      ++vertex_count;
    } else if (s.dim == 1) {
      if (face_scale({v[0], none, none}) > s.scale || face_scale({v[1], none, none}) > s.scale)
        throw std::invalid_argument("FilteredComplex: edge precedes a vertex");
    } else {
      for (Key face : {Key{v[0], v[1], none}, Key{v[0], v[2], none}, Key{v[1], v[2], none}})
        if (face_scale(face) > s.scale) throw std::invalid_argument("FilteredComplex: triangle precedes an edge");
    }
  }
  if (vertex_count != n_vertices_) throw std::invalid_argument("FilteredComplex: every vertex must be present");
  std::sort(simplices_.begin(), simplices_.end(), filtration_less);
}

std::size_t FilteredComplex::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(simplices_.begin(), simplices_.end(),
                                                [dim](const FilteredSimplex& s) { return s.dim == dim; }));
}

std::vector<FilteredSimplex> FilteredComplex::up_to(double alpha) const {
  auto end = std::find_if(simplices_.begin(), simplices_.end(),
                          [alpha](const FilteredSimplex& s) { return s.scale > alpha; });
  return {simplices_.begin(), end};
}

std::vector<ScaledEdge> pairwise_scales(const std::vector<Ellipsoid>& ellipsoids, double alpha_max,
                                        double search_tol, unsigned threads) {
  const std::size_t n = ellipsoids.size();
  if (n < 2) throw std::invalid_argument("pairwise_scales: need at least 2 ellipsoids");
  if (!(alpha_max > 0.0)) throw std::invalid_argument("pairwise_scales: alpha_max must be positive");
  for (const auto& e : ellipsoids)
    if (e.dim() != ellipsoids.front().dim()) throw std::invalid_argument("pairwise_scales: dimension mismatch");

  // Row i holds the scales for pairs (i, j > i); rows are claimed dynamically
  // but each lands in its own slot, so the merge is order-independent.
  std::vector<std::vector<ScaledEdge>> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      auto& row = rows[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = intersection_scale(ellipsoids[i], ellipsoids[j], search_tol);
        if (a <= alpha_max) row.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), a});
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<ScaledEdge> edges;
  for (auto& row : rows) edges.insert(edges.end(), row.begin(), row.end());
  return edges;
}

void validate_edges(const std::vector<ScaledEdge>& edges, std::size_t n_vertices) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& e : edges) {
    if (e.i >= n_vertices || e.j >= n_vertices) throw std::invalid_argument("edge vertex out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loop edge");
    if (!(e.scale >= 0.0) || !std::isfinite(e.scale)) throw std::invalid_argument("edge scale must be finite and >= 0");
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second)
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
  }
}

std::vector<ScaledEdge> sort_by_scale(std::vector<ScaledEdge> edges) {
  for (auto& e : edges)
    if (e.i > e.j) std::swap(e.i, e.j);
  std::sort(edges.begin(), edges.end(), [](const ScaledEdge& a, const ScaledEdge& b) {
    if (a.scale != b.scale) return a.scale < b.scale;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return edges;
}

FilteredComplex build_complex(const std::vector<ScaledEdge>& edges, std::size_t n_vertices, int expand_dim) {
  if (expand_dim != 1 && expand_dim != 2) throw std::invalid_argument("build_complex: expand_dim must be 1 or 2");
  validate_edges(edges, n_vertices);

  std::vector<FilteredSimplex> simplices;
  simplices.reserve(n_vertices + edges.size());
  for (std::size_t v = 0; v < n_vertices; ++v) simplices.push_back(FilteredSimplex::vertex(static_cast<std::uint32_t>(v)));
  for (const auto& e : edges) simplices.push_back(FilteredSimplex::edge(e.i, e.j, e.scale));

  if (expand_dim == 2) {
    // Sorted adjacency with scales; triangles a < b < c from common neighbours.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> upper(n_vertices);
    for (const auto& e : edges) {
      const auto [lo, hi] = std::minmax(e.i, e.j);
      upper[lo].emplace_back(hi, e.scale);
    }
    for (auto& adj : upper) std::sort(adj.begin(), adj.end());
    for (std::uint32_t a = 0; a < n_vertices; ++a) {
      const auto& na = upper[a];
      for (std::size_t x = 0; x < na.size(); ++x) {
        const auto [b, sab] = na[x];
        const auto& nb = upper[b];
        // intersect na[x+1..] with nb
        auto p = na.begin() + static_cast<std::ptrdiff_t>(x) + 1;
        auto q = nb.begin();
        while (p != na.end() && q != nb.end()) {
          if (p->first < q->first) {
            ++p;
          } else if (q->first < p->first) {
            ++q;
          } else {
            simplices.push_back(FilteredSimplex::triangle(a, b, p->first, std::max({sab, p->second, q->second})));
            ++p;
            ++q;
          }
        }
      }
    }
  }
  return FilteredComplex(n_vertices, std::move(simplices));
}

}  // namespace rtda
