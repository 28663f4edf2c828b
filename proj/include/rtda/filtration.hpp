#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "rtda/geometry.hpp"

namespace rtda {

/// Edge (i, j) with i < j entering the filtration at `scale`.
struct ScaledEdge {
  std::uint32_t i;
  std::uint32_t j;
  double scale;

  friend bool operator==(const ScaledEdge&, const ScaledEdge&) = default;
};

/// Simplex of dimension 0..2. Unused vertex slots hold `kNoVertex`.
struct FilteredSimplex {
  static constexpr std::uint32_t kNoVertex = std::numeric_limits<std::uint32_t>::max();

  std::array<std::uint32_t, 3> vertices{kNoVertex, kNoVertex, kNoVertex};
  std::uint8_t dim = 0;
  double scale = 0.0;

  static FilteredSimplex vertex(std::uint32_t v);
  static FilteredSimplex edge(std::uint32_t a, std::uint32_t b, double scale);
  static FilteredSimplex triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c, double scale);

  std::size_t size() const { return static_cast<std::size_t>(dim) + 1; }
};

/// Total filtration order: (scale, dimension, vertex tuple).
bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b);

/// Simplicial complex of dimension <= 2 with a monotone filtration value per
/// simplex, kept in filtration order.
class FilteredComplex {
public:
  FilteredComplex() = default;

  /// Sorts the simplices and checks every invariant (vertices at 0, face
  /// closure, monotone scales, no duplicates). Throws std::invalid_argument.
  FilteredComplex(std::size_t n_vertices, std::vector<FilteredSimplex> simplices);

  std::size_t n_vertices() const { return n_vertices_; }
  const std::vector<FilteredSimplex>& simplices() const { return simplices_; }
  std::size_t size() const { return simplices_.size(); }
  std::size_t count(int dim) const;

  /// Simplices with scale <= alpha (a prefix of the filtration order).
  std::vector<FilteredSimplex> up_to(double alpha) const;

private:
  std::size_t n_vertices_ = 0;
  std::vector<FilteredSimplex> simplices_;
};

/// Critical intersection scale of every pair with scale <= alpha_max, ordered
/// by (i, j). `threads` = 0 uses the hardware concurrency.
std::vector<ScaledEdge> pairwise_scales(const std::vector<Ellipsoid>& ellipsoids,
                                        double alpha_max = std::numeric_limits<double>::infinity(),
                                        double search_tol = 1e-6, unsigned threads = 1);

/// Vertices at 0, edges at their scale and, for expand_dim == 2, a triangle
/// for every 3-clique at the max of its edge scales.
FilteredComplex build_complex(const std::vector<ScaledEdge>& edges, std::size_t n_vertices,
                              int expand_dim = 2);

/// Edges sorted by (scale, i, j); the order used by the flag-complex reduction.
std::vector<ScaledEdge> sort_by_scale(std::vector<ScaledEdge> edges);

/// Throws on out-of-range, self-loop, negative/non-finite scale or duplicate edges.
void validate_edges(const std::vector<ScaledEdge>& edges, std::size_t n_vertices);

}  // namespace rtda
