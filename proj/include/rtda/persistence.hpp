#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rtda/filtration.hpp"

namespace rtda {

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();

  bool is_finite() const { return death != std::numeric_limits<double>::infinity(); }
  double persistence() const { return death - birth; }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

/// Ordering used for canonical output: (dim, birth, death).
bool pair_less(const PersistencePair& a, const PersistencePair& b);

struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  std::size_t n_vertices = 0;

  std::vector<PersistencePair> of_dim(int dim) const;
};

/// Raised when a diagram has no finite pair in the requested dimension.
class NoRecurrentLoop : public std::runtime_error {
public:
  NoRecurrentLoop() : std::runtime_error("no recurrent loop detected") {}
};

/// H0 and H1 by left-to-right column reduction over GF(2) of the boundary
/// matrix in filtration order, with clearing. Zero-length pairs are dropped
/// and the result is sorted by `pair_less`.
PersistenceDiagram compute_diagram(const FilteredComplex& complex);

/// Same diagram as compute_diagram(build_complex(edges, n, 2)) without
/// materialising the triangles.
///
/// Triangles are visited lazily, grouped by their youngest edge, and only
/// reduced while some cycle class is still alive, so the cost is governed by
/// the lifetime of H1 rather than by the number of 3-cliques.
PersistenceDiagram compute_flag_diagram(const std::vector<ScaledEdge>& edges, std::size_t n_vertices);

/// Finite pair of `dim` with the largest death - birth (equal within 1e-12
/// relative counts as a tie); ties go to the larger
/// death and then the larger birth. Throws NoRecurrentLoop when none exists.
PersistencePair most_persistent_feature(const PersistenceDiagram& diagram, int dim = 1);

/// birth == death within 1e-12 relative.
bool is_zero_length(double birth, double death);

}  // namespace rtda
