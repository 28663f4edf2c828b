#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtda/filtration.hpp"
#include "rtda/persistence.hpp"
#include "rtda/signal_frame.hpp"

namespace rtda {

enum class FilterMode { ellipsoidal, spherical, knn, moving_average, adaptive_moving_average };

std::string_view to_string(FilterMode mode);
/// Throws std::invalid_argument for unknown names.
FilterMode parse_filter_mode(std::string_view name);
bool is_topological(FilterMode mode);

/// How the averaging set of sample i is read off the filtration at alpha*.
///   containment: samples inside i's own ellipsoid scaled by alpha*
///   edge:        i plus every j whose pair scale is <= alpha*
/// containment is a subset of edge.
enum class NeighbourhoodRule { containment, edge };

std::string_view to_string(NeighbourhoodRule rule);
NeighbourhoodRule parse_neighbourhood_rule(std::string_view name);

struct DenoiseParams {
  FilterMode mode = FilterMode::ellipsoidal;
  double rho = 3.0;
  int k = 20;
  int window = 20;
  int segment = 100;
  int gradient_window = 3;
  NeighbourhoodRule neighbourhood = NeighbourhoodRule::containment;
  double degenerate_tolerance = 1e-8;
  double search_tol = 1e-6;
  double alpha_max = std::numeric_limits<double>::infinity();
  unsigned threads = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Index sets N(i) = {i} u {j : scale(i, j) <= alpha_star}, each sorted.
std::vector<std::vector<std::size_t>> neighborhoods_at_scale(const std::vector<ScaledEdge>& edges,
                                                            std::size_t n, double alpha_star);

/// N(i) = {j : (p_j - c_i)^T (alpha_star^2 S_i)^{-1} (p_j - c_i) <= 1}, where
/// p_j are the ellipsoid centres. Always contains i; sorted.
std::vector<std::vector<std::size_t>> containment_neighborhoods(const std::vector<Ellipsoid>& ellipsoids,
                                                               double alpha_star);

/// Intermediate products of the topological filters.
struct TopologicalResult {
  SignalFrame output;
  PersistenceDiagram diagram;
  PersistencePair feature;
  double alpha_star = 0.0;
};

/// Ellipsoidal or spherical neighbourhood averaging at the death scale of the
/// most persistent H1 class. Throws NoRecurrentLoop when H1 has no finite pair.
TopologicalResult topological_denoise_detailed(const SignalFrame& frame, const DenoiseParams& params);
SignalFrame topological_denoise(const SignalFrame& frame, const DenoiseParams& params);

/// Mean of p_i and its k nearest neighbours (Euclidean, ties to lower index).
SignalFrame knn_denoise(const SignalFrame& frame, int k);

/// Centred boxcar of nominal length `window`, truncated at the ends.
SignalFrame moving_average(const SignalFrame& frame, int window);
std::vector<double> moving_average(const std::vector<double>& samples, int window);

/// Frequency (Hz) of the largest DFT magnitude over bins 1..floor(m/2).
/// Throws std::domain_error("no dominant frequency") for a flat spectrum.
double dominant_frequency(const std::vector<double>& segment, double fs);

/// Window chosen per segment as clamp(round(fs / (2 f_dom)), 2, segment).
int nyquist_window(double f_dom, double fs, int segment_length);

/// Per channel, per consecutive segment: moving average with the window
/// from `nyquist_window`, or `fallback_window` when the segment is flat.
SignalFrame adaptive_moving_average(const SignalFrame& frame, int segment, double fs,
                                    int fallback_window = 20);

/// Dispatch on params.mode. `diagram` receives the persistence diagram for
/// the topological modes.
SignalFrame denoise(const SignalFrame& frame, const DenoiseParams& params,
                    std::optional<PersistenceDiagram>* diagram = nullptr);

}  // namespace rtda
