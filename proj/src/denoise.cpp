#include "rtda/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Cholesky>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rtda/geometry.hpp"

namespace rtda {

std::string_view to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::ellipsoidal: return "ellipsoidal";
    case FilterMode::spherical: return "spherical";
    case FilterMode::knn: return "knn";
    case FilterMode::moving_average: return "moving_average";
    case FilterMode::adaptive_moving_average: return "adaptive_moving_average";
  }
  return "unknown";
}

FilterMode parse_filter_mode(std::string_view name) {
  for (auto mode : {FilterMode::ellipsoidal, FilterMode::spherical, FilterMode::knn, FilterMode::moving_average,
                    FilterMode::adaptive_moving_average})
    if (name == to_string(mode)) return mode;
  throw std::invalid_argument("unknown filter mode '" + std::string(name) + "'");
}

std::string_view to_string(NeighbourhoodRule rule) {
  return rule == NeighbourhoodRule::containment ? "containment" : "edge";
}

NeighbourhoodRule parse_neighbourhood_rule(std::string_view name) {
  if (name == "containment") return NeighbourhoodRule::containment;
  if (name == "edge") return NeighbourhoodRule::edge;
  throw std::invalid_argument("unknown neighbourhood rule '" + std::string(name) + "'");
}

bool is_topological(FilterMode mode) { return mode == FilterMode::ellipsoidal || mode == FilterMode::spherical; }

void DenoiseParams::validate() const {
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be >= 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (segment < 4) throw std::invalid_argument("segment must be >= 4");
  if (gradient_window < 1) throw std::invalid_argument("gradient_window must be >= 1");
  if (!(degenerate_tolerance > 0.0)) throw std::invalid_argument("degenerate_tolerance must be positive");
  if (!(search_tol > 0.0)) throw std::invalid_argument("search_tol must be positive");
  if (!(alpha_max > 0.0)) throw std::invalid_argument("alpha_max must be positive");
}

std::vector<std::vector<std::size_t>> neighborhoods_at_scale(const std::vector<ScaledEdge>& edges, std::size_t n,
                                                            double alpha_star) {
  if (!(alpha_star >= 0.0)) throw std::invalid_argument("neighborhoods_at_scale: alpha_star must be >= 0");
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].push_back(i);
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n) throw std::invalid_argument("neighborhoods_at_scale: vertex out of range");
    if (e.scale <= alpha_star && e.i != e.j) {
      out[e.i].push_back(e.j);
      out[e.j].push_back(e.i);
    }
  }
  for (auto& set : out) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return out;
}

std::vector<std::vector<std::size_t>> containment_neighborhoods(const std::vector<Ellipsoid>& ellipsoids,
                                                               double alpha_star) {
  if (!(alpha_star >= 0.0)) throw std::invalid_argument("containment_neighborhoods: alpha_star must be >= 0");
  const std::size_t n = ellipsoids.size();
  std::vector<std::vector<std::size_t>> out(n);
  const double r2 = alpha_star * alpha_star;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ei = ellipsoids[i];
    const Eigen::Index d = ei.dim();
    const Eigen::MatrixXd inv = ei.shape().llt().solve(Eigen::MatrixXd::Identity(d, d));
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        out[i].push_back(i);
        continue;
      }
      const Eigen::VectorXd r = ellipsoids[j].center() - ei.center();
      if (r.dot(inv * r) <= r2) out[i].push_back(j);
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd neighbourhood_means(const Eigen::MatrixXd& points, const std::vector<std::vector<std::size_t>>& sets) {
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(points.cols());
    for (std::size_t j : sets[i]) sum += points.row(static_cast<Eigen::Index>(j));
    out.row(static_cast<Eigen::Index>(i)) = sum / static_cast<double>(sets[i].size());
  }
  return out;
}

}  // namespace

TopologicalResult topological_denoise_detailed(const SignalFrame& frame, const DenoiseParams& params) {
  params.validate();
  if (!is_topological(params.mode)) throw std::invalid_argument("topological_denoise: mode must be ellipsoidal or spherical");
  const std::size_t n = frame.size();
  if (n < 2 * static_cast<std::size_t>(params.gradient_window) + 2)
    throw std::invalid_argument("topological_denoise: need at least 2 * gradient_window + 2 samples");

  const GradientConfig grad{params.gradient_window, params.degenerate_tolerance};
  // Spherical is the rho == 1 case, whose shapes are exactly the identity.
  const std::vector<Ellipsoid> ellipsoids = params.mode == FilterMode::ellipsoidal
                                                ? flow_ellipsoids(frame, params.rho, grad)
                                                : spherical_ellipsoids(frame);
  const std::vector<ScaledEdge> edges = pairwise_scales(ellipsoids, params.alpha_max, params.search_tol, params.threads);
  PersistenceDiagram diagram = compute_flag_diagram(edges, n);
  const PersistencePair feature = most_persistent_feature(diagram, 1);
  const double alpha_star = feature.death;
  const auto sets = params.neighbourhood == NeighbourhoodRule::containment
                        ? containment_neighborhoods(ellipsoids, alpha_star)
                        : neighborhoods_at_scale(edges, n, alpha_star);
  SignalFrame output = frame.with_values(neighbourhood_means(frame.values(), sets));
  return {std::move(output), std::move(diagram), feature, alpha_star};
}

SignalFrame topological_denoise(const SignalFrame& frame, const DenoiseParams& params) {
  return topological_denoise_detailed(frame, params).output;
}

SignalFrame knn_denoise(const SignalFrame& frame, int k) {
  const std::size_t n = frame.size();
  if (k < 1 || static_cast<std::size_t>(k) >= n) throw std::invalid_argument("knn_denoise: k must satisfy 1 <= k < n");
  const Eigen::MatrixXd& p = frame.values();
  const auto kk = static_cast<std::size_t>(k);

  std::vector<std::vector<std::size_t>> sets(n);
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        dist.emplace_back((p.row(static_cast<Eigen::Index>(i)) - p.row(static_cast<Eigen::Index>(j))).squaredNorm(), j);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    sets[i].push_back(i);
    for (std::size_t r = 0; r < kk; ++r) sets[i].push_back(dist[r].second);
  }
  return frame.with_values(neighbourhood_means(p, sets));
}

std::vector<double> moving_average(const std::vector<double>& x, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  // Centred window [i - left, i + right]; even windows lean one sample back.
  const std::ptrdiff_t right = (window - 1) / 2;
  const std::ptrdiff_t left = window - 1 - right;
  std::vector<double> out(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - left);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + right);
    double sum = 0.0;
    for (std::ptrdiff_t t = lo; t <= hi; ++t) sum += x[static_cast<std::size_t>(t)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace {

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, c);
  return out;
}

}  // namespace

SignalFrame moving_average(const SignalFrame& frame, int window) {
  Eigen::MatrixXd out(frame.values().rows(), frame.values().cols());
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const auto smoothed = moving_average(column(frame.values(), c), window);
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, c) = smoothed[static_cast<std::size_t>(i)];
  }
  return frame.with_values(std::move(out));
}

double dominant_frequency(const std::vector<double>& segment, double fs) {
  const std::size_t m = segment.size();
  if (m < 4) throw std::invalid_argument("dominant_frequency: segment needs at least 4 samples");
  if (!(fs > 0.0)) throw std::invalid_argument("dominant_frequency: fs must be positive");

  double total = 0.0;
  for (double v : segment) total += std::abs(v);

  std::size_t best_bin = 0;
  double best_mag = -1.0;
  for (std::size_t bin = 1; bin <= m / 2; ++bin) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < m; ++t) {
      // (bin * t) mod m keeps the angle exact for long segments
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((bin * t) % m) / static_cast<double>(m);
      acc += segment[t] * std::polar(1.0, angle);
    }
    const double mag = std::abs(acc);
    if (mag > best_mag) {
      best_mag = mag;
      best_bin = bin;
    }
  }
  // Magnitudes at the roundoff level of the input mean a flat (or constant) segment.
  if (total == 0.0 || best_mag <= 1e-12 * total) throw std::domain_error("no dominant frequency");
  return static_cast<double>(best_bin) * fs / static_cast<double>(m);
}

int nyquist_window(double f_dom, double fs, int segment_length) {
  const double w = std::round(fs / (2.0 * f_dom));
  return static_cast<int>(std::clamp(w, 2.0, static_cast<double>(std::max(segment_length, 2))));
}

SignalFrame adaptive_moving_average(const SignalFrame& frame, int segment, double fs, int fallback_window) {
  if (segment < 4) throw std::invalid_argument("adaptive_moving_average: segment must be >= 4");
  if (!(fs > 0.0)) throw std::invalid_argument("adaptive_moving_average: fs must be positive");
  const std::size_t n = frame.size();
  Eigen::MatrixXd out(frame.values().rows(), frame.values().cols());
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const auto x = column(frame.values(), c);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(segment)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(segment));
      const std::vector<double> piece(x.begin() + static_cast<std::ptrdiff_t>(start),
                                      x.begin() + static_cast<std::ptrdiff_t>(stop));
      int window = fallback_window;
      if (piece.size() >= 4) {
        try {
          window = nyquist_window(dominant_frequency(piece, fs), fs, static_cast<int>(piece.size()));
        } catch (const std::domain_error&) {
          window = fallback_window;
        }
      }
      const auto smoothed = moving_average(piece, window);
      for (std::size_t t = 0; t < smoothed.size(); ++t) out(static_cast<Eigen::Index>(start + t), c) = smoothed[t];
    }
  }
  return frame.with_values(std::move(out));
}

SignalFrame denoise(const SignalFrame& frame, const DenoiseParams& params, std::optional<PersistenceDiagram>* diagram) {
  params.validate();
  switch (params.mode) {
    case FilterMode::ellipsoidal:
    case FilterMode::spherical: {
      auto result = topological_denoise_detailed(frame, params);
      if (diagram) *diagram = std::move(result.diagram);
      return std::move(result.output);
    }
    case FilterMode::knn: return knn_denoise(frame, params.k);
    case FilterMode::moving_average: return moving_average(frame, params.window);
    case FilterMode::adaptive_moving_average:
      return adaptive_moving_average(frame, params.segment, frame.sample_rate(), params.window);
  }
  throw std::invalid_argument("denoise: unknown mode");
}

}  // namespace rtda
