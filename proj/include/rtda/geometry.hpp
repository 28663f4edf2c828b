#pragma once

#include <Eigen/Core>

#include "rtda/signal_frame.hpp"

namespace rtda {

/// E(shape, center) = { x : (x - center)^T shape^{-1} (x - center) <= 1 }.
///
/// The shape is the unit-scale matrix; a filtration scale alpha multiplies
/// the semi-axes by alpha, i.e. the shape by alpha^2.
class Ellipsoid {
public:
  Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape);

  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& shape() const { return shape_; }
  Eigen::Index dim() const { return center_.size(); }

  /// (x - c)^T shape^{-1} (x - c); <= 1 means x is inside.
  double quadratic_form(const Eigen::VectorXd& x) const;

private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd shape_;
};

struct GradientConfig {
  int window = 3;
  double degenerate_tolerance = 1e-8;
};

/// Sliding-window gradient: forward-window mean minus backward-window mean.
///
/// Samples without a full backward window use mean(forward) - p_i; samples
/// without a full forward window use p_i - mean(backward). Windows are
/// clipped to the available samples.
Eigen::MatrixXd estimate_gradients(const SignalFrame& frame, const GradientConfig& cfg = {});

/// rho^2 u u^T + (I - u u^T) with u = g / |g|, or identity when
/// |g| <= tol * scale_reference.
Eigen::MatrixXd shape_from_gradient(const Eigen::VectorXd& g, double rho, double tol,
                                    double scale_reference = 1.0);

/// One gradient-aligned ellipsoid per sample. rho == 1 yields identity shapes.
std::vector<Ellipsoid> flow_ellipsoids(const SignalFrame& frame, double rho,
                                       const GradientConfig& cfg = {});

/// Identity-shaped ellipsoids (balls) centred on every sample.
std::vector<Ellipsoid> spherical_ellipsoids(const SignalFrame& frame);

/// Largest pairwise Euclidean distance between rows.
double point_cloud_diameter(const Eigen::MatrixXd& points);

/// K(s) = 1 - s(1-s) v^T (s*S1 + (1-s)*S2)^{-1} v, v = c2 - c1.
///
/// K is convex on (0,1). The unit-scale ellipsoids intersect iff K >= 0 on
/// the whole interval.
double overlap_kernel(const Ellipsoid& e1, const Ellipsoid& e2, double s);

/// Smallest alpha >= 0 at which the alpha-scaled ellipsoids touch.
///
/// alpha* = sqrt(max_s s(1-s) v^T E_s^{-1} v), maximised by golden-section
/// search over s in (0,1) to bracket width `search_tol`.
double intersection_scale(const Ellipsoid& e1, const Ellipsoid& e2, double search_tol = 1e-6);

}  // namespace rtda
