#include "rtda/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "rtda/golden_section.hpp"

namespace rtda {

Ellipsoid::Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape)
    : center_(std::move(center)), shape_(std::move(shape)) {
  const Eigen::Index d = center_.size();
  if (d < 1) throw std::invalid_argument("Ellipsoid: empty center");
  if (shape_.rows() != d || shape_.cols() != d) throw std::invalid_argument("Ellipsoid: shape/center size mismatch");
  if (!center_.allFinite() || !shape_.allFinite()) throw std::invalid_argument("Ellipsoid: non-finite entries");
  const double norm = shape_.cwiseAbs().maxCoeff();
  if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * norm)
    throw std::invalid_argument("Ellipsoid: shape is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(shape_);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("Ellipsoid: shape is not positive definite");
}

double Ellipsoid::quadratic_form(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd r = x - center_;
  return r.dot(shape_.llt().solve(r));
}

namespace {

Eigen::RowVectorXd window_mean(const Eigen::MatrixXd& p, Eigen::Index first, Eigen::Index count) {
  return p.middleRows(first, count).colwise().mean();
}

}  // namespace

Eigen::MatrixXd estimate_gradients(const SignalFrame& frame, const GradientConfig& cfg) {
  if (cfg.window < 1) throw std::invalid_argument("estimate_gradients: window must be >= 1");
  const Eigen::MatrixXd& p = frame.values();
  const Eigen::Index n = p.rows();
  if (n < 2) throw std::invalid_argument("estimate_gradients: need at least 2 samples");
  const Eigen::Index w = cfg.window;

  Eigen::MatrixXd g(n, p.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index fwd = std::min(w, n - 1 - i);
    const Eigen::Index bwd = std::min(w, i);
    if (i >= w && i < n - w) {
      g.row(i) = window_mean(p, i + 1, w) - window_mean(p, i - w, w);
    } else if (i < w && fwd > 0) {
      g.row(i) = window_mean(p, i + 1, fwd) - p.row(i);
    } else {
      g.row(i) = p.row(i) - window_mean(p, i - bwd, bwd);
    }
  }
  return g;
}

Eigen::MatrixXd shape_from_gradient(const Eigen::VectorXd& g, double rho, double tol, double scale_reference) {
  if (!g.allFinite()) throw std::invalid_argument("shape_from_gradient: non-finite gradient");
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw std::invalid_argument("shape_from_gradient: rho must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("shape_from_gradient: tol must be positive");

  const Eigen::Index d = g.size();
  Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(d, d);
  const double norm = g.norm();
  if (norm <= tol * scale_reference || norm == 0.0) return shape;
  const Eigen::VectorXd u = g / norm;
  // I + (rho^2 - 1) u u^T keeps rho == 1 exactly isotropic.
  shape.noalias() += (rho * rho - 1.0) * (u * u.transpose());
  return 0.5 * (shape + shape.transpose());
}

double point_cloud_diameter(const Eigen::MatrixXd& points) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j)
      best = std::max(best, (points.row(i) - points.row(j)).squaredNorm());
  return std::sqrt(best);
}

std::vector<Ellipsoid> flow_ellipsoids(const SignalFrame& frame, double rho, const GradientConfig& cfg) {
  const Eigen::MatrixXd grads = estimate_gradients(frame, cfg);
  const double diameter = point_cloud_diameter(frame.values());
  std::vector<Ellipsoid> out;
  out.reserve(frame.size());
  for (Eigen::Index i = 0; i < grads.rows(); ++i) {
    out.emplace_back(frame.values().row(i).transpose(),
                     shape_from_gradient(grads.row(i).transpose(), rho, cfg.degenerate_tolerance, diameter));
  }
  return out;
}

std::vector<Ellipsoid> spherical_ellipsoids(const SignalFrame& frame) {
  const Eigen::Index d = static_cast<Eigen::Index>(frame.channels());
  std::vector<Ellipsoid> out;
  out.reserve(frame.size());
  for (Eigen::Index i = 0; i < frame.values().rows(); ++i)
    out.emplace_back(frame.values().row(i).transpose(), Eigen::MatrixXd::Identity(d, d));
  return out;
}

namespace {

// s(1-s) v^T (s S1 + (1-s) S2)^{-1} v
template <int D>
double separation(const Eigen::Matrix<double, D, 1>& v, const Eigen::Matrix<double, D, D>& s1,
                  const Eigen::Matrix<double, D, D>& s2, double s) {
  const Eigen::Matrix<double, D, D> es = s * s1 + (1.0 - s) * s2;
  Eigen::LLT<Eigen::Matrix<double, D, D>> llt(es);
  if (llt.info() != Eigen::Success) throw std::runtime_error("overlap kernel: E_s is not positive definite");
  return s * (1.0 - s) * v.dot(llt.solve(v));
}

template <int D>
double max_separation(const Ellipsoid& e1, const Ellipsoid& e2, double search_tol) {
  const Eigen::Matrix<double, D, 1> v = e2.center() - e1.center();
  const Eigen::Matrix<double, D, D> s1 = e1.shape();
  const Eigen::Matrix<double, D, D> s2 = e2.shape();
  const auto result = golden_section_maximize(
      [&](double s) { return separation<D>(v, s1, s2, s); }, 0.0, 1.0, search_tol);
  return std::max(result.value, 0.0);
}

void check_pair(const Ellipsoid& e1, const Ellipsoid& e2) {
  if (e1.dim() != e2.dim()) throw std::invalid_argument("ellipsoid dimension mismatch");
}

}  // namespace

double overlap_kernel(const Ellipsoid& e1, const Ellipsoid& e2, double s) {
  check_pair(e1, e2);
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("overlap_kernel: s must lie in (0, 1)");
  const Eigen::VectorXd v = e2.center() - e1.center();
  return 1.0 - separation<Eigen::Dynamic>(v, e1.shape(), e2.shape(), s);
}

double intersection_scale(const Ellipsoid& e1, const Ellipsoid& e2, double search_tol) {
  check_pair(e1, e2);
  if (!(search_tol > 0.0)) throw std::invalid_argument("intersection_scale: search_tol must be positive");
  if (e1.center() == e2.center()) return 0.0;
  double g = 0.0;
  switch (e1.dim()) {
    case 1: g = max_separation<1>(e1, e2, search_tol); break;
    case 2: g = max_separation<2>(e1, e2, search_tol); break;
    case 3: g = max_separation<3>(e1, e2, search_tol); break;
    default: g = max_separation<Eigen::Dynamic>(e1, e2, search_tol); break;
  }
  return std::sqrt(g);
}

}  // namespace rtda
