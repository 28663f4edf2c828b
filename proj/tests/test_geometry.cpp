#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rtda/geometry.hpp"
#include "rtda/golden_section.hpp"
#include "support/oracles.hpp"

using namespace rtda;

namespace {

SignalFrame ramp(int n) {
  Eigen::MatrixXd v(n, 2);
  for (int i = 0; i < n; ++i) v.row(i) << i, 2.0 * i;
  return SignalFrame(uniform_times(static_cast<std::size_t>(n), 1.0), v);
}

Ellipsoid ball(Eigen::VectorXd c) {
  const auto d = c.size();
  return Ellipsoid(std::move(c), Eigen::MatrixXd::Identity(d, d));
}

Ellipsoid interval(double c, double shape) { return Ellipsoid(Eigen::VectorXd::Constant(1, c), Eigen::MatrixXd::Constant(1, 1, shape)); }

}  // namespace

TEST_CASE("signal frame validation") {
  CHECK_THROWS_AS(SignalFrame({0.0}, Eigen::MatrixXd::Zero(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(SignalFrame({0.0, 1.0, 3.0}, Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);
  CHECK_THROWS_AS(SignalFrame({0.0, 1.0}, Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 1);
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS(SignalFrame({0.0, 1.0}, bad), std::invalid_argument);
  CHECK_NOTHROW(SignalFrame(uniform_times(500, 2.0), Eigen::MatrixXd::Zero(500, 2)));
}

TEST_CASE("gradients of a constant signal vanish") {
  const SignalFrame f(uniform_times(12, 1.0), Eigen::MatrixXd::Constant(12, 2, 5.0));
  CHECK(estimate_gradients(f).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradients of a linear ramp") {
  const auto f = ramp(12);
  const Eigen::MatrixXd g = estimate_gradients(f, {3, 1e-8});
  for (int i = 3; i < 9; ++i) {
    CHECK(g(i, 0) == doctest::Approx(4.0));
    CHECK(g(i, 1) == doctest::Approx(8.0));
  }
  // one-sided rules at both ends
  CHECK(g(0, 0) == doctest::Approx(2.0));
  CHECK(g(0, 1) == doctest::Approx(4.0));
  CHECK(g(11, 0) == doctest::Approx(2.0));
  CHECK(g(11, 1) == doctest::Approx(4.0));
  // i = 1: mean(p2..p4) - p1 = 3 - 1
  CHECK(g(1, 0) == doctest::Approx(2.0));
  CHECK(g.allFinite());
}

TEST_CASE("gradients with clipped windows on a short frame") {
  const auto f = ramp(2);
  const Eigen::MatrixXd g = estimate_gradients(f, {3, 1e-8});
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(estimate_gradients(f, {0, 1e-8}), std::invalid_argument);
}

TEST_CASE("shape from gradient") {
  const Eigen::MatrixXd axis = shape_from_gradient(Eigen::Vector2d(1, 0), 3.0, 1e-8);
  CHECK(axis(0, 0) == doctest::Approx(9.0));
  CHECK(axis(1, 1) == doctest::Approx(1.0));
  CHECK(axis(0, 1) == doctest::Approx(0.0));

  CHECK(shape_from_gradient(Eigen::Vector2d(0, 0), 5.0, 1e-8) == Eigen::MatrixXd::Identity(2, 2));
  CHECK(shape_from_gradient(Eigen::Vector2d(1e-9, 0), 5.0, 1e-8) == Eigen::MatrixXd::Identity(2, 2));

  const Eigen::MatrixXd diag = shape_from_gradient(Eigen::Vector2d(1, 1), 2.0, 1e-8);
  CHECK(diag(0, 0) == doctest::Approx(2.5));
  CHECK(diag(1, 1) == doctest::Approx(2.5));
  CHECK(diag(0, 1) == doctest::Approx(1.5));
  CHECK(diag(1, 0) == doctest::Approx(1.5));

  CHECK(shape_from_gradient(Eigen::Vector2d(0.3, -0.7), 1.0, 1e-8) == Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(shape_from_gradient(Eigen::Vector2d(std::nan(""), 0), 2.0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(shape_from_gradient(Eigen::Vector2d(1, 0), 0.5, 1e-8), std::invalid_argument);
}

TEST_CASE("shape eigenvalues are rho^2 and ones") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 4;
    Eigen::VectorXd g(d);
    for (int k = 0; k < d; ++k) g(k) = z(rng);
    const double rho = 1.0 + 4.0 * std::abs(z(rng));
    const Eigen::MatrixXd s = shape_from_gradient(g, rho, 1e-8);
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * s.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues()(d - 1) == doctest::Approx(rho * rho).epsilon(1e-12));
    // major axis along g
    CHECK(std::abs(eig.eigenvectors().col(d - 1).dot(g.normalized())) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ellipsoid rejects invalid shapes") {
  Eigen::Matrix2d asym;
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(Ellipsoid(Eigen::Vector2d(0, 0), asym), std::invalid_argument);
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(Ellipsoid(Eigen::Vector2d(0, 0), indefinite), std::invalid_argument);
  CHECK_THROWS_AS(Ellipsoid(Eigen::Vector3d(0, 0, 0), Eigen::Matrix2d::Identity()), std::invalid_argument);
}

TEST_CASE("overlap kernel examples") {
  CHECK(overlap_kernel(ball(Eigen::Vector2d(0, 0)), ball(Eigen::Vector2d(2, 0)), 0.5) == doctest::Approx(0.0));
  CHECK(overlap_kernel(ball(Eigen::Vector2d(0, 0)), ball(Eigen::Vector2d(1, 0)), 0.5) == doctest::Approx(0.75));
  // Intervals [-1, 1] and [1, 5] touch: kernel minimum 0 at s = 2/3.
  CHECK(overlap_kernel(interval(0, 1), interval(3, 4), 2.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(oracle::interval_touch_scale(0, 1, 3, 4) == doctest::Approx(1.0));
  CHECK_THROWS_AS(overlap_kernel(ball(Eigen::Vector2d(0, 0)), ball(Eigen::Vector2d(1, 0)), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(overlap_kernel(ball(Eigen::Vector2d(0, 0)), ball(Eigen::Vector2d(1, 0)), 1.0), std::invalid_argument);
}

TEST_CASE("overlap kernel is convex in s") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto e1 = oracle::random_ellipse(rng, Eigen::Vector2d(pos(rng), pos(rng)));
    const auto e2 = oracle::random_ellipse(rng, Eigen::Vector2d(pos(rng), pos(rng)));
    const int m = 200;
    std::vector<double> k(m - 1);
    for (int a = 1; a < m; ++a) k[a - 1] = overlap_kernel(e1, e2, static_cast<double>(a) / m);
    for (std::size_t a = 1; a + 1 < k.size(); ++a) CHECK(k[a - 1] - 2 * k[a] + k[a + 1] >= -1e-9);
  }
}

TEST_CASE("golden section finds the maximum of a concave function") {
  const auto r = golden_section_maximize([](double s) { return -(s - 0.3) * (s - 0.3); }, 0.0, 1.0, 1e-9);
  CHECK(r.argmax == doctest::Approx(0.3).epsilon(1e-8));
  CHECK_THROWS_AS(golden_section_maximize([](double) { return 0.0; }, 1.0, 0.0, 1e-6), std::invalid_argument);
}

TEST_CASE("intersection scale examples") {
  CHECK(intersection_scale(ball(Eigen::Vector2d(0, 0)), ball(Eigen::Vector2d(3, 4))) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(intersection_scale(ball(Eigen::Vector2d(1, 1)), ball(Eigen::Vector2d(1, 1))) == 0.0);
  CHECK(intersection_scale(interval(0, 1), interval(3, 4)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(intersection_scale(ball(Eigen::Vector2d(0, 0)), ball(Eigen::Vector3d(0, 0, 1))), std::invalid_argument);
}

TEST_CASE("intersection scale matches the interval oracle in 1-D") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-10, 10), s(0.01, 25);
  for (int trial = 0; trial < 1000; ++trial) {
    const double c1 = c(rng), c2 = c(rng), s1 = s(rng), s2 = s(rng);
    CHECK(intersection_scale(interval(c1, s1), interval(c2, s2)) ==
          doctest::Approx(oracle::interval_touch_scale(c1, s1, c2, s2)).epsilon(1e-9));
  }
}

TEST_CASE("intersection scale invariants") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  const double tol = 1e-6;
  for (int trial = 0; trial < 500; ++trial) {
    // dyadic centres keep translations and doublings exact
    auto dyadic = [&] { return std::round(pos(rng) * 64.0) / 64.0; };
    const Eigen::Vector2d c1(dyadic(), dyadic()), c2(dyadic(), dyadic());
    const auto e1 = oracle::random_ellipse(rng, c1);
    const auto e2 = oracle::random_ellipse(rng, c2);
    const double a = intersection_scale(e1, e2, tol);
    CHECK(a >= 0.0);

    const double swapped = intersection_scale(e2, e1, tol);
    CHECK(std::abs(a - swapped) <= tol * std::max(1.0, a));

    const Eigen::Vector2d shift(dyadic(), dyadic());
    CHECK(intersection_scale(Ellipsoid(c1 + shift, e1.shape()), Ellipsoid(c2 + shift, e2.shape()), tol) == a);

    CHECK(intersection_scale(Ellipsoid(2.0 * c1, e1.shape()), Ellipsoid(2.0 * c2, e2.shape()), tol) == 2.0 * a);
    CHECK(intersection_scale(Ellipsoid(3.0 * c1, e1.shape()), Ellipsoid(3.0 * c2, e2.shape()), tol) ==
          doctest::Approx(3.0 * a).epsilon(1e-12));

    const Eigen::Vector2d q(pos(rng), pos(rng)), r(pos(rng), pos(rng));
    CHECK(std::abs(intersection_scale(ball(q), ball(r), tol) - (q - r).norm() / 2.0) < 10 * tol);
  }
}

TEST_CASE("intersection scale agrees with the sampling oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), dist(0.0, 5.0);
  int checked = 0, agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto e1 = oracle::random_ellipse(rng, Eigen::Vector2d(0, 0));
    const double t = angle(rng), d = dist(rng);
    const auto e2 = oracle::random_ellipse(rng, Eigen::Vector2d(d * std::cos(t), d * std::sin(t)));
    const double a = intersection_scale(e1, e2);
    if (std::abs(a - 1.0) < 1e-3) continue;
    ++checked;
    agree += (a <= 1.0) == oracle::ellipses_overlap_by_sampling(e1, e2);
  }
  CHECK(checked > 900);
  CHECK(agree >= checked - 2);
}

TEST_CASE("flow ellipsoids follow the local direction") {
  const auto f = ramp(20);
  const auto es = flow_ellipsoids(f, 3.0);
  REQUIRE(es.size() == 20);
  const Eigen::Vector2d u = Eigen::Vector2d(1, 2).normalized();
  for (const auto& e : es) {
    CHECK(u.dot(e.shape() * u) == doctest::Approx(9.0));
    CHECK(e.shape().determinant() == doctest::Approx(9.0));
  }
  for (const auto& e : flow_ellipsoids(f, 1.0)) CHECK(e.shape() == Eigen::MatrixXd::Identity(2, 2));
  for (const auto& e : spherical_ellipsoids(f)) CHECK(e.shape() == Eigen::MatrixXd::Identity(2, 2));
}

TEST_CASE("flat segments fall back to isotropic shapes") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(20, 2);
  for (int i = 10; i < 20; ++i) v.row(i) << i, 0;
  const auto es = flow_ellipsoids(SignalFrame(uniform_times(20, 1.0), v), 4.0);
  CHECK(es[3].shape() == Eigen::MatrixXd::Identity(2, 2));
  CHECK(es[15].shape()(0, 0) == doctest::Approx(16.0));
}
