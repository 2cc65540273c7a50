#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slickseg/field.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace slickseg;

namespace {

RealField coordinate_x(Eigen::Index h, Eigen::Index w) {
  RealField f(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) f(y, x) = Real(x);
  return f;
}

RealField coordinate_y(Eigen::Index h, Eigen::Index w) {
  RealField f(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) f(y, x) = Real(y);
  return f;
}

}  // namespace

TEST_CASE("gradient of a linear ramp is the slope at interior points") {
  RealField f = 3.0 * coordinate_x(8, 8);
  Grad<Real> g = gradient(f);
  for (Eigen::Index y = 1; y < 7; ++y)
    for (Eigen::Index x = 1; x < 7; ++x) {
      CHECK(g.x(y, x) == doctest::Approx(3.0).epsilon(1e-14));
      CHECK(g.y(y, x) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("gradient of a constant field vanishes everywhere") {
  RealField f = RealField::Constant(6, 9, 4.25);
  Grad<Real> g = gradient(f);
  CHECK(g.x.abs().maxCoeff() == 0.0);
  CHECK(g.y.abs().maxCoeff() == 0.0);
}

TEST_CASE("central differences are exact on quadratics") {
  RealField x = coordinate_x(16, 16);
  RealField f = x.square();
  Grad<Real> g = gradient(f);
  for (Eigen::Index y = 0; y < 16; ++y)
    for (Eigen::Index j = 1; j < 15; ++j)
      CHECK(std::abs(g.x(y, j) - 2.0 * Real(j)) < 1e-12);
}

TEST_CASE("gradient is linear in its argument") {
  RealField f = oracle::random_field(10, 12, 1, -2, 2);
  RealField g = oracle::random_field(10, 12, 2, -2, 2);
  RealField combo = 2.0 * f + 0.5 * g;
  Grad<Real> gc = gradient(combo);
  Grad<Real> gf = gradient(f);
  Grad<Real> gg = gradient(g);
  CHECK((gc.x - (2.0 * gf.x + 0.5 * gg.x)).abs().maxCoeff() < 1e-12);
  CHECK((gc.y - (2.0 * gf.y + 0.5 * gg.y)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("divergence of the identity vector field is 2 at interior points") {
  RealField vx = coordinate_x(9, 9);
  RealField vy = coordinate_y(9, 9);
  RealField d = divergence(vx, vy);
  for (Eigen::Index y = 1; y < 8; ++y)
    for (Eigen::Index x = 1; x < 8; ++x)
      CHECK(d(y, x) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("divergence of a constant vector field is zero") {
  RealField vx = RealField::Constant(5, 7, 3.0);
  RealField vy = RealField::Constant(5, 7, -1.0);
  CHECK(divergence(vx, vy).abs().maxCoeff() == 0.0);
}

TEST_CASE("divergence is exact on quadratic components") {
  RealField vx = coordinate_x(16, 16).square();
  RealField vy = RealField::Zero(16, 16);
  RealField d = divergence(vx, vy);
  for (Eigen::Index y = 0; y < 16; ++y)
    for (Eigen::Index x = 1; x < 15; ++x)
      CHECK(std::abs(d(y, x) - 2.0 * Real(x)) < 1e-12);
}

TEST_CASE("divergence rejects mismatched dimensions") {
  RealField a = RealField::Zero(4, 4), b = RealField::Zero(4, 5);
  CHECK_THROWS_AS(divergence(a, b), std::invalid_argument);
}

TEST_CASE("laplacian of a linear field vanishes at interior points") {
  RealField f = 2.0 * coordinate_x(8, 8) - 3.0 * coordinate_y(8, 8) + 1.0;
  RealField l = laplacian(f);
  for (Eigen::Index y = 1; y < 7; ++y)
    for (Eigen::Index x = 1; x < 7; ++x) CHECK(std::abs(l(y, x)) < 1e-12);
}

TEST_CASE("laplacian of x^2 + y^2 is 4 at interior points") {
  RealField f = coordinate_x(12, 12).square() + coordinate_y(12, 12).square();
  RealField l = laplacian(f);
  for (Eigen::Index y = 2; y < 10; ++y)
    for (Eigen::Index x = 2; x < 10; ++x)
      CHECK(l(y, x) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("laplacian equals the divergence-gradient composition") {
  RealField f = oracle::random_field(8, 8, 3, -5, 5);
  Grad<Real> g = gradient(f);
  RealField composed = divergence(g.x, g.y);
  CHECK((laplacian(f) - composed).abs().maxCoeff() < 1e-10);
}

TEST_CASE("compact laplacian matches the analytic value on quadratics") {
  RealField f = coordinate_x(12, 12).square() + coordinate_y(12, 12).square();
  RealField l = laplacian_compact(f);
  for (Eigen::Index y = 1; y < 11; ++y)
    for (Eigen::Index x = 1; x < 11; ++x)
      CHECK(l(y, x) == doctest::Approx(4.0).epsilon(1e-13));
  RealField flat = RealField::Constant(6, 6, 2.0);
  CHECK(laplacian_compact(flat).abs().maxCoeff() == 0.0);
}

TEST_CASE("curvature of a cone field approximates 1/rho away from the apex") {
  const Eigen::Index n = 64;
  const Real c = 32.0, r = 20.0;
  RealField f(n, n);
  for (Eigen::Index y = 0; y < n; ++y)
    for (Eigen::Index x = 0; x < n; ++x)
      f(y, x) = std::sqrt((x - c) * (x - c) + (y - c) * (y - c)) - r;
  RealField k = curvature(f, kGradFloor);
  for (Eigen::Index y = 3; y < n - 3; ++y)
    for (Eigen::Index x = 3; x < n - 3; ++x) {
      const Real rho = std::sqrt((x - c) * (x - c) + (y - c) * (y - c));
      if (rho < 8.0 || rho > 24.0) continue;
      CHECK(std::abs(k(y, x) - 1.0 / rho) <= 0.05 / rho);
    }
}

TEST_CASE("curvature of straight level lines is zero") {
  RealField f = coordinate_x(10, 10);  // |grad| = 1
  RealField k = curvature(f, kGradFloor);
  for (Eigen::Index y = 1; y < 9; ++y)
    for (Eigen::Index x = 1; x < 9; ++x) CHECK(std::abs(k(y, x)) < 1e-12);
}

TEST_CASE("curvature of a constant field is zero under the gradient floor") {
  RealField f = RealField::Constant(8, 8, 5.0);
  RealField k = curvature(f, kGradFloor);
  CHECK(k.abs().maxCoeff() == 0.0);
  CHECK(k.allFinite());
}

TEST_CASE("operators stay finite on finite input") {
  RealField f = oracle::random_field(7, 5, 9, -100, 100);
  Grad<Real> g = gradient(f);
  CHECK(g.x.allFinite());
  CHECK(g.y.allFinite());
  CHECK(laplacian(f).allFinite());
  CHECK(curvature(f, kGradFloor).allFinite());
}

TEST_CASE("field operators instantiate for float") {
  Field<float> f = Field<float>::Constant(6, 6, 2.0f);
  Grad<float> g = gradient(f);
  CHECK(g.x.abs().maxCoeff() == 0.0f);
  CHECK(curvature(f, 1e-6f).allFinite());
}
