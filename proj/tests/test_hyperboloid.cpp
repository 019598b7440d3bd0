#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypdisk/elliptic.hpp"
#include "hypdisk/errors.hpp"
#include "hypdisk/hyperboloid.hpp"
#include "hypdisk/pseudosphere.hpp"
#include "hypdisk/time_of_flight.hpp"
#include "support/oracles.hpp"

using namespace hypdisk;
using std::numbers::pi;

TEST_CASE("finite-difference metric of the embedding") {
  for (double b : {0.5, 0.8, 0.95}) {
    const double K = hyperboloid::center_eta(b);
    for (double eta : {0.3 * K, K, 1.6 * K}) {
      const double xi = 0.4, h = 1e-5;
      Eigen::Vector3d ye = (hyperboloid::embed(eta + h, xi, b) - hyperboloid::embed(eta - h, xi, b)) / (2 * h);
      Eigen::Vector3d yx = (hyperboloid::embed(eta, xi + h, b) - hyperboloid::embed(eta, xi - h, b)) / (2 * h);
      auto g = hyperboloid::chart(b).metric({eta, xi});
      CHECK(std::abs(ye.squaredNorm() - g.g11) < 1e-8);
      CHECK(std::abs(ye.dot(yx)) < 1e-8);
      CHECK(std::abs(yx.squaredNorm() - g.g22) < 1e-8);
    }
  }
}

TEST_CASE("Christoffel symbols match finite differences of the metric") {
  const double b = 0.8;
  auto c = hyperboloid::chart(b);
  for (double eta : {0.4, 1.0, 2.2}) {
    const double h = 1e-5;
    auto gp = c.metric({eta + h, 0.0}), gm = c.metric({eta - h, 0.0}), g = c.metric({eta, 0.0});
    double d11 = (gp.g11 - gm.g11) / (2 * h), d22 = (gp.g22 - gm.g22) / (2 * h);
    auto G = c.christoffel({eta, 0.0});
    CHECK(G.g1_11 == doctest::Approx(d11 / (2 * g.g11)).epsilon(1e-7));
    CHECK(G.g1_22 == doctest::Approx(-d22 / (2 * g.g11)).epsilon(1e-7));
    CHECK(G.g2_12 == doctest::Approx(d22 / (2 * g.g22)).epsilon(1e-7));
    CHECK(G.g1_12 == 0.0);
    CHECK(G.g2_11 == 0.0);
    CHECK(G.g2_22 == 0.0);
  }
}

TEST_CASE("waist and degenerate limits") {
  for (double b : {0.6, 0.8, 0.9}) {
    const double K = hyperboloid::center_eta(b);
    CHECK(elliptic::jacobi(K, std::pow(b, 4)).am == doctest::Approx(pi / 2).epsilon(1e-13));
    auto k = hyperboloid::curvatures(K, b);
    CHECK(k.k1sq == doctest::Approx((1 - std::pow(b, 4)) / std::pow(b, 4)).epsilon(1e-12));
    CHECK(k.k1sq * k.k2sq == doctest::Approx(1.0).epsilon(1e-12));
  }
  const double b = std::sqrt(1.0 - 1e-12);
  for (double eta : {0.5, 1.0, 2.0}) {
    auto p = hyperboloid::embed(eta, 0.0, b);
    CHECK(std::abs(p.x() - 1.0 / std::cosh(eta)) < 1e-8);
    CHECK(std::abs(hyperboloid::generating_angle(eta, b) - pseudosphere::generating_angle(eta)) < 1e-5);
  }
}

TEST_CASE("embedding against elliptic oracles") {
  const double b = 0.8, k = b * b, m = k * k;
  const double K = oracle::adaptive_simpson(
      [m](double t) { return 1.0 / std::sqrt(1.0 - m * std::pow(std::sin(t), 2)); }, 0.0, pi / 2, 1e-14);
  const double E = oracle::adaptive_simpson(
      [m](double t) { return std::sqrt(1.0 - m * std::pow(std::sin(t), 2)); }, 0.0, pi / 2, 1e-14);
  auto dn = oracle::jacobi_rk4(K, m, 1e-4)[2];
  auto p = hyperboloid::embed(K, 0.0, b);
  CHECK(std::abs(p.x() - dn / k) < 1e-10);
  CHECK(std::abs(p.x() - std::sqrt(1 - m) / k) < 1e-10);
  CHECK(p.y() == 0.0);
  CHECK(std::abs(p.z() - (K - E) / k) < 1e-10);
}

TEST_CASE("time-of-flight calibration against pendulum shooting") {
  for (double lambda : {4.0, 9.0, 16.0}) {
    double a = epsilon_from_lambda(lambda);
    double s = oracle::pendulum_shooting_epsilon(lambda);
    CHECK(std::abs(a - s) < 1e-6);
    CHECK(time_of_flight(a, lambda) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(epsilon_from_lambda(4.0) == doctest::Approx(0.7642708623857).epsilon(1e-9));
  double e25 = epsilon_from_lambda(25.0);
  CHECK(std::abs(e25 - 8 * std::exp(-5.0)) < 0.1 * 8 * std::exp(-5.0));
  CHECK_THROWS_AS(epsilon_from_lambda(1e6), NoRootError);
  CHECK_THROWS_AS(epsilon_from_lambda(-1.0), DomainError);
  auto mod = hyperboloid::modulus_from_radius(2.0);
  CHECK(mod.b == doctest::Approx(std::sqrt(std::cos(mod.epsilon / 2))).epsilon(1e-15));
  CHECK(hyperboloid::modulus_from_radius(6.0).b > hyperboloid::modulus_from_radius(3.0).b);
}

TEST_CASE("generating angle at the waist equals eps") {
  for (double R : {1.0, 1.2654, 2.0}) {
    auto mod = hyperboloid::modulus_from_radius(R);
    double K = hyperboloid::center_eta(mod.b);
    CHECK(std::abs(hyperboloid::generating_angle(K, mod.b) - mod.epsilon) < 1e-8);
  }
}

TEST_CASE("largest geodesic disk is bounded by the singular parallel") {
  for (double b : {0.7, 0.9}) {
    double Rmax = hyperboloid::max_disk_radius(b);
    PolarGridOptions opt;
    opt.n_r = 8;
    opt.n_psi = 16;
    auto c = hyperboloid::chart(b);
    Point2 center{hyperboloid::center_eta(b), 0.0};
    CHECK_NOTHROW(build_polar_grid(c, center, Rmax - 1e-3, opt));
    try {
      build_polar_grid(c, center, Rmax + 1e-3, opt);
      FAIL("expected boundary exceeded");
    } catch (const BoundaryExceededError& e) {
      CHECK(std::abs(e.max_radius() - Rmax) < 1e-6);
    }
  }
  auto m = hyperboloid::modulus_for_max_radius(1.2654);
  CHECK(hyperboloid::max_disk_radius(m.b) == doctest::Approx(1.2654).epsilon(1e-12));
}

TEST_CASE("time-of-flight modulus for R=1.2654 does not admit a disk of radius 1.25") {
  // The pendulum calibration puts the singular parallel at distance
  // atanh(b^2) = 1.18397 from the waist.
  auto mod = hyperboloid::modulus_from_radius(1.2654);
  CHECK(hyperboloid::max_disk_radius(mod.b) == doctest::Approx(1.18397).epsilon(1e-5));
  CHECK_THROWS_AS(hyperboloid::disk_energy(mod.b, 1.25), BoundaryExceededError);
  CHECK_NOTHROW(hyperboloid::disk_energy(mod.b, 1.15));
}

TEST_CASE("disk energy against a Monte-Carlo oracle") {
  auto m = hyperboloid::modulus_for_max_radius(1.2654);
  const double R = 1.2;
  auto e = hyperboloid::disk_energy(m.b, R);
  double mc = oracle::monte_carlo_polar(
      [&](double r, double psi) { return oracle::hyperboloid_polar_density(m.b, r, psi); }, R,
      1'000'000, 3);
  MESSAGE("quadrature " << e.energy << " monte carlo " << mc);
  CHECK(std::abs(e.energy - mc) < 5e-3 * mc);
  CHECK(e.energy >= energy_floor(R));
  CHECK(hyperboloid::disk_energy(m.b, 0.0).energy == 0.0);
}

TEST_CASE("axisymmetry and energy floor") {
  const double b = 0.85;
  auto c = hyperboloid::chart(b);
  const double K = hyperboloid::center_eta(b);
  PolarGridOptions opt;
  auto a = bending_energy(build_polar_grid(c, {K, 0.0}, 0.8, opt)).value;
  auto s = bending_energy(build_polar_grid(c, {K, 1.7}, 0.8, opt)).value;
  CHECK(std::abs(a - s) < 1e-8 * a);
  for (double R : {0.05, 0.4, 0.8}) {
    double e = hyperboloid::disk_energy(b, R).energy;
    CHECK(e >= energy_floor(R));
  }
  // equality is approached only as R -> 0
  double small = hyperboloid::disk_energy(b, 0.05).energy / energy_floor(0.05);
  double large = hyperboloid::disk_energy(b, 0.8).energy / energy_floor(0.8);
  CHECK(small < large);
}

TEST_CASE("frame-integrated waist mesh has K = -1") {
  auto m = hyperboloid::modulus_for_max_radius(1.2654);
  auto mesh = hyperboloid::disk_mesh(m.b, 1.2);
  auto K = discrete_gaussian_curvature(mesh);
  double worst = 0.0;
  for (double k : K)
    if (!std::isnan(k)) worst = std::max(worst, std::abs(k + 1.0));
  CHECK(worst < 1e-2);
  std::vector<Eigen::Vector3d> ref;
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k)
    ref.push_back(hyperboloid::embed(mesh.u[k] + mesh.v[k], mesh.u[k] - mesh.v[k], m.b));
  CHECK(oracle::procrustes_rms(mesh.vertices, ref, true) < 1e-3);
}
