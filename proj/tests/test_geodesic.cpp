#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hypdisk/errors.hpp"
#include "hypdisk/geodesic.hpp"
#include "hypdisk/pseudosphere.hpp"
#include "support/oracles.hpp"

using namespace hypdisk;
using std::numbers::pi;

namespace {

SurfaceChart constant_density_chart(double c) {
  // Poincare-disk free chart: geodesic polar coordinates of the hyperbolic
  // plane itself, (r, theta) with metric dr^2 + sinh^2 r dtheta^2.
  SurfaceChart s = euclidean_chart();
  s.id = "const";
  s.density = [c](const Point2&) { return c; };
  return s;
}

}  // namespace

TEST_CASE("Euclidean chart geodesics are straight segments") {
  auto c = euclidean_chart();
  for (double ang : {0.0, 0.3, 2.0, -2.5}) {
    Point2 d{std::cos(ang), std::sin(ang)};
    auto p = shoot_geodesic(c, {0.5, -1.0}, {3 * d[0], 3 * d[1]}, 2.7);
    CHECK_FALSE(p.boundary_hit);
    CHECK(p.reached == 2.7);
    auto& end = p.samples.back();
    CHECK(end.s == 2.7);
    CHECK(std::abs(end.x[0] - (0.5 + 2.7 * d[0])) < 1e-10);
    CHECK(std::abs(end.x[1] - (-1.0 + 2.7 * d[1])) < 1e-10);
  }
}

TEST_CASE("guard trips stop the march at the boundary") {
  auto c = euclidean_chart();
  c.domain_guard = [](const Point2& x) {
    return x[0] < 1.0 ? Region::inside : Region::near_singular;
  };
  auto p = shoot_geodesic(c, {0.0, 0.0}, {1.0, 0.0}, 5.0);
  CHECK(p.boundary_hit);
  CHECK(std::abs(p.reached - 1.0) < 1e-10);
  CHECK_THROWS_AS(shoot_geodesic(c, {1.5, 0.0}, {1.0, 0.0}, 1.0), StartOnSingularityError);
}

TEST_CASE("stops are hit exactly") {
  auto c = pseudosphere::chart();
  std::vector<double> stops{0.1, 0.2, 0.35, 0.8};
  auto p = shoot_geodesic(c, {2.0, 0.0}, {0.3, 1.0}, 1.0, stops);
  REQUIRE(p.samples.size() == 5);
  for (std::size_t k = 0; k < stops.size(); ++k) CHECK(p.samples[k + 1].s == stops[k]);
}

TEST_CASE("radial pseudosphere geodesics have arclength ln(cosh eta / cosh eta0)") {
  auto c = pseudosphere::chart();
  for (double eta0 : {0.5, 1.0, 2.0}) {
    double eta1 = eta0 + 1.3;
    double L = std::log(std::cosh(eta1) / std::cosh(eta0));
    auto p = shoot_geodesic(c, {eta0, 0.3}, {1.0, 0.0}, L);
    CHECK(std::abs(p.samples.back().x[0] - eta1) < 1e-8);
    CHECK(std::abs(p.samples.back().x[1] - 0.3) < 1e-12);
  }
}

TEST_CASE("generic pseudosphere geodesic conserves the implicit invariant") {
  auto c = pseudosphere::chart();
  const double eta0 = 1.4;
  Point2 d{0.4, 2.0};
  auto p = shoot_geodesic(c, {eta0, 0.0}, d, 1.0);
  const auto& s0 = p.samples.front();
  double C = -s0.x[1] - std::cosh(eta0) * std::sinh(eta0) * s0.velocity[0] / s0.velocity[1];
  double D = std::pow(std::cosh(eta0), 2) + std::pow(s0.x[1] + C, 2);
  double drift = 0.0;
  for (const auto& s : p.samples)
    drift = std::max(drift, std::abs(std::pow(std::cosh(s.x[0]), 2) + std::pow(s.x[1] + C, 2) - D));
  CHECK(drift <= 1e-8);
  // unit speed is maintained
  for (const auto& s : p.samples) CHECK(std::abs(metric_norm(c, s.x, s.velocity) - 1.0) < 1e-12);
}

TEST_CASE("polar grid nodes sit at the right hyperbolic distance") {
  auto c = pseudosphere::chart();
  const double eta0 = 1.94, R = 1.2;
  PolarGridOptions opt;
  opt.n_r = 16;
  opt.n_psi = 16;
  auto g = build_polar_grid(c, {eta0, 0.0}, R, opt);
  for (std::size_t j = 0; j < g.angles.size(); ++j) {
    CHECK(g.node(0, j) == Point2{eta0, 0.0});
    for (std::size_t i = 0; i < g.radii.size(); ++i) {
      auto p = g.node(i, j);
      CHECK(std::abs(oracle::pseudosphere_distance(eta0, p[0], p[1]) - g.radii[i]) < 1e-8);
    }
  }
}

TEST_CASE("degenerate zero radius grid") {
  auto g = build_polar_grid(pseudosphere::chart(), {1.0, 0.0}, 0.0);
  CHECK(g.radii.size() == 1);
  CHECK(bending_energy(g).value == 0.0);
}

TEST_CASE("constant densities integrate to 2 pi c (cosh R - 1)") {
  for (double c : {2.0, 3.5}) {
    auto chart = constant_density_chart(c);
    for (double R : {0.5, 1.0, 2.0}) {
      auto g = build_polar_grid(chart, {0.0, 0.0}, R);
      double exact = 2.0 * pi * c * (std::cosh(R) - 1.0);
      CHECK(std::abs(bending_energy(g).value - exact) < 1e-8 * exact);
    }
  }
  CHECK(energy_floor(1.0) == doctest::Approx(4.0 * pi * (std::cosh(1.0) - 1.0)));
}

TEST_CASE("sector grids use Simpson in psi") {
  auto chart = constant_density_chart(2.0);
  PolarGridOptions opt;
  opt.periodic = false;
  opt.psi_begin = 0.0;
  opt.psi_end = pi / 3;
  auto g = build_polar_grid(chart, {0.0, 0.0}, 1.0, opt);
  CHECK(g.angles.size() == opt.n_psi + 1);
  CHECK(bending_energy(g).value == doctest::Approx(2.0 * pi / 3 * (std::cosh(1.0) - 1.0)).epsilon(1e-10));
}

TEST_CASE("pseudosphere disk energy matches a Monte-Carlo oracle") {
  const double eta0 = 1.94, R = 1.2;
  auto entry = pseudosphere::disk_energy(eta0, R);
  auto density = [eta0](double r, double psi) {
    double eta = oracle::pseudosphere_polar_point(eta0, r, psi)[0];
    double s = std::sinh(eta);
    return s * s + 1.0 / (s * s);
  };
  double mc = oracle::monte_carlo_polar(density, R, 1'000'000, 11);
  MESSAGE("quadrature " << entry.energy << " monte carlo " << mc);
  CHECK(std::abs(entry.energy - mc) < 5e-3 * mc);
  CHECK(entry.energy >= energy_floor(R));
  CHECK(entry.err_estimate < 1e-4 * entry.energy);
}

TEST_CASE("energy is invariant under psi reflection of the grid") {
  auto c = pseudosphere::chart();
  PolarGridOptions a;
  a.n_r = 64;
  a.n_psi = 128;
  PolarGridOptions b = a;
  auto basis = orthonormal_basis(c, {2.0, 0.0});
  b.direction = [basis](double psi) {
    return Point2{std::cos(-psi) * basis[0][0] + std::sin(-psi) * basis[1][0],
                  std::cos(-psi) * basis[0][1] + std::sin(-psi) * basis[1][1]};
  };
  double ea = bending_energy(build_polar_grid(c, {2.0, 0.0}, 1.0, a)).value;
  double eb = bending_energy(build_polar_grid(c, {2.0, 0.0}, 1.0, b)).value;
  CHECK(std::abs(ea - eb) < 1e-8 * ea);
}

TEST_CASE("halving the shooting tolerance moves endpoints less than the error estimate") {
  auto c = pseudosphere::chart();
  GeodesicOptions loose, tight;
  tight.rel_tol = 0.5 * loose.rel_tol;
  tight.abs_tol = 0.5 * loose.abs_tol;
  auto a = shoot_geodesic(c, {1.5, 0.0}, {0.7, 1.0}, 0.9, {}, loose);
  auto b = shoot_geodesic(c, {1.5, 0.0}, {0.7, 1.0}, 0.9, {}, tight);
  double dx = std::hypot(a.samples.back().x[0] - b.samples.back().x[0],
                         a.samples.back().x[1] - b.samples.back().x[1]);
  CHECK(dx < 1e-8);
}

TEST_CASE("energy profile is nondecreasing and ends at the total") {
  auto g = build_polar_grid(pseudosphere::chart(), {2.5, 0.0}, 1.5);
  auto prof = energy_profile(g);
  for (std::size_t k = 1; k < prof.size(); ++k) {
    CHECK(prof[k][1] >= prof[k - 1][1]);
    CHECK(prof[k][1] >= energy_floor(prof[k][0]) * (1 - 1e-9));
  }
  CHECK(prof.back()[1] == doctest::Approx(bending_energy(g).value).epsilon(1e-12));
}

TEST_CASE("energy csv schema") {
  EnergyReport r;
  r.surface = "pseudosphere";
  r.param = "eta0=2";
  r.entries.push_back({1.0, 10.0, 1e-6, 128, 256});
  std::ostringstream os;
  write_energy_csv({r}, os);
  CHECK(os.str() == "surface,param,R,energy,err_estimate,N_r,N_psi\npseudosphere,eta0=2,1,10,1e-06,128,256\n");
}
