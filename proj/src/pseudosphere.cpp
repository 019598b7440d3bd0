#include "hypdisk/pseudosphere.hpp"

#include <cmath>
#include <string>

#include "hypdisk/errors.hpp"

namespace hypdisk::pseudosphere {

Eigen::Vector3d embed(double eta, double xi) {
  if (!(eta > 0.0))
    throw SingularAngleError("pseudosphere rim: eta=" + std::to_string(eta) +
                             " must be positive");
  const double c = std::cosh(eta);
  return {std::cos(xi) / c, std::sin(xi) / c, eta - std::tanh(eta)};
}

double generating_angle(double eta) {
  if (!(eta > 0.0)) throw DomainError("generating angle needs eta > 0");
  return 4.0 * std::atan(std::exp(-eta));
}

CurvatureSquares curvatures(double eta) {
  if (!(eta > 0.0)) throw DomainError("curvatures need eta > 0");
  double s = std::sinh(eta);
  return {1.0 / (s * s), s * s};
}

SurfaceChart chart(double eta_min) {
  SurfaceChart c;
  c.id = "pseudosphere";
  c.metric = [](const Point2& x) {
    double t = std::tanh(x[0]), sech = 1.0 / std::cosh(x[0]);
    return Metric{t * t, 0.0, sech * sech};
  };
  c.christoffel = [](const Point2& x) {
    Christoffel G;
    double sc = 1.0 / (std::sinh(x[0]) * std::cosh(x[0]));
    G.g1_11 = sc;
    G.g1_22 = sc;
    G.g2_12 = -std::tanh(x[0]);
    return G;
  };
  c.density = [](const Point2& x) {
    double s = std::sinh(x[0]);
    return s * s + 1.0 / (s * s);
  };
  c.domain_guard = [eta_min](const Point2& x) {
    return x[0] > eta_min ? Region::inside : Region::near_singular;
  };
  return c;
}

double max_disk_radius(double eta0) {
  if (!(eta0 >= 0.0)) throw DomainError("eta0 must be nonnegative");
  return std::log(std::cosh(eta0));
}

double shooting_max_radius(double eta0, std::size_t n_psi, double tol) {
  if (!(eta0 > 0.0)) throw DomainError("eta0 must be positive");
  const SurfaceChart c = chart();
  PolarGridOptions opt;
  opt.n_r = 2;
  opt.n_psi = n_psi;
  double lo = 0.0, hi = eta0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    try {
      build_polar_grid(c, {eta0, 0.0}, mid, opt);
      lo = mid;
    } catch (const BoundaryExceededError&) {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EnergyEntry disk_energy(double eta0, double R, const AdaptiveEnergyOptions& options) {
  if (!(eta0 > 0.0)) throw DomainError("eta0 must be positive");
  return adaptive_disk_energy(chart(), {eta0, 0.0}, R, options);
}

GeneratingAngleField cnet_field(double eta0, double R, double h) {
  if (!(R > 0.0) || !(R < max_disk_radius(eta0)))
    throw DomainError("pseudosphere mesh needs 0 < R < ln cosh eta0");
  const double c = 0.5 * eta0, a = 0.5 * R;
  return GeneratingAngleField::sample(
      Lattice::square(c - a, c - a, 2.0 * a, h),
      [](double u, double v) { return generating_angle(u + v); }, 1.0);
}

SurfaceMesh disk_mesh(double eta0, double R, double h) {
  auto field = cnet_field(eta0, R, h);
  FrameOptions opt;
  opt.anchor.i = field.lattice().nu / 2;
  opt.anchor.j = field.lattice().nv / 2;
  return integrate_frame(field, opt);
}

}  // namespace hypdisk::pseudosphere
