#include "hypdisk/hyperboloid.hpp"

#include <cmath>
#include <string>

#include "hypdisk/elliptic.hpp"
#include "hypdisk/errors.hpp"
#include "hypdisk/time_of_flight.hpp"

namespace hypdisk::hyperboloid {
namespace {

void check_modulus(double b) {
  if (!(b > 0.0 && b < 1.0))
    throw DomainError("hyperboloid modulus b=" + std::to_string(b) +
                      " outside (0, 1)");
}

}  // namespace

Modulus modulus_from_radius(double R) {
  if (!(R > 0.0)) throw DomainError("radius must be positive");
  double eps = epsilon_from_lambda(R * R);
  return {eps, std::sqrt(std::cos(0.5 * eps))};
}

Modulus modulus_for_max_radius(double Rmax) {
  if (!(Rmax > 0.0) || !std::isfinite(Rmax))
    throw DomainError("maximal radius must be positive and finite");
  double k = std::tanh(Rmax);
  if (!(k < 1.0)) throw DomainError("maximal radius too large for double precision");
  return {2.0 * std::acos(k), std::sqrt(k)};
}

double max_disk_radius(double b) {
  check_modulus(b);
  return std::atanh(b * b);
}

double center_eta(double b) {
  check_modulus(b);
  return elliptic::complete_K(b * b * b * b);
}

Eigen::Vector3d embed(double eta, double xi, double b) {
  check_modulus(b);
  const double k = b * b, m = k * k;
  auto t = elliptic::jacobi(eta, m);
  if (std::abs(t.sn) == 0.0)
    throw SingularAngleError("hyperboloid embedding on a singular parallel");
  const double z = eta - elliptic::incomplete_E(t.am, m);
  return {t.dn * std::cos(k * xi) / k, t.dn * std::sin(k * xi) / k, z / k};
}

double generating_angle(double eta, double b) {
  check_modulus(b);
  auto t = elliptic::jacobi(eta, b * b * b * b);
  return 2.0 * std::acos(b * b * t.sn);
}

CurvatureSquares curvatures(double eta, double b) {
  check_modulus(b);
  const double k = b * b;
  auto t = elliptic::jacobi(eta, k * k);
  if (!(t.sn > 0.0)) throw SingularAngleError("hyperboloid curvature diverges");
  double r = (t.dn * t.dn) / (k * k * t.sn * t.sn);
  return {r, 1.0 / r};
}

SurfaceChart chart(double b, double guard) {
  check_modulus(b);
  const double k = b * b, m = k * k;
  const double K = elliptic::complete_K(m);
  SurfaceChart c;
  c.id = "hyperboloid";
  c.metric = [k, m](const Point2& x) {
    auto t = elliptic::jacobi(x[0], m);
    return Metric{k * k * t.sn * t.sn, 0.0, t.dn * t.dn};
  };
  c.christoffel = [m](const Point2& x) {
    auto t = elliptic::jacobi(x[0], m);
    Christoffel G;
    G.g1_11 = t.cn * t.dn / t.sn;
    G.g1_22 = t.cn * t.dn / t.sn;
    G.g2_12 = -m * t.sn * t.cn / t.dn;
    return G;
  };
  c.density = [k, m](const Point2& x) {
    auto t = elliptic::jacobi(x[0], m);
    double r = (t.dn * t.dn) / (k * k * t.sn * t.sn);
    return r + 1.0 / r;
  };
  c.domain_guard = [K, guard](const Point2& x) {
    return (x[0] > guard && x[0] < 2.0 * K - guard) ? Region::inside
                                                    : Region::near_singular;
  };
  return c;
}

EnergyEntry disk_energy(double b, double R, const AdaptiveEnergyOptions& options) {
  return adaptive_disk_energy(chart(b), {center_eta(b), 0.0}, R, options);
}

GeneratingAngleField cnet_field(double b, double R, double h) {
  if (!(R > 0.0) || !(R < max_disk_radius(b)))
    throw DomainError("hyperboloid mesh needs 0 < R < atanh(b^2)");
  const double c = 0.5 * center_eta(b), a = 0.5 * R;
  return GeneratingAngleField::sample(
      Lattice::square(c - a, c - a, 2.0 * a, h),
      [b](double u, double v) { return generating_angle(u + v, b); }, 1.0);
}

SurfaceMesh disk_mesh(double b, double R, double h) {
  auto field = cnet_field(b, R, h);
  FrameOptions opt;
  opt.anchor.i = field.lattice().nu / 2;
  opt.anchor.j = field.lattice().nv / 2;
  return integrate_frame(field, opt);
}

}  // namespace hypdisk::hyperboloid
