#pragma once

// Constant-curvature hyperboloid of revolution with modulus b in (0, 1):
//   y(eta, xi) = (1/k) (dn cos(k xi), dn sin(k xi), eta - E(am eta | m)),
// k = b^2, m = k^2, elliptic functions of eta with parameter m. Metric
// k^2 sn^2 d eta^2 + dn^2 d xi^2; waist at eta = K(m), singular parallels at
// eta = 0 and eta = 2K(m).

#include <Eigen/Core>

#include "hypdisk/chebyshev.hpp"
#include "hypdisk/geodesic.hpp"

namespace hypdisk::hyperboloid {

struct Modulus {
  double epsilon;  // generating angle at the waist
  double b;
};

// Time-of-flight calibration with lambda = R^2, b = sqrt(cos(eps/2)).
Modulus modulus_from_radius(double R);
// Modulus whose largest centered geodesic disk has radius Rmax.
Modulus modulus_for_max_radius(double Rmax);

// atanh(b^2): distance from the waist to a singular parallel.
double max_disk_radius(double b);
double center_eta(double b);

Eigen::Vector3d embed(double eta, double xi, double b);
// 2 acos(b^2 sn(eta))
double generating_angle(double eta, double b);
CurvatureSquares curvatures(double eta, double b);

SurfaceChart chart(double b, double guard = 1e-8);

EnergyEntry disk_energy(double b, double R,
                        const AdaptiveEnergyOptions& options = {});

// Chebyshev coordinates u + v = eta, u - v = xi around the waist point.
GeneratingAngleField cnet_field(double b, double R, double h);
SurfaceMesh disk_mesh(double b, double R, double h = 1.0 / 128);

}  // namespace hypdisk::hyperboloid
