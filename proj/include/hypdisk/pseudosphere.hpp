#pragma once

// Tractrix surface of revolution in coordinates (eta, xi): metric
// tanh^2(eta) d eta^2 + sech^2(eta) d xi^2, singular rim at eta = 0.

#include <Eigen/Core>

#include "hypdisk/chebyshev.hpp"
#include "hypdisk/geodesic.hpp"

namespace hypdisk::pseudosphere {

Eigen::Vector3d embed(double eta, double xi);

// 4 atan(exp(-eta))
double generating_angle(double eta);
CurvatureSquares curvatures(double eta);

// xi is not wrapped: the chart covers the universal cover of the surface.
SurfaceChart chart(double eta_min = 1e-8);

// ln cosh(eta0)
double max_disk_radius(double eta0);

// Largest radius for which every sampled geodesic of the polar grid stays
// regular, by bisection on the radius.
double shooting_max_radius(double eta0, std::size_t n_psi = 8, double tol = 1e-9);

EnergyEntry disk_energy(double eta0, double R,
                        const AdaptiveEnergyOptions& options = {});

// Chebyshev coordinates u + v = eta, u - v = xi; the square of half side R/2
// around the disk center lies inside the geodesic disk of radius R.
GeneratingAngleField cnet_field(double eta0, double R, double h);
SurfaceMesh disk_mesh(double eta0, double R, double h = 1.0 / 128);

}  // namespace hypdisk::pseudosphere
