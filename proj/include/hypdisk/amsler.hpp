#pragma once

// Periodic Amsler surfaces: phi(u, v) = varphi_n(2 sqrt(uv)) with
// varphi'' + varphi'/z = sin(varphi), varphi(0) = pi/n, varphi'(0) = 0.
// The u and v axes are straight asymptotic lines meeting at angle pi/n.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "hypdisk/chebyshev.hpp"
#include "hypdisk/geodesic.hpp"

namespace hypdisk::amsler {

class Profile {
 public:
  // Series start at z = 1e-3, adaptive RK beyond, dense table of spacing dz.
  Profile(int n, double z_max = 20.0, double dz = 1.0 / 1024, double rel_tol = 1e-12);

  int n() const { return n_; }
  double phi(double z) const;
  double dphi(double z) const;
  // dphi / z, smooth through z = 0
  double q(double z) const;
  // first z with phi = pi; NaN when not reached below z_max
  double z_singular() const { return z_singular_; }
  bool found() const { return found_; }
  double z_end() const { return z_.back(); }
  // coefficients of phi = c0 + c1 z^2 + c2 z^4 + c3 z^6
  const std::array<double, 4>& series() const { return c_; }

 private:
  int n_;
  std::array<double, 4> c_{};
  double z0_ = 1e-3;
  std::vector<double> z_, f_, df_, ddf_;
  double z_singular_ = std::numeric_limits<double>::quiet_NaN();
  bool found_ = false;
};

Profile painleve_solve(int n, double z_max = 20.0);

// Chart on the closed first quadrant; phi_u = 2 v q(z), phi_v = 2 u q(z).
// Points with phi >= phi_limit are near the singular curve.
SurfaceChart chart(const Profile& p, double phi_limit = 3.14158265358979);

// arctan(sin psi sin(pi/n) / (cos psi + sin psi cos(pi/n))) on [0, pi/n]
double polar_angle(double psi, int n);
// inverse on [0, pi/n] by bisection
double launch_angle(double Psi, int n);
// chart direction for launch angle psi
Point2 launch_direction(double psi);

struct MaxRadius {
  double radius;
  double psi;      // minimizing launch angle
  Point2 endpoint; // where the shortest geodesic meets the singular curve
};

// Shortest geodesic from the origin to the singular curve; golden-section
// over psi in [0, pi/4] using the u <-> v symmetry.
MaxRadius max_radius(const Profile& p, double psi_tol = 1e-7);
MaxRadius max_radius(int n);

// Arclength from the origin at which the geodesic launched at psi reaches
// the singular curve (or length_cap).
double first_hit(const Profile& p, double psi, double length_cap = 20.0);

// Geodesic polar grid on the fundamental sector Psi in [0, pi/n]; the
// energy is 2n times the sector integral.
PolarGridOptions sector_grid_options(int n, std::size_t n_r = 64, std::size_t n_psi = 32);
EnergyEntry disk_energy(const Profile& p, double R,
                        const AdaptiveEnergyOptions& options = {});

struct PeriodicMesh {
  SurfaceMesh mesh;
  std::vector<int> sector;  // per vertex, 0 .. 2n-1
  double weld_gap = 0.0;    // largest distance between welded seam vertices
  std::size_t sector_vertices = 0;
};

// Frame-integrated fundamental piece over the asymptotic square [0, R]^2,
// clipped where phi exceeds phi_cut, then carried around by half-turns
// about the straight boundary lines (2n - 1 copies) and welded.
PeriodicMesh build_periodic_mesh(const Profile& p, double R, double h = 1.0 / 128,
                                 double phi_cut = 3.04159265358979);

// Just the fundamental piece, anchored at the origin.
SurfaceMesh sector_mesh(const Profile& p, double R, double h = 1.0 / 128,
                        double phi_cut = 3.04159265358979);

// z,phi
void write_profile_csv(std::ostream& out, const Profile& p, double dz = 1.0 / 64);

}  // namespace hypdisk::amsler
