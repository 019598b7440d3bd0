#pragma once

// Geodesics on a chart given by metric and Christoffel callbacks, geodesic
// polar grids, and bending-energy quadrature in geodesic polar coordinates.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hypdisk {

using Point2 = std::array<double, 2>;

struct Metric {
  double g11;
  double g12;
  double g22;
};

// Gamma^k_ij, named g<k>_<ij>.
struct Christoffel {
  double g1_11 = 0.0;
  double g1_12 = 0.0;
  double g1_22 = 0.0;
  double g2_11 = 0.0;
  double g2_12 = 0.0;
  double g2_22 = 0.0;
};

enum class Region { inside, near_singular };

struct SurfaceChart {
  std::string id;
  std::function<Metric(const Point2&)> metric;
  std::function<Christoffel(const Point2&)> christoffel;
  std::function<double(const Point2&)> density;
  std::function<Region(const Point2&)> domain_guard;
};

SurfaceChart euclidean_chart();

struct GeodesicOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // boundary events are resolved to this arclength
  double min_step = 1e-12;
};

struct GeodesicSample {
  double s;
  Point2 x;
  Point2 velocity;  // unit speed in the chart metric
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  double reached = 0.0;
  bool boundary_hit = false;
};

// Integrates the geodesic equations in true arclength (the speed is divided
// out at every evaluation). With empty `stops` every accepted step is
// recorded; otherwise only the stops (increasing, within (0, length]).
GeodesicPath shoot_geodesic(const SurfaceChart& chart, const Point2& start,
                            const Point2& direction, double length,
                            std::span<const double> stops = {},
                            const GeodesicOptions& options = {});

double metric_norm(const SurfaceChart& chart, const Point2& x, const Point2& v);

// Orthonormal basis at x: e1 along the first coordinate axis.
std::array<Point2, 2> orthonormal_basis(const SurfaceChart& chart,
                                        const Point2& x);

struct PolarGridOptions {
  std::size_t n_r = 128;    // even
  std::size_t n_psi = 256;  // even; intervals of the angular range
  double psi_begin = 0.0;
  double psi_end = 6.283185307179586;
  // full circle: periodic trapezoid in psi; otherwise Simpson on a sector
  bool periodic = true;
  GeodesicOptions shoot;
  // chart direction for polar angle psi; orthonormal_basis by default
  std::function<Point2(double)> direction;
};

struct GeodesicPolarGrid {
  Point2 center{};
  std::vector<double> radii;   // n_r + 1 values
  std::vector<double> angles;  // n_psi (periodic) or n_psi + 1 (sector)
  bool periodic = true;
  std::vector<Point2> coords;  // index i + radii.size() * j
  std::vector<double> density;

  const Point2& node(std::size_t i, std::size_t j) const {
    return coords[i + radii.size() * j];
  }
  double node_density(std::size_t i, std::size_t j) const {
    return density[i + radii.size() * j];
  }
};

GeodesicPolarGrid build_polar_grid(const SurfaceChart& chart,
                                   const Point2& center, double R,
                                   const PolarGridOptions& options = {});

struct EnergyEstimate {
  double value;
  double error;  // difference to the half-resolution rule
};

EnergyEstimate bending_energy(const GeodesicPolarGrid& grid);

// B(r_i) for every even radial index i (cumulative Simpson).
std::vector<std::array<double, 2>> energy_profile(const GeodesicPolarGrid& grid);

// Share of the total energy carried by the top `fraction` of nodes ranked
// by density.
double energy_concentration(const GeodesicPolarGrid& grid, double fraction);

struct EnergyEntry {
  double R = 0.0;
  double energy = 0.0;
  double err_estimate = 0.0;
  std::size_t n_r = 0;
  std::size_t n_psi = 0;
};

struct EnergyReport {
  std::string surface;
  std::string param;
  std::string rule = "simpson-r/trapezoid-psi";
  std::vector<EnergyEntry> entries;
};

struct AdaptiveEnergyOptions {
  PolarGridOptions grid;
  double rel_tol = 1e-4;
  int max_doublings = 3;
  // multiplies the grid integral (e.g. number of sectors)
  double multiplicity = 1.0;
};

// Doubles n_r and n_psi until successive results agree to rel_tol.
EnergyEntry adaptive_disk_energy(const SurfaceChart& chart, const Point2& center,
                                 double R, const AdaptiveEnergyOptions& options = {});

// Lower bound 4 pi (cosh R - 1) from the pointwise density floor 2.
double energy_floor(double R);

void write_energy_csv(const std::vector<EnergyReport>& reports, std::ostream& out);

}  // namespace hypdisk
