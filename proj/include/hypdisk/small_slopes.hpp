#pragma once

// Small-slopes saddles: quadratic solutions of det D^2 w = -1 and their n-wave
// odd periodic extensions around the origin.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace hypdisk::small_slopes {

// (a u^2 - v^2 / a) / 2
double quadratic_saddle(double a, double u, double v);

using Hessian = std::array<double, 3>;  // w_uu, w_uv, w_vv

class PeriodicSaddle {
 public:
  explicit PeriodicSaddle(int n);  // n >= 2

  int n() const { return n_; }
  double a() const { return a_; }  // tan(pi / 2n)

  // Sector k covers polar angles [k pi/n, (k+1) pi/n); zero lines bound it.
  int sector(double u, double v) const;
  double height(double u, double v) const;
  // Hessian of the sector containing (u, v); constant per sector.
  Hessian hessian(double u, double v) const;
  // Euclidean distance to the nearest zero line (seam).
  double seam_distance(double u, double v) const;

 private:
  int n_;
  double a_;
};

// Uniform samples values[i + nx * j] at (x0 + i h, y0 + j h); NaN marks
// nodes outside the domain.
struct HeightSamples {
  double x0 = 0.0, y0 = 0.0, h = 0.0;
  std::size_t nx = 0, ny = 0;
  std::vector<double> values;
};

HeightSamples sample(const std::function<double(double, double)>& w, double x0,
                     double y0, double h, std::size_t nx, std::size_t ny);
// Square grid of spacing h over [-R, R]^2, NaN outside the disk.
HeightSamples sample_disk(const PeriodicSaddle& s, double R, double h);

// Max over interior nodes of |w_uu w_vv - w_uv^2 + 1| by centered differences.
// Nodes within 2h of a seam are skipped when seam_distance is given.
double monge_ampere_residual(const HeightSamples& samples,
                             const std::function<double(double, double)>& seam_distance = {});

// Closed form pi R^2 (tan^2 + cot^2)(pi / 2n); throws if the quadrature check
// disagrees by more than 1e-6 relative.
double periodic_energy(int n, double R);
// Gauss-Legendre quadrature of |D^2 w|^2 over the disk, sector by sector,
// with the Hessian from finite differences of the height.
double energy_quadrature(int n, double R, std::size_t nodes = 8);

// Peak height (1/2) tan(pi / 2n) R^2.
double amplitude(int n, double R);

// u,v,omega for nodes inside the disk
void write_height_csv(std::ostream& out, const PeriodicSaddle& s, double R, double h);

}  // namespace hypdisk::small_slopes
