#pragma once

// Generating-angle fields on asymptotic (Chebyshev) coordinates and the
// reconstruction of the K = -1 immersion they define.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace hypdisk {

struct Lattice {
  double u0 = 0.0;
  double v0 = 0.0;
  double hu = 1.0;
  double hv = 1.0;
  std::size_t nu = 0;
  std::size_t nv = 0;

  double u(std::size_t i) const { return u0 + static_cast<double>(i) * hu; }
  double v(std::size_t j) const { return v0 + static_cast<double>(j) * hv; }
  std::size_t index(std::size_t i, std::size_t j) const { return i + nu * j; }
  std::size_t size() const { return nu * nv; }

  // Square lattice covering [u0, u0 + L] x [v0, v0 + L] with spacing close to h.
  static Lattice square(double u0, double v0, double L, double h);
};

// phi sampled on a lattice. Values must lie in [0, pi]; nodes sitting on 0 or
// pi are kept and reported through flagged(). Inactive nodes are outside the
// region of interest and carry no value.
class GeneratingAngleField {
 public:
  GeneratingAngleField(Lattice lattice, std::vector<double> values,
                       double lambda = 1.0,
                       std::vector<std::uint8_t> active = {});

  static GeneratingAngleField sample(
      const Lattice& lattice, const std::function<double(double, double)>& phi,
      double lambda = 1.0,
      const std::function<bool(double, double)>& active = {});

  const Lattice& lattice() const { return lattice_; }
  double lambda() const { return lambda_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[lattice_.index(i, j)];
  }
  bool active(std::size_t i, std::size_t j) const {
    return active_[lattice_.index(i, j)] != 0;
  }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::size_t>& flagged() const { return flagged_; }

 private:
  Lattice lattice_;
  std::vector<double> values_;
  std::vector<std::uint8_t> active_;
  std::vector<std::size_t> flagged_;
  double lambda_;
};

struct CurvatureSquares {
  double k1sq;
  double k2sq;
};

CurvatureSquares principal_curvature_squares(double phi);
double bending_density(double phi);

// Max over interior cells of |centered cross difference - lambda sin(phi)|.
double sine_gordon_residual(const GeneratingAngleField& field);

struct SurfaceMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3d> normals;
  std::vector<std::array<std::uint32_t, 4>> quads;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> phi;
  // max position mismatch between the u-then-v and v-then-u marches
  double compatibility_error = 0.0;
};

struct FrameAnchor {
  std::size_t i = 0;
  std::size_t j = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d tangent_u = Eigen::Vector3d::UnitX();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

struct FrameOptions {
  FrameAnchor anchor;
  double residual_threshold = 1e-2;
  double angle_guard = 1e-6;
  bool compatibility_sweep = true;
};

// Marches the Darboux frame along u from the anchor row, then along v from
// every node of that row. Inactive nodes stop a march.
SurfaceMesh integrate_frame(const GeneratingAngleField& field,
                            const FrameOptions& options = {});

// Angle defect over a third of the incident triangle area, each quad split
// along its first diagonal. NaN on vertices whose fan is not closed.
std::vector<double> discrete_gaussian_curvature(const SurfaceMesh& mesh);

void write_obj(const SurfaceMesh& mesh, std::ostream& out);
// u,v,x,y,z,phi,density
void write_csv(const SurfaceMesh& mesh, std::ostream& out);

}  // namespace hypdisk
