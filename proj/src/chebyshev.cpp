#include "hypdisk/chebyshev.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Geometry>

#include "hypdisk/errors.hpp"

namespace hypdisk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

Mat3 rotation(const Vec3& w, double h) {
  double n = w.norm();
  if (n == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(h * n, w / n).toRotationMatrix();
}

// One march step of length h (negative h marches backwards). The frame
// columns are (tangent, conormal, normal); w is the body angular velocity.
void frame_step(Mat3& R, Vec3& x, const Vec3& w, double h) {
  Mat3 mid = R * rotation(w, 0.5 * h);
  x += h * mid.col(0);
  R = R * rotation(w, h);
}

// u-frame (x_u, N x x_u, N) to v-frame (x_v, N x x_v, N) at angle phi.
Mat3 u_to_v(const Mat3& R, double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  Mat3 out;
  out.col(0) = c * R.col(0) + s * R.col(1);
  out.col(1) = c * R.col(1) - s * R.col(0);
  out.col(2) = R.col(2);
  return out;
}

Mat3 v_to_u(const Mat3& S, double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  Mat3 out;
  out.col(0) = c * S.col(0) - s * S.col(1);
  out.col(1) = s * S.col(0) + c * S.col(1);
  out.col(2) = S.col(2);
  return out;
}

struct MarchGrid {
  std::vector<Vec3> x;
  std::vector<Vec3> n;
  std::vector<std::uint8_t> reached;
};

// Walk along direction `dir` (0 = u, 1 = v) from node (i, j) in both senses.
// The first-leg frame is expressed as a u-frame; conversion is internal.
template <class Visit>
void march_line(const GeneratingAngleField& f, std::size_t i, std::size_t j,
                const Mat3& R_u, const Vec3& x0, int dir, Visit&& visit) {
  const Lattice& L = f.lattice();
  const std::size_t len = dir == 0 ? L.nu : L.nv;
  const std::size_t start = dir == 0 ? i : j;
  const double h = dir == 0 ? L.hu : L.hv;
  auto node = [&](std::size_t k) {
    return dir == 0 ? std::pair{k, j} : std::pair{i, k};
  };
  for (int sense : {+1, -1}) {
    Mat3 R = dir == 0 ? R_u : u_to_v(R_u, f(i, j));
    Vec3 x = x0;
    std::size_t k = start;
    while (true) {
      if (sense > 0 && k + 1 >= len) break;
      if (sense < 0 && k == 0) break;
      std::size_t next = sense > 0 ? k + 1 : k - 1;
      auto [ai, aj] = node(k);
      auto [bi, bj] = node(next);
      if (!f.active(bi, bj)) break;
      double dphi = (f(bi, bj) - f(ai, aj)) / h * sense;
      Vec3 w = dir == 0 ? Vec3(1.0, 0.0, -dphi) : Vec3(-1.0, 0.0, dphi);
      frame_step(R, x, w, sense * h);
      k = next;
      Mat3 Ru = dir == 0 ? R : v_to_u(R, f(bi, bj));
      visit(bi, bj, Ru, x);
    }
  }
}

MarchGrid march(const GeneratingAngleField& f, const FrameAnchor& a,
                int first_dir) {
  const Lattice& L = f.lattice();
  MarchGrid g;
  g.x.assign(L.size(), Vec3::Zero());
  g.n.assign(L.size(), Vec3::Zero());
  g.reached.assign(L.size(), 0);

  Vec3 T = a.tangent_u.normalized();
  Vec3 N = (a.normal - a.normal.dot(T) * T).normalized();
  Mat3 R0;
  R0.col(0) = T;
  R0.col(1) = N.cross(T);
  R0.col(2) = N;

  std::vector<Mat3> frames(L.size());
  auto store = [&](std::size_t i, std::size_t j, const Mat3& R, const Vec3& x) {
    std::size_t id = L.index(i, j);
    frames[id] = R;
    g.x[id] = x;
    g.n[id] = R.col(2);
    g.reached[id] = 1;
  };
  store(a.i, a.j, R0, a.position);
  march_line(f, a.i, a.j, R0, a.position, first_dir, store);

  const int second = 1 - first_dir;
  const std::size_t len = first_dir == 0 ? L.nu : L.nv;
  for (std::size_t k = 0; k < len; ++k) {
    std::size_t i = first_dir == 0 ? k : a.i;
    std::size_t j = first_dir == 0 ? a.j : k;
    std::size_t id = L.index(i, j);
    if (!g.reached[id]) continue;
    Mat3 R = frames[id];
    Vec3 x = g.x[id];
    march_line(f, i, j, R, x, second, store);
  }
  return g;
}

}  // namespace

Lattice Lattice::square(double u0, double v0, double L, double h) {
  std::size_t cells = static_cast<std::size_t>(std::ceil(L / h - 1e-9));
  if (cells < 1) cells = 1;
  double hh = L / static_cast<double>(cells);
  return {u0, v0, hh, hh, cells + 1, cells + 1};
}

GeneratingAngleField::GeneratingAngleField(Lattice lattice,
                                           std::vector<double> values,
                                           double lambda,
                                           std::vector<std::uint8_t> active)
    : lattice_(lattice),
      values_(std::move(values)),
      active_(std::move(active)),
      lambda_(lambda) {
  if (!(lattice_.hu > 0.0) || !(lattice_.hv > 0.0))
    throw DomainError("lattice spacings must be positive");
  if (values_.size() != lattice_.size())
    throw DomainError("field size does not match its lattice");
  if (active_.empty()) active_.assign(values_.size(), 1);
  if (active_.size() != values_.size())
    throw DomainError("activity mask size does not match the lattice");
  if (!(lambda_ >= 0.0)) throw DomainError("lambda must be nonnegative");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!active_[k]) continue;
    double p = values_[k];
    if (!(p >= 0.0 && p <= kPi))
      throw SingularAngleError("generating angle " + std::to_string(p) +
                               " outside [0, pi]");
    if (p == 0.0 || p == kPi) flagged_.push_back(k);
  }
}

GeneratingAngleField GeneratingAngleField::sample(
    const Lattice& lattice, const std::function<double(double, double)>& phi,
    double lambda, const std::function<bool(double, double)>& active) {
  std::vector<double> vals(lattice.size(), 0.0);
  std::vector<std::uint8_t> act(lattice.size(), 1);
  for (std::size_t j = 0; j < lattice.nv; ++j)
    for (std::size_t i = 0; i < lattice.nu; ++i) {
      double u = lattice.u(i), v = lattice.v(j);
      std::size_t k = lattice.index(i, j);
      if (active && !active(u, v)) {
        act[k] = 0;
        vals[k] = kNaN;
        continue;
      }
      vals[k] = phi(u, v);
    }
  return GeneratingAngleField(lattice, std::move(vals), lambda, std::move(act));
}

CurvatureSquares principal_curvature_squares(double phi) {
  if (!(phi > 0.0 && phi < kPi))
    throw SingularAngleError("principal curvatures diverge at phi=" +
                             std::to_string(phi));
  double t = std::tan(0.5 * phi);
  return {t * t, 1.0 / (t * t)};
}

double bending_density(double phi) {
  auto k = principal_curvature_squares(phi);
  return k.k1sq + k.k2sq;
}

double sine_gordon_residual(const GeneratingAngleField& f) {
  const Lattice& L = f.lattice();
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < L.nv; ++j)
    for (std::size_t i = 1; i + 1 < L.nu; ++i) {
      if (!f.active(i, j) || !f.active(i + 1, j + 1) || !f.active(i + 1, j - 1) ||
          !f.active(i - 1, j + 1) || !f.active(i - 1, j - 1))
        continue;
      double d = (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) +
                  f(i - 1, j - 1)) /
                 (4.0 * L.hu * L.hv);
      worst = std::max(worst, std::abs(d - f.lambda() * std::sin(f(i, j))));
    }
  return worst;
}

SurfaceMesh integrate_frame(const GeneratingAngleField& f,
                            const FrameOptions& opt) {
  const Lattice& L = f.lattice();
  const FrameAnchor& a = opt.anchor;
  if (a.i >= L.nu || a.j >= L.nv || !f.active(a.i, a.j))
    throw DomainError("frame anchor is not an active lattice node");
  for (std::size_t k = 0; k < L.size(); ++k) {
    if (!f.active(k % L.nu, k / L.nu)) continue;
    double p = f.values()[k];
    if (p <= opt.angle_guard || p >= kPi - opt.angle_guard)
      throw SingularAngleError("generating angle " + std::to_string(p) +
                               " within the guard band of {0, pi}");
  }
  double res = sine_gordon_residual(f);
  if (res > opt.residual_threshold)
    throw InconsistentFieldError(
        "sine-Gordon residual " + std::to_string(res) + " above threshold",
        res);

  MarchGrid g = march(f, a, 0);
  SurfaceMesh mesh;
  if (opt.compatibility_sweep) {
    MarchGrid other = march(f, a, 1);
    for (std::size_t k = 0; k < L.size(); ++k)
      if (g.reached[k] && other.reached[k])
        mesh.compatibility_error =
            std::max(mesh.compatibility_error, (g.x[k] - other.x[k]).norm());
  }

  std::vector<std::uint32_t> remap(L.size(), UINT32_MAX);
  for (std::size_t j = 0; j < L.nv; ++j)
    for (std::size_t i = 0; i < L.nu; ++i) {
      std::size_t k = L.index(i, j);
      if (!g.reached[k]) continue;
      remap[k] = static_cast<std::uint32_t>(mesh.vertices.size());
      mesh.vertices.push_back(g.x[k]);
      mesh.normals.push_back(g.n[k]);
      mesh.u.push_back(L.u(i));
      mesh.v.push_back(L.v(j));
      mesh.phi.push_back(f(i, j));
    }
  for (std::size_t j = 0; j + 1 < L.nv; ++j)
    for (std::size_t i = 0; i + 1 < L.nu; ++i) {
      std::array<std::uint32_t, 4> q{remap[L.index(i, j)], remap[L.index(i + 1, j)],
                                     remap[L.index(i + 1, j + 1)],
                                     remap[L.index(i, j + 1)]};
      if (q[0] == UINT32_MAX || q[1] == UINT32_MAX || q[2] == UINT32_MAX ||
          q[3] == UINT32_MAX)
        continue;
      mesh.quads.push_back(q);
    }
  return mesh;
}

std::vector<double> discrete_gaussian_curvature(const SurfaceMesh& mesh) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<double> angle(nv, 0.0), area(nv, 0.0);
  // a closed fan sees every incident edge from two triangles
  std::vector<std::map<std::uint32_t, int>> edges(nv);
  auto triangle = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    const std::uint32_t t[3] = {a, b, c};
    const double A = 0.5 * (mesh.vertices[b] - mesh.vertices[a])
                               .cross(mesh.vertices[c] - mesh.vertices[a])
                               .norm();
    for (int k = 0; k < 3; ++k) {
      std::uint32_t p = t[k], nx = t[(k + 1) % 3], pv = t[(k + 2) % 3];
      Vec3 e1 = mesh.vertices[nx] - mesh.vertices[p];
      Vec3 e2 = mesh.vertices[pv] - mesh.vertices[p];
      angle[p] += std::atan2(e1.cross(e2).norm(), e1.dot(e2));
      area[p] += A / 3.0;
      edges[p][nx] += 1;
      edges[p][pv] += 1;
    }
  };
  for (const auto& q : mesh.quads) {
    triangle(q[0], q[1], q[2]);
    triangle(q[0], q[2], q[3]);
  }
  std::vector<double> K(nv, kNaN);
  for (std::size_t k = 0; k < nv; ++k) {
    if (edges[k].empty()) continue;
    bool closed = true;
    for (auto& [other, count] : edges[k]) closed = closed && count == 2;
    if (closed && area[k] > 0.0) K[k] = (2.0 * kPi - angle[k]) / area[k];
  }
  return K;
}

void write_obj(const SurfaceMesh& mesh, std::ostream& out) {
  out.precision(12);
  for (const auto& p : mesh.vertices)
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& n : mesh.normals)
    out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n';
  for (const auto& q : mesh.quads) {
    out << 'f';
    for (auto id : q) out << ' ' << id + 1 << "//" << id + 1;
    out << '\n';
  }
}

void write_csv(const SurfaceMesh& mesh, std::ostream& out) {
  out.precision(12);
  out << "u,v,x,y,z,phi,density\n";
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    const auto& p = mesh.vertices[k];
    double phi = mesh.phi[k];
    double dens = (phi > 0.0 && phi < kPi) ? bending_density(phi) : kNaN;
    out << mesh.u[k] << ',' << mesh.v[k] << ',' << p.x() << ',' << p.y() << ','
        << p.z() << ',' << phi << ',' << dens << '\n';
  }
}

}  // namespace hypdisk
