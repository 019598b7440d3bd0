#include "hypdisk/amsler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "hypdisk/detail/ode.hpp"
#include "hypdisk/errors.hpp"

namespace hypdisk::amsler {
namespace {

constexpr double kPi = std::numbers::pi;

double hermite(double t, double h, double y0, double y1, double d0, double d1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double clamp_z(double u, double v) { return 2.0 * std::sqrt(std::max(u * v, 0.0)); }

}  // namespace

Profile::Profile(int n, double z_max, double dz, double rel_tol) : n_(n) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  if (!(z_max > 1e-2) || !(dz > 0.0)) throw DomainError("bad Painleve table range");
  const double a = kPi / n;
  c_[0] = a;
  c_[1] = std::sin(a) / 4.0;
  c_[2] = std::cos(a) * c_[1] / 16.0;
  c_[3] = (std::cos(a) * c_[2] - 0.5 * std::sin(a) * c_[1] * c_[1]) / 36.0;

  using S = detail::State<2>;
  const double z0 = z0_;
  S y{c_[0] + z0 * z0 * (c_[1] + z0 * z0 * (c_[2] + z0 * z0 * c_[3])),
      z0 * (2 * c_[1] + z0 * z0 * (4 * c_[2] + 6 * c_[3] * z0 * z0))};
  auto rhs = [](const S& x, S& dx, double z) {
    dx[0] = x[1];
    dx[1] = std::sin(x[0]) - x[1] / z;
  };
  auto push = [&](double z, const S& x) {
    z_.push_back(z);
    f_.push_back(x[0]);
    df_.push_back(x[1]);
    ddf_.push_back(std::sin(x[0]) - x[1] / z);
  };
  push(z0, y);
  std::vector<double> stops;
  for (double z = z0 + dz; z <= z_max; z += dz) stops.push_back(z);
  detail::StepControl sc;
  sc.rel_tol = rel_tol;
  sc.abs_tol = 1e-2 * rel_tol;
  sc.min_step = 1e-12;
  sc.initial_step = 1e-4;
  // keep going a little past pi so the chart can be queried up to the curve
  double stop_after = INFINITY;
  detail::march<2>(
      rhs, y, z0, stops, sc,
      [&](const S& x) { return x[0] < kPi + 0.5; },
      [&](std::size_t, double z, const S& x) {
        if (z > stop_after) return;
        push(z, x);
        if (!found_ && x[0] >= kPi) {
          found_ = true;
          stop_after = z + 0.25;
        }
      },
      [](double, const S&) {});
  if (found_) {
    auto it = std::find_if(f_.begin(), f_.end(), [](double v) { return v >= kPi; });
    std::size_t k = static_cast<std::size_t>(it - f_.begin()) - 1;
    double lo = z_[k], hi = z_[k + 1];
    while (hi - lo > 1e-13) {
      double mid = 0.5 * (lo + hi);
      (phi(mid) < kPi ? lo : hi) = mid;
    }
    z_singular_ = 0.5 * (lo + hi);
  }
}

double Profile::phi(double z) const {
  z = std::abs(z);
  if (z < z0_) {
    const double s = z * z;
    return c_[0] + s * (c_[1] + s * (c_[2] + s * c_[3]));
  }
  if (z > z_.back()) throw DomainError("Painleve profile queried beyond its table");
  std::size_t k = static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), z) - z_.begin());
  k = std::clamp<std::size_t>(k, 1, z_.size() - 1) - 1;
  const double h = z_[k + 1] - z_[k];
  return hermite((z - z_[k]) / h, h, f_[k], f_[k + 1], df_[k], df_[k + 1]);
}

double Profile::dphi(double z) const {
  if (z < z0_) return z * q(z);
  if (z > z_.back()) throw DomainError("Painleve profile queried beyond its table");
  std::size_t k = static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), z) - z_.begin());
  k = std::clamp<std::size_t>(k, 1, z_.size() - 1) - 1;
  const double h = z_[k + 1] - z_[k];
  return hermite((z - z_[k]) / h, h, df_[k], df_[k + 1], ddf_[k], ddf_[k + 1]);
}

double Profile::q(double z) const {
  z = std::abs(z);
  if (z < z0_) {
    const double s = z * z;
    return 2 * c_[1] + s * (4 * c_[2] + 6 * c_[3] * s);
  }
  return dphi(z) / z;
}

Profile painleve_solve(int n, double z_max) { return Profile(n, z_max); }

SurfaceChart chart(const Profile& p, double phi_limit) {
  if (!p.found()) throw DomainError("Painleve profile has no singular point in range");
  SurfaceChart c;
  c.id = "amsler";
  c.metric = [&p](const Point2& x) {
    return Metric{1.0, std::cos(p.phi(clamp_z(x[0], x[1]))), 1.0};
  };
  c.christoffel = [&p](const Point2& x) {
    const double z = clamp_z(x[0], x[1]);
    const double f = p.phi(z), q = p.q(z);
    const double fu = 2.0 * x[1] * q, fv = 2.0 * x[0] * q;
    const double cot = std::cos(f) / std::sin(f), csc = 1.0 / std::sin(f);
    Christoffel G;
    G.g1_11 = cot * fu;
    G.g2_11 = -csc * fu;
    G.g1_22 = -csc * fv;
    G.g2_22 = cot * fv;
    return G;
  };
  c.density = [&p](const Point2& x) { return bending_density(p.phi(clamp_z(x[0], x[1]))); };
  c.domain_guard = [&p, phi_limit](const Point2& x) {
    const double z = clamp_z(x[0], x[1]);
    if (z >= p.z_end()) return Region::near_singular;
    const double f = p.phi(z);
    return f < phi_limit && f > kPi - phi_limit ? Region::inside : Region::near_singular;
  };
  return c;
}

double polar_angle(double psi, int n) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  if (!(psi >= 0.0 && psi <= 0.5 * kPi)) throw DomainError("launch angle must lie in [0, pi/2]");
  const double a = kPi / n;
  return std::atan2(std::sin(psi) * std::sin(a), std::cos(psi) + std::sin(psi) * std::cos(a));
}

double launch_angle(double Psi, int n) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  if (!(Psi >= 0.0 && Psi <= kPi / n + 1e-15))
    throw DomainError("polar angle must lie in [0, pi/n]");
  double lo = 0.0, hi = 0.5 * kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    (polar_angle(mid, n) < Psi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Point2 launch_direction(double psi) { return {std::cos(psi), std::sin(psi)}; }

double first_hit(const Profile& p, double psi, double length_cap) {
  auto c = chart(p);
  return shoot_geodesic(c, {0.0, 0.0}, launch_direction(psi), length_cap).reached;
}

MaxRadius max_radius(const Profile& p, double psi_tol) {
  auto c = chart(p);
  auto shoot = [&](double psi) {
    return shoot_geodesic(c, {0.0, 0.0}, launch_direction(psi), 20.0);
  };
  auto reach = [&](double psi) { return shoot(psi).reached; };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = 0.25 * kPi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = reach(x1), f2 = reach(x2);
  while (b - a > psi_tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = reach(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = reach(x2);
    }
  }
  // the bracket end at pi/4 is a candidate in its own right
  double best_psi = 0.5 * (a + b);
  double best = reach(best_psi);
  if (double d = reach(0.25 * kPi); d <= best) {
    best = d;
    best_psi = 0.25 * kPi;
  }
  auto path = shoot(best_psi);
  return {best, best_psi, path.samples.back().x};
}

MaxRadius max_radius(int n) {
  Profile p(n);
  return max_radius(p);
}

PolarGridOptions sector_grid_options(int n, std::size_t n_r, std::size_t n_psi) {
  PolarGridOptions o;
  o.n_r = n_r;
  o.n_psi = n_psi;
  o.psi_begin = 0.0;
  o.psi_end = kPi / n;
  o.periodic = false;
  o.direction = [n](double Psi) {
    return launch_direction(launch_angle(std::clamp(Psi, 0.0, kPi / n), n));
  };
  return o;
}

EnergyEntry disk_energy(const Profile& p, double R, const AdaptiveEnergyOptions& options) {
  AdaptiveEnergyOptions o = options;
  PolarGridOptions base = sector_grid_options(p.n(), o.grid.n_r, o.grid.n_psi);
  base.shoot = o.grid.shoot;
  o.grid = base;
  o.multiplicity = 2.0 * p.n();
  return adaptive_disk_energy(chart(p), {0.0, 0.0}, R, o);
}

SurfaceMesh sector_mesh(const Profile& p, double R, double h, double phi_cut) {
  if (!(R > 0.0)) throw DomainError("mesh radius must be positive");
  if (!(phi_cut < kPi)) throw DomainError("phi_cut must stay below pi");
  auto field = GeneratingAngleField::sample(
      Lattice::square(0.0, 0.0, R, h),
      [&p](double u, double v) { return p.phi(clamp_z(u, v)); }, 1.0,
      [&p, phi_cut](double u, double v) {
        const double z = clamp_z(u, v);
        return z < p.z_end() && p.phi(z) <= phi_cut;
      });
  FrameOptions opt;
  opt.anchor.i = 0;
  opt.anchor.j = 0;
  return integrate_frame(field, opt);
}

PeriodicMesh build_periodic_mesh(const Profile& p, double R, double h, double phi_cut) {
  const SurfaceMesh piece = sector_mesh(p, R, h, phi_cut);
  const int n = p.n();
  const std::size_t m = piece.vertices.size();

  // straight boundary lines through the origin
  Eigen::Vector3d d0 = Eigen::Vector3d::UnitX(), d1 = Eigen::Vector3d::Zero();
  double best_u = -1.0, best_v = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (piece.u[k] == 0.0 && piece.v[k] > best_v) {
      best_v = piece.v[k];
      d1 = piece.vertices[k].normalized();
    }
    if (piece.v[k] == 0.0 && piece.u[k] > best_u) {
      best_u = piece.u[k];
      d0 = piece.vertices[k].normalized();
    }
  }
  if (!(best_v > 0.0) || !(best_u > 0.0)) throw DomainError("mesh too small to carry both axes");

  auto half_turn = [](const Eigen::Vector3d& d) {
    return Eigen::Matrix3d(2.0 * d * d.transpose() - Eigen::Matrix3d::Identity());
  };

  PeriodicMesh out;
  out.sector_vertices = m;
  std::vector<std::vector<std::uint32_t>> ids(2 * n, std::vector<std::uint32_t>(m));
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  for (int s = 0; s < 2 * n; ++s) {
    if (s > 0) {
      // copy s shares the v = 0 line with copy s-1 when s-1 is odd, else u = 0
      const Eigen::Vector3d axis = M * ((s - 1) % 2 == 0 ? d1 : d0);
      M = half_turn(axis) * M;
    }
    const bool shares_u0 = s > 0 && (s - 1) % 2 == 0;
    for (std::size_t k = 0; k < m; ++k) {
      const Eigen::Vector3d x = M * piece.vertices[k];
      const bool seam_prev = s > 0 && (shares_u0 ? piece.u[k] == 0.0 : piece.v[k] == 0.0);
      const bool seam_first = s == 2 * n - 1 && piece.v[k] == 0.0;
      if (seam_prev) {
        std::uint32_t id = ids[s - 1][k];
        out.weld_gap = std::max(out.weld_gap, (out.mesh.vertices[id] - x).norm());
        ids[s][k] = id;
        continue;
      }
      if (seam_first) {
        std::uint32_t id = ids[0][k];
        out.weld_gap = std::max(out.weld_gap, (out.mesh.vertices[id] - x).norm());
        ids[s][k] = id;
        continue;
      }
      ids[s][k] = static_cast<std::uint32_t>(out.mesh.vertices.size());
      out.mesh.vertices.push_back(x);
      // orientation flips under each half-turn of the parameter domain
      out.mesh.normals.push_back((s % 2 == 0 ? 1.0 : -1.0) * (M * piece.normals[k]));
      out.mesh.u.push_back(piece.u[k]);
      out.mesh.v.push_back(piece.v[k]);
      out.mesh.phi.push_back(piece.phi[k]);
      out.sector.push_back(s);
    }
    for (const auto& q : piece.quads) {
      std::array<std::uint32_t, 4> r{ids[s][q[0]], ids[s][q[1]], ids[s][q[2]], ids[s][q[3]]};
      if (s % 2 == 1) std::swap(r[1], r[3]);
      out.mesh.quads.push_back(r);
    }
  }
  out.mesh.compatibility_error = piece.compatibility_error;
  return out;
}

void write_profile_csv(std::ostream& out, const Profile& p, double dz) {
  auto prec = out.precision(12);
  out << "z,phi\n";
  const double end = p.found() ? p.z_singular() : p.z_end();
  for (double z = 0.0; z < end; z += dz) out << z << ',' << p.phi(z) << '\n';
  if (p.found()) out << p.z_singular() << ',' << kPi << '\n';
  out.precision(prec);
}

}  // namespace hypdisk::amsler
