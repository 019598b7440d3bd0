#include "hypdisk/small_slopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss.hpp>

#include "hypdisk/errors.hpp"

namespace hypdisk::small_slopes {
namespace {

constexpr double kPi = std::numbers::pi;

double polar_angle(double u, double v) {
  double t = std::atan2(v, u);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

template <std::size_t N>
double gl_energy(int n, double R) {
  using GL = boost::math::quadrature::gauss<double, N>;
  PeriodicSaddle s(n);
  const double width = kPi / n;
  double total = 0.0;
  for (int k = 0; k < 2 * n; ++k) {
    const double t0 = k * width;
    auto inner = [&](double theta) {
      return GL::integrate(
          [&](double r) {
            const double u = r * std::cos(theta), v = r * std::sin(theta);
            const double d = 1e-3 * r;
            auto w = [&](double du, double dv) { return s.height(u + du, v + dv); };
            double c = w(0, 0);
            double wuu = (w(d, 0) - 2 * c + w(-d, 0)) / (d * d);
            double wvv = (w(0, d) - 2 * c + w(0, -d)) / (d * d);
            double wuv = (w(d, d) - w(d, -d) - w(-d, d) + w(-d, -d)) / (4 * d * d);
            return (wuu * wuu + 2 * wuv * wuv + wvv * wvv) * r;
          },
          0.0, R);
    };
    total += GL::integrate(inner, t0, t0 + width);
  }
  return total;
}

}  // namespace

double quadratic_saddle(double a, double u, double v) {
  return 0.5 * (a * u * u - v * v / a);
}

PeriodicSaddle::PeriodicSaddle(int n) : n_(n) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  a_ = std::tan(kPi / (2.0 * n));
}

int PeriodicSaddle::sector(double u, double v) const {
  int k = static_cast<int>(std::floor(polar_angle(u, v) * n_ / kPi));
  return std::clamp(k, 0, 2 * n_ - 1);
}

double PeriodicSaddle::height(double u, double v) const {
  const int k = sector(u, v);
  // rotate the sector bisector onto the u axis
  const double c = (k + 0.5) * kPi / n_;
  const double x = std::cos(c) * u + std::sin(c) * v;
  const double y = -std::sin(c) * u + std::cos(c) * v;
  const double w = quadratic_saddle(a_, x, y);
  return k % 2 == 0 ? w : -w;
}

Hessian PeriodicSaddle::hessian(double u, double v) const {
  const int k = sector(u, v);
  const double c = (k + 0.5) * kPi / n_;
  const double cs = std::cos(c), sn = std::sin(c);
  const double l1 = a_, l2 = -1.0 / a_, sgn = k % 2 == 0 ? 1.0 : -1.0;
  return {sgn * (l1 * cs * cs + l2 * sn * sn), sgn * (l1 - l2) * cs * sn,
          sgn * (l1 * sn * sn + l2 * cs * cs)};
}

double PeriodicSaddle::seam_distance(double u, double v) const {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_; ++k) {
    const double b = k * kPi / n_;
    best = std::min(best, std::abs(u * std::sin(b) - v * std::cos(b)));
  }
  return best;
}

HeightSamples sample(const std::function<double(double, double)>& w, double x0,
                     double y0, double h, std::size_t nx, std::size_t ny) {
  HeightSamples s{x0, y0, h, nx, ny, std::vector<double>(nx * ny)};
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) s.values[i + nx * j] = w(x0 + i * h, y0 + j * h);
  return s;
}

HeightSamples sample_disk(const PeriodicSaddle& sd, double R, double h) {
  if (!(R > 0.0) || !(h > 0.0)) throw DomainError("radius and spacing must be positive");
  const std::size_t m = static_cast<std::size_t>(std::ceil(R / h));
  const double x0 = -static_cast<double>(m) * h;
  return sample(
      [&](double u, double v) {
        return u * u + v * v <= R * R ? sd.height(u, v)
                                      : std::numeric_limits<double>::quiet_NaN();
      },
      x0, x0, h, 2 * m + 1, 2 * m + 1);
}

double monge_ampere_residual(const HeightSamples& s,
                             const std::function<double(double, double)>& seam_distance) {
  const double h = s.h;
  double worst = 0.0;
  auto at = [&](std::size_t i, std::size_t j) { return s.values[i + s.nx * j]; };
  for (std::size_t j = 1; j + 1 < s.ny; ++j)
    for (std::size_t i = 1; i + 1 < s.nx; ++i) {
      if (seam_distance && seam_distance(s.x0 + i * h, s.y0 + j * h) < 2.0 * h) continue;
      double c = at(i, j);
      double wuu = (at(i + 1, j) - 2 * c + at(i - 1, j)) / (h * h);
      double wvv = (at(i, j + 1) - 2 * c + at(i, j - 1)) / (h * h);
      double wuv = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
                   (4 * h * h);
      double r = std::abs(wuu * wvv - wuv * wuv + 1.0);
      if (std::isfinite(r)) worst = std::max(worst, r);
    }
  return worst;
}

double energy_quadrature(int n, double R, std::size_t nodes) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  if (!(R > 0.0)) throw DomainError("radius must be positive");
  switch (nodes) {
    case 8: return gl_energy<8>(n, R);
    case 15: return gl_energy<15>(n, R);
    case 20: return gl_energy<20>(n, R);
    default: throw DomainError("supported node counts are 8, 15 and 20");
  }
}

double periodic_energy(int n, double R) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  if (!(R > 0.0)) throw DomainError("radius must be positive");
  const double t = std::tan(kPi / (2.0 * n));
  const double closed = kPi * R * R * (t * t + 1.0 / (t * t));
  const double quad = energy_quadrature(n, R);
  if (std::abs(quad - closed) > 1e-6 * closed)
    throw Error("quadrature_mismatch", "energy quadrature disagrees with the closed form");
  return closed;
}

double amplitude(int n, double R) {
  if (n < 2) throw DomainError("wave count must be at least 2");
  return 0.5 * std::tan(kPi / (2.0 * n)) * R * R;
}

void write_height_csv(std::ostream& out, const PeriodicSaddle& s, double R, double h) {
  auto samples = sample_disk(s, R, h);
  auto prec = out.precision(12);
  out << "u,v,omega\n";
  for (std::size_t j = 0; j < samples.ny; ++j)
    for (std::size_t i = 0; i < samples.nx; ++i) {
      double w = samples.values[i + samples.nx * j];
      if (std::isnan(w)) continue;
      out << samples.x0 + i * samples.h << ',' << samples.y0 + j * samples.h << ',' << w << '\n';
    }
  out.precision(prec);
}

}  // namespace hypdisk::small_slopes
