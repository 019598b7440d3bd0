#include "hypdisk/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hypdisk/errors.hpp"

namespace hypdisk::elliptic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-14;
constexpr int kMaxLevels = 40;

void check_parameter(double m) {
  if (!(m >= 0.0 && m <= 1.0))
    throw DomainError("elliptic parameter m=" + std::to_string(m) +
                      " outside [0,1]");
}

// Arithmetic-geometric mean ladder a_n, c_n starting from (1, sqrt(1-m)).
struct Agm {
  std::array<double, kMaxLevels> a{};
  std::array<double, kMaxLevels> b{};
  std::array<double, kMaxLevels> c{};
  int levels = 0;  // index of the last computed level
};

Agm agm_ladder(double m) {
  Agm g;
  g.a[0] = 1.0;
  g.b[0] = std::sqrt(1.0 - m);
  g.c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(g.c[n]) > kTol * g.a[n] && n + 1 < kMaxLevels) {
    g.a[n + 1] = 0.5 * (g.a[n] + g.b[n]);
    g.b[n + 1] = std::sqrt(g.a[n] * g.b[n]);
    g.c[n + 1] = 0.5 * (g.a[n] - g.b[n]);
    ++n;
  }
  g.levels = n;
  return g;
}

// am(u|m) for |u| <= K via the backward AGM recursion.
double amplitude_reduced(double u, const Agm& g) {
  const int N = g.levels;
  double phi = std::ldexp(g.a[N] * u, N);
  for (int n = N; n >= 1; --n) {
    double s = g.c[n] / g.a[n] * std::sin(phi);
    s = std::fmax(-1.0, std::fmin(1.0, s));
    phi = 0.5 * (phi + std::asin(s));
  }
  return phi;
}

struct LandenResult {
  double F;
  double E;
};

// Descending Landen transformation, valid for 0 <= m < 1 and any real phi.
LandenResult landen(double phi, double m) {
  Agm g = agm_ladder(m);
  const int N = g.levels;
  double ph = phi;
  double tail = 0.0;
  for (int n = 0; n < N; ++n) {
    double t = std::atan2(g.b[n] * std::sin(ph), g.a[n] * std::cos(ph));
    // keep the branch continuous with ph so the sum stays monotone
    t += 2.0 * kPi * std::nearbyint((ph - t) / (2.0 * kPi));
    ph += t;
    tail += g.c[n + 1] * std::sin(ph);
  }
  double F = ph / std::ldexp(g.a[N], N);
  double s = 0.0;
  for (int n = 0; n <= N; ++n) s += std::ldexp(g.c[n] * g.c[n], n);
  return {F, F * (1.0 - 0.5 * s) + tail};
}

}  // namespace

double complete_K(double m) {
  check_parameter(m);
  if (m == 1.0) return INFINITY;
  Agm g = agm_ladder(m);
  return kPi / (2.0 * g.a[g.levels]);
}

double complete_E(double m) {
  check_parameter(m);
  if (m == 1.0) return 1.0;
  Agm g = agm_ladder(m);
  double s = 0.0;
  for (int n = 0; n <= g.levels; ++n) s += std::ldexp(g.c[n] * g.c[n], n);
  return kPi / (2.0 * g.a[g.levels]) * (1.0 - 0.5 * s);
}

EllipticTriple jacobi(double u, double m) {
  check_parameter(m);
  if (!std::isfinite(u)) throw DomainError("jacobi: non-finite argument");
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0, u};
  if (m == 1.0) {
    double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech, std::atan(std::sinh(u))};
  }
  Agm g = agm_ladder(m);
  const double K = kPi / (2.0 * g.a[g.levels]);
  // u = 2Kq + r with |r| <= K; am(u) = q*pi + am(r)
  const double q = std::nearbyint(u / (2.0 * K));
  const double r = u - 2.0 * K * q;
  const double phi = amplitude_reduced(r, g);
  const double sign = (std::fmod(std::abs(q), 2.0) == 1.0) ? -1.0 : 1.0;
  const double sn = sign * std::sin(phi);
  const double cn = sign * std::cos(phi);
  const double dn = std::sqrt(1.0 - m * sn * sn);
  return {sn, cn, dn, q * kPi + phi};
}

double incomplete_F(double phi, double m) {
  check_parameter(m);
  if (m == 1.0) {
    if (std::abs(phi) >= 0.5 * kPi)
      return std::copysign(INFINITY, phi);
    return std::atanh(std::sin(phi));
  }
  return landen(phi, m).F;
}

double incomplete_E(double phi, double m) {
  check_parameter(m);
  if (m == 1.0) {
    double k = std::nearbyint(phi / kPi);
    return 2.0 * k + std::sin(phi - k * kPi);
  }
  return landen(phi, m).E;
}

}  // namespace hypdisk::elliptic
