#include "hypdisk/time_of_flight.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hypdisk/errors.hpp"

namespace hypdisk {
namespace {

constexpr double kPi = std::numbers::pi;

// Scaled travel time tau(eps) = sqrt(lambda) T(eps, lambda). With
// theta = eps + w^2 the integrand w / sqrt(sin(eps + w^2/2) sin(w^2/2)) is
// bounded, with limit sqrt(2 / sin(eps)) at w = 0.
double scaled_time(double eps) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [eps](double w) {
    double h = 0.5 * w * w;
    double ratio = h < 1e-6 ? 0.5 * (1.0 - h * h / 6.0) : std::sin(h) / (w * w);
    return 1.0 / std::sqrt(std::sin(eps + h) * ratio);
  };
  // geometric panels resolve the sqrt(eps) inner scale
  const double wmax = std::sqrt(kPi - 2.0 * eps);
  double lo = 0.0, hi = std::fmin(wmax, std::sqrt(eps));
  double sum = 0.0;
  while (true) {
    sum += gauss_kronrod<double, 31>::integrate(f, lo, hi, 8, 1e-13);
    if (hi >= wmax) break;
    lo = hi;
    hi = std::fmin(wmax, 2.0 * hi);
  }
  return sum;
}

}  // namespace

double time_of_flight(double epsilon, double lambda) {
  if (!(epsilon > 0.0 && epsilon < 0.5 * kPi))
    throw DomainError("time of flight needs eps in (0, pi/2)");
  if (!(lambda > 0.0)) throw DomainError("time of flight needs lambda > 0");
  return scaled_time(epsilon) / std::sqrt(lambda);
}

double epsilon_from_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be positive and finite");
  const double target = std::sqrt(lambda);
  double lo = 1e-6, hi = 0.5 * kPi - 1e-6;
  // tau decreases from +inf (eps -> 0) to 0 (eps -> pi/2)
  if (scaled_time(lo) < target || scaled_time(hi) > target)
    throw NoRootError("time-of-flight root outside [1e-6, pi/2 - 1e-6] for lambda=" +
                      std::to_string(lambda));
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    double mid = 0.5 * (lo + hi);
    if (scaled_time(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hypdisk
