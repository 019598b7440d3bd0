#include "hypdisk/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "hypdisk/detail/ode.hpp"
#include "hypdisk/errors.hpp"

namespace hypdisk {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> simpson_weights(std::size_t intervals, double h) {
  std::vector<double> w(intervals + 1, 0.0);
  if (intervals == 0) return w;
  for (std::size_t i = 0; i <= intervals; ++i)
    w[i] = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (double& x : w) x *= h / 3.0;
  return w;
}

// Angular weights for a grid (or its every-other-node subgrid when stride 2).
std::vector<double> psi_weights(const GeodesicPolarGrid& g, std::size_t stride) {
  const std::size_t n = g.angles.size();
  std::vector<double> w(n, 0.0);
  if (g.periodic) {
    double d = 2.0 * kPi / static_cast<double>(n) * static_cast<double>(stride);
    for (std::size_t j = 0; j < n; j += stride) w[j] = d;
    return w;
  }
  const std::size_t intervals = (n - 1) / stride;
  const double d = (g.angles.back() - g.angles.front()) / static_cast<double>(intervals);
  auto s = simpson_weights(intervals, d);
  for (std::size_t k = 0; k <= intervals; ++k) w[k * stride] = s[k];
  return w;
}

std::vector<double> radial_weights(const GeodesicPolarGrid& g, std::size_t stride) {
  const std::size_t n = g.radii.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  const std::size_t intervals = (n - 1) / stride;
  const double d = (g.radii.back() - g.radii.front()) / static_cast<double>(intervals);
  auto s = simpson_weights(intervals, d);
  for (std::size_t k = 0; k <= intervals; ++k)
    w[k * stride] = s[k] * std::sinh(g.radii[k * stride]);
  return w;
}

double integrate(const GeodesicPolarGrid& g, std::size_t stride) {
  auto wr = radial_weights(g, stride);
  auto wp = psi_weights(g, stride);
  double sum = 0.0;
  for (std::size_t j = 0; j < g.angles.size(); ++j) {
    if (wp[j] == 0.0) continue;
    double inner = 0.0;
    for (std::size_t i = 0; i < g.radii.size(); ++i)
      if (wr[i] != 0.0) inner += wr[i] * g.node_density(i, j);
    sum += wp[j] * inner;
  }
  return sum;
}

}  // namespace

SurfaceChart euclidean_chart() {
  SurfaceChart c;
  c.id = "euclidean";
  c.metric = [](const Point2&) { return Metric{1.0, 0.0, 1.0}; };
  c.christoffel = [](const Point2&) { return Christoffel{}; };
  c.density = [](const Point2&) { return 0.0; };
  c.domain_guard = [](const Point2&) { return Region::inside; };
  return c;
}

double metric_norm(const SurfaceChart& chart, const Point2& x, const Point2& v) {
  Metric g = chart.metric(x);
  return std::sqrt(g.g11 * v[0] * v[0] + 2.0 * g.g12 * v[0] * v[1] +
                   g.g22 * v[1] * v[1]);
}

std::array<Point2, 2> orthonormal_basis(const SurfaceChart& chart,
                                        const Point2& x) {
  Metric g = chart.metric(x);
  Point2 e1{1.0 / std::sqrt(g.g11), 0.0};
  double det = g.g11 * g.g22 - g.g12 * g.g12;
  double n2 = std::sqrt(det / g.g11);
  Point2 e2{-g.g12 / g.g11 / n2, 1.0 / n2};
  return {e1, e2};
}

GeodesicPath shoot_geodesic(const SurfaceChart& chart, const Point2& start,
                            const Point2& direction, double length,
                            std::span<const double> stops,
                            const GeodesicOptions& opt) {
  if (chart.domain_guard(start) != Region::inside)
    throw StartOnSingularityError("geodesic start lies on the singular set");
  if (!(length >= 0.0)) throw DomainError("geodesic length must be nonnegative");
  double speed = metric_norm(chart, start, direction);
  if (!(speed > 0.0) || !std::isfinite(speed))
    throw DomainError("geodesic direction must be a nonzero tangent vector");

  using S = detail::State<4>;
  S y{start[0], start[1], direction[0] / speed, direction[1] / speed};
  GeodesicPath path;
  path.samples.push_back({0.0, start, {y[2], y[3]}});
  if (length == 0.0) return path;

  auto rhs = [&chart](const S& x, S& dx, double) {
    Point2 p{x[0], x[1]};
    Christoffel G = chart.christoffel(p);
    Metric g = chart.metric(p);
    const double a = x[2], b = x[3];
    const double sigma =
        std::sqrt(g.g11 * a * a + 2.0 * g.g12 * a * b + g.g22 * b * b);
    dx[0] = a / sigma;
    dx[1] = b / sigma;
    dx[2] = -(G.g1_11 * a * a + 2.0 * G.g1_12 * a * b + G.g1_22 * b * b) / sigma;
    dx[3] = -(G.g2_11 * a * a + 2.0 * G.g2_12 * a * b + G.g2_22 * b * b) / sigma;
  };
  auto inside = [&chart](const S& x) {
    return chart.domain_guard({x[0], x[1]}) == Region::inside;
  };
  auto record = [&](double s, const S& x) {
    Point2 p{x[0], x[1]};
    Point2 v{x[2], x[3]};
    double n = metric_norm(chart, p, v);
    path.samples.push_back({s, p, {v[0] / n, v[1] / n}});
  };

  std::vector<double> targets;
  bool record_steps = stops.empty();
  if (record_steps) {
    targets.push_back(length);
  } else {
    targets.assign(stops.begin(), stops.end());
    if (targets.back() < length) targets.push_back(length);
  }
  detail::StepControl sc;
  sc.rel_tol = opt.rel_tol;
  sc.abs_tol = opt.abs_tol;
  sc.min_step = opt.min_step;
  sc.initial_step = std::min(1e-3, 0.1 * length);
  auto res = detail::march<4>(
      rhs, y, 0.0, targets, sc, inside,
      [&](std::size_t k, double s, const S& x) {
        if (!record_steps && k < stops.size()) record(s, x);
      },
      [&](double s, const S& x) {
        if (record_steps) record(s, x);
      });
  path.reached = res.t;
  path.boundary_hit = res.tripped;
  if (record_steps && path.samples.back().s != res.t) record(res.t, res.state);
  return path;
}

GeodesicPolarGrid build_polar_grid(const SurfaceChart& chart,
                                   const Point2& center, double R,
                                   const PolarGridOptions& opt) {
  if (!(R >= 0.0)) throw DomainError("disk radius must be nonnegative");
  if (opt.n_psi < 2 || opt.n_psi % 2)
    throw DomainError("n_psi must be even and at least 2");
  if (R > 0.0 && (opt.n_r < 2 || opt.n_r % 2))
    throw DomainError("n_r must be even and at least 2");
  if (chart.domain_guard(center) != Region::inside)
    throw StartOnSingularityError("disk center lies on the singular set");

  GeodesicPolarGrid g;
  g.center = center;
  g.periodic = opt.periodic;
  const std::size_t nr = R > 0.0 ? opt.n_r : 0;
  for (std::size_t i = 0; i <= nr; ++i)
    g.radii.push_back(nr ? R * static_cast<double>(i) / static_cast<double>(nr) : 0.0);
  const std::size_t npsi = opt.periodic ? opt.n_psi : opt.n_psi + 1;
  const double dpsi = (opt.psi_end - opt.psi_begin) / static_cast<double>(opt.n_psi);
  for (std::size_t j = 0; j < npsi; ++j)
    g.angles.push_back(opt.psi_begin + dpsi * static_cast<double>(j));

  auto basis = orthonormal_basis(chart, center);
  auto direction = [&](double psi) -> Point2 {
    if (opt.direction) return opt.direction(psi);
    return {std::cos(psi) * basis[0][0] + std::sin(psi) * basis[1][0],
            std::cos(psi) * basis[0][1] + std::sin(psi) * basis[1][1]};
  };

  g.coords.assign(g.radii.size() * npsi, center);
  g.density.assign(g.radii.size() * npsi, chart.density(center));
  std::vector<double> reached(npsi, R);
  std::span<const double> stops(g.radii.data() + 1, nr);
  for (std::size_t j = 0; j < npsi && nr > 0; ++j) {
    auto path = shoot_geodesic(chart, center, direction(g.angles[j]), R, stops, opt.shoot);
    reached[j] = path.reached;
    if (path.boundary_hit) continue;
    for (std::size_t i = 1; i <= nr; ++i) {
      const Point2& p = path.samples[i].x;
      g.coords[i + g.radii.size() * j] = p;
      g.density[i + g.radii.size() * j] = chart.density(p);
    }
  }
  auto worst = std::min_element(reached.begin(), reached.end());
  if (*worst < R) {
    double psi = g.angles[static_cast<std::size_t>(worst - reached.begin())];
    throw BoundaryExceededError(
        "geodesic disk of radius " + std::to_string(R) +
            " leaves the regular domain; attainable radius " +
            std::to_string(*worst) + " at psi=" + std::to_string(psi),
        R, *worst, psi, reached);
  }
  return g;
}

EnergyEstimate bending_energy(const GeodesicPolarGrid& g) {
  if (g.radii.size() < 2) return {0.0, 0.0};
  double fine = integrate(g, 1);
  bool can_coarsen = (g.radii.size() - 1) % 4 == 0 &&
                     (g.periodic ? g.angles.size() % 2 == 0
                                 : (g.angles.size() - 1) % 4 == 0);
  if (!can_coarsen) return {fine, 0.0};
  return {fine, std::abs(fine - integrate(g, 2))};
}

std::vector<std::array<double, 2>> energy_profile(const GeodesicPolarGrid& g) {
  std::vector<std::array<double, 2>> out;
  out.push_back({0.0, 0.0});
  if (g.radii.size() < 3) return out;
  auto wp = psi_weights(g, 1);
  std::vector<double> ring(g.radii.size(), 0.0);
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.angles.size(); ++j) s += wp[j] * g.node_density(i, j);
    ring[i] = s * std::sinh(g.radii[i]);
  }
  const double h = g.radii[1] - g.radii[0];
  double acc = 0.0;
  for (std::size_t i = 2; i < g.radii.size(); i += 2) {
    acc += h / 3.0 * (ring[i - 2] + 4.0 * ring[i - 1] + ring[i]);
    out.push_back({g.radii[i], acc});
  }
  return out;
}

double energy_concentration(const GeodesicPolarGrid& g, double fraction) {
  auto wr = radial_weights(g, 1);
  auto wp = psi_weights(g, 1);
  std::vector<double> contrib;
  std::vector<double> dens;
  double total = 0.0;
  for (std::size_t j = 0; j < g.angles.size(); ++j)
    for (std::size_t i = 0; i < g.radii.size(); ++i) {
      double c = wr[i] * wp[j] * g.node_density(i, j);
      if (c <= 0.0) continue;
      contrib.push_back(c);
      dens.push_back(g.node_density(i, j));
      total += c;
    }
  std::vector<std::size_t> order(contrib.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return dens[a] > dens[b]; });
  std::size_t top = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(order.size())));
  double share = 0.0;
  for (std::size_t k = 0; k < top && k < order.size(); ++k) share += contrib[order[k]];
  return total > 0.0 ? share / total : 0.0;
}

EnergyEntry adaptive_disk_energy(const SurfaceChart& chart, const Point2& center,
                                 double R, const AdaptiveEnergyOptions& opt) {
  PolarGridOptions go = opt.grid;
  EnergyEntry entry;
  entry.R = R;
  if (R == 0.0) {
    entry.n_r = 0;
    entry.n_psi = go.n_psi;
    return entry;
  }
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= opt.max_doublings; ++k) {
    auto grid = build_polar_grid(chart, center, R, go);
    auto e = bending_energy(grid);
    double value = opt.multiplicity * e.value;
    double diff = std::isnan(prev) ? INFINITY : std::abs(value - prev);
    entry.energy = value;
    entry.n_r = go.n_r;
    entry.n_psi = go.n_psi;
    entry.err_estimate = std::isfinite(diff) ? diff : opt.multiplicity * e.error;
    if (diff <= opt.rel_tol * std::abs(value)) break;
    prev = value;
    go.n_r *= 2;
    go.n_psi *= 2;
  }
  return entry;
}

double energy_floor(double R) { return 4.0 * kPi * (std::cosh(R) - 1.0); }

void write_energy_csv(const std::vector<EnergyReport>& reports, std::ostream& out) {
  out.precision(12);
  out << "surface,param,R,energy,err_estimate,N_r,N_psi\n";
  for (const auto& r : reports)
    for (const auto& e : r.entries)
      out << r.surface << ',' << r.param << ',' << e.R << ',' << e.energy << ','
          << e.err_estimate << ',' << e.n_r << ',' << e.n_psi << '\n';
}

}  // namespace hypdisk
