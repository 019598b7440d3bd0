#include "hypdisk/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "hypdisk/detail/ode.hpp"
#include "hypdisk/errors.hpp"
#include "hypdisk/time_of_flight.hpp"

namespace hypdisk::minimax {
namespace {

constexpr double kPi = std::numbers::pi;

double cell_solve(double a, double b, double c, double mu) {
  const double s = a + b + c;
  double x = b + c - a + mu * std::sin(0.25 * (s + b + c - a));
  for (int it = 0; it < 50; ++it) {
    double arg = 0.25 * (s + x);
    double F = x - b - c + a - mu * std::sin(arg);
    double dF = 1.0 - 0.25 * mu * std::cos(arg);
    double dx = F / dF;
    x -= dx;
    if (std::abs(dx) <= 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

// (phi - pi/2)^2, or tan^2 of the distance to pi/2 continued past pi/2 - guard by its
// second-order Taylor polynomial so the penalty keeps growing outside (0, pi).
struct Penalty {
  double dmax, f0, f1, f2;
  bool squared_deviation;
  Penalty(double guard, Measure m)
      : dmax(0.5 * kPi - guard), squared_deviation(m == Measure::deviation) {
    double t = std::tan(dmax), sec2 = 1.0 + t * t;
    f0 = t * t;
    f1 = 2.0 * t * sec2;
    f2 = 2.0 * sec2 * sec2 + 4.0 * t * t * sec2;
  }
  // value and derivative with respect to phi
  std::pair<double, double> operator()(double phi) const {
    double d = phi - 0.5 * kPi;
    double sgn = d < 0.0 ? -1.0 : 1.0;
    double a = std::abs(d);
    if (squared_deviation) return {d * d, 2.0 * d};
    if (a <= dmax) {
      double t = std::tan(a);
      return {t * t, sgn * 2.0 * t * (1.0 + t * t)};
    }
    double e = a - dmax;
    return {f0 + f1 * e + 0.5 * f2 * e * e, sgn * (f1 + f2 * e)};
  }
};

std::vector<double> trapezoid_weights(std::size_t n) {
  std::vector<double> w(n, 1.0);
  w.front() = w.back() = 0.5;
  double s = static_cast<double>(n - 1);
  for (double& x : w) x /= s;
  return w;
}

class Objective {
 public:
  Objective(double lambda, double p, std::size_t n, double guard, Measure m)
      : lambda_(lambda), p_(p), n_(n), pen_(guard, m), w1_(trapezoid_weights(n)) {
    double h = 1.0 / static_cast<double>(n - 1);
    mu_ = h * h * lambda;
  }

  // (1/p) log sum_k w_k f(phi_k)^p, gradient with respect to the Goursat data
  double eval(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
    const std::size_t n = n_;
    std::vector<double> b(x.data(), x.data() + x.size());
    std::vector<double> phi = goursat_march(b, n, lambda_);
    std::vector<double> logt(n * n), fd(n * n), fv(n * n);
    double M = -INFINITY;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = i + n * j;
        auto [f, df] = pen_(phi[k]);
        fv[k] = f;
        fd[k] = df;
        logt[k] = f > 0.0 ? std::log(w1_[i] * w1_[j]) + p_ * std::log(f) : -INFINITY;
        M = std::max(M, logt[k]);
      }
    double S = 0.0;
    for (double t : logt) S += std::exp(t - M);
    const double logS = M + std::log(S);
    if (grad) {
      std::vector<double> adj(n * n, 0.0);
      for (std::size_t k = 0; k < n * n; ++k)
        if (fv[k] > 0.0) adj[k] = std::exp(logt[k] - logS) / fv[k] * fd[k];
      // reverse sweep through the cell updates
      for (std::size_t j = n - 1; j-- > 0;)
        for (std::size_t i = n - 1; i-- > 0;) {
          std::size_t k00 = i + n * j, k10 = k00 + 1, k01 = k00 + n, k11 = k01 + 1;
          double arg = 0.25 * (phi[k00] + phi[k10] + phi[k01] + phi[k11]);
          double kap = 0.25 * mu_ * std::cos(arg);
          double r = (1.0 + kap) / (1.0 - kap);
          double g = adj[k11];
          adj[k10] += r * g;
          adj[k01] += r * g;
          adj[k00] -= g;
        }
      grad->resize(x.size());
      for (std::size_t i = 0; i < n; ++i) (*grad)[i] = adj[i];
      for (std::size_t j = 1; j < n; ++j) (*grad)[n - 1 + j] = adj[n * j];
    }
    return logS / p_;
  }

 private:
  double lambda_, p_;
  std::size_t n_;
  Penalty pen_;
  std::vector<double> w1_;
  double mu_;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double f;
  bool converged;
  std::size_t iterations;
};

double spread_along(const std::vector<double>& phi, std::size_t n, bool anti) {
  double worst = 0.0;
  for (std::size_t k = 0; k <= 2 * (n - 1); ++k) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = (k >= n ? k - n + 1 : 0); i <= std::min(k, n - 1); ++i) {
      double v = anti ? phi[i + n * (k - i)] : phi[(n - 1 - i) + n * (k - i)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

BfgsResult bfgs(const Objective& obj, Eigen::VectorXd x, std::size_t max_iter,
                double grad_tol) {
  const Eigen::Index d = x.size();
  Eigen::VectorXd g, g_new;
  double f = obj.eval(x, &g);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
  bool scaled = false;
  std::size_t stall = 0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < grad_tol) return {x, f, true, it};
    Eigen::VectorXd dir = -H * g;
    if (dir.dot(g) >= 0.0) {
      H.setIdentity();
      dir = -g;
    }
    double step = 1.0;
    double dmax = dir.lpNorm<Eigen::Infinity>();
    if (dmax > 0.2) step = 0.2 / dmax;
    Eigen::VectorXd x_new;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = obj.eval(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * g.dot(dir)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (H.isIdentity()) return {x, f, false, it};
      H.setIdentity();
      continue;
    }
    Eigen::VectorXd s = x_new - x, y = g_new - g;
    double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (!scaled) {
        H *= sy / y.dot(y);
        scaled = true;
      }
      double rho = 1.0 / sy;
      Eigen::VectorXd Hy = H * y;
      H += (rho * rho * y.dot(Hy) + rho) * s * s.transpose() -
           rho * (Hy * s.transpose() + s * Hy.transpose());
    }
    stall = (f - f_new <= 1e-15 * std::abs(f)) ? stall + 1 : 0;
    x = x_new;
    f = f_new;
    g = g_new;
    if (stall >= 20) return {x, f, g.lpNorm<Eigen::Infinity>() < 1e3 * grad_tol, it};
  }
  return {x, f, false, max_iter};
}

GridSolution finish(double lambda, double p, std::size_t n,
                    const std::vector<double>& boundary, bool converged,
                    std::size_t iterations) {
  GridSolution s;
  s.n = n;
  s.lambda = lambda;
  s.p = p;
  s.phi = goursat_march(boundary, n, lambda);
  if (spread_along(s.phi, n, false) < spread_along(s.phi, n, true)) {
    std::vector<double> flipped(n * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        flipped[i + n * j] = kPi - s.phi[(n - 1 - i) + n * j];
    s.phi = std::move(flipped);
  }
  s.converged = converged;
  s.iterations = iterations;
  s.sg_residual = discrete_sg_residual(s.phi, n, lambda);
  auto w = trapezoid_weights(n);
  double M = -INFINITY, sup = 0.0;
  std::vector<double> logt(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double phi = s.phi[i + n * j];
      double c = std::tan(0.5 * kPi - phi);
      double c2 = c * c;
      sup = std::max(sup, c2);
      logt[i + n * j] = c2 > 0.0 ? std::log(w[i] * w[j]) + p * std::log(c2) : -INFINITY;
      M = std::max(M, logt[i + n * j]);
    }
  double S = 0.0;
  for (double t : logt) S += std::exp(t - M);
  s.sup_cot2 = sup;
  s.objective = std::isfinite(M) ? std::exp((M + std::log(S)) / p) : 0.0;
  return s;
}

std::vector<double> boundary_of(const GridSolution& s) {
  std::vector<double> b(2 * s.n - 1);
  for (std::size_t i = 0; i < s.n; ++i) b[i] = s.at(i, 0);
  for (std::size_t j = 1; j < s.n; ++j) b[s.n - 1 + j] = s.at(0, j);
  return b;
}

}  // namespace

std::vector<double> goursat_march(const std::vector<double>& boundary,
                                  std::size_t n, double lambda) {
  if (boundary.size() != 2 * n - 1)
    throw DomainError("Goursat data must have 2n-1 values");
  const double h = 1.0 / static_cast<double>(n - 1);
  const double mu = h * h * lambda;
  std::vector<double> phi(n * n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = boundary[i];
  for (std::size_t j = 1; j < n; ++j) phi[n * j] = boundary[n - 1 + j];
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::size_t k = i + n * j;
      phi[k + n + 1] = cell_solve(phi[k], phi[k + 1], phi[k + n], mu);
    }
  return phi;
}

double discrete_sg_residual(const std::vector<double>& phi, std::size_t n,
                            double lambda) {
  const double h = 1.0 / static_cast<double>(n - 1);
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::size_t k = i + n * j;
      double a = phi[k], b = phi[k + 1], c = phi[k + n], x = phi[k + n + 1];
      double r = (x - b - c + a) / (h * h) - lambda * std::sin(0.25 * (a + b + c + x));
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

double log_lp_objective(const std::vector<double>& boundary, std::size_t n,
                        double lambda, double p, std::vector<double>* gradient,
                        const MinimizeOptions& opt) {
  if (boundary.size() != 2 * n - 1)
    throw DomainError("Goursat data must have 2n-1 values");
  Objective obj(lambda, p, n, opt.angle_guard, opt.measure);
  Eigen::Map<const Eigen::VectorXd> x(boundary.data(), static_cast<Eigen::Index>(boundary.size()));
  Eigen::VectorXd g;
  double f = obj.eval(x, gradient ? &g : nullptr);
  if (gradient) gradient->assign(g.data(), g.data() + g.size());
  return f;
}

GridSolution grid_minimize(double lambda, double p, std::size_t n,
                           const MinimizeOptions& opt) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be nonnegative");
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  if (n < 8) throw DomainError("grid size must be at least 8");
  if (lambda == 0.0) {
    std::vector<double> b(2 * n - 1, 0.5 * kPi);
    return finish(lambda, p, n, b, true, 0);
  }
  Objective obj(lambda, p, n, opt.angle_guard, opt.measure);
  const Eigen::Index d = static_cast<Eigen::Index>(2 * n - 1);

  std::vector<Eigen::VectorXd> starts;
  if (opt.warm_start) {
    if (opt.warm_start->n != n) throw DomainError("warm start grid size mismatch");
    auto b = boundary_of(*opt.warm_start);
    starts.emplace_back(Eigen::Map<const Eigen::VectorXd>(b.data(), d));
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> noise(0.0, opt.perturbation);
    starts.emplace_back(Eigen::VectorXd::Constant(d, 0.5 * kPi));
    for (std::size_t k = 0; k < opt.perturbed_starts; ++k) {
      Eigen::VectorXd x(d);
      for (Eigen::Index i = 0; i < d; ++i) x[i] = 0.5 * kPi + noise(rng);
      starts.push_back(x);
    }
  }
  BfgsResult best{Eigen::VectorXd(), INFINITY, false, 0};
  std::size_t total = 0;
  for (auto& x0 : starts) {
    auto r = bfgs(obj, x0, opt.max_iterations, opt.grad_tol);
    total += r.iterations;
    if (r.f < best.f) best = r;
  }
  std::vector<double> b(best.x.data(), best.x.data() + best.x.size());
  return finish(lambda, p, n, b, best.converged, total);
}

std::vector<GridSolution> continuation(double lambda, const std::vector<double>& ps,
                                       std::size_t n, const MinimizeOptions& opt) {
  std::vector<GridSolution> out;
  for (double p : ps) {
    MinimizeOptions o = opt;
    if (!out.empty()) o.warm_start = &out.back();
    out.push_back(grid_minimize(lambda, p, n, o));
  }
  return out;
}

double anti_diagonal_spread(const GridSolution& s) {
  return spread_along(s.phi, s.n, true);
}

ArgmaxNodes argmax_nodes(const GridSolution& s) {
  auto argmax = [&](auto&& f) {
    std::size_t best = 0;
    double bv = -INFINITY;
    for (std::size_t k = 0; k < s.phi.size(); ++k) {
      double v = f(s.phi[k]);
      if (v > bv) {
        bv = v;
        best = k;
      }
    }
    return best;
  };
  return {argmax([](double p) { return std::pow(1.0 / std::tan(p), 2); }),
          argmax([](double p) { return std::max(std::tan(0.5 * p), 1.0 / std::tan(0.5 * p)); }),
          argmax([](double p) { return (p - 0.5 * kPi) * (p - 0.5 * kPi); })};
}

PendulumSolution pendulum_ansatz(double lambda, std::size_t samples) {
  if (samples < 3 || samples % 2 == 0)
    throw DomainError("pendulum samples must be odd and at least 3");
  PendulumSolution sol;
  sol.lambda = lambda;
  sol.epsilon = epsilon_from_lambda(lambda);
  sol.energy = lambda * std::cos(sol.epsilon);
  const std::size_t half = samples / 2;
  sol.t.resize(samples);
  sol.psi.resize(samples);
  sol.dpsi.resize(samples);
  std::vector<double> stops;
  for (std::size_t k = 1; k <= half; ++k)
    stops.push_back(static_cast<double>(k) / static_cast<double>(half));
  detail::StepControl sc;
  sc.rel_tol = 1e-13;
  sc.abs_tol = 1e-14;
  sc.min_step = 1e-14;
  sc.initial_step = 1e-4;
  for (int dir : {+1, -1}) {
    // s = dir (t - 1); psi'' is even in time, psi' flips sign
    auto rhs = [lambda](const detail::State<2>& y, detail::State<2>& dy, double) {
      dy[0] = y[1];
      dy[1] = lambda * std::sin(y[0]);
    };
    detail::march<2>(
        rhs, {sol.epsilon, 0.0}, 0.0, stops, sc, [](const auto&) { return true; },
        [&](std::size_t k, double s, const detail::State<2>& y) {
          std::size_t idx = dir > 0 ? half + k + 1 : half - k - 1;
          sol.t[idx] = 1.0 + dir * s;
          sol.psi[idx] = y[0];
          sol.dpsi[idx] = dir * y[1];
        },
        [](double, const auto&) {});
  }
  sol.t[half] = 1.0;
  sol.psi[half] = sol.epsilon;
  sol.dpsi[half] = 0.0;
  return sol;
}

double curvature_from_cot2(double I) {
  if (!(I >= 0.0)) throw DomainError("cot^2 bound must be nonnegative");
  return std::sqrt(I) + std::sqrt(I + 1.0);
}

CurvatureBound curvature_bound(double lambda) {
  if (lambda == 0.0) return {0.5 * kPi, 0.0, 1.0};
  double eps = epsilon_from_lambda(lambda);
  double c = 1.0 / std::tan(eps);
  return {eps, c * c, curvature_from_cot2(c * c)};
}

ScalingFit fit_scaling(const std::vector<double>& lambdas) {
  if (lambdas.size() < 2) throw DomainError("scaling fit needs two lambdas");
  Eigen::MatrixXd A(lambdas.size(), 2);
  Eigen::VectorXd y(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    A(k, 0) = std::sqrt(lambdas[k]);
    A(k, 1) = 1.0;
    y[k] = std::log(curvature_bound(lambdas[k]).I_inf);
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  return {c[0], std::exp(c[1])};
}

void write_csv_header(std::ostream& out) {
  out << "lambda,p,N,I_p,sup_cot2,eps,I_inf,M,converged\n";
}

void write_csv_row(std::ostream& out, const GridSolution& s, const CurvatureBound& b) {
  auto prec = out.precision(12);
  out << s.lambda << ',' << s.p << ',' << s.n << ',' << s.objective << ','
      << s.sup_cot2 << ',' << b.epsilon << ',' << b.I_inf << ',' << b.M << ','
      << (s.converged ? "true" : "false") << '\n';
  out.precision(prec);
}

void write_field_csv(std::ostream& out, const GridSolution& s) {
  auto prec = out.precision(12);
  out << "u,v,phi\n";
  const double h = 1.0 / static_cast<double>(s.n - 1);
  for (std::size_t j = 0; j < s.n; ++j)
    for (std::size_t i = 0; i < s.n; ++i)
      out << static_cast<double>(i) * h << ',' << static_cast<double>(j) * h << ','
          << s.at(i, j) << '\n';
  out.precision(prec);
}

}  // namespace hypdisk::minimax
