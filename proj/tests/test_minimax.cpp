#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypdisk/errors.hpp"
#include "hypdisk/minimax.hpp"
#include "support/oracles.hpp"

using namespace hypdisk;
using namespace hypdisk::minimax;
using std::numbers::pi;

namespace {

const std::vector<GridSolution>& lambda4_sequence() {
  static const auto sols = continuation(4.0, {2, 4, 8, 16, 32, 64}, 64);
  return sols;
}

std::vector<double> ansatz_boundary(double lambda, std::size_t n) {
  auto pa = pendulum_ansatz(lambda, 2 * (n - 1) + 1);
  std::vector<double> b(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) b[i] = pa.psi[i];
  for (std::size_t j = 1; j < n; ++j) b[n - 1 + j] = pa.psi[j];
  return b;
}

}  // namespace

TEST_CASE("lambda zero gives the flat solution") {
  auto s = grid_minimize(0.0, 8, 16);
  CHECK(s.objective == 0.0);
  CHECK(s.sup_cot2 < 1e-28);
  for (double v : s.phi) CHECK(v == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(s.converged);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(grid_minimize(-1.0, 2, 16), DomainError);
  CHECK_THROWS_AS(grid_minimize(4.0, 0.5, 16), DomainError);
  CHECK_THROWS_AS(grid_minimize(4.0, 2, 4), DomainError);
  CHECK_THROWS_AS(goursat_march({1.0, 1.0}, 4, 1.0), DomainError);
}

TEST_CASE("Goursat march satisfies the cell scheme exactly") {
  std::vector<double> b(2 * 32 - 1);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = 1.2 + 0.3 * std::sin(0.37 * k);
  auto phi = goursat_march(b, 32, 5.0);
  CHECK(discrete_sg_residual(phi, 32, 5.0) < 1e-9);
}

TEST_CASE("sampled pendulum trajectory is a second-order scheme solution") {
  // phi(u, v) = psi(u + v) sampled exactly; the scheme residual falls as h^2
  std::vector<double> res;
  for (std::size_t n : {17, 33, 65}) {
    auto pa = pendulum_ansatz(4.0, 2 * (n - 1) + 1);
    std::vector<double> phi(n * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) phi[i + n * j] = pa.psi[i + j];
    res.push_back(discrete_sg_residual(phi, n, 4.0));
  }
  CHECK(std::log2(res[0] / res[1]) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(res[1] / res[2]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("reverse-sweep gradient matches central differences") {
  const std::size_t n = 12;
  std::vector<double> b(2 * n - 1);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = pi / 2 + 0.4 * std::cos(0.9 * k);
  for (auto m : {Measure::cot2, Measure::deviation}) {
    MinimizeOptions o;
    o.measure = m;
    std::vector<double> g;
    log_lp_objective(b, n, 4.0, 8.0, &g, o);
    for (std::size_t k = 0; k < b.size(); ++k) {
      auto bp = b, bm = b;
      const double h = 1e-6;
      bp[k] += h;
      bm[k] -= h;
      double fd = (log_lp_objective(bp, n, 4.0, 8.0, nullptr, o) -
                   log_lp_objective(bm, n, 4.0, 8.0, nullptr, o)) / (2 * h);
      CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6).scale(1e-6));
    }
  }
}

TEST_CASE("barrier keeps growing outside (0, pi)") {
  const std::size_t n = 10;
  std::vector<double> b(2 * n - 1, pi / 2), g;
  double prev = -INFINITY;
  for (double shift : {1.0, 1.4, 1.56, 1.6, 1.8}) {
    b[0] = pi / 2 + shift;
    double f = log_lp_objective(b, n, 1.0, 4.0, &g, {});
    CHECK(std::isfinite(f));
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("lambda = 4 minimizers: feasibility, monotonicity, bracketing") {
  const auto& sols = lambda4_sequence();
  const auto bound = curvature_bound(4.0);
  double prev_I = 0.0, prev_gap = INFINITY;
  for (const auto& s : sols) {
    CAPTURE(s.p);
    CHECK(s.converged);
    CHECK(s.sg_residual <= 1e-8);
    CHECK(std::isfinite(s.objective));
    CHECK(s.objective >= prev_I);
    CHECK(s.objective <= bound.I_inf);
    CHECK(bound.I_inf <= s.sup_cot2);
    CHECK(s.sup_cot2 - s.objective < prev_gap);
    for (double v : s.phi) CHECK((v > 0.0 && v < pi));
    prev_I = s.objective;
    prev_gap = s.sup_cot2 - s.objective;
  }
}

TEST_CASE("minimizers approach a function of u + v as p grows") {
  const auto& sols = lambda4_sequence();
  double prev = INFINITY;
  for (const auto& s : sols) {
    double spread = anti_diagonal_spread(s);
    CHECK(spread < prev);
    prev = spread;
  }
  // at p = 64 both the collapse and the ansatz bound agree to the stated levels
  const auto& last = sols.back();
  CHECK(anti_diagonal_spread(last) <= 0.05);
  CHECK(std::abs(last.sup_cot2 / curvature_bound(4.0).I_inf - 1.0) < 0.05);
}

TEST_CASE("ansatz boundary data is not better than the p-norm minimizer") {
  // the l^p minimum can only sit below the value at the pendulum profile
  const std::size_t n = 64;
  auto b = ansatz_boundary(4.0, n);
  double at_ansatz = std::exp(log_lp_objective(b, n, 4.0, 16.0, nullptr, {}));
  const auto& s16 = lambda4_sequence()[3];
  REQUIRE(s16.p == 16.0);
  CHECK(s16.objective <= at_ansatz + 1e-12);
  MinimizeOptions o;
  GridSolution seed;
  seed.n = n;
  seed.phi = goursat_march(b, n, 4.0);
  o.warm_start = &seed;
  auto from_ansatz = grid_minimize(4.0, 16, n, o);
  CHECK(from_ansatz.objective == doctest::Approx(s16.objective).epsilon(1e-6));
}

TEST_CASE("equivalent minimax measures share the argmax node") {
  for (const auto& s : lambda4_sequence()) {
    auto a = argmax_nodes(s);
    CHECK(a.cot2 == a.half_angle);
    CHECK(a.cot2 == a.deviation);
  }
}

TEST_CASE("pendulum trajectory") {
  for (double lambda : {4.0, 9.0, 16.0}) {
    CAPTURE(lambda);
    auto pa = pendulum_ansatz(lambda, 401);
    const std::size_t mid = 200;
    CHECK(pa.t.front() == 0.0);
    CHECK(pa.t.back() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pa.psi[mid] == pa.epsilon);
    CHECK(std::abs(pa.psi.front() - (pi - pa.epsilon)) < 1e-8);
    CHECK(std::abs(pa.psi.back() - (pi - pa.epsilon)) < 1e-8);
    for (std::size_t s = 1; s <= mid; ++s) {
      CHECK(std::abs(pa.psi[mid - s] - pa.psi[mid + s]) < 1e-8);
      CHECK(std::abs(pa.dpsi[mid - s] + pa.dpsi[mid + s]) < 1e-8);
    }
    for (std::size_t k = 0; k < pa.t.size(); ++k)
      CHECK(std::abs(0.5 * pa.dpsi[k] * pa.dpsi[k] + lambda * std::cos(pa.psi[k]) - pa.energy) < 1e-8);
    CHECK(std::abs(pa.epsilon - oracle::pendulum_shooting_epsilon(lambda)) < 1e-6);
  }
  CHECK_THROWS_AS(pendulum_ansatz(4.0, 10), DomainError);
}

TEST_CASE("curvature bound") {
  CHECK(curvature_from_cot2(0.0) == 1.0);
  CHECK(curvature_bound(0.0).M == 1.0);
  // g(I) = max(|k1|, |k2|) for cot^2 phi = I
  for (double phi : {0.3, 0.9, 1.4}) {
    double I = std::pow(1.0 / std::tan(phi), 2);
    double kmax = std::max(std::tan(phi / 2), 1.0 / std::tan(phi / 2));
    CHECK(curvature_from_cot2(I) == doctest::Approx(kmax).epsilon(1e-13));
  }
  auto b = curvature_bound(4.0);
  CHECK(b.I_inf == doctest::Approx(std::pow(1.0 / std::tan(b.epsilon), 2)).epsilon(1e-14));
  CHECK_THROWS_AS(curvature_from_cot2(-1.0), DomainError);
}

TEST_CASE("exponential scaling of the bound") {
  auto fit = fit_scaling({4, 9, 16, 25});
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.05));
  // the prefactor sits above 1/64 at these radii because of the O(1) term
  CHECK(fit.prefactor > 1.0 / 64);
  CHECK(fit.prefactor < 2.0 / 64);
}

TEST_CASE("CSV output") {
  const auto& s = lambda4_sequence()[3];
  std::ostringstream out;
  write_csv_header(out);
  write_csv_row(out, s, curvature_bound(4.0));
  std::string text = out.str();
  CHECK(text.rfind("lambda,p,N,I_p,sup_cot2,eps,I_inf,M,converged\n", 0) == 0);
  CHECK(text.find("4,16,64,") != std::string::npos);
  CHECK(text.back() == '\n');
  std::ostringstream field;
  write_field_csv(field, s);
  CHECK(field.str().rfind("u,v,phi\n", 0) == 0);
  const std::string f = field.str();
  CHECK(std::count(f.begin(), f.end(), '\n') == 64 * 64 + 1);
}
