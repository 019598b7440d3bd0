#pragma once

// Minimax curvature bound for smooth immersions: minimize the discrete l^p
// norm of cot^2(phi) over solutions of phi_uv = lambda sin(phi) on the unit
// square, and the pendulum reduction phi = psi(u + v).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hypdisk::minimax {

struct GridSolution {
  std::size_t n = 0;
  double lambda = 0.0;
  double p = 0.0;
  std::vector<double> phi;  // phi[i + n * j], u = i h, v = j h
  double objective = 0.0;   // I_p: weighted l^p norm of cot^2(phi), whatever the measure
  double sup_cot2 = 0.0;
  double sg_residual = 0.0;
  bool converged = false;
  std::size_t iterations = 0;

  double at(std::size_t i, std::size_t j) const { return phi[i + n * j]; }
};

// What the l^p norm is taken of during the search. Both share the same
// l^infinity minimizer but differ at finite p.
enum class Measure { deviation, cot2 };

struct MinimizeOptions {
  Measure measure = Measure::cot2;
  std::size_t max_iterations = 4000;
  std::size_t perturbed_starts = 3;
  std::uint64_t seed = 1;
  double grad_tol = 1e-9;
  double angle_guard = 1e-3;
  double perturbation = 0.05;
  // replaces the multi-start when set
  const GridSolution* warm_start = nullptr;
};

// Goursat data: phi(i, 0) for i = 0..n-1 followed by phi(0, j) for j = 1..n-1.
// Each cell is solved by Newton for
//   phi11 - phi10 - phi01 + phi00 = h^2 lambda sin(mean of the four corners).
std::vector<double> goursat_march(const std::vector<double>& boundary,
                                  std::size_t n, double lambda);

// Max over cells of the scheme residual, divided by h^2.
double discrete_sg_residual(const std::vector<double>& phi, std::size_t n,
                            double lambda);

// Log of the weighted l^p norm of the chosen measure as a function of the
// Goursat data, with its exact gradient by reverse sweep when requested.
double log_lp_objective(const std::vector<double>& boundary, std::size_t n,
                        double lambda, double p, std::vector<double>* gradient,
                        const MinimizeOptions& options = {});

GridSolution grid_minimize(double lambda, double p, std::size_t n,
                           const MinimizeOptions& options = {});

// Warm-started sequence over increasing p.
std::vector<GridSolution> continuation(double lambda, const std::vector<double>& ps,
                                       std::size_t n,
                                       const MinimizeOptions& options = {});

// Max over anti-diagonals i + j = const of the spread of phi. Minimizers are
// returned in the orientation where this is the smaller of the two diagonal
// spreads, using the symmetry phi(u, v) -> pi - phi(1 - u, v).
double anti_diagonal_spread(const GridSolution& s);

struct ArgmaxNodes {
  std::size_t cot2;
  std::size_t half_angle;
  std::size_t deviation;
};
// Argmax of cot^2 phi, max(tan(phi/2), cot(phi/2)) and (phi - pi/2)^2.
ArgmaxNodes argmax_nodes(const GridSolution& s);

struct PendulumSolution {
  double lambda = 0.0;
  double epsilon = 0.0;
  double energy = 0.0;  // lambda cos(eps)
  std::vector<double> t;
  std::vector<double> psi;
  std::vector<double> dpsi;
};

// psi'' = lambda sin(psi) with psi(1) = eps, psi'(1) = 0 on [0, 2].
PendulumSolution pendulum_ansatz(double lambda, std::size_t samples = 201);

// sqrt(I) + sqrt(I + 1): the bound on max(|k1|, |k2|) for cot^2 phi = I.
double curvature_from_cot2(double I);

struct CurvatureBound {
  double epsilon;
  double I_inf;
  double M;
};

CurvatureBound curvature_bound(double lambda);

struct ScalingFit {
  double slope;      // of log I_inf against sqrt(lambda)
  double prefactor;  // exp(intercept)
};

ScalingFit fit_scaling(const std::vector<double>& lambdas);

// lambda,p,N,I_p,sup_cot2,eps,I_inf,M,converged
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const GridSolution& s, const CurvatureBound& b);
// u,v,phi
void write_field_csv(std::ostream& out, const GridSolution& s);

}  // namespace hypdisk::minimax
