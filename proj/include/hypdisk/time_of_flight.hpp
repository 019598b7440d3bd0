#pragma once

// Travel time of the pendulum psi'' = lambda sin(psi) released at rest from
// psi = eps, until it reaches pi - eps.

namespace hypdisk {

double time_of_flight(double epsilon, double lambda);

// Root of time_of_flight(eps, lambda) = 1 by bisection over
// [1e-6, pi/2 - 1e-6]; NoRootError when the root is outside the bracket.
double epsilon_from_lambda(double lambda);

}  // namespace hypdisk
