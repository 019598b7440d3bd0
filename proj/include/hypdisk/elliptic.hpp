#pragma once

// Jacobi elliptic functions and incomplete elliptic integrals for a real
// parameter m in [0, 1] (m = k^2).

namespace hypdisk::elliptic {

struct EllipticTriple {
  double sn;
  double cn;
  double dn;
  double am;
};

EllipticTriple jacobi(double u, double m);

double complete_K(double m);
double complete_E(double m);

// F(phi|m) and E(phi|m) for any real phi (quasi-periodic continuation).
double incomplete_F(double phi, double m);
double incomplete_E(double phi, double m);

}  // namespace hypdisk::elliptic
