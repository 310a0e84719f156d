#pragma once

#include "krein/types.hpp"

namespace krein {

// Modified Bessel functions.
//
// The complex K routines cover the closed right half-plane Re z >= 0, which
// contains every argument kappa*r produced by the principal branch of kappa.
// On the imaginary axis they continue to K_n(ix) = -(pi i/2)(-i)^n H_n^(2)(x).

cplx bessel_k0(cplx z);
cplx bessel_k1(cplx z);
cplx bessel_kn(int n, cplx z);

// exp(z) K_n(z); finite for large |z| where K_n itself underflows.
cplx bessel_kn_scaled(int n, cplx z);

// I_n for complex z with Re z >= 0 (Miller recurrence normalized by exp(z)).
cplx bessel_in(int n, cplx z);

// I_n for real x >= 0 by the positive-term series; throws std::overflow_error
// for x > 700.
double bessel_i(int n, double x);

// exp(-x) I_n(x) for real x > 0, from the continued fraction for
// I_{n+1}/I_n combined with the Wronskian and scaled K.
double bessel_i_scaled(int n, double x);

// Real-argument K_n, x > 0.
double bessel_k(int n, double x);

// Derivatives through the standard recurrences.
double bessel_i_prime(int n, double x);
double bessel_k_prime(int n, double x);

// Kernel parameters for -Laplace + V0 + z in the plane.
struct KernelConfig {
  double V0 = 0.0;
  cplx z{1.0, 0.0};
  cplx kappa{1.0, 0.0};
  bool oscillatory = false;

  // kappa = principal sqrt(z + V0); purely imaginary kappa is tagged
  // oscillatory.
  static KernelConfig from_z(cplx z, double V0 = 0.0);
  // Direct kappa parametrization; kappa must satisfy Re kappa >= 0.
  static KernelConfig from_kappa(cplx kappa, double V0 = 0.0);
};

// g_z(x, y) = K0(kappa |x - y|) / (2 pi).
cplx fundamental_solution(const KernelConfig& cfg, const Point& x, const Point& y);

// nu(y) . grad_y g_z(x, y).
cplx conormal_gradient(const KernelConfig& cfg, const Point& x, const Point& y,
                       const Point& normal_at_y);

// nu(x) . grad_x g_z(x, y).
cplx conormal_gradient_x(const KernelConfig& cfg, const Point& x, const Point& y,
                         const Point& normal_at_x);

}  // namespace krein
