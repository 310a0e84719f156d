#include "krein/kernels.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace krein {
namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 100000;
constexpr double kSeriesRadius = 2.0;

inline cplx reciprocal(cplx w) { return std::conj(w) / std::norm(w); }

inline double max_abs(cplx w) { return std::max(std::abs(w.real()), std::abs(w.imag())); }

void require_right_half_plane(cplx z, const char* who) {
  if (z.real() < -1e-14 * std::abs(z)) {
    throw std::domain_error(std::string(who) + ": argument must satisfy Re z >= 0");
  }
  if (z == cplx(0.0)) {
    throw std::domain_error(std::string(who) + ": argument must be nonzero");
  }
}

// K0 and K1 by their ascending series, |z| <= 2.
void k01_series(cplx z, cplx& k0, cplx& k1) {
  const cplx t = 0.25 * z * z;
  const cplx lg = std::log(0.5 * z);

  cplx term0(1.0), i0(1.0), sum_h(0.0);
  cplx term1(1.0), i1_sum(1.0), psi_sum(-2.0 * kEulerGamma + 1.0);
  double hk = 0.0;
  for (int k = 1; k < 60; ++k) {
    hk += 1.0 / k;
    term0 *= t / (double(k) * k);
    i0 += term0;
    sum_h += term0 * hk;

    term1 *= t / (double(k) * (k + 1));
    i1_sum += term1;
    const double psi = (hk - kEulerGamma) + (hk + 1.0 / (k + 1) - kEulerGamma);
    psi_sum += term1 * psi;
    if (std::norm(term0) < kEps * kEps * std::norm(i0) && std::norm(term1) < kEps * kEps) break;
  }
  const cplx i1 = 0.5 * z * i1_sum;
  k0 = -(lg + kEulerGamma) * i0 + sum_h;
  k1 = 1.0 / z + lg * i1 - 0.25 * z * psi_sum;
}

// exp(z) K0(z) and exp(z) K1(z) by Steed's evaluation of the second continued
// fraction (Temme), valid for |z| > 2 in the closed right half-plane.
void k01_scaled_cf2(cplx z, cplx& k0s, cplx& k1s) {
  const double a1 = 0.25;
  cplx b = 2.0 * (1.0 + z);
  cplx d = reciprocal(b);
  cplx h = d, delh = d;
  cplx q1(0.0), q2(1.0);
  cplx q(a1), c(a1);
  double a = -a1;
  cplx s = 1.0 + q * delh;
  int i = 1;
  for (; i < kMaxIter; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = reciprocal(b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cplx dels = q * delh;
    s += dels;
    if (std::norm(dels) < kEps * kEps * std::norm(s)) break;
  }
  if (i == kMaxIter) throw std::runtime_error("bessel_k: continued fraction did not converge");
  k0s = std::sqrt(kPi / (2.0 * z)) / s;
  k1s = k0s * (z + 0.5 - a1 * h) / z;
}

void k01_scaled(cplx z, cplx& k0s, cplx& k1s) {
  if (std::abs(z) <= kSeriesRadius) {
    k01_series(z, k0s, k1s);
    const cplx e = std::exp(z);
    k0s *= e;
    k1s *= e;
  } else {
    k01_scaled_cf2(z, k0s, k1s);
  }
}

cplx kn_scaled_impl(int n, cplx z) {
  if (n < 0) n = -n;
  cplx k0s, k1s;
  k01_scaled(z, k0s, k1s);
  if (n == 0) return k0s;
  cplx km = k0s, k = k1s;
  for (int j = 1; j < n; ++j) {
    const cplx kp = km + (2.0 * j / z) * k;
    km = k;
    k = kp;
  }
  return k;
}

}  // namespace

cplx bessel_kn_scaled(int n, cplx z) {
  require_right_half_plane(z, "bessel_kn_scaled");
  return kn_scaled_impl(n, z);
}

cplx bessel_k0(cplx z) {
  require_right_half_plane(z, "bessel_k0");
  if (std::abs(z) <= kSeriesRadius) {
    cplx k0, k1;
    k01_series(z, k0, k1);
    return k0;
  }
  return kn_scaled_impl(0, z) * std::exp(-z);
}

cplx bessel_k1(cplx z) {
  require_right_half_plane(z, "bessel_k1");
  if (std::abs(z) <= kSeriesRadius) {
    cplx k0, k1;
    k01_series(z, k0, k1);
    return k1;
  }
  return kn_scaled_impl(1, z) * std::exp(-z);
}

cplx bessel_kn(int n, cplx z) {
  require_right_half_plane(z, "bessel_kn");
  if (n < 0) n = -n;
  if (std::abs(z) <= kSeriesRadius) {
    cplx km, k;
    k01_series(z, km, k);
    if (n == 0) return km;
    for (int j = 1; j < n; ++j) {
      const cplx kp = km + (2.0 * j / z) * k;
      km = k;
      k = kp;
    }
    return k;
  }
  return kn_scaled_impl(n, z) * std::exp(-z);
}

cplx bessel_in(int n, cplx z) {
  if (n < 0) n = -n;
  if (z.real() < -1e-14 * std::abs(z)) {
    throw std::domain_error("bessel_in: argument must satisfy Re z >= 0");
  }
  const double az = std::abs(z);
  if (az == 0.0) return n == 0 ? cplx(1.0) : cplx(0.0);
  if (az <= 1.0) {
    const cplx t = 0.25 * z * z;
    cplx lead(1.0);
    for (int k = 1; k <= n; ++k) lead *= 0.5 * z / double(k);
    cplx term(1.0), sum(1.0);
    for (int k = 1; k < 60; ++k) {
      term *= t / (double(k) * (k + n));
      sum += term;
      if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return lead * sum;
  }
  // Miller's backward recurrence; exp(z) = I_0 + 2 sum_{k>=1} I_k fixes the scale.
  const double top = std::max<double>(n, az);
  int m = 2 * (static_cast<int>(top + 20.0 + 10.0 * std::sqrt(top)) / 2);
  const cplx two_over_z = 2.0 * reciprocal(z);
  cplx ip(0.0), ic(1e-300);
  cplx norm(0.0), want(0.0);
  for (int k = m; k >= 1; --k) {
    const cplx im = ip + (double(k) * two_over_z) * ic;
    ip = ic;
    ic = im;
    if (max_abs(ic) > 1e250) {
      ic *= 1e-250;
      ip *= 1e-250;
      norm *= 1e-250;
      want *= 1e-250;
    }
    if (k - 1 == n) want = ic;
    if (k - 1 >= 1) norm += 2.0 * ic;
  }
  norm += ic;
  // norm = exp(z) in the recurrence's units; divide in log space.
  return want / norm * std::exp(z);
}

double bessel_i(int n, double x) {
  if (n < 0) n = -n;
  if (x < 0.0) throw std::domain_error("bessel_i: argument must be nonnegative");
  if (x > 700.0) throw std::overflow_error("bessel_i: argument above 700, use bessel_i_scaled");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  // Accumulate the prefactor (x/2)^n / n! in logs to avoid overflow in n!.
  const double log_lead = n * std::log(0.5 * x) - std::lgamma(n + 1.0);
  const double t = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 100000; ++k) {
    term *= t / (double(k) * (k + n));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(log_lead + std::log(sum));
}

double bessel_i_scaled(int n, double x) {
  if (n < 0) n = -n;
  if (x <= 0.0) throw std::domain_error("bessel_i_scaled: argument must be positive");
  // Modified Lentz for f = I_{n+1}/I_n.
  const double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int i = 1; i < kMaxIter; ++i) {
    const double b = 2.0 * (n + i) / x;
    d = b + d;
    if (d == 0.0) d = tiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double kn = kn_scaled_impl(n, cplx(x, 0.0)).real();
  const double kn1 = kn_scaled_impl(n + 1, cplx(x, 0.0)).real();
  return 1.0 / (x * (kn1 + f * kn));
}

double bessel_k(int n, double x) {
  if (x <= 0.0) throw std::domain_error("bessel_k: argument must be positive");
  return bessel_kn(n, cplx(x, 0.0)).real();
}

double bessel_i_prime(int n, double x) {
  if (n == 0) return bessel_i(1, x);
  return 0.5 * (bessel_i(n - 1, x) + bessel_i(n + 1, x));
}

double bessel_k_prime(int n, double x) {
  if (n == 0) return -bessel_k(1, x);
  return -0.5 * (bessel_k(n - 1, x) + bessel_k(n + 1, x));
}

KernelConfig KernelConfig::from_z(cplx z, double V0) {
  KernelConfig cfg;
  cfg.V0 = V0;
  cfg.z = z;
  cfg.kappa = std::sqrt(z + V0);
  if (cfg.kappa.real() < 0.0) cfg.kappa = -cfg.kappa;
  cfg.oscillatory = cfg.kappa.real() == 0.0;
  return cfg;
}

KernelConfig KernelConfig::from_kappa(cplx kappa, double V0) {
  if (kappa.real() < 0.0) throw std::domain_error("KernelConfig: Re kappa must be >= 0");
  KernelConfig cfg;
  cfg.V0 = V0;
  cfg.kappa = kappa;
  cfg.z = kappa * kappa - V0;
  cfg.oscillatory = kappa.real() == 0.0;
  return cfg;
}

cplx fundamental_solution(const KernelConfig& cfg, const Point& x, const Point& y) {
  const double r = (x - y).norm();
  if (r < 1e-14) throw CoincidenceError("fundamental_solution: x and y coincide");
  return bessel_k0(cfg.kappa * r) / (2.0 * kPi);
}

cplx conormal_gradient(const KernelConfig& cfg, const Point& x, const Point& y,
                       const Point& normal_at_y) {
  const Point d = x - y;
  const double r = d.norm();
  if (r < 1e-14) throw CoincidenceError("conormal_gradient: x and y coincide");
  return cfg.kappa / (2.0 * kPi) * bessel_k1(cfg.kappa * r) * (d.dot(normal_at_y) / r);
}

cplx conormal_gradient_x(const KernelConfig& cfg, const Point& x, const Point& y,
                         const Point& normal_at_x) {
  const Point d = x - y;
  const double r = d.norm();
  if (r < 1e-14) throw CoincidenceError("conormal_gradient_x: x and y coincide");
  return -cfg.kappa / (2.0 * kPi) * bessel_k1(cfg.kappa * r) * (d.dot(normal_at_x) / r);
}

}  // namespace krein
