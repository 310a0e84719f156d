#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "krein/trace_space.hpp"

using namespace krein;

namespace {

TraceVector random_trace(int band, double order, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  TraceVector v = TraceVector::zeros(band, order, radius);
  for (int k = 0; k < v.coeffs.size(); ++k) v.coeffs(k) = cplx(n(rng), n(rng));
  return v;
}

}  // namespace

TEST_CASE("lambda power scales modes") {
  std::mt19937_64 rng(3);
  const TraceVector v = random_trace(6, 0.5, 1.0, rng);
  CHECK(lambda_power(v, 0.0).coeffs == v.coeffs);
  for (double r : {-1.5, 0.5, 3.0}) CHECK(lambda_power(v, r).mode(0) == v.mode(0));
  const TraceVector w = lambda_power(v, 2.0);
  CHECK(std::abs(w.mode(3) - 10.0 * v.mode(3)) < 1e-13);
  CHECK(w.sobolev_order == -1.5);
  CHECK((lambda_power(w, -2.0).coeffs - v.coeffs).norm() <= 1e-13 * v.coeffs.norm());
  CHECK(boundary_laplace_eigenvalue(4, 2.0) == 4.0);
}

TEST_CASE("Sobolev norms") {
  TraceVector one = TraceVector::zeros(4, 0.0, 1.0);
  one.mode(0) = std::sqrt(2.0 * kPi);
  for (double s : {-1.0, 0.0, 0.5, 2.0}) CHECK(std::abs(sobolev_norm(one, s) - std::sqrt(2.0 * kPi)) < 1e-14);
  CHECK(std::abs(sobolev_norm(TraceVector::single_mode(4, 1, 0.5, 1.0), 0.5) - std::pow(2.0, 0.25)) < 1e-15);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TraceVector v = random_trace(10, 0.0, 1.0 + 0.1 * trial, rng);
    // Interpolation between orders 0 and 2.
    const double eps = 0.1;
    CHECK(sobolev_norm(v, 1.0) <= eps * sobolev_norm(v, 2.0) + sobolev_norm(v, 0.0) / (4.0 * eps));
    CHECK(sobolev_norm(v, -0.5) <= sobolev_norm(v, 0.0));
    CHECK(sobolev_norm(v, 0.0) <= sobolev_norm(v, 1.5));
  }
}

TEST_CASE("duality pairing") {
  const TraceVector p0 = TraceVector::single_mode(3, 0, 0.5, 1.0);
  const TraceVector q0 = TraceVector::single_mode(3, 0, -0.5, 1.0);
  CHECK(duality_pairing(q0, p0) == cplx(1.0));
  CHECK(duality_pairing(TraceVector::single_mode(3, 2, -0.5, 1.0), p0) == cplx(0.0));
  CHECK_THROWS_AS(duality_pairing(p0, p0), OrderMismatchError);
  CHECK_THROWS_AS(duality_pairing(TraceVector::single_mode(4, 0, -0.5, 1.0), p0), OrderMismatchError);
  CHECK_THROWS_AS(duality_pairing(TraceVector::single_mode(3, 0, -0.5, 2.0), p0), OrderMismatchError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const double s = 0.25 * trial - 2.0;
    const TraceVector g = random_trace(8, s, 1.3, rng);
    const double n2 = std::pow(sobolev_norm(g, s), 2);
    CHECK(std::abs(duality_pairing(lambda_power(g, 2.0 * s), g) - n2) <= 1e-13 * n2);
    const TraceVector f = random_trace(8, -s, 1.3, rng);
    CHECK(std::abs(duality_pairing(f, g)) <= sobolev_norm(f, -s) * sobolev_norm(g, s) * (1 + 1e-14));
  }
}

TEST_CASE("nodal and modal representations") {
  const BoundaryGrid g = discretize_curve(CurveParam::circle(1.0), 32);
  AliasReport rep;
  const TraceVector c = grid_to_modes(g, CVec::Constant(32, 1.0), 8, 0.0, &rep);
  CHECK(std::abs(c.mode(0) - std::sqrt(2.0 * kPi)) < 1e-14);
  CHECK((c.coeffs.norm() - std::abs(c.mode(0))) < 1e-14);
  CHECK_FALSE(rep.warning);

  std::mt19937_64 rng(9);
  const TraceVector v = random_trace(10, 0.0, 1.0, rng);
  const CVec samples = modes_to_grid(g, v);
  CHECK((grid_to_modes(g, samples, 10).coeffs - v.coeffs).norm() <= 1e-12 * v.coeffs.norm());
  // Parseval with the quadrature weights.
  const double lhs = (g.weight.cast<cplx>().cwiseProduct(samples.cwiseAbs2().cast<cplx>())).sum().real();
  CHECK(std::abs(lhs - v.coeffs.squaredNorm()) <= 1e-12 * lhs);

  grid_to_modes(g, samples, 6, 0.0, &rep);
  CHECK(rep.warning);
  CHECK(rep.tail_fraction > 1e-8);
  CHECK_THROWS_AS(grid_to_modes(g, samples, 16), std::invalid_argument);
  CHECK_THROWS_AS(grid_to_modes(graded_arc_grid(CurveParam::circle(1.0), ArcSpec{}), CVec::Zero(64), 4),
                  std::invalid_argument);
}

TEST_CASE("arc restriction and inclusion") {
  const ArcIndexSet arc = contiguous_arc_indices(5, 7);
  arc.validate();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  CVec f(5), g(12);
  for (int i = 0; i < 5; ++i) f(i) = cplx(n(rng), n(rng));
  for (int i = 0; i < 12; ++i) g(i) = cplx(n(rng), n(rng));
  CHECK(arc_restrict(arc_include(f, arc), arc) == f);
  const CVec p = arc_include(arc_restrict(g, arc), arc);
  CHECK(arc_include(arc_restrict(p, arc), arc) == p);

  RVec w(12);
  for (int i = 0; i < 12; ++i) w(i) = 0.1 + 0.05 * i;
  RVec w_sigma(5);
  for (int i = 0; i < 5; ++i) w_sigma(i) = w(arc.sigma[i]);
  CHECK(std::abs(weighted_pairing(arc_include(f, arc), g, w) - weighted_pairing(f, arc_restrict(g, arc), w_sigma)) <=
        1e-14);

  // Functions supported on disjoint index sets pair to zero.
  CVec h = g;
  for (int i : arc.sigma) h(i) = 0.0;
  CHECK(weighted_pairing(arc_include(f, arc), h, w) == cplx(0.0));

  CMat full = CMat::Random(12, 12);
  const CMat c = arc_compress(full, arc);
  CHECK(c.rows() == 5);
  CHECK(c.cols() == 5);
  CHECK(c(2, 3) == full(arc.sigma[2], arc.sigma[3]));

  ArcIndexSet bad = arc;
  bad.complement[0] = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
