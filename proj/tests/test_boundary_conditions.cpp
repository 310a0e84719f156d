#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "krein/boundary_conditions.hpp"

using namespace krein;

namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

ExtensionSpec make(Family f) {
  ExtensionSpec s;
  s.family = f;
  return s;
}

RVec stacked_weights(const BoundaryGrid& g, Selector sel) {
  if (sel != Selector::Both) return g.weight;
  RVec w(2 * g.size());
  w << g.weight, g.weight;
  return w;
}

}  // namespace

TEST_CASE("coefficient expressions") {
  const Coefficient c = Coefficient::parse("-2 + 0.5*cos(2*t)");
  CHECK(c.shape == Coefficient::Shape::Cosine);
  CHECK(c(0.0) == doctest::Approx(-1.5));
  CHECK(c(kPi / 2) == doctest::Approx(-2.5));
  const Coefficient s = Coefficient::parse("1.5 - 0.25 * sin( 3 * t )");
  CHECK(s(kPi / 6) == doctest::Approx(1.25));
  CHECK(Coefficient::parse("  -4 ").c0 == -4.0);
  CHECK(Coefficient::parse("2.5e-3").c0 == 0.0025);
  for (const Coefficient& x : {c, s, Coefficient::constant(-0.125)}) {
    const Coefficient y = Coefficient::parse(x.to_string());
    for (double t : {0.0, 0.7, 2.9}) CHECK(y(t) == x(t));
  }
  CHECK_THROWS_AS(Coefficient::parse("exp(t)"), std::invalid_argument);
  CHECK_THROWS_AS(Coefficient::parse("1 + 2*cos(t)"), std::invalid_argument);
  CHECK_THROWS_AS(Coefficient::parse(""), std::invalid_argument);
}

TEST_CASE("family names") {
  CHECK(std::string(family_name(Family::DeltaPrime)) == "delta_prime");
  CHECK(selector_width(Selector::Both) == 2);
  CHECK(selector_width(Selector::Second) == 1);
}

TEST_CASE("Dirichlet and Neumann parameters") {
  const BoundaryGrid g = discretize_curve(CurveParam::kite(), 64);
  const KernelConfig lam = reference_config(ExtensionSpec{});
  const ThetaBlock d = build_theta(make(Family::Dirichlet), g);
  CHECK(d.selector == Selector::First);
  CHECK(max_abs(d.theta_matrix + assemble_g0SL(g, lam).entries) == 0.0);
  const ThetaBlock n = build_theta(make(Family::Neumann), g);
  CHECK(n.selector == Selector::Second);
  CHECK(max_abs(n.theta_matrix + assemble_g1DL(g, lam).entries) == 0.0);
}

TEST_CASE("Robin parameter matrix") {
  const RVec bp = RVec::Constant(3, 1.0), bm = RVec::Constant(3, -1.0);
  const CMat b = robin_parameter_matrix(bp, bm);
  CMat ref = CMat::Zero(6, 6);
  ref.topLeftCorner(3, 3).diagonal().setConstant(-0.5);
  ref.bottomRightCorner(3, 3).diagonal().setConstant(0.5);
  CHECK(max_abs(b - ref) == 0.0);

  const RVec cp = RVec::LinSpaced(4, 0.5, 2.0), cm = RVec::LinSpaced(4, -3.0, -1.0);
  const CMat c = robin_parameter_matrix(cp, cm);
  CHECK(std::abs(c(1, 5) - cplx(-0.5 * (cp(1) + cm(1)) / (cp(1) - cm(1)))) < 1e-15);
  CHECK(max_abs(c - c.adjoint()) == 0.0);
}

TEST_CASE("large alpha approaches Dirichlet") {
  const BoundaryGrid g = discretize_curve(CurveParam::circle(1.0), 64);
  ExtensionSpec d = make(Family::Delta);
  d.alpha = Coefficient::constant(1e8);
  CHECK((build_theta(d, g).theta_matrix - build_theta(ExtensionSpec{}, g).theta_matrix).norm() <= 1e-7);
  const cplx z(0.4, 0.3);
  CHECK((birman_block(d, g, z).matrix - birman_block(ExtensionSpec{}, g, z).matrix).norm() <= 1e-7);
}

TEST_CASE("Dirichlet block at the reference point") {
  const BoundaryGrid g = discretize_curve(CurveParam::circle(1.0), 64);
  const BirmanBlock b = birman_block(ExtensionSpec{}, g, 1.0);
  CHECK(max_abs(b.matrix - assemble_g0SL(g, KernelConfig::from_z(1.0)).entries) == 0.0);
  CHECK(b.sign == -1.0);
  const CMat w = weighted_symmetrization(b.matrix, g.weight);
  CHECK(Eigen::SelfAdjointEigenSolver<CMat>(0.5 * (w + w.adjoint())).eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("weighted blocks are Hermitian for real parameters") {
  const BoundaryGrid g = discretize_curve(CurveParam::kite(), 96);
  ExtensionSpec robin = make(Family::Robin);
  robin.b_plus = Coefficient::parse("1 + 0.3*cos(1*t)");
  robin.b_minus = Coefficient::parse("-2 + 0.5*sin(2*t)");
  ExtensionSpec delta = make(Family::Delta);
  delta.alpha = Coefficient::parse("-2 + 0.5*cos(2*t)");
  ExtensionSpec dprime = make(Family::DeltaPrime);
  dprime.beta = Coefficient::parse("1.5 + 0.3*sin(1*t)");
  for (const ExtensionSpec& s : {make(Family::Dirichlet), make(Family::Neumann), robin, delta, dprime}) {
    for (double z : {1.0, 0.3, 2.5}) {
      const BirmanBlock b = birman_block(s, g, z);
      const CMat w = weighted_symmetrization(b.matrix, stacked_weights(g, b.selector));
      CHECK(max_abs(w - w.adjoint()) <= 1e-9);
    }
    const ThetaBlock t = build_theta(s, g);
    const CMat w = weighted_symmetrization(t.theta_matrix, stacked_weights(g, t.selector));
    CHECK(max_abs(w - w.adjoint()) <= 1e-10);
  }
}

TEST_CASE("both block formulations agree") {
  const BoundaryGrid g = discretize_curve(CurveParam::kite(), 64);
  ExtensionSpec robin = make(Family::Robin);
  robin.b_plus = Coefficient::constant(0.7);
  robin.b_minus = Coefficient::parse("-1 + 0.2*cos(3*t)");
  ExtensionSpec delta = make(Family::Delta);
  delta.alpha = Coefficient::parse("3 + 0.5*cos(2*t)");
  ExtensionSpec dprime = make(Family::DeltaPrime);
  dprime.beta = Coefficient::constant(-0.8);
  const cplx z(-1.5, 0.8);
  for (const ExtensionSpec& s : {make(Family::Dirichlet), make(Family::Neumann), robin, delta, dprime}) {
    const BirmanBlock b = birman_block(s, g, z);
    const CMat t = theta_form_block(s, g, z);
    CHECK(max_abs(t - b.sign * b.matrix) <= 1e-9 * max_abs(t));
  }
}

TEST_CASE("Robin compresses to delta and delta prime") {
  const BoundaryGrid g = discretize_curve(CurveParam::ellipse(1.5, 1.0), 64);
  const int n = g.size();
  ExtensionSpec delta = make(Family::Delta);
  delta.alpha = Coefficient::parse("-2 + 0.5*cos(2*t)");
  ExtensionSpec robin = make(Family::Robin);
  robin.b_plus = Coefficient::parse("-1 + 0.25*cos(2*t)");
  robin.b_minus = Coefficient::parse("1 - 0.25*cos(2*t)");
  CHECK(max_abs(select_components(build_theta(robin, g).theta_matrix, Selector::First, n) -
                build_theta(delta, g).theta_matrix) <= 1e-12);

  ExtensionSpec dprime = make(Family::DeltaPrime);
  dprime.beta = Coefficient::constant(0.8);
  robin.b_plus = Coefficient::constant(2.5);
  robin.b_minus = Coefficient::constant(-2.5);
  CHECK(max_abs(select_components(build_theta(robin, g).theta_matrix, Selector::Second, n) -
                build_theta(dprime, g).theta_matrix) <= 1e-12);
}

TEST_CASE("arc blocks") {
  const CurveParam c = CurveParam::circle(1.0);
  const ArcSpec arc{0.5, 2.5, 24};
  const BoundaryGrid sigma = graded_arc_grid(c, arc);
  const BoundaryGrid rest = graded_arc_grid(c, ArcSpec{2.5, 0.5 + 2 * kPi, 40});
  ExtensionSpec d;
  d.on_arc = true;
  d.arc = arc;
  const cplx z(0.6, 0.2);
  const KernelConfig cfg = KernelConfig::from_z(z);
  const CMat full = assemble_panels(LayerTag::g0SL, {sigma, rest}, cfg);
  CHECK(max_abs(birman_block(d, sigma, z).matrix - full.topLeftCorner(24, 24)) == 0.0);

  ExtensionSpec delta = d;
  delta.family = Family::Delta;
  delta.alpha = Coefficient::parse("-3 + 1*cos(1*t)");
  const BirmanBlock b = birman_block(delta, sigma, z);
  const RVec a = delta.alpha.sample(sigma);
  const CMat ref = CMat::Identity(24, 24) + a.cast<cplx>().asDiagonal() * assemble_g0SL(sigma, cfg).entries;
  CHECK(max_abs(b.matrix - ref) == 0.0);
  CHECK((b.trace_scale - a).norm() == 0.0);

  ExtensionSpec dp = d;
  dp.family = Family::DeltaPrime;
  dp.beta = Coefficient::constant(0.4);
  const BirmanBlock bp = birman_block(dp, sigma, z);
  CHECK(bp.sign == 1.0);
  CHECK(max_abs(bp.matrix - (CMat::Identity(24, 24) - 0.4 * assemble_g1DL(sigma, cfg).entries)) <= 1e-15);
}

TEST_CASE("coefficient degeneracy") {
  const BoundaryGrid g = discretize_curve(CurveParam::circle(1.0), 32);
  ExtensionSpec delta = make(Family::Delta);
  delta.alpha = Coefficient::constant(-1e-12);
  CHECK_THROWS_AS(build_theta(delta, g), DegeneracyError);
  delta.alpha = Coefficient::parse("0 + 1*cos(1*t)");
  CHECK_THROWS_AS(birman_block(delta, g, 1.0), DegeneracyError);
  delta.alpha = Coefficient::constant(-1e-8);
  CHECK_NOTHROW(build_theta(delta, g));

  ExtensionSpec dp = make(Family::DeltaPrime);
  dp.beta = Coefficient::constant(1e-9);
  CHECK_THROWS_AS(dp.validate(g), DegeneracyError);

  ExtensionSpec robin = make(Family::Robin);
  robin.b_plus = Coefficient::constant(1.0);
  robin.b_minus = Coefficient::constant(1.0);
  CHECK_THROWS_AS(robin.validate(g), DegeneracyError);

  // On an arc the jump must be negative.
  const BoundaryGrid sigma = graded_arc_grid(CurveParam::circle(1.0), ArcSpec{0.0, 1.0, 8});
  robin.on_arc = true;
  robin.arc = ArcSpec{0.0, 1.0, 8};
  robin.b_minus = Coefficient::constant(-1.0);
  CHECK_THROWS_AS(robin.validate(sigma), DegeneracyError);
  robin.b_minus = Coefficient::constant(2.0);
  CHECK_NOTHROW(robin.validate(sigma));

  CHECK_THROWS_AS(ExtensionSpec{}.validate(sigma), std::invalid_argument);
}
