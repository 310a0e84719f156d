#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "krein/extension_core.hpp"

using namespace krein;

namespace {

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

AbstractModel diagonal_model(double lambda0) {
  AbstractModel m;
  m.A = CMat::Zero(2, 2);
  m.A(0, 0) = 1.0;
  m.A(1, 1) = 2.0;
  m.tau = CMat::Zero(1, 2);
  m.tau(0, 0) = 1.0;
  m.gram = CMat::Identity(1, 1);
  m.lambda0 = lambda0;
  return m;
}

}  // namespace

TEST_CASE("gamma field closed form") {
  const CMat g = gamma_field(diagonal_model(0.0), cplx(0.0, 1.0));
  CHECK(std::abs(g(0, 0) - 1.0 / cplx(-1.0, 1.0)) < 1e-15);
  CHECK(g(1, 0) == cplx(0.0));
}

TEST_CASE("gamma field realizes the dual of the trace of the resolvent") {
  std::mt19937_64 rng(17);
  const AbstractModel m = AbstractModel::random(7, 3, rng);
  m.validate();
  const cplx z(0.4, -1.3);
  const CMat g = gamma_field(m, z);
  const CMat tr = m.tau * free_resolvent(m, std::conj(z));
  const CMat ginv = m.gram.inverse();
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const CVec phi = random_complex(3, 1, rng), u = random_complex(7, 1, rng);
    const cplx lhs = (g * phi).dot(u);
    const cplx rhs = phi.dot(ginv * (tr * u));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("shift identities for the gamma field") {
  std::mt19937_64 rng(23);
  const AbstractModel m = AbstractModel::random(8, 4, rng);
  const cplx z(0.0, 2.0), w(-1.0, 1.0);
  const CMat gz = gamma_field(m, z), gw = gamma_field(m, w);
  CHECK(max_abs((z - w) * free_resolvent(m, w) * gz - (gw - gz)) <= 1e-12);
  CHECK(max_abs(m.A * (gz - gw) - (z * gz - w * gw)) <= 1e-12);
}

TEST_CASE("Weyl operator") {
  const AbstractModel d = diagonal_model(0.0);
  CHECK(max_abs(weyl_operator(d, 0.0)) == 0.0);
  CHECK(std::abs(weyl_operator(d, cplx(0.0, 1.0))(0, 0) - cplx(-0.5, 0.5)) < 1e-15);

  std::mt19937_64 rng(31);
  for (int k = 0; k < 5; ++k) {
    const AbstractModel m = AbstractModel::random(10, 10, rng);
    const CMat mg = weyl_operator(m, m.lambda0 + 0.37) * m.gram;
    CHECK(max_abs(mg - mg.adjoint()) <= 1e-12 * std::max(1.0, max_abs(mg)));
    // Symmetric difference quotients agree along two directions.
    const cplx z(-0.5, 1.0);
    const double h = 1e-5;
    const cplx ih(0.0, h);
    const CMat d1 = (weyl_operator(m, z + h) - weyl_operator(m, z - h)) / (2.0 * h);
    const CMat d2 = (weyl_operator(m, z + ih) - weyl_operator(m, z - ih)) / (2.0 * ih);
    CHECK(max_abs(d1 - d2) <= 1e-6 * std::max(1.0, max_abs(d1)));
    // M_z = (z - lambda0) G' G_z with G' the dual of G_lambda0.
    const CMat gl = gamma_field(m, m.lambda0), gz = gamma_field(m, z);
    CHECK(max_abs(weyl_operator(m, z) - (z - m.lambda0) * m.gram * gl.adjoint() * gz) <= 1e-10);
  }
}

TEST_CASE("free resolvent rejects shifts on the spectrum") {
  const AbstractModel d = diagonal_model(0.0);
  CHECK_THROWS_AS(free_resolvent(d, 1.0), SingularShiftError);
  CHECK_THROWS_AS(gamma_field(d, 2.0 + 1e-14), SingularShiftError);
}

TEST_CASE("model validation") {
  AbstractModel d = diagonal_model(0.0);
  d.validate();
  AbstractModel bad = d;
  bad.lambda0 = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.A(0, 1) = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.gram(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.tau(0, 0) = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("extension parameters") {
  std::mt19937_64 rng(5);
  const AbstractModel m = AbstractModel::random(6, 4, rng);
  const ExtensionParams p = ExtensionParams::random(m, 2, rng);
  p.validate(m);
  CHECK(max_abs(p.Pi * p.Pi - p.Pi) <= 1e-14);
  CHECK(range_basis(p.Pi).cols() == 2);
  ExtensionParams bad = p;
  bad.Theta = random_complex(4, 4, rng);
  CHECK_THROWS_AS(bad.validate(m), std::invalid_argument);
  bad = p;
  bad.Pi *= 2.0;
  CHECK_THROWS_AS(bad.validate(m), std::invalid_argument);
}

TEST_CASE("zero projection gives the free resolvent") {
  std::mt19937_64 rng(8);
  const AbstractModel m = AbstractModel::random(5, 3, rng);
  const ExtensionParams p = ExtensionParams::random(m, 0, rng);
  const cplx z(0.3, 0.9);
  CHECK(max_abs(krein_resolvent_matrix(m, p, z) - free_resolvent(m, z)) == 0.0);
}

TEST_CASE("resolvent identity and adjoint symmetry on a fixed model") {
  std::mt19937_64 rng(10);
  const AbstractModel m = AbstractModel::random(10, 5, rng);
  const ExtensionParams p = ExtensionParams::random(m, 3, rng);
  const cplx z(1.0, 2.0), w(-3.0, 1.0);
  const CMat rz = krein_resolvent_matrix(m, p, z), rw = krein_resolvent_matrix(m, p, w);
  CHECK(max_abs(rz - rw - (w - z) * rz * rw) <= 1e-11);
  CHECK(max_abs(krein_resolvent_matrix(m, p, std::conj(z)) - rz.adjoint()) <= 1e-11);
}

TEST_CASE("resolvent algebra on random models") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 12);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.3, 3.0);
  double ident = 0, adj = 0, range = 0;
  for (int k = 0; k < 60; ++k) {
    const int dH = dim(rng);
    const int dh = std::uniform_int_distribution<int>(1, dH)(rng);
    const int rank = std::uniform_int_distribution<int>(1, dh)(rng);
    const AbstractModel m = AbstractModel::random(dH, dh, rng);
    const ExtensionParams p = ExtensionParams::random(m, rank, rng);
    const cplx z(re(rng), im(rng)), w(re(rng), -im(rng));
    const CMat rz = krein_resolvent_matrix(m, p, z), rw = krein_resolvent_matrix(m, p, w);
    ident = std::max(ident, max_abs(rz - rw - (w - z) * rz * rw));
    adj = std::max(adj, max_abs(krein_resolvent_matrix(m, p, std::conj(z)) - rz.adjoint()));

    // u = R(z) f splits as u0 + G phi with the projected trace of u0 equal to Theta phi.
    const CVec f = random_complex(dH, 1, rng);
    const CVec phi = krein_density(m, p, z, f);
    const CVec u = rz * f;
    const CVec u0 = u - gamma_field(m, m.lambda0) * phi;
    const CMat q = range_basis(p.Pi);
    range = std::max(range, (q.adjoint() * (m.tau * u0 - p.Theta * phi)).cwiseAbs().maxCoeff());
  }
  CHECK(ident <= 1e-11);
  CHECK(adj <= 1e-11);
  CHECK(range <= 1e-10);
}

TEST_CASE("singular block at an eigenvalue of the extension") {
  // With Theta = 0 and Pi = Id the extension's eigenvalues are the zeros of
  // the scalar M_z, which increases between poles: a root is a - to + change.
  std::mt19937_64 rng(41);
  const AbstractModel m = AbstractModel::random(4, 1, rng);
  ExtensionParams p;
  p.Pi = CMat::Identity(1, 1);
  p.Theta = CMat::Zero(1, 1);
  auto f = [&](double x) { return weyl_operator(m, x)(0, 0).real(); };
  double a = m.lambda0 - 20.0, b = m.lambda0 - 0.5;
  double lo = 0, hi = 0;
  bool found = false;
  const int n = 4000;
  for (int i = 0; i < n && !found; ++i) {
    const double x0 = a + (b - a) * i / n, x1 = a + (b - a) * (i + 1) / n;
    const double f0 = f(x0), f1 = f(x1);
    if (f0 < 0.0 && f1 > 0.0) {
      lo = x0;
      hi = x1;
      found = true;
    }
  }
  REQUIRE(found);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
  }
  CHECK_THROWS_AS(krein_resolvent_matrix(m, p, 0.5 * (lo + hi)), BlockSingularError);
}

TEST_CASE("form compression") {
  CMat t = CMat::Zero(5, 5);
  for (int i = 0; i < 5; ++i) t(i, i) = i + 1.0;
  CMat basis = CMat::Zero(5, 2);
  basis(0, 0) = basis(1, 0) = 1.0 / std::sqrt(2.0);
  basis(2, 1) = 1.0;
  const CMat c = compress_form_in_basis(t, basis);
  CHECK(std::abs(c(0, 0) - 1.5) < 1e-15);
  CHECK(std::abs(c(1, 1) - 3.0) < 1e-15);
  CHECK(std::abs(c(0, 1)) < 1e-15);
  const RVec ev = Eigen::SelfAdjointEigenSolver<CMat>(compress_form(t, basis * basis.adjoint())).eigenvalues();
  CHECK(std::abs(ev(0) - 1.5) < 1e-14);
  CHECK(std::abs(ev(1) - 3.0) < 1e-14);
  CHECK(max_abs(compress_form_in_basis(t, CMat::Identity(5, 5)) - t) == 0.0);

  std::mt19937_64 rng(77);
  for (int k = 0; k < 10; ++k) {
    const CMat h = random_hermitian(8, rng);
    const CMat pi = random_projection(8, 3, rng);
    const CMat q = range_basis(pi);
    const CMat comp = compress_form(h, pi);
    const RVec lh = Eigen::SelfAdjointEigenSolver<CMat>(h).eigenvalues();
    const RVec lc = Eigen::SelfAdjointEigenSolver<CMat>(comp).eigenvalues();
    for (int i = 0; i < 3; ++i) {
      CHECK(lc(i) >= lh(i) - 1e-12);
      CHECK(lc(i) <= lh(i + 5) + 1e-12);
    }
    const CVec c = random_complex(3, 1, rng);
    const CVec x = q * c;
    CHECK(std::abs(c.dot(comp * c) - x.dot(h * x)) <= 1e-13 * std::max(1.0, std::abs(x.dot(h * x))));
  }
}
