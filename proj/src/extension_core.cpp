#include "krein/extension_core.hpp"

#include <cmath>

namespace krein {

namespace {

double hermitian_defect(const CMat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

CMat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(normal(rng), normal(rng));
  return m;
}

CMat random_hermitian(int n, std::mt19937_64& rng) {
  const CMat b = random_complex(n, n, rng);
  return b + b.adjoint();
}

CMat random_projection(int n, int rank, std::mt19937_64& rng) {
  if (rank == 0) return CMat::Zero(n, n);
  const CMat q = random_complex(n, n, rng).householderQr().householderQ();
  const CMat basis = q.leftCols(rank);
  return basis * basis.adjoint();
}

void AbstractModel::validate() const {
  if (A.rows() != A.cols() || A.rows() == 0) throw std::invalid_argument("A must be square");
  if (tau.cols() != A.rows() || tau.rows() == 0) throw std::invalid_argument("tau shape mismatch");
  if (gram.rows() != tau.rows() || gram.cols() != tau.rows()) {
    throw std::invalid_argument("gram shape mismatch");
  }
  if (hermitian_defect(A) > 1e-14 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("A is not Hermitian");
  }
  const Eigen::JacobiSVD<CMat> svd(tau);
  const RVec sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) throw std::invalid_argument("tau is rank deficient");
  if (hermitian_defect(gram) > 1e-14 * std::max(1.0, gram.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("gram is not Hermitian");
  }
  const Eigen::SelfAdjointEigenSolver<CMat> ge(gram);
  if (ge.eigenvalues().minCoeff() <= 0.0) throw std::invalid_argument("gram is not positive definite");
  const Eigen::SelfAdjointEigenSolver<CMat> ae(A, Eigen::EigenvaluesOnly);
  if ((ae.eigenvalues().array() - lambda0).abs().minCoeff() <= 1e-8) {
    throw std::invalid_argument("lambda0 is an eigenvalue of A");
  }
}

AbstractModel AbstractModel::random(int dim_H, int dim_h, std::mt19937_64& rng) {
  if (dim_h > dim_H) throw std::invalid_argument("dim_h must not exceed dim_H");
  AbstractModel m;
  m.A = random_hermitian(dim_H, rng);
  const CMat q = random_complex(dim_H, dim_H, rng).householderQr().householderQ();
  m.tau = q.topRows(dim_h);
  const CMat c = random_complex(dim_h, dim_h, rng);
  m.gram = c * c.adjoint() + 0.1 * CMat::Identity(dim_h, dim_h);
  m.gram = 0.5 * (m.gram + m.gram.adjoint()).eval();
  const Eigen::SelfAdjointEigenSolver<CMat> ae(m.A, Eigen::EigenvaluesOnly);
  m.lambda0 = ae.eigenvalues().maxCoeff() + 1.0;
  return m;
}

void ExtensionParams::validate(const AbstractModel& model) const {
  const int n = model.dim_h();
  if (Pi.rows() != n || Pi.cols() != n || Theta.rows() != n || Theta.cols() != n) {
    throw std::invalid_argument("Pi and Theta must be dim_h x dim_h");
  }
  if ((Pi * Pi - Pi).cwiseAbs().maxCoeff() > 1e-14 || hermitian_defect(Pi) > 1e-14) {
    throw std::invalid_argument("Pi is not an orthogonal projection");
  }
  const CMat q = range_basis(Pi);
  if (q.cols() == 0) return;
  const CMat tt = q.adjoint() * Theta * model.gram * q;
  if (hermitian_defect(tt) > 1e-12 * std::max(1.0, tt.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("Theta * gram is not Hermitian on ran(Pi)");
  }
}

ExtensionParams ExtensionParams::random(const AbstractModel& model, int rank,
                                        std::mt19937_64& rng) {
  const int n = model.dim_h();
  ExtensionParams p;
  p.Pi = random_projection(n, rank, rng);
  p.Pi = 0.5 * (p.Pi + p.Pi.adjoint()).eval();
  p.Theta = random_hermitian(n, rng) * model.gram.inverse();
  return p;
}

CMat free_resolvent(const AbstractModel& model, cplx z) {
  const Eigen::SelfAdjointEigenSolver<CMat> es(model.A);
  const RVec ev = es.eigenvalues();
  const double dist = (ev.cast<cplx>().array() - z).abs().minCoeff();
  if (dist < 1e-12) throw SingularShiftError("free_resolvent: z too close to the spectrum of A");
  CVec d(ev.size());
  for (int i = 0; i < ev.size(); ++i) d(i) = 1.0 / (z - ev(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

CMat gamma_field(const AbstractModel& model, cplx z) {
  return free_resolvent(model, z) * model.tau.adjoint() * model.gram.inverse();
}

CMat weyl_operator(const AbstractModel& model, cplx z) {
  if (z == cplx(model.lambda0)) return CMat::Zero(model.dim_h(), model.dim_h());
  return model.tau * (gamma_field(model, model.lambda0) - gamma_field(model, z));
}

CMat range_basis(const CMat& Pi) {
  const Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Pi + Pi.adjoint()));
  std::vector<int> keep;
  for (int i = static_cast<int>(Pi.rows()) - 1; i >= 0; --i) {
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  }
  CMat q(Pi.rows(), keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) q.col(k) = es.eigenvectors().col(keep[k]);
  return q;
}

CMat krein_block(const AbstractModel& model, const ExtensionParams& params, cplx z) {
  const CMat q = range_basis(params.Pi);
  const CMat gq = model.gram * q;
  return q.adjoint() * (params.Theta + weyl_operator(model, z)) * gq;
}

namespace {

// Solves the Krein block against the projected trace data tau R_z f, column-wise.
CMat block_solve(const AbstractModel& model, const ExtensionParams& params, cplx z,
                 const CMat& trace_data) {
  const CMat q = range_basis(params.Pi);
  if (q.cols() == 0) return CMat::Zero(model.dim_h(), trace_data.cols());
  const CMat blk = krein_block(model, params, z);
  const RVec sv = Eigen::JacobiSVD<CMat>(blk).singularValues();
  // Relative to the terms of the block, so cancellation in a 1x1 block counts.
  const CMat gq = model.gram * q;
  double scale = sv(0);
  for (const CMat& term : {CMat(q.adjoint() * params.Theta * gq),
                           CMat(q.adjoint() * model.tau * gamma_field(model, model.lambda0) * gq),
                           CMat(q.adjoint() * model.tau * gamma_field(model, z) * gq)}) {
    scale = std::max(scale, Eigen::JacobiSVD<CMat>(term).singularValues()(0));
  }
  if (sv(sv.size() - 1) <= kSingularRelTol * scale) {
    throw BlockSingularError("krein block is numerically singular");
  }
  const CMat coeffs = blk.partialPivLu().solve(q.adjoint() * trace_data);
  return model.gram * q * coeffs;
}

}  // namespace

CMat krein_resolvent_matrix(const AbstractModel& model, const ExtensionParams& params, cplx z) {
  const CMat rz = free_resolvent(model, z);
  const CMat phi = block_solve(model, params, z, model.tau * rz);
  return rz + gamma_field(model, z) * phi;
}

CVec krein_density(const AbstractModel& model, const ExtensionParams& params, cplx z,
                   const CVec& f) {
  const CMat rz = free_resolvent(model, z);
  return block_solve(model, params, z, model.tau * rz * f).col(0);
}

CMat compress_form_in_basis(const CMat& theta_tilde, const CMat& basis) {
  return basis.adjoint() * theta_tilde * basis;
}

CMat compress_form(const CMat& theta_tilde, const CMat& Pi) {
  return compress_form_in_basis(theta_tilde, range_basis(Pi));
}

}  // namespace krein
