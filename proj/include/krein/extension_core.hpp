#pragma once

#include <cstdint>
#include <random>

#include "krein/types.hpp"

namespace krein {

// Finite-dimensional model of a self-adjoint operator A on H = C^dim_H with a
// trace map tau: H -> h = C^dim_h.
//
// Coordinates: H and h carry the standard inner products. The dual h' shares
// the coordinates of h and is paired with h by <phi, v> = phi^* gram^{-1} v,
// so gram is the matrix of the duality mapping J: h -> h'.
struct AbstractModel {
  CMat A;
  CMat tau;
  CMat gram;
  double lambda0 = 0.0;

  int dim_H() const { return static_cast<int>(A.rows()); }
  int dim_h() const { return static_cast<int>(tau.rows()); }

  // Throws std::invalid_argument when an invariant fails.
  void validate() const;

  // Hermitian A = B + B^*, tau from the first rows of a unitary QR factor,
  // gram = C C^* + 0.1 I, lambda0 one unit above the spectrum.
  static AbstractModel random(int dim_H, int dim_h, std::mt19937_64& rng);
};

// (Pi, Theta): orthogonal projection on h and an operator ran(Pi') -> ran(Pi)
// with Theta * gram Hermitian on ran(Pi).
struct ExtensionParams {
  CMat Pi;
  CMat Theta;

  void validate(const AbstractModel& model) const;

  static ExtensionParams random(const AbstractModel& model, int rank, std::mt19937_64& rng);
};

CMat random_complex(int rows, int cols, std::mt19937_64& rng);
CMat random_hermitian(int n, std::mt19937_64& rng);
// Orthogonal projection onto a random subspace of the given rank.
CMat random_projection(int n, int rank, std::mt19937_64& rng);

// (-A + z)^{-1}; throws SingularShiftError when its norm exceeds 1e12.
CMat free_resolvent(const AbstractModel& model, cplx z);

// G_z = (tau R_{conj z})' : h' -> H.
CMat gamma_field(const AbstractModel& model, cplx z);

// M_z = tau (G_{lambda0} - G_z) : h' -> h.
CMat weyl_operator(const AbstractModel& model, cplx z);

// Orthonormal basis of ran(Pi), ordered by the eigen-decomposition of Pi.
CMat range_basis(const CMat& Pi);

// Matrix of Theta + Pi M_z Pi' from ran(Pi') (basis gram*Q) to ran(Pi) (basis Q).
CMat krein_block(const AbstractModel& model, const ExtensionParams& params, cplx z);

// R_z + G_z Pi' (Theta + Pi M_z Pi')^{-1} Pi tau R_z.
// Throws BlockSingularError when the block is numerically singular.
CMat krein_resolvent_matrix(const AbstractModel& model, const ExtensionParams& params, cplx z);

// Boundary density phi in ran(Pi') produced by the resolvent for source f.
CVec krein_density(const AbstractModel& model, const ExtensionParams& params, cplx z,
                   const CVec& f);

// Compression of a Hermitian form to ran(Pi), in the basis range_basis(Pi) or
// in a supplied orthonormal basis.
CMat compress_form(const CMat& theta_tilde, const CMat& Pi);
CMat compress_form_in_basis(const CMat& theta_tilde, const CMat& basis);

}  // namespace krein
