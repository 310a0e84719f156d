#pragma once

#include <vector>

#include "krein/geometry.hpp"
#include "krein/types.hpp"

namespace krein {

// Fourier representative of an element of H^s on a closed curve.
//
// coeffs(k) is the coefficient of mode n = k - N against the orthonormal
// arc-length basis e^{i n theta} / sqrt(2 pi R).
struct TraceVector {
  CVec coeffs;
  double sobolev_order = 0.0;
  double radius = 1.0;

  int band() const { return static_cast<int>((coeffs.size() - 1) / 2); }
  cplx& mode(int n) { return coeffs(n + band()); }
  cplx mode(int n) const { return coeffs(n + band()); }

  static TraceVector zeros(int band, double order, double radius);
  static TraceVector single_mode(int band, int n, double order, double radius);
};

// Eigenvalue n^2/R^2 of the boundary Laplacian for mode n.
double boundary_laplace_eigenvalue(int n, double radius);

TraceVector lambda_power(const TraceVector& v, double r);

double sobolev_norm(const TraceVector& v, double s);

// Sum conj(f_n) g_n; requires order(f) = -order(g), equal band and radius.
cplx duality_pairing(const TraceVector& f, const TraceVector& g);

struct AliasReport {
  double tail_fraction = 0.0;
  bool warning = false;
};

// Nodal samples on a uniform closed-curve grid to modes |n| <= band, and back.
// Non-circular curves use the uniform-parameter basis with R = length / (2 pi).
TraceVector grid_to_modes(const BoundaryGrid& grid, const CVec& samples, int band,
                          double order = 0.0, AliasReport* report = nullptr);
CVec modes_to_grid(const BoundaryGrid& grid, const TraceVector& v);

// Node indices of a discretization split into an arc and its complement.
struct ArcIndexSet {
  std::vector<int> sigma;
  std::vector<int> complement;

  int total() const { return static_cast<int>(sigma.size() + complement.size()); }
  void validate() const;
};

// Arc first, complement second.
ArcIndexSet contiguous_arc_indices(int n_sigma, int n_complement);

CVec arc_restrict(const CVec& samples, const ArcIndexSet& arc);
CVec arc_include(const CVec& sigma_samples, const ArcIndexSet& arc);

// Row restriction and column inclusion of a full-curve matrix.
CMat arc_compress(const CMat& full, const ArcIndexSet& arc);

// Weighted pairing sum conj(f_j) g_j w_j.
cplx weighted_pairing(const CVec& f, const CVec& g, const RVec& w);

}  // namespace krein
