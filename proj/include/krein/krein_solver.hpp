#pragma once

#include <vector>

#include "krein/boundary_conditions.hpp"
#include "krein/geometry.hpp"
#include "krein/kernels.hpp"
#include "krein/layer_ops.hpp"

namespace krein {

// Boundary densities of the correction term: `single` feeds the single layer,
// `dbl` the double layer. Components outside the family's selector are zero.
struct CorrectionDensity {
  CVec single;
  CVec dbl;
};

// Factorized resolvent of one extension at fixed z. Immutable after
// construction and safe for concurrent evaluation.
class PerturbedResolvent {
 public:
  PerturbedResolvent(const ExtensionSpec& spec, const BoundaryGrid& grid, const KernelConfig& cfg);
  PerturbedResolvent(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z);

  const KernelConfig& config() const { return cfg_; }
  const BoundaryGrid& grid() const { return grid_; }
  double condition_number() const { return condition_; }

  // Densities for the nodal traces (gamma0 u, gamma1 u) of the free field.
  CorrectionDensity solve(const CVec& trace0, const CVec& trace1) const;

  // Densities for the free field of a point source at y.
  CorrectionDensity source_density(const Point& y) const;

  // Correction field at x for given densities.
  cplx correction_at(const CorrectionDensity& d, const Point& x) const;

  // G(x, y) = g_z(x, y) + correction.
  cplx green(const Point& x, const Point& y) const;
  cplx correction(const Point& x, const Point& y) const;

  // Far-field amplitude F with u ~ exp(-kappa r) r^{-1/2} F(xhat).
  cplx far_field(const CorrectionDensity& d, const Point& direction) const;

 private:
  void check_point(const Point& x) const;

  ExtensionSpec spec_;
  BoundaryGrid grid_;
  KernelConfig cfg_;
  BirmanBlock block_;
  Eigen::PartialPivLU<CMat> lu_;
  double condition_ = 0.0;
  double guard_ = 0.0;
};

cplx perturbed_green(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z, const Point& x,
                     const Point& y);

// Inverses of the single-layer and hypersingular matrices.
CMat dtn_difference(const BoundaryGrid& grid, const KernelConfig& cfg);
CMat ntd_difference(const BoundaryGrid& grid, const KernelConfig& cfg);

// Scan coordinate for the spectral search. With s the scan variable:
//   Decaying:    kappa = sqrt(s),     z = s - V0
//   Oscillatory: kappa = i sqrt(s),   z = -s - V0
// Interior Dirichlet eigenvalues j^2 of the disk appear on the oscillatory
// branch at s = j^2; bound states of attractive interactions on the decaying
// branch at s = kappa^2.
enum class ScanBranch { Decaying, Oscillatory };

KernelConfig scan_config(ScanBranch branch, double s, double V0);

struct SpectralHit {
  double z_star = 0.0;  // scan coordinate s
  cplx z;               // spectral parameter of the resolvent
  cplx kappa;
  double residual = 0.0;  // smallest singular value at z_star
  double block_norm = 0.0;
  int multiplicity = 0;
};

struct ScanSample {
  double s;
  double sigma_min;
};

struct SpectrumResult {
  std::vector<ScanSample> scan;
  std::vector<SpectralHit> hits;
};

SpectrumResult point_spectrum(const ExtensionSpec& spec, const BoundaryGrid& grid,
                              ScanBranch branch, double s_lo, double s_hi, int n_scan);

double smallest_singular_value(const CMat& m);

// Null density of the block at a hit and the unit-L2 eigenfunction sampled at
// the given points (unit weight per point).
CVec eigenfunction_samples(const ExtensionSpec& spec, const BoundaryGrid& grid,
                           ScanBranch branch, const SpectralHit& hit,
                           const Eigen::Matrix2Xd& points);

struct ScatterResult {
  std::vector<double> angles;
  CVec far_field;
  CVec near_field;
  std::vector<double> epsilons;
  std::vector<CVec> far_field_eps;
  std::vector<double> eps_errors;  // relative L2 distance to the on-branch far field
  double condition = 0.0;
  bool trapped_mode_warning = false;
};

// Scattering of exp(i k d.x) with z = -k^2 approached from the upper half-plane.
ScatterResult scattered_field(const ExtensionSpec& spec, const BoundaryGrid& grid, double k,
                              const Point& direction, const std::vector<double>& angles,
                              const Eigen::Matrix2Xd& near_points,
                              const std::vector<double>& epsilon_path);

struct Box {
  double x0, x1, y0, y1;
};

struct SvdDecay {
  RVec singular_values;
  double slope = 0.0;
  int fit_lo = 0;
  int fit_hi = 0;
  int n_points = 0;
};

// Singular values of the weighted correction kernel sampled on a square grid
// of about n_samples points in the box (points near the curve are dropped),
// and the log-log slope over the middle decade of indices.
SvdDecay resolvent_difference_svd(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z,
                                  const Box& box, int n_samples);

double fit_decay_slope(const RVec& singular_values, int lo, int hi);

}  // namespace krein
