#pragma once

#include <vector>

#include "krein/geometry.hpp"
#include "krein/kernels.hpp"
#include "krein/types.hpp"

namespace krein {

enum class Side { Plus, Minus };

// Boundary operators. "Plus" is the exterior side, the normal points outward.
// The averaged traces are the principal-value parts K' and K.
enum class LayerTag {
  g0SL,
  g1SL_plus,
  g1SL_minus,
  g1SL_avg,
  g0DL_plus,
  g0DL_minus,
  g0DL_avg,
  g1DL,
};

const char* layer_tag_name(LayerTag tag);

// Dense Nystrom matrix acting on nodal density values.
struct LayerMatrix {
  CMat entries;
  LayerTag tag = LayerTag::g0SL;
  KernelConfig cfg;
};

LayerMatrix assemble_g0SL(const BoundaryGrid& grid, const KernelConfig& cfg);
LayerMatrix assemble_g1SL(const BoundaryGrid& grid, const KernelConfig& cfg, Side side);
LayerMatrix assemble_g0DL(const BoundaryGrid& grid, const KernelConfig& cfg, Side side);
LayerMatrix assemble_g1DL(const BoundaryGrid& grid, const KernelConfig& cfg);

// Principal-value parts.
LayerMatrix assemble_K(const BoundaryGrid& grid, const KernelConfig& cfg);
LayerMatrix assemble_Kprime(const BoundaryGrid& grid, const KernelConfig& cfg);

LayerMatrix assemble(LayerTag tag, const BoundaryGrid& grid, const KernelConfig& cfg);

// Several panels forming one curve, e.g. an arc and its complement. Self
// blocks use the panel's singular quadrature, cross blocks plain quadrature.
CMat assemble_panels(LayerTag tag, const std::vector<BoundaryGrid>& panels,
                     const KernelConfig& cfg);

// Symmetrizing similarity W^{1/2} A W^{-1/2} with W the quadrature weights.
CMat weighted_symmetrization(const CMat& a, const RVec& weights);

// Potentials at points off the curve; the points are the columns of `points`.
// Throws ProximityError for points within 3 mean node spacings of the nodes.
CVec eval_SL_field(const BoundaryGrid& grid, const KernelConfig& cfg, const CVec& density,
                   const Eigen::Matrix2Xd& points);
CVec eval_DL_field(const BoundaryGrid& grid, const KernelConfig& cfg, const CVec& density,
                   const Eigen::Matrix2Xd& points);

// 2N x 2N block operators ordered (g0SL, g0DL; g1SL, g1DL) with averaged
// traces in the off-diagonal positions.
struct WeylBlock {
  CMat entries;
  double lambda0 = 1.0;
  int n = 0;

  CMat block(int row, int col) const { return entries.block(row * n, col * n, n, n); }
};

// Differences at the reference point and at z.
WeylBlock weyl_block(const BoundaryGrid& grid, const KernelConfig& cfg_z,
                     const KernelConfig& cfg_lambda0);
// Plain operators at z.
WeylBlock m_circ_block(const BoundaryGrid& grid, const KernelConfig& cfg_z);

// Spectral differentiation matrix for uniform periodic nodes.
RMat periodic_derivative_matrix(int n);

}  // namespace krein
