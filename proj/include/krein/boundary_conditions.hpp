#pragma once

#include <string>

#include "krein/geometry.hpp"
#include "krein/kernels.hpp"
#include "krein/layer_ops.hpp"
#include "krein/types.hpp"

namespace krein {

enum class Family { Dirichlet, Neumann, Robin, Delta, DeltaPrime };

const char* family_name(Family f);

// Smooth coefficient c0 + c1*cos(m t) or c0 + c1*sin(m t) in the curve
// parameter t; Constant ignores c1 and m.
struct Coefficient {
  enum class Shape { Constant, Cosine, Sine };
  Shape shape = Shape::Constant;
  double c0 = 0.0;
  double c1 = 0.0;
  int m = 0;

  static Coefficient constant(double c) { return {Shape::Constant, c, 0.0, 0}; }
  double operator()(double t) const;
  RVec sample(const BoundaryGrid& grid) const;

  // Accepts "const" forms such as "2.5", and "c0 + c1*cos(m*t)" or
  // "c0 + c1*sin(m*t)"; throws std::invalid_argument otherwise.
  static Coefficient parse(const std::string& text);
  std::string to_string() const;
};

struct ExtensionSpec {
  Family family = Family::Dirichlet;
  Coefficient b_plus = Coefficient::constant(1.0);
  Coefficient b_minus = Coefficient::constant(-1.0);
  Coefficient alpha = Coefficient::constant(1.0);
  Coefficient beta = Coefficient::constant(1.0);
  bool on_arc = false;
  ArcSpec arc;
  double V0 = 0.0;
  double lambda0 = 1.0;

  // Throws DegeneracyError when a coefficient invariant fails at a node.
  void validate(const BoundaryGrid& grid) const;
};

// Which trace components the boundary condition acts on.
enum class Selector { First, Second, Both };

int selector_width(Selector sel);

// Theta of the parametrization: the Krein block equals
// theta_matrix + Pi M_z Pi' with M_z the difference block at (lambda0, z).
struct ThetaBlock {
  Selector selector = Selector::First;
  CMat theta_matrix;
};

// The matrix inverted by a family's resolvent formula,
//   R = R_z + sign * G_sel  matrix^{-1}  diag(trace_scale)  tau_sel R_z.
struct BirmanBlock {
  Selector selector = Selector::First;
  CMat matrix;
  double sign = -1.0;
  RVec trace_scale;
};

KernelConfig reference_config(const ExtensionSpec& spec);

ThetaBlock build_theta(const ExtensionSpec& spec, const BoundaryGrid& grid);

BirmanBlock birman_block(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z);
BirmanBlock birman_block(const ExtensionSpec& spec, const BoundaryGrid& grid,
                         const KernelConfig& cfg);

// Theta + Pi M_z Pi' assembled from build_theta and weyl_block.
CMat theta_form_block(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z);

// Sub-block of a 2N x 2N trace-space matrix on the selected components.
CMat select_components(const CMat& full, Selector sel, int n);

// Robin parameter matrix B_R = -(1/[b]) [[1, <b>], [<b>, b+ b-]] with
// node-diagonal blocks.
CMat robin_parameter_matrix(const RVec& b_plus, const RVec& b_minus);

}  // namespace krein
