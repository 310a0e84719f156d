#include "krein/boundary_conditions.hpp"

#include <cmath>
#include <cstdio>
#include <regex>

namespace krein {

const char* family_name(Family f) {
  switch (f) {
    case Family::Dirichlet: return "dirichlet";
    case Family::Neumann: return "neumann";
    case Family::Robin: return "robin";
    case Family::Delta: return "delta";
    case Family::DeltaPrime: return "delta_prime";
  }
  return "?";
}

double Coefficient::operator()(double t) const {
  switch (shape) {
    case Shape::Constant: return c0;
    case Shape::Cosine: return c0 + c1 * std::cos(m * t);
    case Shape::Sine: return c0 + c1 * std::sin(m * t);
  }
  return c0;
}

RVec Coefficient::sample(const BoundaryGrid& grid) const {
  RVec v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v(j) = (*this)(grid.t(j));
  return v;
}

Coefficient Coefficient::parse(const std::string& text) {
  static const std::string num = R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)";
  static const std::regex constant_re("^\\s*(" + num + ")\\s*$");
  static const std::regex trig_re("^\\s*(" + num + ")\\s*([-+])\\s*(" + num +
                                  ")\\s*\\*\\s*(cos|sin)\\s*\\(\\s*(\\d+)\\s*\\*\\s*t\\s*\\)\\s*$");
  std::smatch m;
  if (std::regex_match(text, m, constant_re)) return constant(std::stod(m[1].str()));
  if (std::regex_match(text, m, trig_re)) {
    Coefficient c;
    c.shape = m[4].str() == "cos" ? Shape::Cosine : Shape::Sine;
    c.c0 = std::stod(m[1].str());
    c.c1 = std::stod(m[3].str()) * (m[2].str() == "-" ? -1.0 : 1.0);
    c.m = std::stoi(m[5].str());
    return c;
  }
  throw std::invalid_argument("coefficient expression not recognized: '" + text + "'");
}

std::string Coefficient::to_string() const {
  char buf[128];
  if (shape == Shape::Constant) {
    std::snprintf(buf, sizeof buf, "%.17g", c0);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g + %.17g*%s(%d*t)", c0, c1,
                  shape == Shape::Cosine ? "cos" : "sin", m);
  }
  return buf;
}

void ExtensionSpec::validate(const BoundaryGrid& grid) const {
  if (grid.is_arc != on_arc) {
    throw std::invalid_argument("extension spec region does not match the grid");
  }
  switch (family) {
    case Family::Robin: {
      const RVec jump = b_plus.sample(grid) - b_minus.sample(grid);
      if (jump.cwiseAbs().minCoeff() < 1e-8) {
        throw DegeneracyError("robin: b_plus - b_minus vanishes at a node");
      }
      if (on_arc && jump.maxCoeff() >= 0.0) {
        throw DegeneracyError("robin on an arc: b_plus - b_minus must be negative");
      }
      break;
    }
    case Family::Delta:
      if (alpha.sample(grid).cwiseAbs().minCoeff() < 1e-8) {
        throw DegeneracyError("delta: |alpha| below 1e-8 at a node");
      }
      break;
    case Family::DeltaPrime:
      if (beta.sample(grid).cwiseAbs().minCoeff() < 1e-8) {
        throw DegeneracyError("delta_prime: |beta| below 1e-8 at a node");
      }
      break;
    default:
      break;
  }
}

int selector_width(Selector sel) { return sel == Selector::Both ? 2 : 1; }

KernelConfig reference_config(const ExtensionSpec& spec) {
  return KernelConfig::from_z(cplx(spec.lambda0, 0.0), spec.V0);
}

CMat select_components(const CMat& full, Selector sel, int n) {
  switch (sel) {
    case Selector::First: return full.block(0, 0, n, n);
    case Selector::Second: return full.block(n, n, n, n);
    case Selector::Both: return full;
  }
  return full;
}

CMat robin_parameter_matrix(const RVec& b_plus, const RVec& b_minus) {
  const int n = static_cast<int>(b_plus.size());
  const RVec jump = b_plus - b_minus;
  const RVec mean = 0.5 * (b_plus + b_minus);
  CMat B = CMat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    B(j, j) = -1.0 / jump(j);
    B(j, n + j) = -mean(j) / jump(j);
    B(n + j, j) = -mean(j) / jump(j);
    B(n + j, n + j) = -b_plus(j) * b_minus(j) / jump(j);
  }
  return B;
}

namespace {

Selector family_selector(Family f) {
  switch (f) {
    case Family::Dirichlet:
    case Family::Delta: return Selector::First;
    case Family::Neumann:
    case Family::DeltaPrime: return Selector::Second;
    case Family::Robin: return Selector::Both;
  }
  return Selector::First;
}

// B_Theta of the plain-operator form, on the selected components.
CMat parameter_matrix(const ExtensionSpec& spec, const BoundaryGrid& grid) {
  const int n = grid.size();
  switch (spec.family) {
    case Family::Dirichlet:
    case Family::Neumann: return CMat::Zero(n, n);
    case Family::Robin: return robin_parameter_matrix(spec.b_plus.sample(grid), spec.b_minus.sample(grid));
    case Family::Delta: return (-spec.alpha.sample(grid).cwiseInverse()).cast<cplx>().asDiagonal();
    case Family::DeltaPrime: return spec.beta.sample(grid).cwiseInverse().cast<cplx>().asDiagonal();
  }
  return {};
}

CMat selected_m_circ(const BoundaryGrid& grid, const KernelConfig& cfg, Selector sel) {
  switch (sel) {
    case Selector::First: return assemble(LayerTag::g0SL, grid, cfg).entries;
    case Selector::Second: return assemble(LayerTag::g1DL, grid, cfg).entries;
    case Selector::Both: return m_circ_block(grid, cfg).entries;
  }
  return {};
}

}  // namespace

ThetaBlock build_theta(const ExtensionSpec& spec, const BoundaryGrid& grid) {
  spec.validate(grid);
  ThetaBlock out;
  out.selector = family_selector(spec.family);
  out.theta_matrix = parameter_matrix(spec, grid) -
                     selected_m_circ(grid, reference_config(spec), out.selector);
  return out;
}

BirmanBlock birman_block(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z) {
  return birman_block(spec, grid, KernelConfig::from_z(z, spec.V0));
}

BirmanBlock birman_block(const ExtensionSpec& spec, const BoundaryGrid& grid,
                         const KernelConfig& cfg) {
  spec.validate(grid);
  BirmanBlock out;
  out.selector = family_selector(spec.family);
  const int n = grid.size();
  out.trace_scale = RVec::Ones(n * selector_width(out.selector));
  const CMat plain = selected_m_circ(grid, cfg, out.selector);
  const bool arc = spec.on_arc;
  switch (spec.family) {
    case Family::Dirichlet:
    case Family::Neumann:
    case Family::Robin:
      out.matrix = plain - parameter_matrix(spec, grid);
      out.sign = -1.0;
      break;
    case Family::Delta: {
      const RVec a = spec.alpha.sample(grid);
      if (arc) {
        out.matrix = CMat::Identity(n, n) + a.cast<cplx>().asDiagonal() * plain;
        out.trace_scale = a;
      } else {
        out.matrix = plain - parameter_matrix(spec, grid);
      }
      out.sign = -1.0;
      break;
    }
    case Family::DeltaPrime: {
      const RVec b = spec.beta.sample(grid);
      if (arc) {
        out.matrix = CMat::Identity(n, n) - b.cast<cplx>().asDiagonal() * plain;
        out.trace_scale = b;
      } else {
        out.matrix = parameter_matrix(spec, grid) - plain;
      }
      out.sign = 1.0;
      break;
    }
  }
  return out;
}

CMat theta_form_block(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z) {
  const ThetaBlock theta = build_theta(spec, grid);
  const WeylBlock w = weyl_block(grid, KernelConfig::from_z(z, spec.V0), reference_config(spec));
  return theta.theta_matrix + select_components(w.entries, theta.selector, grid.size());
}

}  // namespace krein
