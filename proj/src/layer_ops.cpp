#include "krein/layer_ops.hpp"

#include <cmath>

#include "krein/parallel.hpp"

namespace krein {

const char* layer_tag_name(LayerTag tag) {
  switch (tag) {
    case LayerTag::g0SL: return "g0SL";
    case LayerTag::g1SL_plus: return "g1SL_plus";
    case LayerTag::g1SL_minus: return "g1SL_minus";
    case LayerTag::g1SL_avg: return "g1SL_avg";
    case LayerTag::g0DL_plus: return "g0DL_plus";
    case LayerTag::g0DL_minus: return "g0DL_minus";
    case LayerTag::g0DL_avg: return "g0DL_avg";
    case LayerTag::g1DL: return "g1DL";
  }
  return "?";
}

namespace {

enum class Kernel { Single, Double, DoubleX };

constexpr double kSplitReach = 2.0;

// Periodic log-quadrature weights for 2n equispaced nodes, indexed by the
// node offset k = 0..2n-1.
RVec log_weights(int n) {
  RVec w(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    double s = 0.0;
    for (int m = 1; m < n; ++m) s += std::cos(m * k * kPi / n) / m;
    w(k) = -2.0 * kPi / n * s - kPi / (double(n) * n) * std::cos(k * kPi);
  }
  return w;
}

struct Split {
  cplx full;
  cplx log_coeff;
};

// K_n(w) and I_n(w) for the radial part of a kernel, n = 0 or 1.
struct Radial {
  cplx k;
  cplx i;
};

int radial_order(Kernel kind) { return kind == Kernel::Single ? 0 : 1; }

// Smooth radial cutoff applied to the log-split coefficient. For kernels that
// grow like exp(Re(kappa) r) the split is kept local; the remainder stays
// smooth because the cutoff is identically one near r = 0.
double split_cutoff(const KernelConfig& cfg, double r) {
  const double growth = cfg.kappa.real();
  if (growth * r <= kSplitReach) return 1.0;
  const double a = kSplitReach / growth, b = 3.0 * a;
  if (r >= b) return 0.0;
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double x = (r - a) / (b - a);
  return f(1.0 - x) / (f(1.0 - x) + f(x));
}

Radial radial_values(Kernel kind, cplx w) {
  const int n = radial_order(kind);
  return {n == 0 ? bessel_k0(w) : bessel_k1(w), bessel_in(n, w)};
}

// Kernel value and the coefficient multiplying ln(r^2) / 2 in its expansion.
Split split_from_radial(Kernel kind, const KernelConfig& cfg, const Point& x, const Point& y,
                        const Point& nu_x, const Point& nu_y, const Radial& rad) {
  const Point d = x - y;
  const double r = d.norm();
  switch (kind) {
    case Kernel::Single:
      return {rad.k / (2.0 * kPi), -rad.i / (4.0 * kPi)};
    case Kernel::Double: {
      const double c = d.dot(nu_y) / r;
      return {cfg.kappa / (2.0 * kPi) * rad.k * c, cfg.kappa / (4.0 * kPi) * rad.i * c};
    }
    case Kernel::DoubleX: {
      const double c = d.dot(nu_x) / r;
      return {-cfg.kappa / (2.0 * kPi) * rad.k * c, -cfg.kappa / (4.0 * kPi) * rad.i * c};
    }
  }
  return {};
}

// Radial Bessel values for all node pairs of a grid, evaluated once per
// unordered pair.
struct RadialTable {
  CMat k, i;
};

RadialTable radial_table(Kernel kind, const BoundaryGrid& g, const KernelConfig& cfg) {
  const int N = g.size();
  RadialTable tab{CMat::Zero(N, N), CMat::Zero(N, N)};
  parallel_for(N, [&](int i) {
    for (int j = i + 1; j < N; ++j) {
      const Radial r = radial_values(kind, cfg.kappa * (g.node(i) - g.node(j)).norm());
      tab.k(i, j) = r.k;
      tab.i(i, j) = r.i;
    }
  });
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) {
      tab.k(i, j) = tab.k(j, i);
      tab.i(i, j) = tab.i(j, i);
    }
  return tab;
}

cplx plain_kernel(Kernel kind, const KernelConfig& cfg, const Point& x, const Point& y,
                  const Point& nu_x, const Point& nu_y) {
  const cplx w = cfg.kappa * (x - y).norm();
  const Radial rad{radial_order(kind) == 0 ? bessel_k0(w) : bessel_k1(w), cplx(0.0)};
  return split_from_radial(kind, cfg, x, y, nu_x, nu_y, rad).full;
}

// Second conormal derivative nu_x . grad_x nu_y . grad_y g for separated points.
cplx hypersingular_kernel(const KernelConfig& cfg, const Point& x, const Point& y,
                          const Point& nu_x, const Point& nu_y) {
  const Point d = x - y;
  const double r = d.norm();
  const cplx w = cfg.kappa * r;
  const cplx k0 = bessel_k0(w), k1 = bessel_k1(w);
  return cfg.kappa / (2.0 * kPi) *
         (k1 * nu_x.dot(nu_y) / r - (w * k0 + 2.0 * k1) * d.dot(nu_x) * d.dot(nu_y) / (r * r * r));
}

CMat closed_weakly_singular(Kernel kind, const BoundaryGrid& g, const KernelConfig& cfg) {
  const int N = g.size();
  const int n = N / 2;
  const RVec R = log_weights(n);
  const RadialTable tab = radial_table(kind, g, cfg);
  CMat A(N, N);
  parallel_for(N, [&](int i) {
    const Point xi = g.node(i), ni = g.nu(i);
    for (int j = 0; j < N; ++j) {
      const double sp = g.speed(j);
      cplx l1, l2;
      if (i == j) {
        if (kind == Kernel::Single) {
          l1 = -sp / (4.0 * kPi);
          l2 = sp * (-(std::log(0.5 * cfg.kappa) + kEulerGamma) / (2.0 * kPi) -
                     std::log(sp * sp) / (4.0 * kPi));
        } else {
          l1 = 0.0;
          l2 = -g.curvature(i) * sp / (4.0 * kPi);
        }
      } else {
        const Split s = split_from_radial(kind, cfg, xi, g.node(j), ni, g.nu(j),
                                          {tab.k(i, j), tab.i(i, j)});
        const double st = std::sin(0.5 * (g.t(i) - g.t(j)));
        l1 = s.log_coeff * sp * split_cutoff(cfg, (xi - g.node(j)).norm());
        l2 = s.full * sp - l1 * std::log(4.0 * st * st);
      }
      const int k = ((i - j) % N + N) % N;
      A(i, j) = R(k) * l1 + kPi / n * l2;
    }
  });
  return A;
}

// Arc operator acting on psi = density * jacobian, in the cosine angle.
CMat arc_weakly_singular_psi(Kernel kind, const BoundaryGrid& g, const KernelConfig& cfg) {
  const int M = g.size();
  const RVec R = log_weights(M);
  const double hw = g.arc.half_width();
  const RadialTable tab = radial_table(kind, g, cfg);
  CMat A(M, M);
  parallel_for(M, [&](int i) {
    const Point xi = g.node(i), ni = g.nu(i);
    for (int j = 0; j < M; ++j) {
      cplx l1, l2;
      if (i == j) {
        if (kind == Kernel::Single) {
          l1 = -1.0 / (4.0 * kPi);
          l2 = -(std::log(cfg.kappa * g.speed(i) * hw / 4.0) + kEulerGamma) / (2.0 * kPi);
        } else {
          l1 = 0.0;
          l2 = -g.curvature(i) / (4.0 * kPi);
        }
      } else {
        const Split s = split_from_radial(kind, cfg, xi, g.node(j), ni, g.nu(j),
                                          {tab.k(i, j), tab.i(i, j)});
        const double sm = std::sin(0.5 * (g.theta(i) - g.theta(j)));
        const double sp = std::sin(0.5 * (g.theta(i) + g.theta(j)));
        l1 = s.log_coeff * split_cutoff(cfg, (xi - g.node(j)).norm());
        l2 = s.full - l1 * (std::log(4.0 * sm * sm) + std::log(4.0 * sp * sp));
      }
      const int km = ((i - j) % (2 * M) + 2 * M) % (2 * M);
      const int kp = (i + j + 1) % (2 * M);
      A(i, j) = (R(km) + R(kp)) * l1 + kPi / M * l2;
    }
  });
  return A;
}

CMat weakly_singular(Kernel kind, const BoundaryGrid& g, const KernelConfig& cfg) {
  if (!g.is_arc) return closed_weakly_singular(kind, g, cfg);
  return arc_weakly_singular_psi(kind, g, cfg) * g.jacobian.asDiagonal();
}

// Sine-series derivative on the cosine nodes: nodal values vanishing at the
// arc ends to d/dtheta at the nodes.
RMat sine_derivative(const RVec& theta) {
  const int M = static_cast<int>(theta.size());
  RMat basis(M, M), deriv(M, M);
  for (int j = 0; j < M; ++j)
    for (int k = 1; k <= M; ++k) {
      basis(j, k - 1) = std::sin(k * theta(j));
      deriv(j, k - 1) = k * std::cos(k * theta(j));
    }
  return basis.transpose().partialPivLu().solve(deriv.transpose()).transpose();
}

// Cosine-series derivative on the cosine nodes.
RMat cosine_derivative(const RVec& theta) {
  const int M = static_cast<int>(theta.size());
  RMat basis(M, M), deriv(M, M);
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < M; ++k) {
      basis(j, k) = std::cos(k * theta(j));
      deriv(j, k) = -k * std::sin(k * theta(j));
    }
  return basis.transpose().partialPivLu().solve(deriv.transpose()).transpose();
}

CMat hypersingular(const BoundaryGrid& g, const KernelConfig& cfg) {
  const int N = g.size();
  const cplx k2 = cfg.kappa * cfg.kappa;
  CMat tangential;
  CMat s_nodal;
  if (!g.is_arc) {
    s_nodal = closed_weakly_singular(Kernel::Single, g, cfg);
    const RMat ds = g.speed.cwiseInverse().asDiagonal() * periodic_derivative_matrix(N);
    tangential = ds.cast<cplx>() * s_nodal * ds.cast<cplx>();
  } else {
    const CMat s_psi = arc_weakly_singular_psi(Kernel::Single, g, cfg);
    s_nodal = s_psi * g.jacobian.asDiagonal();
    const RMat left = g.jacobian.cwiseInverse().asDiagonal() * cosine_derivative(g.theta);
    tangential = left.cast<cplx>() * s_psi * sine_derivative(g.theta).cast<cplx>();
  }
  CMat normal_part = CMat::Zero(N, N);
  for (int c = 0; c < 2; ++c) {
    const RVec nc = g.normal.row(c).transpose();
    normal_part += nc.asDiagonal() * s_nodal * nc.asDiagonal();
  }
  return tangential - k2 * normal_part;
}

CMat cross_block(LayerTag tag, const BoundaryGrid& tgt, const BoundaryGrid& src,
                 const KernelConfig& cfg) {
  CMat A(tgt.size(), src.size());
  parallel_for(tgt.size(), [&](int i) {
    const Point xi = tgt.node(i), ni = tgt.nu(i);
    for (int j = 0; j < src.size(); ++j) {
      const Point yj = src.node(j), nj = src.nu(j);
      cplx k;
      switch (tag) {
        case LayerTag::g0SL: k = plain_kernel(Kernel::Single, cfg, xi, yj, ni, nj); break;
        case LayerTag::g0DL_plus:
        case LayerTag::g0DL_minus:
        case LayerTag::g0DL_avg: k = plain_kernel(Kernel::Double, cfg, xi, yj, ni, nj); break;
        case LayerTag::g1SL_plus:
        case LayerTag::g1SL_minus:
        case LayerTag::g1SL_avg: k = plain_kernel(Kernel::DoubleX, cfg, xi, yj, ni, nj); break;
        case LayerTag::g1DL: k = hypersingular_kernel(cfg, xi, yj, ni, nj); break;
      }
      A(i, j) = k * src.weight(j);
    }
  });
  return A;
}

}  // namespace

RMat periodic_derivative_matrix(int n) {
  RMat D = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      D(i, j) = 0.5 * ((k % 2 == 0) ? 1.0 : -1.0) / std::tan(k * kPi / n);
    }
  return D;
}

LayerMatrix assemble(LayerTag tag, const BoundaryGrid& grid, const KernelConfig& cfg) {
  LayerMatrix out;
  out.tag = tag;
  out.cfg = cfg;
  const int N = grid.size();
  const CMat half = 0.5 * CMat::Identity(N, N);
  switch (tag) {
    case LayerTag::g0SL: out.entries = weakly_singular(Kernel::Single, grid, cfg); break;
    case LayerTag::g0DL_avg: out.entries = weakly_singular(Kernel::Double, grid, cfg); break;
    case LayerTag::g0DL_plus: out.entries = weakly_singular(Kernel::Double, grid, cfg) + half; break;
    case LayerTag::g0DL_minus: out.entries = weakly_singular(Kernel::Double, grid, cfg) - half; break;
    case LayerTag::g1SL_avg: out.entries = weakly_singular(Kernel::DoubleX, grid, cfg); break;
    case LayerTag::g1SL_plus: out.entries = weakly_singular(Kernel::DoubleX, grid, cfg) - half; break;
    case LayerTag::g1SL_minus: out.entries = weakly_singular(Kernel::DoubleX, grid, cfg) + half; break;
    case LayerTag::g1DL: out.entries = hypersingular(grid, cfg); break;
  }
  return out;
}

LayerMatrix assemble_g0SL(const BoundaryGrid& grid, const KernelConfig& cfg) {
  return assemble(LayerTag::g0SL, grid, cfg);
}

LayerMatrix assemble_g1SL(const BoundaryGrid& grid, const KernelConfig& cfg, Side side) {
  return assemble(side == Side::Plus ? LayerTag::g1SL_plus : LayerTag::g1SL_minus, grid, cfg);
}

LayerMatrix assemble_g0DL(const BoundaryGrid& grid, const KernelConfig& cfg, Side side) {
  return assemble(side == Side::Plus ? LayerTag::g0DL_plus : LayerTag::g0DL_minus, grid, cfg);
}

LayerMatrix assemble_g1DL(const BoundaryGrid& grid, const KernelConfig& cfg) {
  return assemble(LayerTag::g1DL, grid, cfg);
}

LayerMatrix assemble_K(const BoundaryGrid& grid, const KernelConfig& cfg) {
  return assemble(LayerTag::g0DL_avg, grid, cfg);
}

LayerMatrix assemble_Kprime(const BoundaryGrid& grid, const KernelConfig& cfg) {
  return assemble(LayerTag::g1SL_avg, grid, cfg);
}

CMat assemble_panels(LayerTag tag, const std::vector<BoundaryGrid>& panels,
                     const KernelConfig& cfg) {
  int total = 0;
  std::vector<int> offset;
  for (const auto& p : panels) {
    offset.push_back(total);
    total += p.size();
  }
  CMat A(total, total);
  for (std::size_t a = 0; a < panels.size(); ++a)
    for (std::size_t b = 0; b < panels.size(); ++b) {
      const auto& pa = panels[a];
      const auto& pb = panels[b];
      A.block(offset[a], offset[b], pa.size(), pb.size()) =
          a == b ? assemble(tag, pa, cfg).entries : cross_block(tag, pa, pb, cfg);
    }
  return A;
}

CMat weighted_symmetrization(const CMat& a, const RVec& weights) {
  const RVec s = weights.cwiseSqrt();
  return s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
}

namespace {

CVec eval_field(Kernel kind, const BoundaryGrid& grid, const KernelConfig& cfg,
                const CVec& density, const Eigen::Matrix2Xd& points) {
  const double guard = 3.0 * grid.mean_spacing();
  CVec out(points.cols());
  for (int p = 0; p < points.cols(); ++p) {
    const Point x = points.col(p);
    if (distance_to_nodes(grid, x) <= guard) {
      throw ProximityError("layer potential evaluation point too close to the boundary");
    }
    cplx s(0.0);
    for (int j = 0; j < grid.size(); ++j) {
      s += plain_kernel(kind, cfg, x, grid.node(j), Point::Zero(), grid.nu(j)) * density(j) *
           grid.weight(j);
    }
    out(p) = s;
  }
  return out;
}

}  // namespace

CVec eval_SL_field(const BoundaryGrid& grid, const KernelConfig& cfg, const CVec& density,
                   const Eigen::Matrix2Xd& points) {
  return eval_field(Kernel::Single, grid, cfg, density, points);
}

CVec eval_DL_field(const BoundaryGrid& grid, const KernelConfig& cfg, const CVec& density,
                   const Eigen::Matrix2Xd& points) {
  return eval_field(Kernel::Double, grid, cfg, density, points);
}

namespace {

CMat stack(const CMat& a, const CMat& b, const CMat& c, const CMat& d) {
  const int n = static_cast<int>(a.rows());
  CMat out(2 * n, 2 * n);
  out << a, b, c, d;
  return out;
}

}  // namespace

WeylBlock m_circ_block(const BoundaryGrid& grid, const KernelConfig& cfg_z) {
  WeylBlock w;
  w.n = grid.size();
  w.lambda0 = std::real(cfg_z.z);
  w.entries = stack(assemble(LayerTag::g0SL, grid, cfg_z).entries,
                    assemble(LayerTag::g0DL_avg, grid, cfg_z).entries,
                    assemble(LayerTag::g1SL_avg, grid, cfg_z).entries,
                    assemble(LayerTag::g1DL, grid, cfg_z).entries);
  return w;
}

WeylBlock weyl_block(const BoundaryGrid& grid, const KernelConfig& cfg_z,
                     const KernelConfig& cfg_lambda0) {
  WeylBlock w;
  w.n = grid.size();
  w.lambda0 = std::real(cfg_lambda0.z);
  if (cfg_z.z == cfg_lambda0.z && cfg_z.V0 == cfg_lambda0.V0) {
    w.entries = CMat::Zero(2 * w.n, 2 * w.n);
    return w;
  }
  w.entries = m_circ_block(grid, cfg_lambda0).entries - m_circ_block(grid, cfg_z).entries;
  return w;
}

}  // namespace krein
