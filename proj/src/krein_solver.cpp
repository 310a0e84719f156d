#include "krein/krein_solver.hpp"

#include <algorithm>
#include <cmath>

#include "krein/parallel.hpp"

namespace krein {

PerturbedResolvent::PerturbedResolvent(const ExtensionSpec& spec, const BoundaryGrid& grid,
                                       cplx z)
    : PerturbedResolvent(spec, grid, KernelConfig::from_z(z, spec.V0)) {}

PerturbedResolvent::PerturbedResolvent(const ExtensionSpec& spec, const BoundaryGrid& grid,
                                       const KernelConfig& cfg)
    : spec_(spec), grid_(grid), cfg_(cfg) {
  block_ = birman_block(spec, grid, cfg);
  const RVec sv = Eigen::BDCSVD<CMat>(block_.matrix).singularValues();
  const double smax = sv(0), smin = sv(sv.size() - 1);
  if (smin <= kSingularRelTol * smax) {
    throw BlockSingularError("boundary block is numerically singular at this z");
  }
  condition_ = smax / smin;
  lu_.compute(block_.matrix);
  guard_ = 3.0 * grid.mean_spacing();
}

void PerturbedResolvent::check_point(const Point& x) const {
  if (distance_to_nodes(grid_, x) <= guard_) {
    throw ProximityError("evaluation point within 3 node spacings of the boundary");
  }
}

CorrectionDensity PerturbedResolvent::solve(const CVec& trace0, const CVec& trace1) const {
  const int n = grid_.size();
  CVec data;
  switch (block_.selector) {
    case Selector::First: data = trace0; break;
    case Selector::Second: data = trace1; break;
    case Selector::Both:
      data.resize(2 * n);
      data << trace0, trace1;
      break;
  }
  const CVec rho = block_.sign * lu_.solve(block_.trace_scale.cast<cplx>().cwiseProduct(data));
  CorrectionDensity d{CVec::Zero(n), CVec::Zero(n)};
  switch (block_.selector) {
    case Selector::First: d.single = rho; break;
    case Selector::Second: d.dbl = rho; break;
    case Selector::Both:
      d.single = rho.head(n);
      d.dbl = rho.tail(n);
      break;
  }
  return d;
}

cplx PerturbedResolvent::correction_at(const CorrectionDensity& d, const Point& x) const {
  check_point(x);
  cplx s(0.0);
  const bool has_single = block_.selector != Selector::Second;
  const bool has_double = block_.selector != Selector::First;
  for (int j = 0; j < grid_.size(); ++j) {
    const Point y = grid_.node(j);
    cplx v(0.0);
    if (has_single) v += fundamental_solution(cfg_, x, y) * d.single(j);
    if (has_double) v += conormal_gradient(cfg_, x, y, grid_.nu(j)) * d.dbl(j);
    s += v * grid_.weight(j);
  }
  return s;
}

CorrectionDensity PerturbedResolvent::source_density(const Point& y) const {
  check_point(y);
  const int n = grid_.size();
  CVec t0(n), t1(n);
  for (int j = 0; j < n; ++j) {
    t0(j) = fundamental_solution(cfg_, grid_.node(j), y);
    t1(j) = conormal_gradient_x(cfg_, grid_.node(j), y, grid_.nu(j));
  }
  return solve(t0, t1);
}

cplx PerturbedResolvent::correction(const Point& x, const Point& y) const {
  return correction_at(source_density(y), x);
}

cplx PerturbedResolvent::green(const Point& x, const Point& y) const {
  return fundamental_solution(cfg_, x, y) + correction(x, y);
}

cplx PerturbedResolvent::far_field(const CorrectionDensity& d, const Point& direction) const {
  const cplx pre = std::sqrt(kPi / (2.0 * cfg_.kappa)) / (2.0 * kPi);
  cplx s(0.0);
  for (int j = 0; j < grid_.size(); ++j) {
    const cplx phase = std::exp(cfg_.kappa * direction.dot(grid_.node(j)));
    s += phase * (d.single(j) + cfg_.kappa * grid_.nu(j).dot(direction) * d.dbl(j)) *
         grid_.weight(j);
  }
  return pre * s;
}

cplx perturbed_green(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z, const Point& x,
                     const Point& y) {
  return PerturbedResolvent(spec, grid, z).green(x, y);
}

namespace {

CMat checked_inverse(const CMat& m, const char* who) {
  const RVec sv = Eigen::BDCSVD<CMat>(m).singularValues();
  if (sv(sv.size() - 1) <= kSingularRelTol * sv(0)) {
    throw BlockSingularError(std::string(who) + ": matrix is numerically singular");
  }
  return m.partialPivLu().inverse();
}

}  // namespace

CMat dtn_difference(const BoundaryGrid& grid, const KernelConfig& cfg) {
  return checked_inverse(assemble_g0SL(grid, cfg).entries, "dtn_difference");
}

CMat ntd_difference(const BoundaryGrid& grid, const KernelConfig& cfg) {
  return checked_inverse(assemble_g1DL(grid, cfg).entries, "ntd_difference");
}

KernelConfig scan_config(ScanBranch branch, double s, double V0) {
  const double root = std::sqrt(s);
  return branch == ScanBranch::Decaying ? KernelConfig::from_kappa(cplx(root, 0.0), V0)
                                        : KernelConfig::from_kappa(cplx(0.0, root), V0);
}

double smallest_singular_value(const CMat& m) {
  const RVec sv = Eigen::BDCSVD<CMat>(m).singularValues();
  return sv(sv.size() - 1);
}

namespace {

CMat block_at(const ExtensionSpec& spec, const BoundaryGrid& grid, ScanBranch branch, double s) {
  return birman_block(spec, grid, scan_config(branch, s, spec.V0)).matrix;
}

// Inverse of the block at a decaying-branch point away from the spectrum. The
// scanned quantity is sigma_min(B(s) P^{-1}), which shares its zeros with
// B(s) but is free of the small singular values of the layer operators.
CMat scan_preconditioner(const ExtensionSpec& spec, const BoundaryGrid& grid) {
  const std::vector<KernelConfig> candidates = {
      reference_config(spec), KernelConfig::from_kappa(cplx(0.5, 0.0), spec.V0),
      KernelConfig::from_kappa(cplx(3.7, 0.0), spec.V0),
      KernelConfig::from_kappa(cplx(7.3, 0.0), spec.V0)};
  for (const KernelConfig& cfg : candidates) {
    const CMat b = birman_block(spec, grid, cfg).matrix;
    const RVec sv = Eigen::BDCSVD<CMat>(b).singularValues();
    if (sv(sv.size() - 1) > 1e-6 * sv(0)) return b.partialPivLu().inverse();
  }
  throw BlockSingularError("point_spectrum: no well-conditioned reference block");
}

}  // namespace

SpectrumResult point_spectrum(const ExtensionSpec& spec, const BoundaryGrid& grid,
                              ScanBranch branch, double s_lo, double s_hi, int n_scan) {
  if (!(s_lo > 0.0) || !(s_hi > s_lo) || n_scan < 3) {
    throw std::invalid_argument("point_spectrum: need 0 < s_lo < s_hi and n_scan >= 3");
  }
  const CMat precond = scan_preconditioner(spec, grid);
  auto sigma = [&](double s) {
    return smallest_singular_value(block_at(spec, grid, branch, s) * precond);
  };

  SpectrumResult out;
  out.scan.resize(n_scan);
  parallel_for(n_scan, [&](int i) {
    const double s = s_lo + (s_hi - s_lo) * i / (n_scan - 1);
    out.scan[i] = {s, sigma(s)};
  });

  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i + 1 < n_scan; ++i) {
    const double f = out.scan[i].sigma_min;
    if (!(f <= out.scan[i - 1].sigma_min && f <= out.scan[i + 1].sigma_min)) continue;
    double a = out.scan[i - 1].s, b = out.scan[i + 1].s;
    double c = b - golden * (b - a), d = a + golden * (b - a);
    double fc = sigma(c), fd = sigma(d);
    while (b - a > 1e-10) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - golden * (b - a);
        fc = sigma(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + golden * (b - a);
        fd = sigma(d);
      }
    }
    const double s_star = 0.5 * (a + b);
    const RVec sv = Eigen::BDCSVD<CMat>(block_at(spec, grid, branch, s_star)).singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    if (smin > 1e-8 * smax) continue;
    const bool duplicate = std::any_of(out.hits.begin(), out.hits.end(), [&](const SpectralHit& h) {
      return std::abs(h.z_star - s_star) < 1e-8;
    });
    if (duplicate) continue;
    SpectralHit hit;
    hit.z_star = s_star;
    const KernelConfig cfg = scan_config(branch, s_star, spec.V0);
    hit.kappa = cfg.kappa;
    hit.z = cfg.z;
    hit.residual = smin;
    hit.block_norm = smax;
    hit.multiplicity = static_cast<int>((sv.array() <= 1e-6 * smax).count());
    out.hits.push_back(hit);
  }
  return out;
}

CVec eigenfunction_samples(const ExtensionSpec& spec, const BoundaryGrid& grid,
                           ScanBranch branch, const SpectralHit& hit,
                           const Eigen::Matrix2Xd& points) {
  const KernelConfig cfg = scan_config(branch, hit.z_star, spec.V0);
  const BirmanBlock blk = birman_block(spec, grid, cfg);
  const Eigen::BDCSVD<CMat> svd(blk.matrix, Eigen::ComputeFullV);
  const CVec null = svd.matrixV().col(svd.matrixV().cols() - 1);
  const int n = grid.size();
  CVec single = CVec::Zero(n), dbl = CVec::Zero(n);
  switch (blk.selector) {
    case Selector::First: single = null; break;
    case Selector::Second: dbl = null; break;
    case Selector::Both:
      single = null.head(n);
      dbl = null.tail(n);
      break;
  }
  CVec u(points.cols());
  for (int p = 0; p < points.cols(); ++p) {
    const Point x = points.col(p);
    cplx s(0.0);
    for (int j = 0; j < n; ++j) {
      s += (fundamental_solution(cfg, x, grid.node(j)) * single(j) +
            conormal_gradient(cfg, x, grid.node(j), grid.nu(j)) * dbl(j)) *
           grid.weight(j);
    }
    u(p) = s;
  }
  const double nrm = u.norm();
  return nrm > 0.0 ? CVec(u / nrm) : u;
}

namespace {

CVec far_field_at(const PerturbedResolvent& pr, const CorrectionDensity& d,
                  const std::vector<double>& angles) {
  CVec f(angles.size());
  for (std::size_t a = 0; a < angles.size(); ++a) {
    f(a) = pr.far_field(d, Point(std::cos(angles[a]), std::sin(angles[a])));
  }
  return f;
}

CorrectionDensity plane_wave_density(const PerturbedResolvent& pr, double k, const Point& dir) {
  const BoundaryGrid& g = pr.grid();
  CVec t0(g.size()), t1(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const cplx u = std::exp(cplx(0.0, k * dir.dot(g.node(j))));
    t0(j) = u;
    t1(j) = cplx(0.0, k * dir.dot(g.nu(j))) * u;
  }
  return pr.solve(t0, t1);
}

}  // namespace

ScatterResult scattered_field(const ExtensionSpec& spec, const BoundaryGrid& grid, double k,
                              const Point& direction, const std::vector<double>& angles,
                              const Eigen::Matrix2Xd& near_points,
                              const std::vector<double>& epsilon_path) {
  if (spec.V0 != 0.0) throw std::invalid_argument("scattered_field: requires V0 = 0");
  if (!(k > 0.0)) throw std::invalid_argument("scattered_field: wavenumber must be positive");
  const Point d = direction.normalized();
  ScatterResult out;
  out.angles = angles;

  const PerturbedResolvent pr(spec, grid, KernelConfig::from_kappa(cplx(0.0, k), 0.0));
  out.condition = pr.condition_number();
  out.trapped_mode_warning = out.condition > 1e10;
  const CorrectionDensity rho = plane_wave_density(pr, k, d);
  out.far_field = far_field_at(pr, rho, angles);
  out.near_field.resize(near_points.cols());
  for (int p = 0; p < near_points.cols(); ++p) out.near_field(p) = pr.correction_at(rho, near_points.col(p));

  const double ref = out.far_field.norm();
  for (double eps : epsilon_path) {
    const PerturbedResolvent pe(spec, grid, KernelConfig::from_z(cplx(-k * k, eps), 0.0));
    const CVec f = far_field_at(pe, plane_wave_density(pe, k, d), angles);
    out.epsilons.push_back(eps);
    out.far_field_eps.push_back(f);
    out.eps_errors.push_back(ref > 0.0 ? (f - out.far_field).norm() / ref : (f - out.far_field).norm());
  }
  return out;
}

double fit_decay_slope(const RVec& sv, int lo, int hi) {
  // Least-squares slope of log s_j against log j, j 1-based in [lo, hi].
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int j = lo; j <= hi; ++j) {
    const double x = std::log(double(j)), y = std::log(sv(j - 1));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

SvdDecay resolvent_difference_svd(const ExtensionSpec& spec, const BoundaryGrid& grid, cplx z,
                                  const Box& box, int n_samples) {
  if (n_samples < 16 || n_samples > 400) {
    throw std::invalid_argument("resolvent_difference_svd: n_samples must lie in [16, 400]");
  }
  const int m = static_cast<int>(std::floor(std::sqrt(double(n_samples))));
  const double hx = (box.x1 - box.x0) / m, hy = (box.y1 - box.y0) / m;
  const double guard = 3.0 * grid.mean_spacing();
  std::vector<Point> pts;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Point p(box.x0 + (i + 0.5) * hx, box.y0 + (j + 0.5) * hy);
      if (distance_to_nodes(grid, p) > guard) pts.push_back(p);
    }
  const int P = static_cast<int>(pts.size());
  const int n = grid.size();

  const PerturbedResolvent pr(spec, grid, z);
  const KernelConfig& cfg = pr.config();
  // Traces of g(., p) at the nodes; by symmetry they also give the potentials.
  CMat t0(n, P), t1(n, P);
  parallel_for(P, [&](int p) {
    for (int j = 0; j < n; ++j) {
      t0(j, p) = fundamental_solution(cfg, grid.node(j), pts[p]);
      t1(j, p) = conormal_gradient_x(cfg, grid.node(j), pts[p], grid.nu(j));
    }
  });
  CMat corr = CMat::Zero(P, P);
  const RVec& w = grid.weight;
  for (int p = 0; p < P; ++p) {
    const CorrectionDensity d = pr.solve(t0.col(p), t1.col(p));
    corr.col(p) = t0.transpose() * w.cast<cplx>().cwiseProduct(d.single) +
                  t1.transpose() * w.cast<cplx>().cwiseProduct(d.dbl);
  }
  corr *= hx * hy;

  SvdDecay out;
  out.n_points = P;
  out.singular_values = Eigen::BDCSVD<CMat>(corr).singularValues();
  const RVec& sv = out.singular_values;
  int usable = 0;
  while (usable < sv.size() && sv(usable) > 1e-12 * sv(0)) ++usable;
  out.fit_lo = std::max(1, static_cast<int>(std::lround(std::sqrt(usable / 10.0))));
  out.fit_hi = std::min(usable, 10 * out.fit_lo);
  out.slope = out.fit_hi > out.fit_lo ? fit_decay_slope(sv, out.fit_lo, out.fit_hi) : 0.0;
  return out;
}

}  // namespace krein
