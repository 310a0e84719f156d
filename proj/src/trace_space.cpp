#include "krein/trace_space.hpp"

#include <cmath>
#include <set>

namespace krein {

TraceVector TraceVector::zeros(int band, double order, double radius) {
  TraceVector v;
  v.coeffs = CVec::Zero(2 * band + 1);
  v.sobolev_order = order;
  v.radius = radius;
  return v;
}

TraceVector TraceVector::single_mode(int band, int n, double order, double radius) {
  TraceVector v = zeros(band, order, radius);
  v.mode(n) = 1.0;
  return v;
}

double boundary_laplace_eigenvalue(int n, double radius) {
  return double(n) * n / (radius * radius);
}

TraceVector lambda_power(const TraceVector& v, double r) {
  TraceVector out = v;
  const int N = v.band();
  for (int n = -N; n <= N; ++n) {
    out.mode(n) *= std::pow(boundary_laplace_eigenvalue(n, v.radius) + 1.0, 0.5 * r);
  }
  out.sobolev_order = v.sobolev_order - r;
  return out;
}

double sobolev_norm(const TraceVector& v, double s) {
  const int N = v.band();
  double acc = 0.0;
  for (int n = -N; n <= N; ++n) {
    acc += std::pow(boundary_laplace_eigenvalue(n, v.radius) + 1.0, s) * std::norm(v.mode(n));
  }
  return std::sqrt(acc);
}

cplx duality_pairing(const TraceVector& f, const TraceVector& g) {
  if (f.coeffs.size() != g.coeffs.size() || f.radius != g.radius) {
    throw OrderMismatchError("duality_pairing: band or radius mismatch");
  }
  if (std::abs(f.sobolev_order + g.sobolev_order) > 1e-12) {
    throw OrderMismatchError("duality_pairing: orders must be negatives of each other");
  }
  return f.coeffs.dot(g.coeffs);
}

namespace {

double equivalent_radius(const BoundaryGrid& grid) {
  if (grid.curve.kind == CurveKind::Circle) return grid.curve.a;
  return grid.length() / (2.0 * kPi);
}

void require_uniform(const BoundaryGrid& grid) {
  if (grid.is_arc) throw std::invalid_argument("modal transform requires a closed uniform grid");
}

}  // namespace

TraceVector grid_to_modes(const BoundaryGrid& grid, const CVec& samples, int band, double order,
                          AliasReport* report) {
  require_uniform(grid);
  const int m = grid.size();
  if (m < 2 * band + 1) throw std::invalid_argument("grid_to_modes: need at least 2*band+1 nodes");
  if (samples.size() != m) throw std::invalid_argument("grid_to_modes: sample count mismatch");
  const double R = equivalent_radius(grid);
  const double scale = 2.0 * kPi * R / m / std::sqrt(2.0 * kPi * R);

  TraceVector v = TraceVector::zeros(band, order, R);
  double total = 0.0, kept = 0.0;
  // Every discrete frequency, so the tail energy can be reported.
  for (int n = -(m / 2) + 1; n <= m / 2; ++n) {
    cplx c(0.0);
    for (int j = 0; j < m; ++j) c += std::polar(1.0, -n * grid.t(j)) * samples(j);
    c *= scale;
    total += std::norm(c);
    if (std::abs(n) <= band) {
      v.mode(n) = c;
      kept += std::norm(c);
    }
  }
  if (report) {
    report->tail_fraction = total > 0.0 ? (total - kept) / total : 0.0;
    report->warning = report->tail_fraction > 1e-8;
  }
  return v;
}

CVec modes_to_grid(const BoundaryGrid& grid, const TraceVector& v) {
  require_uniform(grid);
  const int m = grid.size();
  const double norm = 1.0 / std::sqrt(2.0 * kPi * v.radius);
  CVec out = CVec::Zero(m);
  const int N = v.band();
  for (int j = 0; j < m; ++j) {
    cplx s(0.0);
    for (int n = -N; n <= N; ++n) s += v.mode(n) * std::polar(1.0, n * grid.t(j));
    out(j) = s * norm;
  }
  return out;
}

void ArcIndexSet::validate() const {
  std::set<int> seen;
  for (int i : sigma) seen.insert(i);
  for (int i : complement) {
    if (!seen.insert(i).second) throw std::invalid_argument("ArcIndexSet: index sets overlap");
  }
  const int n = total();
  if (static_cast<int>(seen.size()) != n || (n > 0 && (*seen.begin() != 0 || *seen.rbegin() != n - 1))) {
    throw std::invalid_argument("ArcIndexSet: index sets must partition 0..n-1");
  }
}

ArcIndexSet contiguous_arc_indices(int n_sigma, int n_complement) {
  ArcIndexSet s;
  for (int i = 0; i < n_sigma; ++i) s.sigma.push_back(i);
  for (int i = 0; i < n_complement; ++i) s.complement.push_back(n_sigma + i);
  return s;
}

CVec arc_restrict(const CVec& samples, const ArcIndexSet& arc) {
  CVec out(arc.sigma.size());
  for (std::size_t i = 0; i < arc.sigma.size(); ++i) out(i) = samples(arc.sigma[i]);
  return out;
}

CVec arc_include(const CVec& sigma_samples, const ArcIndexSet& arc) {
  CVec out = CVec::Zero(arc.total());
  for (std::size_t i = 0; i < arc.sigma.size(); ++i) out(arc.sigma[i]) = sigma_samples(i);
  return out;
}

CMat arc_compress(const CMat& full, const ArcIndexSet& arc) {
  const int m = static_cast<int>(arc.sigma.size());
  CMat out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = full(arc.sigma[i], arc.sigma[j]);
  return out;
}

cplx weighted_pairing(const CVec& f, const CVec& g, const RVec& w) {
  cplx s(0.0);
  for (int j = 0; j < f.size(); ++j) s += std::conj(f(j)) * g(j) * w(j);
  return s;
}

}  // namespace krein
