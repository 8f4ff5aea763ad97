#include "kansa/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "kansa/spectral.hpp"

namespace kansa {

namespace {

// A_ij = Z(rows_i . cols_j)
Mat kernel_matrix(const ZonalKernel& kernel, const Mat& rows, const Mat& cols) {
  Mat dots = rows * cols.transpose();
  Mat out(dots.rows(), dots.cols());
  for (Eigen::Index j = 0; j < dots.cols(); ++j)
    for (Eigen::Index i = 0; i < dots.rows(); ++i)
      out(i, j) = eval_zonal(kernel, std::clamp(dots(i, j), -1.0, 1.0));
  return out;
}

// harmonic block with column (ell,m) scaled by m(ell)
Mat scaled_harmonic_block(int d, int max_degree, const Mat& pts, const SpectralOperator& op) {
  Mat P = harmonic_block(d, max_degree, pts);
  int idx = 0;
  for (int ell = 0; ell <= max_degree; ++ell) {
    const int block = harmonic_dim(d, ell);
    P.middleCols(idx, block) *= op.multiplier(ell);
    idx += block;
  }
  return P;
}

}  // namespace

Mat SaddleSystem::solve(const Mat& rhs) const {
  Mat sol = lu.solve(rhs);
  // one refinement pass; the bordered matrix grows ill-conditioned with N
  Mat resid = rhs - bordered * sol;
  sol += lu.solve(resid);
  return sol;
}

SaddleSystem assemble_saddle(const PointSet& X, const ZonalKernel& kernel) {
  if (X.d != kernel.d) throw std::invalid_argument("dimension mismatch between points and kernel");
  const int n = X.n();
  const int max_deg = kernel.order - 1;
  const int p = max_deg >= 0 ? harmonic_space_dim(X.d, max_deg) : 0;
  if (n < p) throw std::invalid_argument("need at least dim(Pi_{L-1}) centers");

  Mat A = kernel_matrix(kernel, X.coords, X.coords);
  Mat P = p > 0 ? harmonic_block(X.d, max_deg, X.coords) : Mat(n, 0);

  if (p > 0) {
    Eigen::ColPivHouseholderQR<Mat> qr(P);
    qr.setThreshold(1e-10 * P.norm());
    if (qr.rank() < p) throw std::invalid_argument("non-unisolvent centers");
  }

  SaddleSystem sys;
  sys.X = X;
  sys.kernel = kernel;
  sys.dim_poly = p;
  sys.bordered = Mat::Zero(n + p, n + p);
  sys.bordered.topLeftCorner(n, n) = A;
  if (p > 0) {
    sys.bordered.topRightCorner(n, p) = P;
    sys.bordered.bottomLeftCorner(p, n) = P.transpose();
  }
  sys.lu = Eigen::PartialPivLU<Mat>(sys.bordered);
  return sys;
}

double InterpolantRep::operator()(const Point& x) const {
  Mat pt(1, x.size());
  pt.row(0) = x.transpose();
  return eval_rep_many(*this, pt)(0);
}

Vec eval_rep_many(const InterpolantRep& rep, const Mat& pts) {
  Vec out = kernel_matrix(rep.kernel, pts, rep.X.coords) * rep.c;
  if (rep.b.size() > 0)
    out += harmonic_block(rep.X.d, rep.kernel.order - 1, pts) * rep.b;
  return out;
}

InterpolantRep interpolate(const SaddleSystem& sys, const Vec& values) {
  const int n = sys.X.n();
  if (values.size() != n) throw std::invalid_argument("value count mismatch");
  Vec rhs = Vec::Zero(n + sys.dim_poly);
  rhs.head(n) = values;
  Vec sol = sys.solve(rhs);

  InterpolantRep rep;
  rep.X = sys.X;
  rep.kernel = sys.kernel;
  rep.c = sol.head(n);
  rep.b = sol.tail(sys.dim_poly);
  return rep;
}

InterpolantRep interpolate(const PointSet& X, const ZonalKernel& kernel, const Vec& values) {
  return interpolate(assemble_saddle(X, kernel), values);
}

LagrangeBasis lagrange_basis(const SaddleSystem& sys) {
  const int n = sys.X.n();
  Mat rhs = Mat::Zero(n + sys.dim_poly, n);
  rhs.topRows(n) = Mat::Identity(n, n);

  LagrangeBasis basis;
  basis.X = sys.X;
  basis.kernel = sys.kernel;
  basis.dim_poly = sys.dim_poly;
  basis.C = sys.solve(rhs);
  return basis;
}

LagrangeBasis lagrange_basis(const PointSet& X, const ZonalKernel& kernel) {
  return lagrange_basis(assemble_saddle(X, kernel));
}

InterpolantRep basis_function(const LagrangeBasis& basis, int j) {
  const int n = basis.X.n();
  if (j < 0 || j >= n) throw std::invalid_argument("basis index out of range");
  InterpolantRep rep;
  rep.X = basis.X;
  rep.kernel = basis.kernel;
  rep.c = basis.C.col(j).head(n);
  rep.b = basis.C.col(j).tail(basis.dim_poly);
  return rep;
}

double eval_trial(const InterpolantRep& rep, const SpectralOperator& op, const Point& x) {
  Mat pt(1, x.size());
  pt.row(0) = x.transpose();
  return eval_trial_many(rep, op, pt)(0);
}

Vec eval_trial_many(const InterpolantRep& rep, const SpectralOperator& op, const Mat& pts) {
  if (op.is_identity) return eval_rep_many(rep, pts);
  ZonalKernel lz = apply_operator(rep.kernel, op);
  Vec out = kernel_matrix(lz, pts, rep.X.coords) * rep.c;
  if (rep.b.size() > 0)
    out += scaled_harmonic_block(rep.X.d, rep.kernel.order - 1, pts, op) * rep.b;
  return out;
}

Mat lagrange_values(const LagrangeBasis& basis, const Mat& pts) {
  Mat full(pts.rows(), basis.X.n() + basis.dim_poly);
  full.leftCols(basis.X.n()) = kernel_matrix(basis.kernel, pts, basis.X.coords);
  if (basis.dim_poly > 0)
    full.rightCols(basis.dim_poly) = harmonic_block(basis.X.d, basis.kernel.order - 1, pts);
  return full * basis.C;
}

Mat lagrange_trial_values(const LagrangeBasis& basis, const SpectralOperator& op, const Mat& pts) {
  if (op.is_identity) return lagrange_values(basis, pts);
  ZonalKernel lz = apply_operator(basis.kernel, op);
  Mat full(pts.rows(), basis.X.n() + basis.dim_poly);
  full.leftCols(basis.X.n()) = kernel_matrix(lz, pts, basis.X.coords);
  if (basis.dim_poly > 0)
    full.rightCols(basis.dim_poly) =
        scaled_harmonic_block(basis.X.d, basis.kernel.order - 1, pts, op);
  return full * basis.C;
}

StabilityReport stability_ratio(const PointSet& X, const ZonalKernel& kernel, BasisMode mode) {
  StabilityReport rep;
  rep.quad_degree = std::min(240, std::max(60, 2 * static_cast<int>(std::ceil(M_PI / X.q))));
  QuadratureRule rule = quadrature_rule(X.d, rep.quad_degree);

  Mat vals;  // nodes x N, column j = basis function j at quadrature nodes
  if (mode == BasisMode::lagrange) {
    vals = lagrange_values(lagrange_basis(X, kernel), rule.nodes);
  } else {
    // standard basis of S_X(Z): the side-condition projections of Z(., x_j),
    // obtained by interpolating the kernel's own center values
    SaddleSystem sys = assemble_saddle(X, kernel);
    Mat rhs = Mat::Zero(X.n() + sys.dim_poly, X.n());
    rhs.topRows(X.n()) = kernel_matrix(kernel, X.coords, X.coords);
    Mat sol = sys.solve(rhs);
    Mat full(rule.nodes.rows(), X.n() + sys.dim_poly);
    full.leftCols(X.n()) = kernel_matrix(kernel, rule.nodes, X.coords);
    if (sys.dim_poly > 0)
      full.rightCols(sys.dim_poly) = harmonic_block(X.d, kernel.order - 1, rule.nodes);
    vals = full * sol;
  }

  Mat gram = vals.transpose() * rule.weights.asDiagonal() * vals;
  rep.r2 = stability_ratio_from_gram(gram);
  return rep;
}

double stability_ratio_from_gram(const Mat& gram) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()));
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 0) throw std::runtime_error("Gram matrix numerically singular");
  return 1.0 / std::sqrt(lmin);
}

RieszReport riesz_check(const LagrangeBasis& basis, int trials, const QuadratureRule& rule,
                        std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const int n = basis.X.n();
  Mat vals = lagrange_values(basis, rule.nodes);
  const double scale = std::pow(basis.X.q, basis.X.d / 2.0);

  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  RieszReport rep;
  rep.trials = trials;
  rep.c_L_hat = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Vec a(n);
    for (int i = 0; i < n; ++i) a(i) = gauss(eng);
    a /= a.norm();
    Vec w = vals * a;
    const double l2 = std::sqrt(w.array().square().matrix().dot(rule.weights));
    const double ratio = l2 / scale;
    rep.c_L_hat = std::min(rep.c_L_hat, ratio);
    rep.C_R_hat = std::max(rep.C_R_hat, ratio);
  }
  return rep;
}

BernsteinReport bernstein_check(const PointSet& X, const ZonalKernel& kernel,
                                const SpectralOperator& op, double gamma, double eps, int trials,
                                const QuadratureRule& rule, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const double tau = kernel.smoothness;
  if (gamma + eps >= 2 * tau - X.d / 2.0)
    throw std::invalid_argument("gamma + eps must lie below 2*tau - d/2");

  BernsteinReport rep;
  rep.trials = trials;
  rep.max_degree = std::min(120, 3 * static_cast<int>(std::ceil(M_PI / X.q)));
  if (rule.design_degree < 2 * rep.max_degree)
    throw std::invalid_argument("quadrature degree too low for Sobolev analysis");

  LagrangeBasis basis = lagrange_basis(X, kernel);
  Mat vals = op.is_identity ? lagrange_values(basis, rule.nodes)
                            : lagrange_trial_values(basis, op, rule.nodes);
  Mat B = harmonic_block(X.d, rep.max_degree, rule.nodes);
  // harmonics x N, column j = expansion coefficients of (L chi_j)
  Mat coeffs = B.transpose() * rule.weights.asDiagonal() * vals;

  const double lambda = lambda_param(X.d);
  const int dim = harmonic_space_dim(X.d, rep.max_degree);
  Vec w_hi(dim), w_lo(dim);
  {
    int idx = 0;
    for (int ell = 0; ell <= rep.max_degree; ++ell) {
      // d=1 seminorm convention: ell=0 contributes nothing when lambda=0
      const double base = (X.d == 1 && ell == 0) ? 0.0 : ell + lambda;
      const double hi = base > 0 ? std::pow(base, 2 * (gamma + eps)) : 0.0;
      const double lo = base > 0 ? std::pow(base, 2 * eps) : 0.0;
      for (int m = 0; m < harmonic_dim(X.d, ell); ++m, ++idx) {
        w_hi(idx) = hi;
        w_lo(idx) = lo;
      }
    }
  }

  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int cutoff = harmonic_space_dim(X.d, static_cast<int>(0.9 * rep.max_degree));

  double tail_at_max = 0;
  for (int t = 0; t < trials; ++t) {
    Vec a(X.n());
    for (int i = 0; i < X.n(); ++i) a(i) = gauss(eng);
    Vec c2 = (coeffs * a).array().square();
    const double hi = c2.dot(w_hi);
    const double lo = c2.dot(w_lo);
    if (lo <= 0) continue;
    const double ratio = std::sqrt(hi / lo) * std::pow(X.q, gamma);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      const double tail = c2.tail(c2.size() - cutoff).dot(w_hi.tail(w_hi.size() - cutoff));
      tail_at_max = hi > 0 ? tail / hi : 0;
    }
  }
  rep.tail_fraction = tail_at_max;
  return rep;
}

}  // namespace kansa
