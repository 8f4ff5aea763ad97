#include "kansa/kansa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace kansa {

KansaSystem assemble_kansa(const PointSet& X, const PointSet& Y, const ZonalKernel& kernel,
                           const SpectralOperator& op, BasisMode mode) {
  if (X.d != Y.d) throw std::invalid_argument("dimension mismatch between X and Y");
  if (Y.n() < X.n()) throw std::invalid_argument("undersampled test set");
  if (mode == BasisMode::lagrange) return assemble_kansa(lagrange_basis(X, kernel), Y, op);

  KansaSystem sys;
  sys.X = X;
  sys.Y = Y;
  sys.kernel = kernel;
  sys.op = op;
  sys.basis_mode = BasisMode::standard;
  sys.kappa = static_cast<double>(Y.n()) / X.n();

  ZonalKernel lz = apply_operator(kernel, op);
  Mat dots = Y.coords * X.coords.transpose();
  sys.K = Mat(Y.n(), X.n());
  for (int k = 0; k < X.n(); ++k)
    for (int j = 0; j < Y.n(); ++j)
      sys.K(j, k) = eval_zonal(lz, std::clamp(dots(j, k), -1.0, 1.0));
  return sys;
}

KansaSystem assemble_kansa(const LagrangeBasis& basis, const PointSet& Y,
                           const SpectralOperator& op) {
  if (basis.X.d != Y.d) throw std::invalid_argument("dimension mismatch between X and Y");
  if (Y.n() < basis.X.n()) throw std::invalid_argument("undersampled test set");

  KansaSystem sys;
  sys.X = basis.X;
  sys.Y = Y;
  sys.kernel = basis.kernel;
  sys.op = op;
  sys.basis_mode = BasisMode::lagrange;
  sys.kappa = static_cast<double>(Y.n()) / basis.X.n();
  sys.dim_poly = basis.dim_poly;
  sys.lagrange_C = basis.C;
  sys.K = lagrange_trial_values(basis, op, Y.coords);
  return sys;
}

std::pair<double, double> singular_value_range(const Mat& F, std::string* method) {
  const Eigen::Index m = F.rows(), n = F.cols();
  if (std::min(m, n) <= 800) {
    if (method) *method = "svd";
    Eigen::BDCSVD<Mat> svd(F);
    return {svd.singularValues().minCoeff(), svd.singularValues().maxCoeff()};
  }
  if (method) *method = "inverse-iteration";
  // Gram route on the small side: sigma^2 are the eigenvalue extremes of
  // G = F^T F or F F^T, found by power and Cholesky inverse-power iteration
  Mat G = m >= n ? Mat(F.transpose() * F) : Mat(F * F.transpose());
  Vec v = Vec::Ones(G.rows()).normalized();
  double lam_max = 0;
  for (int it = 0; it < 200; ++it) {
    Vec w = G * v;
    lam_max = w.norm();
    v = w / lam_max;
  }
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) return {0.0, std::sqrt(lam_max)};
  v = Vec::Ones(G.rows()).normalized();
  double lam_min = 0;
  for (int it = 0; it < 200; ++it) {
    Vec w = llt.solve(v);
    lam_min = 1.0 / w.norm();
    v = w * lam_min;
  }
  return {std::sqrt(lam_min), std::sqrt(lam_max)};
}

double smallest_singular_value(const Mat& F, std::string* method) {
  return singular_value_range(F, method).first;
}

SolveReport solve_least_squares(const KansaSystem& sys, const Vec& f_on_Y) {
  if (f_on_Y.size() != sys.Y.n()) throw std::invalid_argument("right-hand side length mismatch");
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  const auto [sigma_min, sigma_max] = singular_value_range(sys.K, &rep.sigma_method);
  rep.sigma_min = sigma_min;
  if (rep.sigma_min < 1e-12 * sigma_max)
    throw std::runtime_error("rank-deficient Kansa matrix");

  Eigen::ColPivHouseholderQR<Mat> qr(sys.K);
  rep.a = qr.solve(f_on_Y);
  rep.residual_norm = (sys.K * rep.a - f_on_Y).norm();
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

GramDiagnostics gram_diagnostics(const KansaSystem& sys) {
  GramDiagnostics diag;
  diag.sigma_min = smallest_singular_value(sys.K, nullptr);
  if (diag.sigma_min <= 0) throw std::runtime_error("rank-deficient Kansa matrix");
  diag.gram_inverse_norm = 1.0 / (diag.sigma_min * diag.sigma_min);
  diag.bound_product = diag.gram_inverse_norm * sys.kappa;
  diag.sigma_scaled = diag.sigma_min / std::sqrt(sys.kappa);
  return diag;
}

InterpolantRep reconstruct(const KansaSystem& sys, const Vec& a) {
  if (a.size() != sys.X.n()) throw std::invalid_argument("coefficient length mismatch");
  InterpolantRep rep;
  rep.X = sys.X;
  rep.kernel = sys.kernel;
  if (sys.basis_mode == BasisMode::lagrange) {
    Vec stacked = sys.lagrange_C * a;
    rep.c = stacked.head(sys.X.n());
    rep.b = stacked.tail(sys.dim_poly);
  } else {
    rep.c = a;
    rep.b = Vec();
  }
  return rep;
}

double l2_error(const InterpolantRep& g, const std::function<double(const Point&)>& ref,
                const QuadratureRule& rule) {
  Vec vals = eval_rep_many(g, rule.nodes);
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    vals(i) -= ref(rule.nodes.row(i).transpose());
  return std::sqrt(vals.array().square().matrix().dot(rule.weights));
}

}  // namespace kansa
