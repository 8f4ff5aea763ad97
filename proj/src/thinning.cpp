#include "kansa/thinning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kansa {

namespace {

// rows p, q of R <- [c s; -s c] * rows, chosen so that R(q, col) becomes 0
void givens_rows(Mat& R, int p, int q, int col) {
  const double a = R(p, col), b = R(q, col);
  if (b == 0.0) return;
  const double r = std::hypot(a, b);
  const double c = a / r, s = b / r;
  Eigen::RowVectorXd rp = R.row(p), rq = R.row(q);
  R.row(p) = c * rp + s * rq;
  R.row(q) = -s * rp + c * rq;
  R(q, col) = 0.0;
}

double log_abs_det_leading(const Mat& R, int k) {
  double acc = 0;
  for (int i = 0; i < k; ++i) acc += std::log(std::abs(R(i, i)));
  return acc;
}

// (sigma_k(F), sigma_1(F)) for the bound check; one SVD when feasible, Gram
// iteration for the k = min(m, n) case at scale
std::pair<double, double> kth_and_top_singular_value(const Mat& F, int k) {
  const Eigen::Index mn = std::min(F.rows(), F.cols());
  if (mn > 800 && k == mn) {
    auto [lo, hi] = singular_value_range(F);
    return {lo, hi};
  }
  Eigen::BDCSVD<Mat> svd(F);
  return {svd.singularValues()(k - 1), svd.singularValues()(0)};
}

}  // namespace

RRQRResult strong_rrqr(const Mat& F, int k, double f_param) {
  const int m = static_cast<int>(F.rows());
  const int n = static_cast<int>(F.cols());
  const int mn = std::min(m, n);
  if (k < 1 || k > mn) throw std::invalid_argument("k out of range");
  if (!(f_param > 1)) throw std::invalid_argument("f_param must exceed 1");
  if (!F.allFinite()) throw std::invalid_argument("non-finite entries");

  Eigen::ColPivHouseholderQR<Mat> qr(F);
  Mat R = Mat(qr.matrixQR().topRows(mn).triangularView<Eigen::Upper>());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = qr.colsPermutation().indices()(i);

  RRQRResult res;
  res.f_param = f_param;
  res.q1_bound = std::sqrt(1.0 + f_param * f_param * k * (n - k));

  const int swap_budget = 100 * k;
  while (k < n) {
    auto A = R.topLeftCorner(k, k).triangularView<Eigen::Upper>();
    Mat W = A.solve(R.topRightCorner(k, n - k));
    Mat Ainv = A.solve(Mat::Identity(k, k));
    Vec omega = Ainv.rowwise().norm();
    Vec gamma = R.bottomRightCorner(mn - k, n - k).colwise().norm().transpose();

    // best det-increasing swap; scan order (j outer, i inner) with strict >
    // breaks ties toward the lowest column index
    double best = f_param;
    int bi = -1, bj = -1;
    for (int j = 0; j < n - k; ++j)
      for (int i = 0; i < k; ++i) {
        const double rho = std::hypot(W(i, j), gamma(j) * omega(i));
        if (rho > best) {
          best = rho;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    if (res.swap_count >= swap_budget) {
      res.swap_budget_exhausted = true;
      break;
    }
    ++res.swap_count;
    const double logdet_before = log_abs_det_leading(R, k);

    // move selected column bi to the block boundary (cyclic shift left), fix
    // the Hessenberg strip, then swap with trailing column k+bj and chase the
    // fill in column k-1 upward; fill lands only in the trailing block
    if (bi < k - 1) {
      Vec tmp = R.col(bi);
      const int pi_tmp = perm[bi];
      for (int c = bi; c < k - 1; ++c) {
        R.col(c) = R.col(c + 1);
        perm[c] = perm[c + 1];
      }
      R.col(k - 1) = tmp;
      perm[k - 1] = pi_tmp;
      for (int c = bi; c < k - 1; ++c) givens_rows(R, c, c + 1, c);
    }
    R.col(k - 1).swap(R.col(k + bj));
    std::swap(perm[k - 1], perm[k + bj]);
    for (int p = mn - 1; p >= k; --p) givens_rows(R, p - 1, p, k - 1);

    if (log_abs_det_leading(R, k) <= logdet_before)
      throw std::runtime_error("strong RRQR swap failed to increase the determinant");
  }

  // flip row signs to make the A_k diagonal nonnegative (absorbed in Q)
  for (int p = 0; p < k; ++p)
    if (R(p, p) < 0) R.row(p) = -R.row(p);

  res.selected.assign(perm.begin(), perm.begin() + k);
  res.perm = perm;
  res.A_k = R.topLeftCorner(k, k);
  res.B_k = R.topRightCorner(k, n - k);
  res.trailing = R.bottomRightCorner(mn - k, n - k);
  res.sigma_min_Ak = smallest_singular_value(res.A_k);

  const auto [sigma_k, sigma_1] = kth_and_top_singular_value(F, k);
  if (res.sigma_min_Ak < sigma_k / res.q1_bound - 1e-10 * sigma_1)
    throw std::runtime_error("strong RRQR singular value bound violated");
  if (k < n) {
    const double w_max =
        res.A_k.triangularView<Eigen::Upper>().solve(res.B_k).array().abs().maxCoeff();
    if (w_max > f_param * (1.0 + 1e-8))
      throw std::runtime_error("strong RRQR interpolation bound violated");
  }
  return res;
}

ThinnedSystem thin(const KansaSystem& sys, double f_param) {
  const int n = sys.X.n();
  if (sys.Y.n() < n) throw std::invalid_argument("undersampled test set");

  RRQRResult rr = strong_rrqr(sys.K.transpose(), n, f_param);

  ThinnedSystem ts;
  ts.X = sys.X;
  ts.kernel = sys.kernel;
  ts.op = sys.op;
  ts.basis_mode = sys.basis_mode;
  ts.dim_poly = sys.dim_poly;
  ts.lagrange_C = sys.lagrange_C;
  ts.selected = rr.selected;
  ts.sigma_min = rr.sigma_min_Ak;

  Mat coords(n, sys.Y.coords.cols());
  ts.K_red = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    coords.row(i) = sys.Y.coords.row(rr.selected[i]);
    ts.K_red.row(i) = sys.K.row(rr.selected[i]);
  }
  const double sigma_max = singular_value_range(ts.K_red).second;
  if (ts.sigma_min < 1e-12 * sigma_max)
    throw std::runtime_error("thinning produced singular square system");
  ts.Y_tilde = make_point_set(sys.Y.d, coords);
  return ts;
}

SolveReport solve_thinned(const ThinnedSystem& ts, const Vec& f_on_Ytilde) {
  if (f_on_Ytilde.size() != ts.K_red.rows())
    throw std::invalid_argument("right-hand side length mismatch");
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.sigma_min = ts.sigma_min;
  rep.sigma_method = "rrqr-Ak";
  Eigen::PartialPivLU<Mat> lu(ts.K_red);
  rep.a = lu.solve(f_on_Ytilde);
  if (!rep.a.allFinite()) throw std::runtime_error("singular thinned system");
  rep.residual_norm = (ts.K_red * rep.a - f_on_Ytilde).norm();
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

InterpolantRep reconstruct(const ThinnedSystem& ts, const Vec& a) {
  if (a.size() != ts.X.n()) throw std::invalid_argument("coefficient length mismatch");
  InterpolantRep rep;
  rep.X = ts.X;
  rep.kernel = ts.kernel;
  if (ts.basis_mode == BasisMode::lagrange) {
    Vec stacked = ts.lagrange_C * a;
    rep.c = stacked.head(ts.X.n());
    rep.b = stacked.tail(ts.dim_poly);
  } else {
    rep.c = a;
    rep.b = Vec();
  }
  return rep;
}

double kron_tile_check(const Mat& K, int kappa) {
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  if (static_cast<double>(kappa) * K.rows() * K.cols() > 1e6)
    throw std::invalid_argument("tiled matrix exceeds the memory guard");

  Mat tiled(kappa * K.rows(), K.cols());
  for (int r = 0; r < kappa; ++r) tiled.middleRows(r * K.rows(), K.rows()) = K;

  Eigen::BDCSVD<Mat> svd_base(K);
  Eigen::BDCSVD<Mat> svd_tiled(tiled);
  const double root = std::sqrt(static_cast<double>(kappa));
  return (svd_tiled.singularValues() - root * svd_base.singularValues()).cwiseAbs().maxCoeff();
}

}  // namespace kansa
