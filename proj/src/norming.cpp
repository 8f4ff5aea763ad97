#include "kansa/norming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace kansa {

namespace {

// pool size giving candidate fill <= eps/4 for the structured families:
// equispaced circle has h = pi/n, the Fibonacci lattice h <= 2.8/sqrt(n)
int pool_size_for(int d, double eps, int candidate_density, int n_base) {
  double needed = d == 1 ? 4.0 * M_PI / eps : std::pow(4.0 * 2.8 / eps, 2);
  double base = static_cast<double>(candidate_density) * n_base;
  return static_cast<int>(std::ceil(std::max(base, needed)));
}

double pool_fill(int d, int n_pool) {
  return d == 1 ? M_PI / n_pool : 2.8 / std::sqrt(static_cast<double>(n_pool));
}

}  // namespace

PointSet build_norming_set(const PointSet& X, double sigma, int candidate_density) {
  if (sigma < 1) throw std::invalid_argument("sigma must be >= 1");
  if (candidate_density < 1) throw std::invalid_argument("candidate_density must be positive");
  const double eps = X.h / sigma;
  const int n_pool = pool_size_for(X.d, eps, candidate_density, X.n());
  Mat pool = fibonacci_coords(n_pool, X.d);
  return build_norming_set(X, sigma, pool, pool_fill(X.d, n_pool));
}

PointSet build_norming_set(const PointSet& X, double sigma, const Mat& candidates,
                           double candidate_fill) {
  if (sigma < 1) throw std::invalid_argument("sigma must be >= 1");
  const double eps = X.h / sigma;
  PointSet Y = greedy_net(candidates, candidate_fill, X.d, eps);
  if (Y.rho > 2.5) throw std::runtime_error("norming set candidate pool too coarse (rho > 2.5)");
  return Y;
}

NormingReport norming_check(const PointSet& Y, const PointSet& X, const ZonalKernel& kernel,
                            const SpectralOperator& op, int trials, const QuadratureRule& rule,
                            std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (Y.d != X.d) throw std::invalid_argument("dimension mismatch between X and Y");
  const int n = X.n();
  const int m = Y.n();

  LagrangeBasis basis = lagrange_basis(X, kernel);
  Mat vals_Y = lagrange_trial_values(basis, op, Y.coords);      // M x N
  Mat vals_q = lagrange_trial_values(basis, op, rule.nodes);    // nodes x N

  // r(w)^2 = a^T G_L2 a / (a^T G_Y a) with G_Y = vals_Y^T vals_Y / M
  Mat G_L2 = vals_q.transpose() * rule.weights.asDiagonal() * vals_q;
  G_L2 = 0.5 * (G_L2 + G_L2.transpose()).eval();
  Mat G_Y = vals_Y.transpose() * vals_Y / static_cast<double>(m);
  G_Y = 0.5 * (G_Y + G_Y.transpose()).eval();

  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  NormingReport rep;
  rep.Y = Y;
  rep.kappa = static_cast<double>(m) / n;
  rep.trials = trials;

  Vec best = Vec::Zero(n);
  double best_sq = -1;
  for (int t = 0; t < trials; ++t) {
    Vec a(n);
    for (int i = 0; i < n; ++i) a(i) = gauss(eng);
    a /= a.norm();
    const double num = a.dot(G_L2 * a);
    const double den = a.dot(G_Y * a);
    if (den <= 1e-14 * num)
      throw std::runtime_error("not a norming set witness");
    const double sq = num / den;
    if (sq > best_sq) {
      best_sq = sq;
      best = a;
    }
  }

  if (n <= 150) {
    // The pencil solve needs G_Y positive definite; a singular discrete Gram
    // means some w in the space vanishes on Y.
    Eigen::LLT<Mat> probe(G_Y);
    if (probe.info() != Eigen::Success)
      throw std::runtime_error("not a norming set witness");
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(G_L2, G_Y);
    const double lmax = ges.eigenvalues().maxCoeff();
    if (!std::isfinite(lmax)) throw std::runtime_error("not a norming set witness");
    if (lmax > best_sq) {
      best_sq = lmax;
      int idx = 0;
      ges.eigenvalues().maxCoeff(&idx);
      best = ges.eigenvectors().col(idx);
      best /= best.norm();
    }
  } else {
    // power iteration on G_Y^{-1} G_L2 from the best sampled start
    Eigen::LLT<Mat> llt(G_Y);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("not a norming set witness");
    Vec v = best;
    for (int it = 0; it < 200; ++it) {
      v = llt.solve(G_L2 * v);
      v /= v.norm();
    }
    const double num = v.dot(G_L2 * v);
    const double den = v.dot(G_Y * v);
    if (den > 0 && num / den > best_sq) {
      best_sq = num / den;
      best = v;
    }
  }

  rep.C_N_hat = std::sqrt(best_sq);
  rep.worst_witness = best;
  return rep;
}

MzReport mz_check(const PointSet& Y, const Mat& basis_on_Y, const Mat& basis_on_quad,
                  const QuadratureRule& rule, int p, int trials, std::uint64_t seed) {
  if (p != 2) throw std::invalid_argument("only p = 2 is supported");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (basis_on_Y.rows() != Y.n()) throw std::invalid_argument("basis_on_Y row count mismatch");
  if (basis_on_Y.cols() != basis_on_quad.cols())
    throw std::invalid_argument("basis column count mismatch");
  const int k = static_cast<int>(basis_on_Y.cols());
  const double w_d = omega(Y.d);

  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  MzReport rep;
  rep.trials = trials;
  rep.eps_low_hat = std::numeric_limits<double>::infinity();
  rep.eps_high_hat = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Vec a(k);
    for (int i = 0; i < k; ++i) a(i) = gauss(eng);
    Vec wY = basis_on_Y * a;
    Vec wq = basis_on_quad * a;
    const double discrete = wY.squaredNorm() / Y.n();
    const double l2sq = wq.array().square().matrix().dot(rule.weights);
    if (l2sq <= 0) continue;
    const double ratio = discrete * w_d / l2sq;
    rep.eps_low_hat = std::min(rep.eps_low_hat, ratio);
    rep.eps_high_hat = std::max(rep.eps_high_hat, ratio);
  }
  return rep;
}

}  // namespace kansa
