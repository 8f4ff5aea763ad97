#pragma once

#include <cstdint>

#include "kansa/kernels.hpp"

namespace kansa {

// Bordered SCPD collocation system
//   [ A  P ] [c]   [v]
//   [ P^T 0 ] [b] = [0],  A_ij = Z(x_i . x_j), P_{i,(ell,m)} = Y_{ell,m}(x_i),
// with harmonics through degree order-1. One factorization serves any number
// of right-hand sides; solves apply one step of iterative refinement.
struct SaddleSystem {
  PointSet X;
  ZonalKernel kernel;
  int dim_poly = 0;
  Mat bordered;                  // (N+P) x (N+P)
  Eigen::PartialPivLU<Mat> lu;

  // refined solve of bordered * sol = rhs (column-wise)
  Mat solve(const Mat& rhs) const;
};

// Throws "non-unisolvent centers" when rank(P) < dim_poly (pivoted QR with
// threshold 1e-10 * ||P||).
SaddleSystem assemble_saddle(const PointSet& X, const ZonalKernel& kernel);

// g = sum_xi c_xi Z(. , xi) + sum_{ell,m} b_{ell,m} Y_{ell,m}, with the side
// conditions P^T c = 0.
struct InterpolantRep {
  PointSet X;
  ZonalKernel kernel;
  Vec c;  // kernel coefficients, length N
  Vec b;  // polynomial part, length dim_poly

  double operator()(const Point& x) const;
};

Vec eval_rep_many(const InterpolantRep& rep, const Mat& pts);

InterpolantRep interpolate(const SaddleSystem& sys, const Vec& values);
InterpolantRep interpolate(const PointSet& X, const ZonalKernel& kernel, const Vec& values);

// chi_j with chi_j(x_i) = delta_ij; column j of C stacks [c^(j); b^(j)].
struct LagrangeBasis {
  PointSet X;
  ZonalKernel kernel;
  int dim_poly = 0;
  Mat C;  // (N + dim_poly) x N
};

LagrangeBasis lagrange_basis(const SaddleSystem& sys);
LagrangeBasis lagrange_basis(const PointSet& X, const ZonalKernel& kernel);
InterpolantRep basis_function(const LagrangeBasis& basis, int j);

// (L g)(x) = sum c_xi (L Z)(x . xi) + sum b_{ell,m} m(ell) Y_{ell,m}(x).
double eval_trial(const InterpolantRep& rep, const SpectralOperator& op, const Point& x);
Vec eval_trial_many(const InterpolantRep& rep, const SpectralOperator& op, const Mat& pts);

// Values of every Lagrange basis function (or its L-image) at pts:
// out(i, j) = chi_j(pts_i). Assembled as one matrix product.
Mat lagrange_values(const LagrangeBasis& basis, const Mat& pts);
Mat lagrange_trial_values(const LagrangeBasis& basis, const SpectralOperator& op, const Mat& pts);

enum class BasisMode { standard, lagrange };

// r2 = 1 / sqrt(lambda_min(Gram_L2)) for the chosen basis of S_X(Z); the Gram
// is assembled by quadrature of degree max(60, 2*ceil(pi/q)) capped at 240.
struct StabilityReport {
  double r2 = 0;
  int quad_degree = 0;
};

StabilityReport stability_ratio(const PointSet& X, const ZonalKernel& kernel, BasisMode mode);
double stability_ratio_from_gram(const Mat& gram);

// Empirical Riesz frame bounds for the Lagrange basis: extremes of
// ||sum a_j chi_j||_{L2} / (q^{d/2} ||a||) over random unit coefficient
// vectors.
struct RieszReport {
  double c_L_hat = 0;  // smallest observed ratio
  double C_R_hat = 0;  // largest observed ratio
  int trials = 0;
};

RieszReport riesz_check(const LagrangeBasis& basis, int trials, const QuadratureRule& rule,
                        std::uint64_t seed);

// Empirical Bernstein constant: max over random trial-space elements of
// ||w||_{H^{gamma+eps}} * q^{gamma} / ||w||_{H^{eps}}, Sobolev norms from
// spectral analysis up to max_degree = min(120, 3*ceil(pi/q)). Requires
// gamma + eps < 2*tau - d/2. tail_fraction is the share of the H^{gamma+eps}
// mass above degree 0.9*max_degree for the maximizing sample (truncation
// quality).
struct BernsteinReport {
  double max_ratio = 0;
  double tail_fraction = 0;
  int max_degree = 0;
  int trials = 0;
};

BernsteinReport bernstein_check(const PointSet& X, const ZonalKernel& kernel,
                                const SpectralOperator& op, double gamma, double eps, int trials,
                                const QuadratureRule& rule, std::uint64_t seed);

}  // namespace kansa
