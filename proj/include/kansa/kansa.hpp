#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "kansa/collocation.hpp"

namespace kansa {

// Oversampled Kansa system K a = f|_Y with K(j,k) = (L B_k)(y_j). Lagrange
// mode uses B_k = chi_k via K = K_std * C; standard mode uses the raw kernel
// translates B_k = Z(., x_k). M >= N always.
struct KansaSystem {
  PointSet X;
  PointSet Y;
  ZonalKernel kernel;
  SpectralOperator op;
  BasisMode basis_mode = BasisMode::lagrange;
  Mat K;             // M x N
  double kappa = 0;  // M / N
  int dim_poly = 0;
  Mat lagrange_C;    // (N + dim_poly) x N, empty in standard mode
};

KansaSystem assemble_kansa(const PointSet& X, const PointSet& Y, const ZonalKernel& kernel,
                           const SpectralOperator& op, BasisMode mode = BasisMode::lagrange);
// reuses a prebuilt Lagrange basis
KansaSystem assemble_kansa(const LagrangeBasis& basis, const PointSet& Y,
                           const SpectralOperator& op);

struct SolveReport {
  Vec a;
  double residual_norm = 0;  // ||K a - f|_Y||
  double sigma_min = 0;      // sigma_N(K)
  std::optional<double> l2_error;
  double wall_time = 0;      // seconds
  std::string sigma_method;  // "svd" or "inverse-iteration"
};

// (sigma_min, sigma_max) of F: full SVD when min(m, n) <= 800, otherwise
// power/inverse-power iteration on the small-side Gram matrix. method
// receives the route taken when non-null.
std::pair<double, double> singular_value_range(const Mat& F, std::string* method = nullptr);
double smallest_singular_value(const Mat& F, std::string* method = nullptr);

// a = argmin ||K a - f|| by column-pivoted QR. Throws "rank-deficient Kansa
// matrix" when sigma_N < 1e-12 * sigma_max.
SolveReport solve_least_squares(const KansaSystem& sys, const Vec& f_on_Y);

// Diagnostics for G = K^T K per the stability bounds: ||G^{-1}|| = 1/sigma_N^2
// and the products the theory keeps bounded.
struct GramDiagnostics {
  double sigma_min = 0;
  double gram_inverse_norm = 0;  // 1 / sigma_N^2
  double bound_product = 0;      // gram_inverse_norm * kappa
  double sigma_scaled = 0;       // sigma_N / sqrt(kappa)
};

GramDiagnostics gram_diagnostics(const KansaSystem& sys);

// u* = sum_k a_k B_k in the system's basis mode. Standard mode has no
// polynomial part and need not satisfy the side conditions.
InterpolantRep reconstruct(const KansaSystem& sys, const Vec& a);

// ||g - ref||_{L2} by quadrature
double l2_error(const InterpolantRep& g, const std::function<double(const Point&)>& ref,
                const QuadratureRule& rule);

}  // namespace kansa
