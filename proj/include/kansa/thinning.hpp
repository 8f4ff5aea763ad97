#pragma once

#include <vector>

#include "kansa/kansa.hpp"

namespace kansa {

// Strong rank-revealing QR (Gu-Eisenstat): F Pi = Q [A_k B_k; 0 C_k] with
//   sigma_min(A_k) >= sigma_k(F) / q1_bound,  q1_bound = sqrt(1 + f^2 k (n-k))
//   max |A_k^{-1} B_k| <= f_param
// Both bounds are verified on every invocation; violation throws.
struct RRQRResult {
  std::vector<int> selected;  // original column indices of F, pivot order
  std::vector<int> perm;      // full column permutation, length n
  Mat A_k;                    // k x k upper triangular, nonnegative diagonal
  Mat B_k;                    // k x (n-k)
  Mat trailing;               // (min(m,n)-k) x (n-k)
  double f_param = 0;
  double sigma_min_Ak = 0;
  double q1_bound = 0;
  int swap_count = 0;
  bool swap_budget_exhausted = false;  // stopped at 100*k swaps
};

RRQRResult strong_rrqr(const Mat& F, int k, double f_param);

// Square system on the thinned test set: rows of K_red are the selected rows
// of the source K, selected holds their indices into Y.
struct ThinnedSystem {
  PointSet X;
  PointSet Y_tilde;  // #Y_tilde = N
  ZonalKernel kernel;
  SpectralOperator op;
  BasisMode basis_mode = BasisMode::lagrange;
  int dim_poly = 0;
  Mat lagrange_C;
  Mat K_red;  // N x N
  double sigma_min = 0;
  std::vector<int> selected;
};

// Column subset selection on K^T with k = N. Selecting from the kappa-tiled
// matrix e_kappa (x) K would pick among duplicate column groups, and a strong
// RRQR pivot never takes two parallel columns while a distinct informative
// one remains (a duplicate makes det(A_k) = 0), so running on K^T directly is
// equivalent; the tiling survives only in kron_tile_check.
ThinnedSystem thin(const KansaSystem& sys, double f_param = 2.0);

SolveReport solve_thinned(const ThinnedSystem& ts, const Vec& f_on_Ytilde);

InterpolantRep reconstruct(const ThinnedSystem& ts, const Vec& a);

// max_j |sigma_j(e_kappa (x) K) - sqrt(kappa) sigma_j(K)|, both spectra by
// dense SVD. Guard: kappa * size(K) <= 1e6 entries.
double kron_tile_check(const Mat& K, int kappa);

}  // namespace kansa
