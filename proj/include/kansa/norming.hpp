#pragma once

#include <cstdint>

#include "kansa/collocation.hpp"

namespace kansa {

// Oversampled test set for S_X(L Phi): a greedy epsilon-net with
// epsilon = h_X / sigma drawn from a dense structured candidate pool.
// Output is quasi-uniform (rho <= 2.5, checked).
PointSet build_norming_set(const PointSet& X, double sigma, int candidate_density = 100);

// Same construction over an explicit candidate pool (rows on the sphere);
// candidate_fill is the pool's claimed fill distance.
PointSet build_norming_set(const PointSet& X, double sigma, const Mat& candidates,
                           double candidate_fill);

// Empirical norming constant of Y for the space spanned by {L chi_k}:
//   r(w) = ||w||_{L2} * sqrt(M) / ||w|_Y||_{l2},  C_N_hat = max over w.
// Random unit-coefficient trials are followed by an eigenvalue maximization
// of the pencil (Gram_L2, Gram_Y / M): dense for N <= 150, otherwise 200
// power iterations from the best sampled start.
struct NormingReport {
  PointSet Y;
  double kappa = 0;      // #Y / #X
  double C_N_hat = 0;
  int trials = 0;
  Vec worst_witness;     // coefficient vector achieving C_N_hat
};

NormingReport norming_check(const PointSet& Y, const PointSet& X, const ZonalKernel& kernel,
                            const SpectralOperator& op, int trials, const QuadratureRule& rule,
                            std::uint64_t seed = 20260816);

// Marcinkiewicz-Zygmund spread of Y for a sampled space: extremes over random
// w = basis * a of
//   ratio(w) = ((1/M) sum_Y w(y)^2) * omega_d / ||w||_{L2}^2,
// so constants give exactly 1. eps_low_hat/eps_high_hat are the (1 - eps) and
// (1 + eps) ratio estimates of Eq-style MZ bounds.
struct MzReport {
  double eps_low_hat = 0;   // min observed ratio
  double eps_high_hat = 0;  // max observed ratio
  int trials = 0;
};

MzReport mz_check(const PointSet& Y, const Mat& basis_on_Y, const Mat& basis_on_quad,
                  const QuadratureRule& rule, int p, int trials, std::uint64_t seed = 20260816);

}  // namespace kansa
