#pragma once

#include <functional>

#include <nlohmann/json_fwd.hpp>

#include "kansa/geometry.hpp"

namespace kansa {

// (d-1)/2, the ultraspherical index of S^d.
double lambda_param(int d);

// dim of the space of spherical harmonics of exact degree ell on S^d.
// For d >= 2 this is N_{d,ell} = (2*ell + d - 1) * Gamma(ell + d - 1) /
// (Gamma(ell + 1) * Gamma(d)), evaluated in exact integer arithmetic; the
// circle (d = 1) has dim 1 for ell = 0 and 2 otherwise.
long long harmonic_dim(int d, int ell);

// dim of Pi_L = harmonics of degree <= L; pass L = -1 for 0.
long long harmonic_space_dim(int d, int L);

// Eigenvalue of -Delta on degree-ell harmonics: ell * (ell + d - 1).
double laplacian_eigenvalue(int d, int ell);

// Gegenbauer C_n^lambda(t) by the three-term recurrence
// (n+1) C_{n+1} = 2 (n+lambda) t C_n - (n + 2 lambda - 1) C_{n-1}.
double gegenbauer(double lambda, int n, double t);

// Real orthonormal basis. Index m in [0, N_{d,ell}):
//   d = 2: m = 0 is zonal; m = 2k-1 the cos(k phi) component, m = 2k the sin.
//   d = 1: ell = 0 -> 1/sqrt(2 pi); ell >= 1: m = 0 cos(ell th)/sqrt(pi),
//          m = 1 sin(ell th)/sqrt(pi).
double real_harmonic(int d, int ell, int m, const Point& x);

// All degrees 0..max_degree at once; column layout matches the flat index
// ell^2 + m (d = 2) / harmonic_space_dim(1, ell-1) + m (d = 1).
Mat harmonic_block(int d, int max_degree, const Mat& pts);

long long flat_harmonic_index(int d, int ell, int m);

struct HarmonicExpansion {
  int d = 2;
  int max_degree = 0;
  Vec coeffs;  // flat, size harmonic_space_dim(d, max_degree)

  double at(int ell, int m) const;
  void set(int ell, int m, double value);
};

HarmonicExpansion zero_expansion(int d, int max_degree);

// Coefficients by quadrature, c_{ell,m} = sum_i w_i f(x_i) Y_{ell,m}(x_i).
// Requires rule.design_degree >= 2 * max_degree.
HarmonicExpansion analyze(const std::function<double(const Point&)>& f, int d,
                          int max_degree, const QuadratureRule& rule);

double synthesize(const HarmonicExpansion& e, const Point& x);
Vec synthesize_many(const HarmonicExpansion& e, const Mat& pts);

// sqrt( sum (ell + lambda_d)^{2s} c_{ell,m}^2 ).
double sobolev_norm(const HarmonicExpansion& e, double s);

// JSON: {"d": d, "max_degree": L, "coefficients": [[ell, m, value], ...]}.
nlohmann::json expansion_to_json(const HarmonicExpansion& e);
HarmonicExpansion expansion_from_json(const nlohmann::json& j);

}  // namespace kansa
