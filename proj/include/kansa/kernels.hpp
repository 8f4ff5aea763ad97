#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kansa/spectral.hpp"

namespace kansa {

// Zonal kernel Z(x . y) = sum_ell zhat_ell * Proj_ell(x . y) where Proj_ell is
// the degree-ell reproducing kernel (addition-theorem normalization). SCPD of
// order `order`: zhat_ell > 0 for ell >= order (checked for ell <= 200), the
// low coefficients may have either sign.
struct ZonalKernel {
  int d = 2;
  int order = 0;           // SCPD order L; 0 means SPD
  double smoothness = 0;   // tau, with zhat_ell ~ ell^{-2 tau}
  std::string name;

  std::function<double(int)> coeff_rule;  // zhat_ell for ell >= order
  std::vector<double> low_zhat;           // zhat_ell for ell < order

  // Optional closed form f with t |-> f(t); derivatives where available.
  // surface_lap(t) = (1 - t^2) f''(t) - d t f'(t), with the t -> 1 limit built in.
  std::function<double(double)> closed_form;
  std::function<double(double)> closed_form_d1;
  std::function<double(double)> closed_form_d2;
  std::function<double(double)> surface_lap;

  double coeff(int ell) const;
};

// Degree-ell reproducing kernel as a function of t = x . y:
//   d = 2: (2 ell + 1)/(4 pi) P_ell(t)
//   d = 1: 1/(2 pi) for ell = 0, T_ell(t)/pi for ell >= 1.
double zonal_projector(int d, int ell, double t);

// Polynomial-part coefficients b_ell for ell < order in the plain Gegenbauer
// basis (C_ell^{lambda_d} for d = 2, Chebyshev T_ell for d = 1).
std::vector<double> polynomial_part_coeffs(const ZonalKernel& k);

// Thin-plate spline phi_s(t) = (-1)^{s+1} (1 - t)^s log(1 - t), s integer >= 2.
// Spectral side: zhat_ell = 2^{s+d} pi^{d/2} Gamma(s+1) Gamma(s+d/2)
//                           * Gamma(ell-s)/Gamma(ell+s+d) for ell > s;
// coefficients for ell <= s come from numerical projection of the closed form.
// SCPD order s + 1, smoothness tau = s + d/2.
ZonalKernel tps_kernel(int s, int d);

// (ell + lambda_d)^{-beta}; exposed separately so the rule is testable at any beta.
double g_beta_coefficient(double beta, int d, int ell);

// SPD kernel with coeff(ell) = (ell + lambda_d)^{-beta}; requires beta > d.
ZonalKernel g_beta_kernel(double beta, int d);

// coeff(ell) = (ell + lambda_d)^{-beta} (1 + psi_hat(ell)); psi_hat entries
// beyond the supplied vector are 0; requires 1 + psi_hat(ell) > 0.
ZonalKernel psi_beta_kernel(double beta, int d, const std::vector<double>& psi_hat = {});

// Closed form when present, else the spectral series summed with a monotone
// power-law tail majorant until the tail bound drops below tol. Throws when
// the cap (default 4000 terms) cannot meet tol.
double eval_zonal(const ZonalKernel& k, double t, double tol = 1e-8);
double eval_zonal_series(const ZonalKernel& k, double t, double tol = 1e-8, int lmax_cap = 4000);

// Elliptic operator, diagonal in harmonics: (L g)^(ell) = m(ell) g^(ell).
//   c_L    = inf m
//   Gamma1 = sup m(ell)/(ell+lambda)^order, Gamma2 = sup (ell+lambda)^order/m(ell),
// both evaluated on ell <= 10^4 with an asymptotic check.
struct SpectralOperator {
  int d = 2;
  int order = 2;
  std::string name;
  std::function<double(int)> multiplier;
  double c_L = 0;
  double Gamma1 = 0;
  double Gamma2 = 0;
  std::optional<double> helmholtz_c;  // set for c - Delta
  bool is_identity = false;
};

// m(ell) = c + ell (ell + d - 1); requires c > 0.
SpectralOperator helmholtz_operator(double c, int d);

// m == 1; for testing assembly paths. Gamma2 is unbounded and left infinite.
SpectralOperator identity_multiplier(int d);

// General positive multiplier; throws if m <= 0 somewhere on ell <= 10^4 or if
// the ellipticity ratios keep growing at the cap.
SpectralOperator operator_from_multiplier(int d, std::function<double(int)> m, int order = 2,
                                          const std::string& name = "custom");

// Kernel with coefficients m(ell) * zhat_ell. Requires summability of the
// result: tau > order/2 + d/2. Carries a composed closed form when the
// operator is Helmholtz and the input kernel has surface_lap.
ZonalKernel apply_operator(const ZonalKernel& k, const SpectralOperator& op);

// (1 - t^2) f''(t) - d t f'(t) from the kernel's closed-form data; prefers the
// dedicated surface_lap (exact t -> 1 limits), else composes d1/d2.
double laplacian_closed_form(const ZonalKernel& k, double t);

// {"kind": "tps"|"g_beta"|"psi_beta", "s"|"beta": number, "psi_hat": [...]}.
ZonalKernel kernel_from_json(const nlohmann::json& j, int d);

}  // namespace kansa
