#include "kansa/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kansa {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("d must be 1 or 2");
}

// sup_t |Proj_ell(t)|, attained at t = 1.
double projector_sup(int d, int ell) {
  if (d == 2) return (2.0 * ell + 1.0) / (4.0 * kPi);
  return ell == 0 ? 1.0 / (2.0 * kPi) : 1.0 / kPi;
}

void check_positive_tail(const ZonalKernel& k) {
  for (int ell = k.order; ell <= 200; ++ell)
    if (k.coeff(ell) <= 0.0)
      throw std::runtime_error(k.name + ": coefficient at ell=" + std::to_string(ell) +
                               " is not positive");
}

void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// zhat_ell for ell = 0..lmax of a closed-form zonal function, by projection
// onto the addition-theorem basis.
std::vector<double> project_zhat(const std::function<double(double)>& f, int d, int lmax) {
  std::vector<double> out(lmax + 1, 0.0);
  if (d == 2) {
    // zhat_ell = 2 pi * int_{-1}^{1} f(t) P_ell(t) dt
    const int n = 2048;
    std::vector<double> x, w;
    gauss_legendre_unit(n, x, w);
    std::vector<double> fv(n);
    for (int i = 0; i < n; ++i) fv[i] = f(x[i]);
    std::vector<double> pm1(n, 1.0), p(n);
    for (int i = 0; i < n; ++i) p[i] = x[i];
    for (int i = 0; i < n; ++i) out[0] += w[i] * fv[i];
    if (lmax >= 1)
      for (int i = 0; i < n; ++i) out[1] += w[i] * fv[i] * p[i];
    for (int l = 1; l < lmax; ++l) {
      for (int i = 0; i < n; ++i) {
        const double pn = ((2.0 * l + 1.0) * x[i] * p[i] - l * pm1[i]) / (l + 1.0);
        pm1[i] = p[i];
        p[i] = pn;
        out[l + 1] += w[i] * fv[i] * pn;
      }
    }
    for (double& v : out) v *= 2.0 * kPi;
    return out;
  }
  // d = 1: zhat_ell = int_0^{2 pi} f(cos th) cos(ell th) dth, trapezoid.
  const int n = 1 << 16;
  std::vector<double> fv(n);
  for (int i = 0; i < n; ++i) fv[i] = f(std::cos((i + 0.5) * 2.0 * kPi / n));
  for (int l = 0; l <= lmax; ++l) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += fv[i] * std::cos(l * (i + 0.5) * 2.0 * kPi / n);
    out[l] = acc * 2.0 * kPi / n;
  }
  return out;
}

}  // namespace

double ZonalKernel::coeff(int ell) const {
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  if (ell < order) return low_zhat.at(ell);
  return coeff_rule(ell);
}

double zonal_projector(int d, int ell, double t) {
  check_dim(d);
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  if (d == 2) return (2.0 * ell + 1.0) / (4.0 * kPi) * gegenbauer(0.5, ell, t);
  if (ell == 0) return 1.0 / (2.0 * kPi);
  // T_ell(t) / pi by recurrence
  double tm1 = 1.0, tc = t;
  for (int k = 1; k < ell; ++k) {
    const double tn = 2.0 * t * tc - tm1;
    tm1 = tc;
    tc = tn;
  }
  return tc / kPi;
}

std::vector<double> polynomial_part_coeffs(const ZonalKernel& k) {
  // Convert zhat (addition-theorem normalization) to plain basis coefficients:
  //   d = 2: zhat * (ell + 1/2) / (2 pi) multiplies C_ell^{1/2},
  //   d = 1: zhat / (2 pi) for ell = 0, zhat / pi for ell >= 1 multiplies T_ell.
  std::vector<double> out(k.low_zhat.size());
  for (size_t ell = 0; ell < k.low_zhat.size(); ++ell) {
    if (k.d == 2)
      out[ell] = k.low_zhat[ell] * (ell + 0.5) / (2.0 * kPi);
    else
      out[ell] = k.low_zhat[ell] / (ell == 0 ? 2.0 * kPi : kPi);
  }
  return out;
}

ZonalKernel tps_kernel(int s, int d) {
  check_dim(d);
  if (s < 2) throw std::invalid_argument("tps_kernel needs integer s >= 2");
  ZonalKernel k;
  k.d = d;
  k.order = s + 1;
  k.smoothness = s + d / 2.0;
  k.name = "tps(s=" + std::to_string(s) + ")";

  const double sign = (s % 2 == 0) ? -1.0 : 1.0;  // (-1)^{s+1}
  k.closed_form = [s, sign](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0) return 0.0;
    return sign * std::pow(u, s) * std::log(u);
  };
  k.closed_form_d1 = [s, sign](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0) return 0.0;
    return -sign * std::pow(u, s - 1) * (s * std::log(u) + 1.0);
  };
  k.closed_form_d2 = [s, sign](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0)
      return s == 2 ? std::numeric_limits<double>::infinity() : 0.0;
    return sign * std::pow(u, s - 2) * (s * (s - 1.0) * std::log(u) + 2.0 * s - 1.0);
  };
  k.surface_lap = [s, sign, d](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0) return 0.0;
    const double lg = std::log(u);
    return sign * std::pow(u, s - 1) *
           ((1.0 + t) * (s * (s - 1.0) * lg + 2.0 * s - 1.0) + d * t * (s * lg + 1.0));
  };

  const double csd = std::pow(2.0, s + d) * std::pow(kPi, d / 2.0) * std::tgamma(s + 1.0) *
                     std::tgamma(s + d / 2.0);
  k.coeff_rule = [s, d, csd](int ell) {
    if (ell <= s) throw std::logic_error("tps rule evaluated below the SCPD order");
    return csd * std::exp(std::lgamma(static_cast<double>(ell) - s) -
                          std::lgamma(static_cast<double>(ell) + s + d));
  };
  k.low_zhat = project_zhat(k.closed_form, d, s);
  check_positive_tail(k);
  return k;
}

double g_beta_coefficient(double beta, int d, int ell) {
  return std::pow(ell + lambda_param(d), -beta);
}

ZonalKernel g_beta_kernel(double beta, int d) {
  check_dim(d);
  if (beta <= d)
    throw std::invalid_argument("g_beta_kernel needs beta > d for a summable series");
  ZonalKernel k;
  k.d = d;
  k.order = 0;
  k.smoothness = beta / 2.0;
  k.name = "g_beta(beta=" + std::to_string(beta) + ")";
  k.coeff_rule = [beta, d](int ell) { return g_beta_coefficient(beta, d, ell); };
  check_positive_tail(k);
  return k;
}

ZonalKernel psi_beta_kernel(double beta, int d, const std::vector<double>& psi_hat) {
  check_dim(d);
  if (beta <= d)
    throw std::invalid_argument("psi_beta_kernel needs beta > d for a summable series");
  for (size_t i = 0; i < psi_hat.size(); ++i)
    if (1.0 + psi_hat[i] <= 0.0)
      throw std::invalid_argument("psi_hat must keep 1 + psi_hat(ell) > 0");
  ZonalKernel k;
  k.d = d;
  k.order = 0;
  k.smoothness = beta / 2.0;
  k.name = "psi_beta(beta=" + std::to_string(beta) + ")";
  k.coeff_rule = [beta, d, psi_hat](int ell) {
    const double fac =
        1.0 + (static_cast<size_t>(ell) < psi_hat.size() ? psi_hat[ell] : 0.0);
    return g_beta_coefficient(beta, d, ell) * fac;
  };
  check_positive_tail(k);
  return k;
}

double eval_zonal_series(const ZonalKernel& k, double t, double tol, int lmax_cap) {
  if (t < -1.0 - 1e-12 || t > 1.0 + 1e-12) throw std::invalid_argument("t outside [-1, 1]");
  t = std::min(1.0, std::max(-1.0, t));
  const double tau = k.smoothness;
  // terms g(ell) = |zhat_ell| sup|Proj_ell| decay like ell^{-p};
  // tail(L) <= g(L+1) (L+1)^{p} L^{1-p} / (p - 1) by integral comparison.
  const double p = 2.0 * tau - (k.d == 2 ? 1.0 : 0.0);
  if (p <= 1.0) throw std::invalid_argument("series tail not summable (smoothness too low)");

  double acc = 0.0;
  // Legendre (d=2) / Chebyshev (d=1) recurrence carried inline.
  double pm1 = 1.0, pc = t;
  const int start_check = std::max(k.order + 2, 8);
  for (int ell = 0; ell <= lmax_cap; ++ell) {
    double proj;
    if (k.d == 2) {
      double pl;
      if (ell == 0)
        pl = 1.0;
      else if (ell == 1)
        pl = t;
      else {
        const int l = ell - 1;
        const double pn = ((2.0 * l + 1.0) * t * pc - l * pm1) / (l + 1.0);
        pm1 = pc;
        pc = pn;
        pl = pn;
      }
      proj = (2.0 * ell + 1.0) / (4.0 * kPi) * pl;
    } else {
      double tl;
      if (ell == 0)
        tl = 1.0;
      else if (ell == 1)
        tl = t;
      else {
        const double tn = 2.0 * t * pc - pm1;
        pm1 = pc;
        pc = tn;
        tl = tn;
      }
      proj = ell == 0 ? 1.0 / (2.0 * kPi) : tl / kPi;
    }
    acc += k.coeff(ell) * proj;
    if (ell >= start_check) {
      const double g_next = std::abs(k.coeff(ell + 1)) * projector_sup(k.d, ell + 1);
      const double tail = g_next * std::pow(ell + 1.0, p) * std::pow(static_cast<double>(ell), 1.0 - p) /
                          (p - 1.0);
      if (1.5 * tail < tol) return acc;
    }
  }
  throw std::runtime_error(k.name + ": series cap reached before tail bound met tol");
}

double eval_zonal(const ZonalKernel& k, double t, double tol) {
  if (k.closed_form) {
    if (t < -1.0 - 1e-12 || t > 1.0 + 1e-12) throw std::invalid_argument("t outside [-1, 1]");
    return k.closed_form(std::min(1.0, std::max(-1.0, t)));
  }
  return eval_zonal_series(k, t, tol);
}

namespace {

SpectralOperator finish_operator(SpectralOperator op, bool enforce_finite) {
  const double lam = lambda_param(op.d);
  double inf_m = std::numeric_limits<double>::infinity();
  double g1 = 0.0, g2 = 0.0;
  auto ratios = [&](int ell, double& r1, double& r2) {
    const double m = op.multiplier(ell);
    if (m <= 0.0)
      throw std::invalid_argument("multiplier must be positive at ell=" + std::to_string(ell));
    const double pw = std::pow(ell + lam, static_cast<double>(op.order));
    r1 = m / pw;
    r2 = pw / m;
  };
  // ell = 0 with lam = 0 (d = 1) makes the weight vanish; the constants are
  // then seminorm-based and ell = 0 is skipped.
  const int ell0 = (lam == 0.0 && op.order > 0) ? 1 : 0;
  for (int ell = 0; ell <= 10000; ++ell) {
    const double m = op.multiplier(ell);
    if (m <= 0.0)
      throw std::invalid_argument("multiplier must be positive at ell=" + std::to_string(ell));
    inf_m = std::min(inf_m, m);
    if (ell < ell0) continue;
    double r1, r2;
    ratios(ell, r1, r2);
    g1 = std::max(g1, r1);
    g2 = std::max(g2, r2);
  }
  // asymptotic check: a ratio still growing from ell = 1e5 to 1e6 has no finite sup
  double a1, a2, b1, b2;
  ratios(100000, a1, a2);
  ratios(1000000, b1, b2);
  if (enforce_finite && b1 > 1.001 * a1 && b1 > g1)
    throw std::invalid_argument("multiplier grows faster than (ell+lambda)^order");
  if (enforce_finite && b2 > 1.001 * a2 && b2 > g2)
    throw std::invalid_argument("multiplier decays faster than (ell+lambda)^{-order}");
  op.c_L = inf_m;
  op.Gamma1 = std::max({g1, a1, b1});
  op.Gamma2 = std::max({g2, a2, b2});
  if (op.c_L <= 0.0) throw std::invalid_argument("multiplier must have a positive floor");
  return op;
}

}  // namespace

SpectralOperator helmholtz_operator(double c, int d) {
  check_dim(d);
  if (c <= 0.0) throw std::invalid_argument("helmholtz_operator needs c > 0");
  SpectralOperator op;
  op.d = d;
  op.order = 2;
  op.name = "helmholtz(c=" + std::to_string(c) + ")";
  op.multiplier = [c, d](int ell) { return c + laplacian_eigenvalue(d, ell); };
  op.helmholtz_c = c;
  return finish_operator(std::move(op), true);
}

SpectralOperator identity_multiplier(int d) {
  check_dim(d);
  SpectralOperator op;
  op.d = d;
  op.order = 0;
  op.name = "identity";
  op.multiplier = [](int) { return 1.0; };
  op.is_identity = true;
  op.c_L = 1.0;
  op.Gamma1 = 1.0;
  op.Gamma2 = 1.0;  // order 0: ratios are m and 1/m
  return op;
}

SpectralOperator operator_from_multiplier(int d, std::function<double(int)> m, int order,
                                          const std::string& name) {
  check_dim(d);
  SpectralOperator op;
  op.d = d;
  op.order = order;
  op.name = name;
  op.multiplier = std::move(m);
  return finish_operator(std::move(op), true);
}

ZonalKernel apply_operator(const ZonalKernel& k, const SpectralOperator& op) {
  if (k.d != op.d) throw std::invalid_argument("kernel and operator dimension mismatch");
  if (op.is_identity) return k;
  if (!(k.smoothness > op.order / 2.0 + k.d / 2.0))
    throw std::invalid_argument(
        "apply_operator: resulting coefficients not summable (need tau > order/2 + d/2)");
  ZonalKernel out;
  out.d = k.d;
  out.order = k.order;
  out.smoothness = k.smoothness - op.order / 2.0;
  out.name = op.name + "*" + k.name;
  auto base_rule = k.coeff_rule;
  auto mult = op.multiplier;
  out.coeff_rule = [base_rule, mult](int ell) { return mult(ell) * base_rule(ell); };
  out.low_zhat = k.low_zhat;
  for (size_t ell = 0; ell < out.low_zhat.size(); ++ell)
    out.low_zhat[ell] *= op.multiplier(static_cast<int>(ell));
  if (op.helmholtz_c && (k.surface_lap || (k.closed_form_d1 && k.closed_form_d2))) {
    const double c = *op.helmholtz_c;
    ZonalKernel base = k;  // keeps the closed-form pieces alive in the lambda
    out.closed_form = [base, c](double t) {
      return c * base.closed_form(t) - laplacian_closed_form(base, t);
    };
  }
  check_positive_tail(out);
  return out;
}

double laplacian_closed_form(const ZonalKernel& k, double t) {
  if (t < -1.0 - 1e-12 || t > 1.0 + 1e-12) throw std::invalid_argument("t outside [-1, 1]");
  t = std::min(1.0, std::max(-1.0, t));
  if (k.surface_lap) return k.surface_lap(t);
  if (k.closed_form_d1 && k.closed_form_d2)
    return (1.0 - t * t) * k.closed_form_d2(t) - k.d * t * k.closed_form_d1(t);
  throw std::invalid_argument(k.name + ": no closed form with derivatives");
}

ZonalKernel kernel_from_json(const nlohmann::json& j, int d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tps") return tps_kernel(j.at("s").get<int>(), d);
  if (kind == "g_beta") return g_beta_kernel(j.at("beta").get<double>(), d);
  if (kind == "psi_beta") {
    std::vector<double> psi;
    if (j.contains("psi_hat")) psi = j.at("psi_hat").get<std::vector<double>>();
    return psi_beta_kernel(j.at("beta").get<double>(), d, psi);
  }
  throw std::invalid_argument("unknown kernel kind: " + kind);
}

}  // namespace kansa
