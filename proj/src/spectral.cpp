#include "kansa/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace kansa {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("d must be 1 or 2");
}

}  // namespace

double lambda_param(int d) {
  check_dim(d);
  return (d - 1) / 2.0;
}

long long harmonic_dim(int d, int ell) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  if (ell == 0) return 1;
  // Gamma(ell + d - 1) / Gamma(ell + 1) is the product (ell+1)...(ell+d-2)
  // only for d >= 2; on the circle it is 1/ell, so handle d = 1 directly.
  if (d == 1) return 2;
  // (2 ell + d - 1) * (ell+1)(ell+2)...(ell+d-2) / (d-1)!
  unsigned long long num = 2ull * ell + d - 1;
  unsigned long long den = 1;
  for (int j = 1; j <= d - 2; ++j) num *= ell + j;
  for (int j = 2; j <= d - 1; ++j) den *= j;
  if (num % den != 0) throw std::logic_error("harmonic_dim not integral");
  return static_cast<long long>(num / den);
}

long long harmonic_space_dim(int d, int L) {
  long long total = 0;
  for (int ell = 0; ell <= L; ++ell) total += harmonic_dim(d, ell);
  return total;
}

double laplacian_eigenvalue(int d, int ell) {
  check_dim(d);
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  return static_cast<double>(ell) * (ell + d - 1.0);
}

double gegenbauer(double lambda, int n, double t) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (n == 0) return 1.0;
  double cm1 = 1.0;
  double c = 2.0 * lambda * t;
  for (int k = 1; k < n; ++k) {
    const double cn = (2.0 * (k + lambda) * t * c - (k + 2.0 * lambda - 1.0) * cm1) / (k + 1.0);
    cm1 = c;
    c = cn;
  }
  return c;
}

long long flat_harmonic_index(int d, int ell, int m) {
  if (m < 0 || m >= harmonic_dim(d, ell)) throw std::invalid_argument("harmonic order out of range");
  return harmonic_space_dim(d, ell - 1) + m;
}

namespace {

// Normalized associated Legendre P~_l^m (so the zonal harmonic is P~_l^0 and
// the tesseral ones are sqrt(2) P~_l^m cos/sin(m phi)); sectoral seeding,
// forward-degree recurrence. scratch holds (L+1)^2 doubles, P~_l^m at
// scratch[m*(L+1)+l].
void harmonic_row_d2(int L, double cx, double cy, double z, double* scratch, double* out) {
  const double sth = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = std::atan2(cy, cx);
  const int stride = L + 1;
  auto P = [&](int m, int l) -> double& { return scratch[m * stride + l]; };
  P(0, 0) = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= L; ++m)
    P(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sth * P(m - 1, m - 1);
  for (int m = 0; m < L; ++m) P(m, m + 1) = std::sqrt(2.0 * m + 3.0) * z * P(m, m);
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double ll = static_cast<double>(l);
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m));
      const double b = std::sqrt(((2.0 * ll + 1.0) * (ll - 1.0 + m) * (ll - 1.0 - m)) /
                                 ((2.0 * ll - 3.0) * (ll * ll - m * m)));
      P(m, l) = a * z * P(m, l - 1) - b * P(m, l - 2);
    }
  }
  const double sq2 = std::sqrt(2.0);
  const double c1 = std::cos(phi), s1 = std::sin(phi);
  for (int l = 0; l <= L; ++l) {
    const long long base = static_cast<long long>(l) * l;
    out[base] = P(0, l);
    double ck = 1.0, sk = 0.0;
    for (int k = 1; k <= l; ++k) {
      const double cn = ck * c1 - sk * s1;
      const double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      out[base + 2 * k - 1] = sq2 * P(k, l) * ck;
      out[base + 2 * k] = sq2 * P(k, l) * sk;
    }
  }
}

void harmonic_row_d1(int L, double cx, double cy, double* out) {
  const double th = std::atan2(cy, cx);
  out[0] = 1.0 / std::sqrt(2.0 * kPi);
  const double inv = 1.0 / std::sqrt(kPi);
  for (int l = 1; l <= L; ++l) {
    out[2 * l - 1] = std::cos(l * th) * inv;
    out[2 * l] = std::sin(l * th) * inv;
  }
}

}  // namespace

Mat harmonic_block(int d, int max_degree, const Mat& pts) {
  check_dim(d);
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  const long long cols = harmonic_space_dim(d, max_degree);
  Mat out(pts.rows(), cols);
  std::vector<double> row(cols);
  std::vector<double> scratch;
  if (d == 2) scratch.resize(static_cast<size_t>(max_degree + 1) * (max_degree + 1));
  for (int i = 0; i < pts.rows(); ++i) {
    if (d == 2)
      harmonic_row_d2(max_degree, pts(i, 0), pts(i, 1), pts(i, 2), scratch.data(), row.data());
    else
      harmonic_row_d1(max_degree, pts(i, 0), pts(i, 1), row.data());
    for (long long c = 0; c < cols; ++c) out(i, c) = row[c];
  }
  return out;
}

double real_harmonic(int d, int ell, int m, const Point& x) {
  check_dim(d);
  if (ell < 0) throw std::invalid_argument("ell must be >= 0");
  const long long idx = flat_harmonic_index(d, ell, m);
  Mat pt = x.transpose();
  Mat block = harmonic_block(d, ell, pt);
  return block(0, idx);
}

double HarmonicExpansion::at(int ell, int m) const {
  if (m < 0 || m >= harmonic_dim(d, ell)) throw std::invalid_argument("harmonic order out of range");
  if (ell > max_degree) return 0.0;
  return coeffs[flat_harmonic_index(d, ell, m)];
}

void HarmonicExpansion::set(int ell, int m, double value) {
  if (ell > max_degree) throw std::invalid_argument("degree exceeds max_degree");
  coeffs[flat_harmonic_index(d, ell, m)] = value;
}

HarmonicExpansion zero_expansion(int d, int max_degree) {
  check_dim(d);
  HarmonicExpansion e;
  e.d = d;
  e.max_degree = max_degree;
  e.coeffs = Vec::Zero(harmonic_space_dim(d, max_degree));
  return e;
}

HarmonicExpansion analyze(const std::function<double(const Point&)>& f, int d,
                          int max_degree, const QuadratureRule& rule) {
  check_dim(d);
  if (rule.d != d) throw std::invalid_argument("rule dimension mismatch");
  if (rule.design_degree < 2 * max_degree)
    throw std::invalid_argument("quadrature degree too low for analysis: need >= 2*max_degree");
  HarmonicExpansion e = zero_expansion(d, max_degree);
  Vec fw(rule.nodes.rows());
  for (int i = 0; i < rule.nodes.rows(); ++i)
    fw[i] = rule.weights[i] * f(rule.nodes.row(i).transpose());
  const Mat B = harmonic_block(d, max_degree, rule.nodes);
  e.coeffs = B.transpose() * fw;
  return e;
}

Vec synthesize_many(const HarmonicExpansion& e, const Mat& pts) {
  const Mat B = harmonic_block(e.d, e.max_degree, pts);
  return B * e.coeffs;
}

double synthesize(const HarmonicExpansion& e, const Point& x) {
  Mat pt = x.transpose();
  return synthesize_many(e, pt)[0];
}

double sobolev_norm(const HarmonicExpansion& e, double s) {
  const double lam = lambda_param(e.d);
  double acc = 0.0;
  long long idx = 0;
  for (int ell = 0; ell <= e.max_degree; ++ell) {
    const double wgt = std::pow(ell + lam, 2.0 * s);
    const long long dimN = harmonic_dim(e.d, ell);
    for (long long m = 0; m < dimN; ++m, ++idx) acc += wgt * e.coeffs[idx] * e.coeffs[idx];
  }
  return std::sqrt(acc);
}

nlohmann::json expansion_to_json(const HarmonicExpansion& e) {
  nlohmann::json j;
  j["d"] = e.d;
  j["max_degree"] = e.max_degree;
  auto arr = nlohmann::json::array();
  long long idx = 0;
  for (int ell = 0; ell <= e.max_degree; ++ell) {
    const long long dimN = harmonic_dim(e.d, ell);
    for (long long m = 0; m < dimN; ++m, ++idx)
      if (e.coeffs[idx] != 0.0) arr.push_back({ell, m, e.coeffs[idx]});
  }
  j["coefficients"] = std::move(arr);
  return j;
}

HarmonicExpansion expansion_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int L = j.at("max_degree").get<int>();
  HarmonicExpansion e = zero_expansion(d, L);
  for (const auto& entry : j.at("coefficients")) {
    const int ell = entry.at(0).get<int>();
    const int m = entry.at(1).get<int>();
    if (ell > L) throw std::invalid_argument("coefficient degree exceeds max_degree");
    e.set(ell, m, entry.at(2).get<double>());
  }
  return e;
}

}  // namespace kansa
