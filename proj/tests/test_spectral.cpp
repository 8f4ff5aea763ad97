#include "doctest.h"

#include "kansa/geometry.hpp"
#include "kansa/kernels.hpp"
#include "kansa/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace kansa;

namespace {

constexpr double kPi = 3.14159265358979323846;

Point random_sphere_point(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Point x(d + 1);
  do {
    for (int i = 0; i <= d; ++i) x[i] = g(gen);
  } while (x.norm() < 1e-8);
  return x / x.norm();
}

}  // namespace

TEST_CASE("harmonic dimension formulas") {
  CHECK(harmonic_dim(2, 0) == 1);
  CHECK(harmonic_dim(2, 1) == 3);
  CHECK(harmonic_dim(2, 7) == 15);
  CHECK(harmonic_dim(1, 0) == 1);
  CHECK(harmonic_dim(1, 5) == 2);
  CHECK(harmonic_space_dim(2, 4) == 25);
  CHECK(harmonic_space_dim(1, 4) == 9);
  CHECK(harmonic_space_dim(2, -1) == 0);
  CHECK(lambda_param(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lambda_param(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(laplacian_eigenvalue(2, 3) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(laplacian_eigenvalue(1, 3) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(laplacian_eigenvalue(2, 0) == 0.0);
}

TEST_CASE("flat index is the prefix dimension plus the order") {
  CHECK(flat_harmonic_index(2, 0, 0) == 0);
  CHECK(flat_harmonic_index(2, 3, 0) == 9);
  CHECK(flat_harmonic_index(2, 3, 6) == 15);
  CHECK(flat_harmonic_index(1, 0, 0) == 0);
  CHECK(flat_harmonic_index(1, 2, 0) == 3);
  CHECK(flat_harmonic_index(1, 2, 1) == 4);
  CHECK_THROWS_AS(flat_harmonic_index(2, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(flat_harmonic_index(2, 1, -1), std::invalid_argument);
}

TEST_CASE("gegenbauer polynomials match closed forms") {
  const double t = 0.3;
  // lambda = 1/2 is Legendre.
  CHECK(gegenbauer(0.5, 0, t) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gegenbauer(0.5, 1, t) == doctest::Approx(t).epsilon(1e-14));
  CHECK(gegenbauer(0.5, 2, t) == doctest::Approx((3 * t * t - 1) / 2).epsilon(1e-14));
  CHECK(gegenbauer(0.5, 3, t) == doctest::Approx((5 * t * t * t - 3 * t) / 2).epsilon(1e-14));
  CHECK(gegenbauer(0.5, 11, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // lambda = 1 is Chebyshev of the second kind.
  CHECK(gegenbauer(1.0, 2, t) == doctest::Approx(4 * t * t - 1).epsilon(1e-14));
  CHECK(gegenbauer(1.0, 3, t) == doctest::Approx(8 * t * t * t - 4 * t).epsilon(1e-14));
}

TEST_CASE("real harmonics are orthonormal under the sphere measure") {
  for (int d : {1, 2}) {
    const int L = (d == 2) ? 5 : 7;
    QuadratureRule rule = quadrature_rule(d, 2 * L + 2);
    Mat B = harmonic_block(d, L, rule.nodes);
    Mat G = B.transpose() * rule.weights.asDiagonal() * B;
    const long long n = harmonic_space_dim(d, L);
    REQUIRE(G.rows() == n);
    double err = (G - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("addition theorem ties harmonics to the zonal projector") {
  std::mt19937_64 gen(42);
  for (int d : {1, 2}) {
    for (int trial = 0; trial < 5; ++trial) {
      Point x = random_sphere_point(gen, d);
      Point y = random_sphere_point(gen, d);
      const double t = x.dot(y);
      for (int ell : {0, 1, 3, 6}) {
        double acc = 0.0;
        for (int m = 0; m < harmonic_dim(d, ell); ++m)
          acc += real_harmonic(d, ell, m, x) * real_harmonic(d, ell, m, y);
        CHECK(acc == doctest::Approx(zonal_projector(d, ell, t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("harmonic_block agrees with pointwise evaluation") {
  std::mt19937_64 gen(7);
  Mat pts(4, 3);
  for (int i = 0; i < 4; ++i) pts.row(i) = random_sphere_point(gen, 2).transpose();
  const int L = 6;
  Mat B = harmonic_block(2, L, pts);
  for (int i = 0; i < 4; ++i)
    for (int ell = 0; ell <= L; ++ell)
      for (int m = 0; m < harmonic_dim(2, ell); ++m) {
        Point x = pts.row(i).transpose();
        CHECK(B(i, flat_harmonic_index(2, ell, m)) ==
              doctest::Approx(real_harmonic(2, ell, m, x)).epsilon(1e-13));
      }
}

TEST_CASE("analyze recovers band-limited coefficients") {
  HarmonicExpansion target = zero_expansion(2, 4);
  target.set(0, 0, 2.0);
  target.set(2, 1, -1.0);
  target.set(4, 4, 0.3);
  auto f = [&](const Point& x) { return synthesize(target, x); };
  QuadratureRule rule = quadrature_rule(2, 10);
  HarmonicExpansion got = analyze(f, 2, 4, rule);
  CHECK((got.coeffs - target.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(got.at(2, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  // Degrees beyond max_degree read as zero.
  CHECK(got.at(9, 0) == 0.0);

  std::mt19937_64 gen(3);
  Mat pts(6, 3);
  for (int i = 0; i < 6; ++i) pts.row(i) = random_sphere_point(gen, 2).transpose();
  Vec vals = synthesize_many(got, pts);
  for (int i = 0; i < 6; ++i) {
    Point x = pts.row(i).transpose();
    CHECK(vals[i] == doctest::Approx(f(x)).epsilon(1e-12));
  }
}

TEST_CASE("analyze and synthesize round trip on the circle") {
  HarmonicExpansion target = zero_expansion(1, 3);
  target.set(1, 0, 1.0);   // cos(theta)/sqrt(pi)
  target.set(3, 1, -0.5);  // sin(3 theta)/sqrt(pi)
  auto f = [&](const Point& x) { return synthesize(target, x); };
  QuadratureRule rule = quadrature_rule(1, 8);
  HarmonicExpansion got = analyze(f, 1, 3, rule);
  CHECK((got.coeffs - target.coeffs).cwiseAbs().maxCoeff() <= 1e-13);
  Point east(2);
  east << std::cos(0.4), std::sin(0.4);
  const double expect = std::cos(0.4) / std::sqrt(kPi) - 0.5 * std::sin(1.2) / std::sqrt(kPi);
  CHECK(synthesize(got, east) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("sobolev norm weights each degree by (ell + lambda)^{2s}") {
  HarmonicExpansion e = zero_expansion(2, 3);
  e.set(3, 2, 2.0);
  const double s = 1.5;
  CHECK(sobolev_norm(e, s) == doctest::Approx(2.0 * std::pow(3.5, s)).epsilon(1e-13));
  e.set(0, 0, 5.0);
  const double expect = std::sqrt(25.0 * std::pow(0.5, 2 * s) + 4.0 * std::pow(3.5, 2 * s));
  CHECK(sobolev_norm(e, s) == doctest::Approx(expect).epsilon(1e-13));
  // s = 0 reduces to the plain coefficient norm.
  CHECK(sobolev_norm(e, 0.0) == doctest::Approx(std::sqrt(29.0)).epsilon(1e-13));
}

TEST_CASE("expansion json round trip") {
  HarmonicExpansion e = zero_expansion(2, 2);
  e.set(1, 2, 0.25);
  e.set(2, 0, -3.5);
  nlohmann::json j = expansion_to_json(e);
  HarmonicExpansion back = expansion_from_json(j);
  CHECK(back.d == e.d);
  CHECK(back.max_degree == e.max_degree);
  CHECK((back.coeffs - e.coeffs).cwiseAbs().maxCoeff() == 0.0);
}
