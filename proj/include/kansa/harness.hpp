#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kansa/norming.hpp"
#include "kansa/thinning.hpp"

namespace kansa {

// Manufactured problem L u = f with u a finite harmonic sum and f obtained by
// exact multiplier application, so every ladder error is measured against an
// analytic reference.
struct Problem {
  int d = 2;
  SpectralOperator op;
  HarmonicExpansion u_true;
  HarmonicExpansion f;  // coefficients m(ell) * u_true coefficients, exact
  std::string label;
};

// terms: (ell, m, coefficient) in the real orthonormal basis
Problem manufactured_problem(int d, const SpectralOperator& op,
                             const std::vector<std::tuple<int, int, double>>& terms,
                             const std::string& label = "manufactured");

struct StudyConfig {
  int d = 2;
  ZonalKernel kernel;
  SpectralOperator op;
  std::vector<std::tuple<int, int, double>> u_terms;
  std::vector<int> ladder;
  double sigma = 2.0;
  double f_param = 2.0;
  int quadrature_degree = 60;
  int probe_density = 100;
  int candidate_density = 100;
  std::uint64_t seed = 0;
};

// d = 2, TPS s = 2, Helmholtz c = 1, u = Y_{1,0} + 0.5 Y_{3,2} + 0.25 Y_{5,0},
// ladder {100, 200, 400, 800, 1600}, sigma = 2, f_param = 2, quadrature 60
StudyConfig default_config();

// missing keys fall back to default_config(); schema
// {problem: {d, u: [[ell,m,coeff]...]}, kernel: {...}, operator: {c},
//  ladder: [N...], sigma, f_param, quadrature_degree, probe_density,
//  candidate_density}
StudyConfig config_from_json(const nlohmann::json& j);

struct LadderRow {
  int N = 0;
  int M = 0;
  double h_X = 0, q_X = 0, rho_X = 0, kappa = 0;
  double sigma_min = 0, residual = 0;
  double err_interp = 0, err_ls = 0, err_thin = 0;
};

struct RateFit {
  double order = 0;
  double std_error = 0;
};

// log(error) ~ order * log(q) + const; needs >= 3 pairs, errors > 0
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct LadderFits {
  bool valid = false;  // set once >= 3 successful rows exist
  RateFit interp_q, ls_q, thin_q;  // against q_X
  RateFit interp_h, ls_h, thin_h;  // against h_X
};

struct LadderResult {
  std::vector<LadderRow> rows;  // successful rows, N increasing
  std::vector<std::pair<int, std::string>> failures;  // (N, error message)
  LadderFits fits;
};

// One ladder: per N, X = Fibonacci points, Y = norming set, interpolation /
// least-squares / thinned solves, all errors in L2 by quadrature. A row that
// throws is recorded in failures and the ladder continues.
LadderResult convergence_study(const StudyConfig& cfg);

std::string ladder_csv(const LadderResult& result);
std::vector<LadderRow> parse_ladder_csv(const std::string& text);
nlohmann::json ladder_json(const LadderResult& result);
std::string ladder_svg(const LadderResult& result);

// format in {csv, json, svg}
void emit(const LadderResult& result, const std::string& format, const std::string& path);

}  // namespace kansa
