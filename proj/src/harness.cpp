#include "kansa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kansa {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double quad_l2_diff(const Vec& a, const Vec& b, const QuadratureRule& rule) {
  return std::sqrt((a - b).array().square().matrix().dot(rule.weights));
}

constexpr const char* kCsvHeader =
    "N,M,h_X,q_X,rho_X,kappa,sigma_min,residual,err_interp,err_ls,err_thin";

}  // namespace

Problem manufactured_problem(int d, const SpectralOperator& op,
                             const std::vector<std::tuple<int, int, double>>& terms,
                             const std::string& label) {
  if (op.d != d) throw std::invalid_argument("operator dimension mismatch");
  int max_degree = 0;
  for (const auto& [ell, m, coeff] : terms) {
    if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite coefficient");
    max_degree = std::max(max_degree, ell);
  }

  Problem p;
  p.d = d;
  p.op = op;
  p.label = label;
  p.u_true = zero_expansion(d, max_degree);
  p.f = zero_expansion(d, max_degree);
  for (const auto& [ell, m, coeff] : terms) {
    p.u_true.set(ell, m, p.u_true.at(ell, m) + coeff);
    p.f.set(ell, m, p.f.at(ell, m) + op.multiplier(ell) * coeff);
  }
  return p;
}

StudyConfig default_config() {
  StudyConfig cfg;
  cfg.d = 2;
  cfg.kernel = tps_kernel(2, 2);
  cfg.op = helmholtz_operator(1.0, 2);
  cfg.u_terms = {{1, 0, 1.0}, {3, 2, 0.5}, {5, 0, 0.25}};
  cfg.ladder = {100, 200, 400, 800, 1600};
  return cfg;
}

StudyConfig config_from_json(const nlohmann::json& j) {
  StudyConfig cfg = default_config();
  if (j.contains("problem")) {
    const auto& p = j["problem"];
    if (p.contains("d")) cfg.d = p["d"].get<int>();
    if (p.contains("u")) {
      cfg.u_terms.clear();
      for (const auto& t : p["u"])
        cfg.u_terms.emplace_back(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>());
    }
  }
  double c = 1.0;
  if (j.contains("operator") && j["operator"].contains("c"))
    c = j["operator"]["c"].get<double>();
  cfg.op = helmholtz_operator(c, cfg.d);
  if (j.contains("kernel"))
    cfg.kernel = kernel_from_json(j["kernel"], cfg.d);
  else if (cfg.d != 2)
    cfg.kernel = tps_kernel(2, cfg.d);
  if (j.contains("ladder")) cfg.ladder = j["ladder"].get<std::vector<int>>();
  if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
  if (j.contains("f_param")) cfg.f_param = j["f_param"].get<double>();
  if (j.contains("quadrature_degree")) cfg.quadrature_degree = j["quadrature_degree"].get<int>();
  if (j.contains("probe_density")) cfg.probe_density = j["probe_density"].get<int>();
  if (j.contains("candidate_density")) cfg.candidate_density = j["candidate_density"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  const int n = static_cast<int>(pairs.size());
  if (n < 3) throw std::invalid_argument("need at least 3 (q, error) pairs");
  Vec x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (!(pairs[i].second > 0)) throw std::invalid_argument("errors must be positive");
    if (!(pairs[i].first > 0)) throw std::invalid_argument("q values must be positive");
    x(i) = std::log(pairs[i].first);
    y(i) = std::log(pairs[i].second);
  }
  const double xm = x.mean(), ym = y.mean();
  const double sxx = (x.array() - xm).square().sum();
  if (sxx <= 0) throw std::invalid_argument("q values must be distinct");
  const double sxy = ((x.array() - xm) * (y.array() - ym)).sum();

  RateFit fit;
  fit.order = sxy / sxx;
  const double intercept = ym - fit.order * xm;
  const double ss_res = (y.array() - intercept - fit.order * x.array()).square().sum();
  fit.std_error = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

LadderResult convergence_study(const StudyConfig& cfg) {
  Problem prob = manufactured_problem(cfg.d, cfg.op, cfg.u_terms);
  QuadratureRule rule = quadrature_rule(cfg.d, cfg.quadrature_degree);
  Vec u_at_nodes = synthesize_many(prob.u_true, rule.nodes);

  std::vector<int> ladder = cfg.ladder;
  std::sort(ladder.begin(), ladder.end());

  LadderResult result;
  for (int N : ladder) {
    try {
      PointSet X = fibonacci_points(N, cfg.d, cfg.probe_density);
      SaddleSystem saddle = assemble_saddle(X, cfg.kernel);
      LagrangeBasis basis = lagrange_basis(saddle);
      PointSet Y = build_norming_set(X, cfg.sigma, cfg.candidate_density);
      KansaSystem sys = assemble_kansa(basis, Y, cfg.op);

      InterpolantRep u_int = interpolate(saddle, synthesize_many(prob.u_true, X.coords));
      SolveReport ls = solve_least_squares(sys, synthesize_many(prob.f, Y.coords));
      InterpolantRep u_ls = reconstruct(sys, ls.a);
      ThinnedSystem ts = thin(sys, cfg.f_param);
      SolveReport th = solve_thinned(ts, synthesize_many(prob.f, ts.Y_tilde.coords));
      InterpolantRep u_th = reconstruct(ts, th.a);

      LadderRow row;
      row.N = N;
      row.M = Y.n();
      row.h_X = X.h;
      row.q_X = X.q;
      row.rho_X = X.rho;
      row.kappa = sys.kappa;
      row.sigma_min = ls.sigma_min;
      row.residual = ls.residual_norm;
      row.err_interp = quad_l2_diff(eval_rep_many(u_int, rule.nodes), u_at_nodes, rule);
      row.err_ls = quad_l2_diff(eval_rep_many(u_ls, rule.nodes), u_at_nodes, rule);
      row.err_thin = quad_l2_diff(eval_rep_many(u_th, rule.nodes), u_at_nodes, rule);
      result.rows.push_back(row);
    } catch (const std::exception& e) {
      result.failures.emplace_back(N, e.what());
    }
  }

  if (result.rows.size() >= 3) {
    auto column = [&](double LadderRow::*field, double LadderRow::*abscissa) {
      std::vector<std::pair<double, double>> pairs;
      for (const auto& r : result.rows) pairs.emplace_back(r.*abscissa, r.*field);
      return pairs;
    };
    try {
      result.fits.interp_q = fit_rate(column(&LadderRow::err_interp, &LadderRow::q_X));
      result.fits.ls_q = fit_rate(column(&LadderRow::err_ls, &LadderRow::q_X));
      result.fits.thin_q = fit_rate(column(&LadderRow::err_thin, &LadderRow::q_X));
      result.fits.interp_h = fit_rate(column(&LadderRow::err_interp, &LadderRow::h_X));
      result.fits.ls_h = fit_rate(column(&LadderRow::err_ls, &LadderRow::h_X));
      result.fits.thin_h = fit_rate(column(&LadderRow::err_thin, &LadderRow::h_X));
      result.fits.valid = true;
    } catch (const std::exception&) {
      result.fits.valid = false;
    }
  }
  return result;
}

std::string ladder_csv(const LadderResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : result.rows) {
    out += std::to_string(r.N) + ',' + std::to_string(r.M) + ',';
    out += fmt17(r.h_X) + ',' + fmt17(r.q_X) + ',' + fmt17(r.rho_X) + ',';
    out += fmt17(r.kappa) + ',' + fmt17(r.sigma_min) + ',' + fmt17(r.residual) + ',';
    out += fmt17(r.err_interp) + ',' + fmt17(r.err_ls) + ',' + fmt17(r.err_thin);
    out += '\n';
  }
  return out;
}

std::vector<LadderRow> parse_ladder_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("unexpected CSV header");

  std::vector<LadderRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ls, field, ',')) vals.push_back(std::stod(field));
    if (vals.size() != 11) throw std::invalid_argument("malformed CSV row");
    LadderRow r;
    r.N = static_cast<int>(vals[0]);
    r.M = static_cast<int>(vals[1]);
    r.h_X = vals[2];
    r.q_X = vals[3];
    r.rho_X = vals[4];
    r.kappa = vals[5];
    r.sigma_min = vals[6];
    r.residual = vals[7];
    r.err_interp = vals[8];
    r.err_ls = vals[9];
    r.err_thin = vals[10];
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json ladder_json(const LadderResult& result) {
  nlohmann::json j;
  j["schema"] = "kansa-ladder-v1";
  j["rows"] = nlohmann::json::array();
  for (const auto& r : result.rows) {
    j["rows"].push_back({{"N", r.N},
                         {"M", r.M},
                         {"h_X", r.h_X},
                         {"q_X", r.q_X},
                         {"rho_X", r.rho_X},
                         {"kappa", r.kappa},
                         {"sigma_min", r.sigma_min},
                         {"residual", r.residual},
                         {"err_interp", r.err_interp},
                         {"err_ls", r.err_ls},
                         {"err_thin", r.err_thin}});
  }
  j["failures"] = nlohmann::json::array();
  for (const auto& [n, msg] : result.failures)
    j["failures"].push_back({{"N", n}, {"error", msg}});
  if (result.fits.valid) {
    auto fit_obj = [](const RateFit& f) {
      return nlohmann::json{{"order", f.order}, {"std_error", f.std_error}};
    };
    j["fits"] = {{"interp_q", fit_obj(result.fits.interp_q)},
                 {"ls_q", fit_obj(result.fits.ls_q)},
                 {"thin_q", fit_obj(result.fits.thin_q)},
                 {"interp_h", fit_obj(result.fits.interp_h)},
                 {"ls_h", fit_obj(result.fits.ls_h)},
                 {"thin_h", fit_obj(result.fits.thin_h)}};
  }
  return j;
}

namespace {

struct SvgSeries {
  const char* name;
  const char* color;
  double LadderRow::*field;
  const RateFit* fit;
};

}  // namespace

std::string ladder_svg(const LadderResult& result) {
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"540\" "
         "viewBox=\"0 0 720 540\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"720\" height=\"540\" fill=\"white\"/>\n";

  const SvgSeries series[] = {
      {"interp", "#1f77b4", &LadderRow::err_interp, &result.fits.interp_q},
      {"ls", "#ff7f0e", &LadderRow::err_ls, &result.fits.ls_q},
      {"thin", "#2ca02c", &LadderRow::err_thin, &result.fits.thin_q},
  };

  if (result.rows.empty()) {
    svg << "  <text x=\"360\" y=\"270\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"14\">no ladder rows</text>\n";
    svg << "</svg>\n";
    return svg.str();
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : result.rows) {
    const double x = std::log10(r.q_X);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (const auto& s : series) {
      const double v = r.*(s.field);
      if (v > 0) {
        ymin = std::min(ymin, std::log10(v));
        ymax = std::max(ymax, std::log10(v));
      }
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;

  const double L = 80, R = 700, T = 30, B = 470;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (R - L); };
  auto py = [&](double y) { return B - (y - ymin) / (ymax - ymin) * (B - T); };

  svg << "  <line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << B
      << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << B
      << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << (L + R) / 2
      << "\" y=\"505\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\">log10 q_X</text>\n";
  svg << "  <text x=\"22\" y=\"" << (T + B) / 2
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" "
         "transform=\"rotate(-90 22 "
      << (T + B) / 2 << ")\">log10 L2 error</text>\n";
  for (double fx : {xmin, 0.5 * (xmin + xmax), xmax})
    svg << "  <text x=\"" << px(fx)
        << "\" y=\"488\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
        << fmt17(std::round(fx * 100) / 100).substr(0, 6) << "</text>\n";
  for (double fy : {ymin, 0.5 * (ymin + ymax), ymax})
    svg << "  <text x=\"" << (L - 8) << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
        << fmt17(std::round(fy * 100) / 100).substr(0, 6) << "</text>\n";

  int legend_y = 50;
  for (const auto& s : series) {
    std::ostringstream pts;
    bool any = false;
    for (const auto& r : result.rows) {
      const double v = r.*(s.field);
      if (v <= 0) continue;
      pts << px(std::log10(r.q_X)) << ',' << py(std::log10(v)) << ' ';
      any = true;
    }
    if (!any) continue;
    svg << "  <polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    for (const auto& r : result.rows) {
      const double v = r.*(s.field);
      if (v <= 0) continue;
      svg << "  <circle cx=\"" << px(std::log10(r.q_X)) << "\" cy=\"" << py(std::log10(v))
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    if (result.fits.valid) {
      // dashed fitted line through the series centroid with slope = order
      double cx = 0, cy = 0;
      int cnt = 0;
      for (const auto& r : result.rows) {
        const double v = r.*(s.field);
        if (v <= 0) continue;
        cx += std::log10(r.q_X);
        cy += std::log10(v);
        ++cnt;
      }
      cx /= cnt;
      cy /= cnt;
      const double o = s.fit->order;
      svg << "  <line x1=\"" << px(xmin) << "\" y1=\"" << py(cy + o * (xmin - cx)) << "\" x2=\""
          << px(xmax) << "\" y2=\"" << py(cy + o * (xmax - cx)) << "\" stroke=\"" << s.color
          << "\" stroke-dasharray=\"5,4\" stroke-width=\"1\"/>\n";
    }
    svg << "  <text x=\"" << (R - 180) << "\" y=\"" << legend_y << "\" font-family=\"monospace\" "
        << "font-size=\"12\" fill=\"" << s.color << "\">" << s.name;
    if (result.fits.valid) {
      char buf[40];
      std::snprintf(buf, sizeof buf, " order %.2f", s.fit->order);
      svg << buf;
    }
    svg << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit(const LadderResult& result, const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "csv") {
    payload = ladder_csv(result);
  } else if (format == "json") {
    payload = ladder_json(result).dump(2) + "\n";
  } else if (format == "svg") {
    payload = ladder_svg(result);
  } else {
    throw std::invalid_argument("unknown format: " + format);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace kansa
