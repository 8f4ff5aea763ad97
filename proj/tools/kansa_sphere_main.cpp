#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "kansa/harness.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string out = "-";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--out", opts.out, "output path, '-' for stdout");
  cmd->add_option("--seed", opts.seed, "master seed")->each([&](const std::string&) {
    opts.seed_set = true;
  });
}

kansa::StudyConfig load_config(const CommonOpts& opts) {
  kansa::StudyConfig cfg;
  if (opts.config_path.empty()) {
    cfg = kansa::default_config();
  } else {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot read config: " + opts.config_path);
    json j = json::parse(in);
    cfg = kansa::config_from_json(j);
  }
  if (opts.seed_set) cfg.seed = opts.seed;
  return cfg;
}

void write_out(const std::string& path, const std::string& payload) {
  if (path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json solve_pipeline(const kansa::StudyConfig& cfg, int n, bool thinned) {
  kansa::Problem prob = kansa::manufactured_problem(cfg.d, cfg.op, cfg.u_terms);
  kansa::QuadratureRule rule = kansa::quadrature_rule(cfg.d, cfg.quadrature_degree);
  kansa::Vec u_nodes = kansa::synthesize_many(prob.u_true, rule.nodes);

  kansa::PointSet X = kansa::fibonacci_points(n, cfg.d, cfg.probe_density);
  kansa::LagrangeBasis basis = kansa::lagrange_basis(X, cfg.kernel);
  kansa::PointSet Y = kansa::build_norming_set(X, cfg.sigma, cfg.candidate_density);
  kansa::KansaSystem sys = kansa::assemble_kansa(basis, Y, cfg.op);

  auto l2_err = [&](const kansa::InterpolantRep& rep) {
    kansa::Vec v = kansa::eval_rep_many(rep, rule.nodes) - u_nodes;
    return std::sqrt(v.array().square().matrix().dot(rule.weights));
  };

  json rep;
  rep["N"] = n;
  rep["M"] = Y.n();
  rep["kappa"] = sys.kappa;
  if (thinned) {
    kansa::ThinnedSystem ts = kansa::thin(sys, cfg.f_param);
    kansa::SolveReport sol =
        kansa::solve_thinned(ts, kansa::synthesize_many(prob.f, ts.Y_tilde.coords));
    rep["sigma_min"] = sol.sigma_min;
    rep["residual"] = sol.residual_norm;
    rep["l2_error"] = l2_err(kansa::reconstruct(ts, sol.a));
    rep["inverse_norm"] = 1.0 / sol.sigma_min;
    rep["wall_time"] = sol.wall_time;
    rep["selected"] = ts.selected;
  } else {
    kansa::SolveReport sol =
        kansa::solve_least_squares(sys, kansa::synthesize_many(prob.f, Y.coords));
    rep["sigma_min"] = sol.sigma_min;
    rep["sigma_method"] = sol.sigma_method;
    rep["residual"] = sol.residual_norm;
    rep["l2_error"] = l2_err(kansa::reconstruct(sys, sol.a));
    rep["wall_time"] = sol.wall_time;
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabilized Kansa collocation on the sphere"};
  app.require_subcommand(1);

  CommonOpts points_opts, table_opts, assemble_opts, ls_opts, thin_opts, norming_opts, conv_opts;

  auto* points_cmd = app.add_subcommand("points", "generate a Fibonacci point set");
  int points_n = 100, points_d = 2;
  points_cmd->add_option("--n", points_n, "number of points")->required();
  points_cmd->add_option("--d", points_d, "sphere dimension (1 or 2)");
  add_common(points_cmd, points_opts);

  auto* table_cmd = app.add_subcommand("kernel-table", "tabulate kernel coefficients");
  int table_lmax = 20;
  table_cmd->add_option("--lmax", table_lmax, "largest degree");
  add_common(table_cmd, table_opts);

  auto* assemble_cmd = app.add_subcommand("assemble", "assemble the Kansa matrix, emit CSV");
  int assemble_n = 0;
  assemble_cmd->add_option("--n", assemble_n, "trial set size (default: first ladder entry)");
  add_common(assemble_cmd, assemble_opts);

  auto* ls_cmd = app.add_subcommand("solve-ls", "least-squares solve of the default problem");
  int ls_n = 0;
  ls_cmd->add_option("--n", ls_n, "trial set size (default: first ladder entry)");
  add_common(ls_cmd, ls_opts);

  auto* thin_cmd = app.add_subcommand("solve-thin", "thinned square solve");
  int thin_n = 0;
  thin_cmd->add_option("--n", thin_n, "trial set size (default: first ladder entry)");
  add_common(thin_cmd, thin_opts);

  auto* norming_cmd = app.add_subcommand("check-norming", "certify the norming constant");
  int norming_n = 0, norming_trials = 200;
  norming_cmd->add_option("--n", norming_n, "trial set size (default: first ladder entry)");
  norming_cmd->add_option("--trials", norming_trials, "random witnesses");
  add_common(norming_cmd, norming_opts);

  auto* conv_cmd = app.add_subcommand("convergence", "run the refinement ladder");
  conv_cmd->add_option("--format", conv_opts.format, "csv, json, or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  add_common(conv_cmd, conv_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (points_cmd->parsed()) {
      kansa::PointSet X = kansa::fibonacci_points(points_n, points_d);
      write_out(points_opts.out, kansa::points_text(X));
    } else if (table_cmd->parsed()) {
      kansa::StudyConfig cfg = load_config(table_opts);
      std::string csv = "ell,zhat\n";
      for (int ell = 0; ell <= table_lmax; ++ell)
        csv += std::to_string(ell) + ',' + fmt17(cfg.kernel.coeff(ell)) + '\n';
      write_out(table_opts.out, csv);
    } else if (assemble_cmd->parsed()) {
      kansa::StudyConfig cfg = load_config(assemble_opts);
      const int n = assemble_n > 0 ? assemble_n : cfg.ladder.at(0);
      kansa::PointSet X = kansa::fibonacci_points(n, cfg.d, cfg.probe_density);
      kansa::PointSet Y = kansa::build_norming_set(X, cfg.sigma, cfg.candidate_density);
      kansa::KansaSystem sys = kansa::assemble_kansa(X, Y, cfg.kernel, cfg.op);
      std::string csv = std::to_string(sys.K.rows()) + ',' + std::to_string(sys.K.cols()) + '\n';
      for (Eigen::Index i = 0; i < sys.K.rows(); ++i) {
        for (Eigen::Index j = 0; j < sys.K.cols(); ++j) {
          if (j) csv += ',';
          csv += fmt17(sys.K(i, j));
        }
        csv += '\n';
      }
      write_out(assemble_opts.out, csv);
    } else if (ls_cmd->parsed()) {
      kansa::StudyConfig cfg = load_config(ls_opts);
      const int n = ls_n > 0 ? ls_n : cfg.ladder.at(0);
      write_out(ls_opts.out, solve_pipeline(cfg, n, false).dump(2) + "\n");
    } else if (thin_cmd->parsed()) {
      kansa::StudyConfig cfg = load_config(thin_opts);
      const int n = thin_n > 0 ? thin_n : cfg.ladder.at(0);
      write_out(thin_opts.out, solve_pipeline(cfg, n, true).dump(2) + "\n");
    } else if (norming_cmd->parsed()) {
      kansa::StudyConfig cfg = load_config(norming_opts);
      const int n = norming_n > 0 ? norming_n : cfg.ladder.at(0);
      kansa::PointSet X = kansa::fibonacci_points(n, cfg.d, cfg.probe_density);
      kansa::PointSet Y = kansa::build_norming_set(X, cfg.sigma, cfg.candidate_density);
      kansa::QuadratureRule rule = kansa::quadrature_rule(cfg.d, cfg.quadrature_degree);
      kansa::NormingReport rep = kansa::norming_check(Y, X, cfg.kernel, cfg.op, norming_trials,
                                                      rule, cfg.seed + 1);
      json j;
      j["N"] = X.n();
      j["M"] = Y.n();
      j["kappa"] = rep.kappa;
      j["C_N_hat"] = rep.C_N_hat;
      j["trials"] = rep.trials;
      j["worst_witness"] = std::vector<double>(rep.worst_witness.data(),
                                               rep.worst_witness.data() + rep.worst_witness.size());
      write_out(norming_opts.out, j.dump(2) + "\n");
    } else if (conv_cmd->parsed()) {
      kansa::StudyConfig cfg = load_config(conv_opts);
      kansa::LadderResult result = kansa::convergence_study(cfg);
      if (conv_opts.out == "-") {
        if (conv_opts.format == "csv")
          std::cout << kansa::ladder_csv(result);
        else if (conv_opts.format == "json")
          std::cout << kansa::ladder_json(result).dump(2) << "\n";
        else
          std::cout << kansa::ladder_svg(result);
      } else {
        kansa::emit(result, conv_opts.format, conv_opts.out);
      }
      for (const auto& [n, msg] : result.failures)
        std::cerr << "row N=" << n << " failed: " << msg << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
