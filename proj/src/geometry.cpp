#include "kansa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kansa {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("d must be 1 or 2");
}

double clamp_dot(double t) { return std::min(1.0, std::max(-1.0, t)); }

// Largest inner product over distinct pairs (blocked to bound memory).
double max_offdiag_dot(const Mat& coords) {
  const int n = static_cast<int>(coords.rows());
  const int block = 1024;
  double best = -2.0;
  for (int i0 = 0; i0 < n; i0 += block) {
    const int ib = std::min(block, n - i0);
    Mat g = coords.middleRows(i0, ib) * coords.transpose();
    for (int i = 0; i < ib; ++i) g(i, i0 + i) = -2.0;
    best = std::max(best, g.maxCoeff());
  }
  return best;
}

}  // namespace

double omega(int d) {
  check_dim(d);
  return d == 1 ? 2.0 * kPi : 4.0 * kPi;
}

double geodesic_distance(const Point& x, const Point& y) {
  return std::acos(clamp_dot(x.dot(y)));
}

double covering_radius(const Mat& centers, const Mat& probes) {
  const int np = static_cast<int>(probes.rows());
  const int block = 4096;
  double worst = 2.0;  // smallest max-dot seen
  for (int p0 = 0; p0 < np; p0 += block) {
    const int pb = std::min(block, np - p0);
    Mat g = probes.middleRows(p0, pb) * centers.transpose();
    worst = std::min(worst, g.rowwise().maxCoeff().minCoeff());
  }
  return std::acos(clamp_dot(worst));
}

Mat fibonacci_coords(int n, int d) {
  check_dim(d);
  if (n < 1) throw std::invalid_argument("need n >= 1");
  Mat out(n, d + 1);
  if (d == 1) {
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * kPi * i / n;
      out(i, 0) = std::cos(th);
      out(i, 1) = std::sin(th);
    }
    return out;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out(i, 0) = r * std::cos(golden * i);
    out(i, 1) = r * std::sin(golden * i);
    out(i, 2) = z;
  }
  return out;
}

void compute_metrics(PointSet& ps, int probe_density) {
  const int n = ps.n();
  if (probe_density < 1) throw std::invalid_argument("probe_density must be positive");
  if (n == 1) {
    ps.q = kPi;  // no pairs; convention
  } else {
    const double maxdot = max_offdiag_dot(ps.coords);
    const double minsep = std::acos(clamp_dot(maxdot));
    if (minsep == 0.0) throw std::invalid_argument("duplicate points (zero separation)");
    ps.q = 0.5 * minsep;
  }
  const Mat probes = fibonacci_coords(probe_density * n, ps.d);
  ps.h = covering_radius(ps.coords, probes);
  ps.rho = ps.h / ps.q;
}

PointSet make_point_set(int d, Mat coords, int probe_density) {
  check_dim(d);
  if (coords.rows() < 1) throw std::invalid_argument("empty point set");
  if (coords.cols() != d + 1) throw std::invalid_argument("coords must have d+1 columns");
  for (int i = 0; i < coords.rows(); ++i) {
    const double nrm = coords.row(i).norm();
    if (std::abs(nrm - 1.0) > 1e-12)
      throw std::invalid_argument("point " + std::to_string(i) + " not on the sphere");
  }
  PointSet ps;
  ps.d = d;
  ps.coords = std::move(coords);
  compute_metrics(ps, probe_density);
  return ps;
}

PointSet fibonacci_points(int n, int d, int probe_density) {
  PointSet ps = make_point_set(d, fibonacci_coords(n, d), probe_density);
  if (n >= 20 && ps.rho > 3.0)
    throw std::runtime_error("fibonacci lattice mesh ratio exceeds 3");
  return ps;
}

PointSet greedy_net(const Mat& candidates, double candidate_fill, int d,
                    double epsilon, int seed_index, int probe_density) {
  check_dim(d);
  const int nc = static_cast<int>(candidates.rows());
  if (nc < 1) throw std::invalid_argument("empty candidate set");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (seed_index < 0 || seed_index >= nc) throw std::invalid_argument("seed_index out of range");
  if (candidate_fill > epsilon)
    throw std::invalid_argument("candidates too sparse for requested epsilon");

  const double cos_eps = std::cos(std::min(epsilon, kPi));
  std::vector<int> selected;
  selected.reserve(256);
  selected.push_back(seed_index);
  // best_dot[i] = max inner product of candidate i against the selected set;
  // the farthest candidate minimizes it.
  Vec best_dot = candidates * candidates.row(seed_index).transpose();
  while (true) {
    int far = 0;
    double far_dot = 2.0;
    for (int i = 0; i < nc; ++i) {
      if (best_dot[i] < far_dot) {
        far_dot = best_dot[i];
        far = i;
      }
    }
    if (far_dot >= cos_eps) break;  // all candidates covered within epsilon
    selected.push_back(far);
    best_dot = best_dot.cwiseMax(candidates * candidates.row(far).transpose());
  }

  Mat sel(selected.size(), d + 1);
  for (size_t i = 0; i < selected.size(); ++i) sel.row(i) = candidates.row(selected[i]);
  PointSet out = make_point_set(d, std::move(sel), probe_density);
  // Separation >= epsilon by construction; verify exactly.
  if (out.n() > 1 && 2.0 * out.q < epsilon * (1.0 - 1e-12))
    throw std::runtime_error("greedy net separation violated");
  return out;
}

PointSet greedy_net(const PointSet& candidates, double epsilon, int seed_index,
                    int probe_density) {
  return greedy_net(candidates.coords, candidates.h, candidates.d, epsilon, seed_index,
                    probe_density);
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, Vec& x, Vec& w) {
  x.resize(n);
  w.resize(n);
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

}  // namespace

QuadratureRule quadrature_rule(int d, int design_degree) {
  check_dim(d);
  if (design_degree < 0) throw std::invalid_argument("design_degree must be >= 0");
  QuadratureRule rule;
  rule.d = d;
  rule.design_degree = design_degree;
  if (d == 1) {
    const int n = 2 * design_degree + 2;
    rule.nodes = fibonacci_coords(n, 1);  // equispaced circle
    rule.weights = Vec::Constant(n, 2.0 * kPi / n);
    return rule;
  }
  const int ngl = design_degree / 2 + 1;
  Vec z, wz;
  gauss_legendre(ngl, z, wz);
  const int naz = 2 * design_degree + 2;
  rule.nodes.resize(ngl * naz, 3);
  rule.weights.resize(ngl * naz);
  for (int i = 0; i < ngl; ++i) {
    const double r = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int j = 0; j < naz; ++j) {
      const double phi = 2.0 * kPi * j / naz;
      const int idx = i * naz + j;
      rule.nodes(idx, 0) = r * std::cos(phi);
      rule.nodes(idx, 1) = r * std::sin(phi);
      rule.nodes(idx, 2) = z[i];
      rule.weights[idx] = wz[i] * (2.0 * kPi / naz);
    }
  }
  const double total = rule.weights.sum();
  if (std::abs(total - omega(d)) > 1e-12 * omega(d))
    throw std::runtime_error("quadrature weights do not sum to the sphere measure");
  return rule;
}

double integrate(const std::function<double(const Point&)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.rows(); ++i)
    acc += rule.weights[i] * f(rule.nodes.row(i).transpose());
  return acc;
}

double l2_norm(const std::function<double(const Point&)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.rows(); ++i) {
    const double v = f(rule.nodes.row(i).transpose());
    acc += rule.weights[i] * v * v;
  }
  return std::sqrt(acc);
}

std::string points_text(const PointSet& ps) {
  std::string text = "# " + std::to_string(ps.n()) + " points on S^" + std::to_string(ps.d) + "\n";
  char buf[80];
  for (int i = 0; i < ps.n(); ++i) {
    for (int c = 0; c <= ps.d; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ps.coords(i, c));
      if (c > 0) text += ' ';
      text += buf;
    }
    text += '\n';
  }
  return text;
}

void write_points(const PointSet& ps, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << points_text(ps);
}

PointSet read_points(const std::string& path, int d, int probe_density) {
  check_dim(d);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> vals;
  std::string line;
  int nrows = 0;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double v;
    std::vector<double> row;
    while (ss >> v) row.push_back(v);
    if (row.empty()) continue;
    if (static_cast<int>(row.size()) != d + 1)
      throw std::runtime_error("line with " + std::to_string(row.size()) +
                               " coordinates, expected " + std::to_string(d + 1));
    vals.insert(vals.end(), row.begin(), row.end());
    ++nrows;
  }
  if (nrows == 0) throw std::runtime_error("no points in " + path);
  Mat coords(nrows, d + 1);
  for (int i = 0; i < nrows; ++i)
    for (int c = 0; c <= d; ++c) coords(i, c) = vals[i * (d + 1) + c];
  for (int i = 0; i < nrows; ++i) {
    const double nrm = coords.row(i).norm();
    if (std::abs(nrm - 1.0) > 1e-6)
      throw std::runtime_error("point " + std::to_string(i) + " is off the sphere by " +
                               std::to_string(std::abs(nrm - 1.0)));
    coords.row(i) /= nrm;
  }
  return make_point_set(d, std::move(coords), probe_density);
}

}  // namespace kansa
