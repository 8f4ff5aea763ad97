#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace kansa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Point = Eigen::VectorXd;  // unit vector in R^{d+1}, d in {1,2}

// Surface measure of S^d.
double omega(int d);

// arccos of the clamped inner product; exact 0 for x == y.
double geodesic_distance(const Point& x, const Point& y);

// Point set on S^d with cached mesh metrics.
//   q   = separation radius, half the minimal pairwise geodesic distance (exact, O(n^2))
//   h   = fill distance estimate, max over a dense probe grid of the distance
//         to the nearest point (approaches the true fill from below as the grid refines)
//   rho = h/q >= 1 up to probe-grid slack
struct PointSet {
  int d = 2;
  Mat coords;  // n x (d+1), unit rows
  double h = 0.0;
  double q = 0.0;
  double rho = 0.0;

  int n() const { return static_cast<int>(coords.rows()); }
  Point point(int i) const { return coords.row(i).transpose(); }
};

// Validates unit norms (|1 - ||x||| <= 1e-12) and computes metrics.
// Throws on duplicate points (zero separation).
PointSet make_point_set(int d, Mat coords, int probe_density = 100);

// Recompute q, h, rho in place. probe grid size = probe_density * n.
void compute_metrics(PointSet& ps, int probe_density = 100);

// max over probe rows of geodesic distance to the nearest center row.
double covering_radius(const Mat& centers, const Mat& probes);

// Coordinates only, no metrics; used for probe grids and candidate pools.
Mat fibonacci_coords(int n, int d);

// Spiral lattice on S^2 (equispaced circle for d = 1). Checks rho <= 3 for n >= 20.
PointSet fibonacci_points(int n, int d = 2, int probe_density = 100);

// Gonzalez farthest-point selection until the covering radius over the
// candidates drops to epsilon. Selected pairwise separation >= epsilon is
// guaranteed by construction and verified exactly. Deterministic: first
// selected point is candidates[seed_index], argmax ties break at the lowest
// index. Throws "candidates too sparse" when candidate_fill > epsilon.
PointSet greedy_net(const Mat& candidates, double candidate_fill, int d,
                    double epsilon, int seed_index = 0, int probe_density = 100);
PointSet greedy_net(const PointSet& candidates, double epsilon, int seed_index = 0,
                    int probe_density = 100);

// Product rule exact for spherical harmonics through degree design_degree:
// Gauss-Legendre in the polar cosine x equispaced azimuth (2*design_degree + 2
// azimuth points) for d = 2; equispaced trapezoid for d = 1. Weights positive,
// summing to omega(d) within 1e-12.
struct QuadratureRule {
  int d = 2;
  int design_degree = 0;
  Mat nodes;    // #nodes x (d+1)
  Vec weights;  // positive
};

QuadratureRule quadrature_rule(int d, int design_degree);

double integrate(const std::function<double(const Point&)>& f, const QuadratureRule& rule);
double l2_norm(const std::function<double(const Point&)>& f, const QuadratureRule& rule);

// Text format: one point per line, d+1 whitespace-separated coordinates,
// '#' starts a comment. The reader renormalizes each point and throws if any
// norm deviates from 1 by more than 1e-6.
std::string points_text(const PointSet& ps);
void write_points(const PointSet& ps, const std::string& path);
PointSet read_points(const std::string& path, int d, int probe_density = 100);

}  // namespace kansa
