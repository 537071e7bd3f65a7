#pragma once

#include <cstddef>
#include <vector>

#include "matelab/rng.hpp"

namespace matelab {

enum class GffBoundary { dirichlet, free_mean_zero };

// Discrete field sample on an n x n grid (unit spacing in grid units).
struct FieldGrid {
  std::size_t n = 0;
  double spacing = 1.0;
  GffBoundary boundary = GffBoundary::dirichlet;
  std::vector<double> values;  // row-major

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
  // Bilinear interpolation in grid coordinates, clamped to the grid.
  double interp(double x, double y) const;
  double mean() const;
};

// Spectral sample: sine eigenbasis of the five-point Laplacian for
// Dirichlet data, cosine basis with the constant mode dropped for free
// boundary; coefficient variance 2*pi / eigenvalue.
FieldGrid sample_gff(RngStream stream, std::size_t n, GffBoundary boundary);

// Mean of the field over `64 * radius` points of the circle of the given
// radius (grid units).  Interior circles must stay inside the grid; with
// allow_half set, points outside are dropped (half a circle at a straight
// free boundary).
double circle_average(const FieldGrid& field, double cx, double cy,
                      double radius, bool allow_half = false);

struct LqgMeasureGrid {
  double gamma = 0.0;
  double eps = 0.0;  // circle-average radius, grid units
  std::size_t n = 0;
  std::vector<double> cell_mass;  // row-major; 0 where undefined

  double total() const;
  // Mass of cells whose centers lie in [i0,i1) x [j0,j1).
  double box_mass(std::size_t i0, std::size_t i1, std::size_t j0,
                  std::size_t j1) const;
  double disk_mass(double cx, double cy, double radius) const;
};

// Cell mass spacing^2 * eps^(gamma^2/2) * exp(gamma * h_eps(center)); cells
// whose regularization circle leaves the grid carry zero mass.  gamma = 0
// gives Lebesgue measure.
LqgMeasureGrid lqg_area_measure(const FieldGrid& field, double gamma,
                                double eps);

// Boundary measure along the bottom edge of a free-boundary field:
// spacing * eps^(gamma^2/4) * exp(gamma * h_eps / 2) per boundary cell.
std::vector<double> lqg_boundary_measure(const FieldGrid& field, double gamma,
                                         double eps);

struct CoordinateChangeReport {
  double max_rel_deviation = 0.0;
  std::vector<double> ratios;  // coarse mass over image mass per test square
};

// Pathwise coordinate-change check for psi(z) = a z, a dyadic: compares the
// measure of the pulled-back field on the coarser grid (with the
// a^(2 + gamma^2/2) change-of-coordinates factor folded in analytically,
// which also covers gamma = 0) against the measure of the image squares.
CoordinateChangeReport coordinate_change_check(const FieldGrid& field,
                                               double gamma, std::size_t a,
                                               double eps);

// Dirichlet Green's function column (-Laplacian)^{-1} e_(ci,cj) on the
// square grid, by conjugate gradient; the independent oracle for the
// spectral sampler.
std::vector<double> greens_column_cg(std::size_t n, std::size_t ci,
                                     std::size_t cj, double tol = 1e-10);

// Zero-boundary field on the disk of radius `radius` cells centered in an
// n x n grid, sampled through a banded Cholesky factor of the five-point
// Laplacian restricted to the disk.
class DiskGffSampler {
 public:
  DiskGffSampler(std::size_t n, double radius);

  FieldGrid sample(RngStream stream) const;
  bool inside(std::size_t i, std::size_t j) const;
  double center() const { return 0.5 * static_cast<double>(n_ - 1); }
  std::size_t grid_size() const { return n_; }
  double radius() const { return radius_; }
  // Green's function diagonal entry at a node, via two triangular solves.
  double greens_diag(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  double radius_ = 0.0;
  std::vector<long> node_index_;        // grid -> node or -1
  std::vector<std::size_t> node_cell_;  // node -> grid cell
  std::size_t bandwidth_ = 0;
  std::vector<double> factor_;  // lower banded Cholesky, (b+1) x N
  void solve_lower(std::vector<double>& x) const;
  void solve_upper(std::vector<double>& x) const;
};

}  // namespace matelab
