#include "matelab/gff.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace matelab {

namespace {

std::mutex fftw_plan_mutex;

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Cached unaligned plans; execution on fresh arrays is thread safe.
fftw_plan cached_plan(std::size_t n, fftw_r2r_kind kind) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(fftw_plan_mutex);
  auto key = std::make_pair(n, static_cast<int>(kind));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n * n), out(n * n);
  fftw_plan plan = fftw_plan_r2r_2d(static_cast<int>(n), static_cast<int>(n),
                                    in.data(), out.data(), kind, kind,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache[key] = plan;
  return plan;
}

}  // namespace

double FieldGrid::interp(double x, double y) const {
  double xm = std::clamp(x, 0.0, static_cast<double>(n - 1));
  double ym = std::clamp(y, 0.0, static_cast<double>(n - 1));
  auto i0 = static_cast<std::size_t>(xm);
  auto j0 = static_cast<std::size_t>(ym);
  if (i0 >= n - 1) i0 = n - 2;
  if (j0 >= n - 1) j0 = n - 2;
  double fx = xm - static_cast<double>(i0);
  double fy = ym - static_cast<double>(j0);
  return (1 - fx) * (1 - fy) * at(i0, j0) + fx * (1 - fy) * at(i0 + 1, j0) +
         (1 - fx) * fy * at(i0, j0 + 1) + fx * fy * at(i0 + 1, j0 + 1);
}

double FieldGrid::mean() const {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

FieldGrid sample_gff(RngStream stream, std::size_t n, GffBoundary boundary) {
  if (!power_of_two(n) || n < 16 || n > 1024)
    throw std::invalid_argument(
        "sample_gff: n must be a power of two in [16, 1024]");
  FieldGrid f;
  f.n = n;
  f.boundary = boundary;
  f.values.assign(n * n, 0.0);

  std::vector<double> coeff(n * n, 0.0);
  if (boundary == GffBoundary::dirichlet) {
    // Eigenvalues 2 - 2cos(pi (j+1)/(n+1)) per axis; RODFT00 supplies a
    // factor 2 per axis and the eigenvectors have squared norm (n+1)/2.
    std::vector<double> lam(n);
    for (std::size_t j = 0; j < n; ++j)
      lam[j] = 2.0 - 2.0 * std::cos(M_PI * static_cast<double>(j + 1) /
                                    static_cast<double>(n + 1));
    double norm = 1.0 / (2.0 * static_cast<double>(n + 1));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double sd = std::sqrt(2.0 * M_PI / (lam[j] + lam[k]));
        coeff[j * n + k] = stream.normal() * sd * norm;
      }
    fftw_execute_r2r(cached_plan(n, FFTW_RODFT00), coeff.data(),
                     f.values.data());
    return f;
  }

  // Free boundary, mean-zero: cosine modes cos(pi j (x + 1/2)/n) with the
  // constant mode dropped; REDFT01 expands X_0 + 2 sum_j X_j cos(...).
  std::vector<double> lam(n);
  for (std::size_t j = 0; j < n; ++j)
    lam[j] = 2.0 -
             2.0 * std::cos(M_PI * static_cast<double>(j) /
                            static_cast<double>(n));
  double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (j == 0 && k == 0) continue;
      double sd = std::sqrt(2.0 * M_PI / (lam[j] + lam[k]));
      double sj = j == 0 ? inv_sqrt_n : inv_sqrt_n * std::sqrt(2.0) * 0.5;
      double sk = k == 0 ? inv_sqrt_n : inv_sqrt_n * std::sqrt(2.0) * 0.5;
      coeff[j * n + k] = stream.normal() * sd * sj * sk;
    }
  fftw_execute_r2r(cached_plan(n, FFTW_REDFT01), coeff.data(),
                   f.values.data());
  // Remove the residual mean so the contract is exact in floating point.
  double m = f.mean();
  for (double& v : f.values) v -= m;
  return f;
}

double circle_average(const FieldGrid& field, double cx, double cy,
                      double radius, bool allow_half) {
  if (radius <= 0.0) throw std::invalid_argument("circle_average: radius > 0");
  auto npts = std::max<std::size_t>(
      16, static_cast<std::size_t>(64.0 * radius));
  double sum = 0.0;
  std::size_t used = 0;
  double top = static_cast<double>(field.n - 1);
  for (std::size_t k = 0; k < npts; ++k) {
    double ang = 2.0 * M_PI * static_cast<double>(k) /
                 static_cast<double>(npts);
    double x = cx + radius * std::cos(ang);
    double y = cy + radius * std::sin(ang);
    bool in = x >= 0.0 && x <= top && y >= 0.0 && y <= top;
    if (!in) {
      if (allow_half) continue;
      throw std::domain_error("circle_average: circle leaves the grid");
    }
    sum += field.interp(x, y);
    ++used;
  }
  if (used == 0)
    throw std::domain_error("circle_average: no points inside the grid");
  return sum / static_cast<double>(used);
}

double LqgMeasureGrid::total() const {
  return std::accumulate(cell_mass.begin(), cell_mass.end(), 0.0);
}

double LqgMeasureGrid::box_mass(std::size_t i0, std::size_t i1,
                                std::size_t j0, std::size_t j1) const {
  double s = 0.0;
  for (std::size_t i = i0; i < i1 && i < n; ++i)
    for (std::size_t j = j0; j < j1 && j < n; ++j)
      s += cell_mass[i * n + j];
  return s;
}

double LqgMeasureGrid::disk_mass(double cx, double cy, double radius) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dx = static_cast<double>(i) - cx;
      double dy = static_cast<double>(j) - cy;
      if (dx * dx + dy * dy <= radius * radius) s += cell_mass[i * n + j];
    }
  return s;
}

LqgMeasureGrid lqg_area_measure(const FieldGrid& field, double gamma,
                                double eps) {
  if (gamma < 0.0 || gamma >= 2.0)
    throw std::invalid_argument("lqg_area_measure: gamma in [0,2)");
  if (eps <= 0.0) throw std::invalid_argument("lqg_area_measure: eps > 0");
  LqgMeasureGrid m;
  m.gamma = gamma;
  m.eps = eps;
  m.n = field.n;
  m.cell_mass.assign(field.n * field.n, 0.0);
  double s2 = field.spacing * field.spacing;
  double reg = std::pow(eps * field.spacing, 0.5 * gamma * gamma);
  double top = static_cast<double>(field.n - 1);
  for (std::size_t i = 0; i < field.n; ++i)
    for (std::size_t j = 0; j < field.n; ++j) {
      double x = static_cast<double>(i);
      double y = static_cast<double>(j);
      if (x - eps < 0.0 || x + eps > top || y - eps < 0.0 || y + eps > top)
        continue;
      double h = gamma == 0.0 ? 0.0 : circle_average(field, x, y, eps);
      m.cell_mass[i * field.n + j] = s2 * reg * std::exp(gamma * h);
    }
  return m;
}

std::vector<double> lqg_boundary_measure(const FieldGrid& field, double gamma,
                                         double eps) {
  if (field.boundary != GffBoundary::free_mean_zero)
    throw std::invalid_argument(
        "lqg_boundary_measure: needs a free-boundary field");
  std::vector<double> out(field.n, 0.0);
  double reg = std::pow(eps * field.spacing, 0.25 * gamma * gamma);
  for (std::size_t j = 0; j < field.n; ++j) {
    double h = circle_average(field, 0.0, static_cast<double>(j), eps, true);
    out[j] = field.spacing * reg * std::exp(0.5 * gamma * h);
  }
  return out;
}

CoordinateChangeReport coordinate_change_check(const FieldGrid& field,
                                               double gamma, std::size_t a,
                                               double eps) {
  if (a != 2 && a != 4)
    throw std::invalid_argument("coordinate_change_check: a must be 2 or 4");
  std::size_t n = field.n;
  std::size_t m = n / a;
  // Coarse pullback h~(w) = h(a w) on an m x m grid with the same spacing;
  // the additive Q log a of the coordinate rule enters as the factor
  // a^(2 + gamma^2/2), which covers gamma = 0 as the pure Jacobian.
  FieldGrid coarse;
  coarse.n = m;
  coarse.boundary = field.boundary;
  coarse.spacing = field.spacing;
  coarse.values.resize(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      coarse.values[i * m + j] = field.at(i * a, j * a);
  double factor = std::pow(static_cast<double>(a), 2.0 + 0.5 * gamma * gamma);

  // The image of the coarse regularization circle has radius a*eps, so the
  // fine measure is evaluated there; with matched scales the identity is
  // exact for deterministic fields.
  LqgMeasureGrid mu_fine =
      lqg_area_measure(field, gamma, eps * static_cast<double>(a));
  LqgMeasureGrid mu_coarse = lqg_area_measure(coarse, gamma, eps);

  CoordinateChangeReport rep;
  std::size_t margin = static_cast<std::size_t>(eps) + 2;
  std::size_t side = (m - 2 * margin) / 2;
  if (side < 2)
    throw std::invalid_argument("coordinate_change_check: grid too small");
  for (int qi = 0; qi < 2; ++qi)
    for (int qj = 0; qj < 2; ++qj) {
      std::size_t i0 = margin + static_cast<std::size_t>(qi) * side;
      std::size_t j0 = margin + static_cast<std::size_t>(qj) * side;
      double coarse_mass =
          factor * mu_coarse.box_mass(i0, i0 + side, j0, j0 + side);
      double image_mass = mu_fine.box_mass(a * i0, a * (i0 + side), a * j0,
                                           a * (j0 + side));
      if (image_mass <= 0.0) continue;
      double ratio = coarse_mass / image_mass;
      rep.ratios.push_back(ratio);
      rep.max_rel_deviation =
          std::max(rep.max_rel_deviation, std::fabs(ratio - 1.0));
    }
  return rep;
}

std::vector<double> greens_column_cg(std::size_t n, std::size_t ci,
                                     std::size_t cj, double tol) {
  std::size_t size = n * n;
  std::vector<double> x(size, 0.0), r(size, 0.0), p(size, 0.0), ap(size, 0.0);
  r[ci * n + cj] = 1.0;
  p = r;
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 4.0 * v[i * n + j];
        if (i > 0) s -= v[(i - 1) * n + j];
        if (i + 1 < n) s -= v[(i + 1) * n + j];
        if (j > 0) s -= v[i * n + j - 1];
        if (j + 1 < n) s -= v[i * n + j + 1];
        out[i * n + j] = s;
      }
  };
  double rs = 1.0;
  for (std::size_t it = 0; it < 10 * size; ++it) {
    apply(p, ap);
    double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    double alpha = rs / pap;
    double rs_new = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rs_new += r[i] * r[i];
    }
    if (rs_new < tol * tol) break;
    double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t i = 0; i < size; ++i) p[i] = r[i] + beta * p[i];
  }
  return x;
}

DiskGffSampler::DiskGffSampler(std::size_t n, double radius)
    : n_(n), radius_(radius) {
  if (radius <= 2.0 || 2.0 * radius >= static_cast<double>(n) - 2.0)
    throw std::invalid_argument("DiskGffSampler: radius does not fit");
  node_index_.assign(n * n, -1);
  double c = center();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dx = static_cast<double>(i) - c;
      double dy = static_cast<double>(j) - c;
      if (dx * dx + dy * dy < radius * radius) {
        node_index_[i * n + j] = static_cast<long>(node_cell_.size());
        node_cell_.push_back(i * n + j);
      }
    }
  std::size_t nn = node_cell_.size();

  bandwidth_ = 0;
  auto neighbor_nodes = [&](std::size_t node) {
    std::vector<std::size_t> out;
    std::size_t cell = node_cell_[node];
    std::size_t i = cell / n, j = cell % n;
    const long cand[4] = {
        i > 0 ? node_index_[(i - 1) * n + j] : -1,
        i + 1 < n ? node_index_[(i + 1) * n + j] : -1,
        j > 0 ? node_index_[i * n + j - 1] : -1,
        j + 1 < n ? node_index_[i * n + j + 1] : -1};
    for (long c2 : cand)
      if (c2 >= 0) out.push_back(static_cast<std::size_t>(c2));
    return out;
  };
  for (std::size_t v = 0; v < nn; ++v)
    for (std::size_t w : neighbor_nodes(v))
      if (w < v) bandwidth_ = std::max(bandwidth_, v - w);

  // Banded lower Cholesky of the Dirichlet five-point Laplacian on the
  // disk nodes: factor_[d * nn + i] holds L(i, i - d).
  std::size_t b = bandwidth_;
  factor_.assign((b + 1) * nn, 0.0);
  auto L = [&](std::size_t d, std::size_t i) -> double& {
    return factor_[d * nn + i];
  };
  // Assemble banded A first (diag 4, neighbors -1).
  for (std::size_t v = 0; v < nn; ++v) {
    L(0, v) = 4.0;
    for (std::size_t w : neighbor_nodes(v))
      if (w < v) L(v - w, v) = -1.0;
  }
  for (std::size_t j = 0; j < nn; ++j) {
    double d = L(0, j);
    for (std::size_t k = 1; k <= b && k <= j; ++k) {
      double l = L(k, j);
      if (l != 0.0) d -= l * l;
    }
    if (d <= 0.0) throw std::logic_error("DiskGffSampler: factorization lost sp");
    d = std::sqrt(d);
    L(0, j) = d;
    std::size_t imax = std::min(nn - 1, j + b);
    for (std::size_t i = j + 1; i <= imax; ++i) {
      double s = L(i - j, i);
      // s -= sum_k L(i,k) L(j,k) over k < j within band
      std::size_t kmin = i > b ? i - b : 0;
      for (std::size_t k = std::max(kmin, j > b ? j - b : 0); k < j; ++k) {
        double lik = (i - k) <= b ? L(i - k, i) : 0.0;
        double ljk = (j - k) <= b ? L(j - k, j) : 0.0;
        s -= lik * ljk;
      }
      L(i - j, i) = s / d;
    }
  }
}

bool DiskGffSampler::inside(std::size_t i, std::size_t j) const {
  return node_index_[i * n_ + j] >= 0;
}

void DiskGffSampler::solve_lower(std::vector<double>& x) const {
  std::size_t nn = node_cell_.size();
  std::size_t b = bandwidth_;
  for (std::size_t i = 0; i < nn; ++i) {
    double s = x[i];
    std::size_t kmin = i > b ? i - b : 0;
    for (std::size_t k = kmin; k < i; ++k)
      s -= factor_[(i - k) * nn + i] * x[k];
    x[i] = s / factor_[i];
  }
}

void DiskGffSampler::solve_upper(std::vector<double>& x) const {
  std::size_t nn = node_cell_.size();
  std::size_t b = bandwidth_;
  for (std::size_t ii = nn; ii-- > 0;) {
    double s = x[ii];
    std::size_t imax = std::min(nn - 1, ii + b);
    for (std::size_t i = ii + 1; i <= imax; ++i)
      s -= factor_[(i - ii) * nn + i] * x[i];
    x[ii] = s / factor_[ii];
  }
}

FieldGrid DiskGffSampler::sample(RngStream stream) const {
  std::size_t nn = node_cell_.size();
  std::vector<double> z(nn);
  for (std::size_t i = 0; i < nn; ++i) z[i] = stream.normal();
  // Covariance 2*pi * A^{-1} = (sqrt(2 pi) L^{-T}) (sqrt(2 pi) L^{-T})^T.
  solve_upper(z);
  FieldGrid f;
  f.n = n_;
  f.boundary = GffBoundary::dirichlet;
  f.values.assign(n_ * n_, 0.0);
  double scale = std::sqrt(2.0 * M_PI);
  for (std::size_t v = 0; v < nn; ++v)
    f.values[node_cell_[v]] = scale * z[v];
  return f;
}

double DiskGffSampler::greens_diag(std::size_t i, std::size_t j) const {
  long node = node_index_[i * n_ + j];
  if (node < 0) throw std::domain_error("greens_diag: outside the disk");
  std::size_t nn = node_cell_.size();
  std::vector<double> x(nn, 0.0);
  x[static_cast<std::size_t>(node)] = 1.0;
  solve_lower(x);
  solve_upper(x);
  return x[static_cast<std::size_t>(node)];
}

}  // namespace matelab
