#include "logsp/grid.hpp"

#include <algorithm>
#include <cmath>

namespace logsp {

Field2D scaled(const Field2D& u, double a) {
  Field2D out = u;
  out.scale(a);
  return out;
}

Field2D axpy(double a, const Field2D& x, const Field2D& y) {
  if (!x.grid.same_as(y.grid)) throw std::invalid_argument("axpy: grid mismatch");
  Field2D out(x.grid);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = a * x.v[k] + y.v[k];
  return out;
}

Field2D pointwise_square(const Field2D& u) {
  Field2D out(u.grid);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = u.v[k] * u.v[k];
  return out;
}

double pairwise_sum(std::span<const double> a) {
  const std::size_t n = a.size();
  if (n <= 32) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(a.first(half)) + pairwise_sum(a.subspan(half));
}

double integrate(const Field2D& f) {
  return f.grid.cell_weight() * pairwise_sum(f.v);
}

double dot(const Field2D& f, const Field2D& g) {
  if (!f.grid.same_as(g.grid)) throw std::invalid_argument("dot: grid mismatch");
  std::vector<double> prod(f.v.size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = f.v[k] * g.v[k];
  return f.grid.cell_weight() * pairwise_sum(prod);
}

Field2D laplacian(const Field2D& u) {
  const Grid2D& g = u.grid;
  const int n = g.n;
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  Field2D out(g);
  for (int i = 1; i + 1 < n; ++i) {
    const double* row = u.v.data() + g.index(i, 0);
    const double* up = u.v.data() + g.index(i - 1, 0);
    const double* dn = u.v.data() + g.index(i + 1, 0);
    double* dst = out.v.data() + g.index(i, 0);
    for (int j = 1; j + 1 < n; ++j)
      dst[j] = (up[j] + dn[j] + row[j - 1] + row[j + 1] - 4.0 * row[j]) * inv_h2;
  }
  return out;
}

double grad_sq_norm(const Field2D& u) {
  // Forward differences with zero extension beyond the last node; the h^2
  // quadrature weight cancels the 1/h^2 of the squared difference quotient.
  const Grid2D& g = u.grid;
  const int n = g.n;
  std::vector<double> terms;
  terms.reserve(2 * g.node_count());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double uij = u.at(i, j);
      const double dx = (i + 1 < n ? u.at(i + 1, j) : 0.0) - uij;
      const double dy = (j + 1 < n ? u.at(i, j + 1) : 0.0) - uij;
      terms.push_back(dx * dx);
      terms.push_back(dy * dy);
    }
  }
  return pairwise_sum(terms);
}

double star_norm_sq(const Field2D& u) {
  const Grid2D& g = u.grid;
  std::vector<double> terms(g.node_count());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double uij = u.at(i, j);
      terms[g.index(i, j)] = std::log1p(g.radius(i, j)) * uij * uij;
    }
  return g.cell_weight() * pairwise_sum(terms);
}

double l2_sq(const Field2D& u) {
  std::vector<double> terms(u.v.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = u.v[k] * u.v[k];
  return u.grid.cell_weight() * pairwise_sum(terms);
}

double lp_norm_p(const Field2D& u, double p) {
  std::vector<double> terms(u.v.size());
  if (p == 4.0) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double s = u.v[k] * u.v[k];
      terms[k] = s * s;
    }
  } else if (p == 3.0) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double a = std::fabs(u.v[k]);
      terms[k] = a * a * a;
    }
  } else {
    for (std::size_t k = 0; k < terms.size(); ++k)
      terms[k] = std::pow(std::fabs(u.v[k]), p);
  }
  return u.grid.cell_weight() * pairwise_sum(terms);
}

double interpolate(const Field2D& u, double px, double py) {
  const Grid2D& g = u.grid;
  const double L = g.half_width;
  if (px < -L || px > L || py < -L || py > L) return 0.0;
  const double m = static_cast<double>(g.n - 1);
  double si = m * (px + L) / (2.0 * L);
  double sj = m * (py + L) / (2.0 * L);
  int i = static_cast<int>(std::floor(si));
  int j = static_cast<int>(std::floor(sj));
  i = std::clamp(i, 0, g.n - 2);
  j = std::clamp(j, 0, g.n - 2);
  const double ai = si - i;
  const double aj = sj - j;
  const double f00 = u.at(i, j), f10 = u.at(i + 1, j);
  const double f01 = u.at(i, j + 1), f11 = u.at(i + 1, j + 1);
  return (1.0 - ai) * ((1.0 - aj) * f00 + aj * f01) +
         ai * ((1.0 - aj) * f10 + aj * f11);
}

double boundary_mass_fraction(const Field2D& u, double ring_fraction) {
  const Grid2D& g = u.grid;
  const double cut = (1.0 - ring_fraction) * g.half_width;
  std::vector<double> ring, all;
  ring.reserve(g.node_count());
  all.reserve(g.node_count());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double m = u.at(i, j) * u.at(i, j);
      all.push_back(m);
      if (std::max(std::fabs(g.x(i)), std::fabs(g.y(j))) >= cut) ring.push_back(m);
    }
  const double total = pairwise_sum(all);
  if (total <= 0.0) return 0.0;
  return pairwise_sum(ring) / total;
}

}  // namespace logsp
