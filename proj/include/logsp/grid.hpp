#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace logsp {

/// Uniform node-centered mesh on the truncated box [-L,L]^2.
/// Every node carries the quadrature weight h^2; fields in the energy space
/// vanish on the boundary ring, so no trapezoid edge correction is needed.
struct Grid2D {
  double half_width = 0.0;  // L
  int n = 0;                // nodes per axis, n >= 8
  double spacing = 0.0;     // h = 2L/(n-1)

  static Grid2D make(double half_width, int n) {
    if (n < 8) throw std::invalid_argument("Grid2D: need n >= 8");
    if (!(half_width > 0.0)) throw std::invalid_argument("Grid2D: need L > 0");
    Grid2D g;
    g.half_width = half_width;
    g.n = n;
    g.spacing = 2.0 * half_width / static_cast<double>(n - 1);
    return g;
  }

  // coord(0) = -L and coord(n-1) = +L exactly, symmetric about 0.
  double coord(int k) const {
    return half_width * static_cast<double>(2 * k - (n - 1)) /
           static_cast<double>(n - 1);
  }
  double x(int i) const { return coord(i); }
  double y(int j) const { return coord(j); }
  double radius(int i, int j) const { return std::hypot(coord(i), coord(j)); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(j);
  }
  std::size_t node_count() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n - 1 || j == n - 1;
  }
  double cell_weight() const { return spacing * spacing; }

  bool same_as(const Grid2D& o) const {
    return n == o.n && half_width == o.half_width;
  }
};

/// Real grid function, row-major with the x index as the row.
/// Fields representing elements of the energy space keep the boundary ring
/// at exactly 0; containers holding convolution potentials do not.
struct Field2D {
  Grid2D grid;
  std::vector<double> v;

  Field2D() = default;
  explicit Field2D(const Grid2D& g) : grid(g), v(g.node_count(), 0.0) {}

  static Field2D zeros(const Grid2D& g) { return Field2D(g); }

  template <class F>
  static Field2D from_function(const Grid2D& g, F&& f) {
    Field2D out(g);
    for (int i = 1; i + 1 < g.n; ++i)
      for (int j = 1; j + 1 < g.n; ++j)
        out.v[g.index(i, j)] = f(g.x(i), g.y(j));
    return out;
  }

  double at(int i, int j) const { return v[grid.index(i, j)]; }
  double& at(int i, int j) { return v[grid.index(i, j)]; }

  void zero_boundary() {
    const int n = grid.n;
    for (int k = 0; k < n; ++k) {
      v[grid.index(0, k)] = 0.0;
      v[grid.index(n - 1, k)] = 0.0;
      v[grid.index(k, 0)] = 0.0;
      v[grid.index(k, n - 1)] = 0.0;
    }
  }

  bool boundary_is_zero() const {
    const int n = grid.n;
    for (int k = 0; k < n; ++k)
      if (at(0, k) != 0.0 || at(n - 1, k) != 0.0 || at(k, 0) != 0.0 ||
          at(k, n - 1) != 0.0)
        return false;
    return true;
  }

  bool all_finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }

  Field2D& scale(double a) {
    for (double& x : v) x *= a;
    return *this;
  }
};

Field2D scaled(const Field2D& u, double a);
Field2D axpy(double a, const Field2D& x, const Field2D& y);  // a*x + y
Field2D pointwise_square(const Field2D& u);

/// Deterministic pairwise reduction; the tree shape depends only on the
/// length, so sums are reproducible and accurate to ~1e-15 relative.
double pairwise_sum(std::span<const double> a);

/// h^2 * sum of all nodal values.
double integrate(const Field2D& f);

/// h^2 * sum f_ij * g_ij (the discrete L^2 pairing).
double dot(const Field2D& f, const Field2D& g);

/// 5-point stencil on interior nodes, zero on the boundary ring.
Field2D laplacian(const Field2D& u);

/// Discrete |grad u|_2^2 by forward differences with zero extension.
/// Matches integrate(-laplacian(u)*u) exactly for zero-boundary fields.
double grad_sq_norm(const Field2D& u);

/// integral of log(1+|x|) u^2 (the |.|_* weighted norm, squared).
double star_norm_sq(const Field2D& u);

double l2_sq(const Field2D& u);
double lp_norm_p(const Field2D& u, double p);  // integral of |u|^p

/// Bilinear interpolation inside the box, exactly 0 outside.
double interpolate(const Field2D& u, double px, double py);

/// Fraction of the mass integral u^2 carried by nodes with
/// max(|x|,|y|) >= (1-ring_fraction)*L.  Truncation-quality diagnostic.
double boundary_mass_fraction(const Field2D& u, double ring_fraction = 0.1);

}  // namespace logsp
