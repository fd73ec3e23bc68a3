#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "logsp/grid.hpp"

namespace logsp {

/// The three convolution kernels of the splitting log r = log(1+r) - log(1+1/r).
enum class KernelKind { log_r = 0, log1p_r = 1, log1p_inv_r = 2 };

/// Average of f(|x|) over the square cell [-h/2,h/2]^2, by adaptive quadrature
/// on the polar arc-length reduction.  Used for the singular zero-offset
/// kernel samples.
double cell_average_quadrature(const std::function<double(double)>& f, double h,
                               double tol = 1e-13);

/// Cell average of the named kernel over one h x h cell centered at 0.
/// log_r has the closed form log(h) - log(2)/2 - 3/2 + pi/4; log1p_inv_r is
/// derived from the other two through the pointwise kernel identity, so the
/// split is exact at zero offset as well.
double kernel_cell_average(KernelKind kind, double h);

/// Sampled kernel values at all pairwise node offsets of a grid, together
/// with zero-padded FFT spectra and cached FFTW plans for linear (non-circular)
/// convolution.  Immutable after build; convolve() is safe to call from
/// several threads at once (per-call scratch buffers).
class KernelTable {
 public:
  static KernelTable build(const Grid2D& grid);

  KernelTable(KernelTable&&) noexcept;
  KernelTable& operator=(KernelTable&&) noexcept;
  KernelTable(const KernelTable&) = delete;
  KernelTable& operator=(const KernelTable&) = delete;
  ~KernelTable();

  const Grid2D& grid() const { return grid_; }
  int padded_size() const { return m_; }

  double origin_value(KernelKind kind) const;
  /// Kernel sample at offset (di,dj) node steps; |di|,|dj| <= n-1.
  double offset_value(KernelKind kind, int di, int dj) const;

  /// (h^2/2pi) * sum_j k(x_i - x_j) f_j via zero-padded FFT.
  Field2D convolve(const Field2D& f, KernelKind kind) const;

  /// Same sum evaluated as a direct O(N^2) double loop.  Single-threaded
  /// reference path for the oracle tests.
  Field2D convolve_direct(const Field2D& f, KernelKind kind) const;

 private:
  KernelTable() = default;

  Grid2D grid_;
  int m_ = 0;  // padded FFT size per axis, >= 2n-1

  // Dense offset tables, (2n-1)^2 each, index (di+n-1)*(2n-1)+(dj+n-1).
  std::vector<double> samples_[3];
  struct Fft;
  std::unique_ptr<Fft> fft_;
};

struct ConvolutionResult {
  Field2D w;  // (1/2pi)(log|.| * u^2); boundary values are real data here
};

/// w = (1/2pi) (log|.| * u_sq) on the grid.  u_sq must live on the kernel's
/// grid and is expected to be a pointwise square (nonnegative).
ConvolutionResult convolve_log(const Field2D& u_sq, const KernelTable& table);

double B0(const Field2D& f, const Field2D& g, const KernelTable& table);
double B1(const Field2D& f, const Field2D& g, const KernelTable& table);
double B2(const Field2D& f, const Field2D& g, const KernelTable& table);

double N0(const Field2D& u, const KernelTable& table);
double N1(const Field2D& u, const KernelTable& table);
double N2(const Field2D& u, const KernelTable& table);

struct HlsBounds {
  double lhs = 0.0;  // N2(u), direct double sum
  double rhs = 0.0;  // (h^4/2pi) sum_{i != j} u_i^2 u_j^2 / |x_i - x_j|
};

/// Discrete majorant check behind the Hardy-Littlewood-Sobolev bound:
/// log(1+r) <= r pointwise gives lhs <= rhs.
HlsBounds hls_bound_check(const Field2D& u, const KernelTable& table);

}  // namespace logsp
