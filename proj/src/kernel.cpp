#include "logsp/kernel.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "logsp/threads.hpp"

namespace logsp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plan creation/destruction is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

int next_fft_size(int k) {
  for (int m = k;; ++m) {
    int r = m;
    for (int f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 52);
}

// Average of log|x| over [-h/2,h/2]^2 equals log(h) plus this constant.
constexpr double kLogCellConstant =
    -0.5 * std::numbers::ln2 - 1.5 + 0.25 * std::numbers::pi;

}  // namespace

double cell_average_quadrature(const std::function<double(double)>& f, double h,
                               double tol) {
  // Arc length of the circle of radius r inside the square of half-side a:
  // 2*pi*r for r <= a, (2*pi - 8*acos(a/r))*r for a < r <= a*sqrt(2).
  const double a = 0.5 * h;
  auto inner = [&](double r) { return r <= 0.0 ? 0.0 : kTwoPi * r * f(r); };
  auto outer = [&](double r) {
    const double c = std::min(1.0, a / r);
    return (kTwoPi - 8.0 * std::acos(c)) * r * f(r);
  };
  const double part1 = integrate_adaptive(inner, 0.0, a, tol * a);
  const double part2 =
      integrate_adaptive(outer, a, a * std::numbers::sqrt2, tol * a);
  return (part1 + part2) / (h * h);
}

double kernel_cell_average(KernelKind kind, double h) {
  switch (kind) {
    case KernelKind::log_r:
      return std::log(h) + kLogCellConstant;
    case KernelKind::log1p_r:
      return cell_average_quadrature([](double r) { return std::log1p(r); }, h);
    case KernelKind::log1p_inv_r:
      // log(1+1/r) = log(1+r) - log(r) pointwise, so the cell averages obey
      // the same identity and the N0 = N1 - N2 split stays exact at offset 0.
      return kernel_cell_average(KernelKind::log1p_r, h) -
             kernel_cell_average(KernelKind::log_r, h);
  }
  throw std::logic_error("kernel_cell_average: bad kind");
}

struct KernelTable::Fft {
  fftw_plan fwd = nullptr;   // r2c, m x m
  fftw_plan bwd = nullptr;   // c2r, m x m
  double* plan_real = nullptr;
  fftw_complex* plan_cplx = nullptr;
  fftw_complex* spectrum[3] = {nullptr, nullptr, nullptr};
  int m = 0;

  ~Fft() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (plan_real) fftw_free(plan_real);
    if (plan_cplx) fftw_free(plan_cplx);
    for (auto* s : spectrum)
      if (s) fftw_free(s);
  }
};

KernelTable::KernelTable(KernelTable&&) noexcept = default;
KernelTable& KernelTable::operator=(KernelTable&&) noexcept = default;
KernelTable::~KernelTable() = default;

KernelTable KernelTable::build(const Grid2D& grid) {
  KernelTable t;
  t.grid_ = grid;
  const int n = grid.n;
  const int w = 2 * n - 1;
  t.m_ = next_fft_size(w);
  const double h = grid.spacing;

  const double origin[3] = {kernel_cell_average(KernelKind::log_r, h),
                            kernel_cell_average(KernelKind::log1p_r, h),
                            kernel_cell_average(KernelKind::log1p_inv_r, h)};

  for (int k = 0; k < 3; ++k) t.samples_[k].assign(static_cast<std::size_t>(w) * w, 0.0);
  parallel_for(static_cast<std::size_t>(w), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t a = lo; a < hi; ++a) {
      const int di = static_cast<int>(a) - (n - 1);
      for (int b = 0; b < w; ++b) {
        const int dj = b - (n - 1);
        const std::size_t idx = a * w + b;
        if (di == 0 && dj == 0) {
          for (int k = 0; k < 3; ++k) t.samples_[k][idx] = origin[k];
          continue;
        }
        const double r = std::hypot(di * h, dj * h);
        t.samples_[0][idx] = std::log(r);
        t.samples_[1][idx] = std::log1p(r);
        t.samples_[2][idx] = std::log1p(1.0 / r);
      }
    }
  });

  const int m = t.m_;
  const std::size_t real_len = static_cast<std::size_t>(m) * m;
  const std::size_t cplx_len = static_cast<std::size_t>(m) * (m / 2 + 1);

  auto fft = std::make_unique<Fft>();
  fft->m = m;
  fft->plan_real = fftw_alloc_real(real_len);
  fft->plan_cplx = fftw_alloc_complex(cplx_len);
  {
    // FFTW_ESTIMATE keeps plan selection deterministic run to run.
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fft->fwd = fftw_plan_dft_r2c_2d(m, m, fft->plan_real, fft->plan_cplx,
                                    FFTW_ESTIMATE);
    fft->bwd = fftw_plan_dft_c2r_2d(m, m, fft->plan_cplx, fft->plan_real,
                                    FFTW_ESTIMATE);
  }
  if (!fft->fwd || !fft->bwd) throw std::runtime_error("KernelTable: FFTW planning failed");

  // Wrap the offset table into circular layout and take its spectrum once.
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < real_len; ++i) fft->plan_real[i] = 0.0;
    for (int di = -(n - 1); di <= n - 1; ++di) {
      const int a = (di + m) % m;
      for (int dj = -(n - 1); dj <= n - 1; ++dj) {
        const int b = (dj + m) % m;
        fft->plan_real[static_cast<std::size_t>(a) * m + b] =
            t.samples_[k][static_cast<std::size_t>(di + n - 1) * w + (dj + n - 1)];
      }
    }
    fft->spectrum[k] = fftw_alloc_complex(cplx_len);
    fftw_execute_dft_r2c(fft->fwd, fft->plan_real, fft->spectrum[k]);
  }

  t.fft_ = std::move(fft);
  return t;
}

double KernelTable::origin_value(KernelKind kind) const {
  return offset_value(kind, 0, 0);
}

double KernelTable::offset_value(KernelKind kind, int di, int dj) const {
  const int n = grid_.n;
  const int w = 2 * n - 1;
  if (std::abs(di) > n - 1 || std::abs(dj) > n - 1)
    throw std::out_of_range("KernelTable::offset_value: offset outside table");
  return samples_[static_cast<int>(kind)]
                 [static_cast<std::size_t>(di + n - 1) * w + (dj + n - 1)];
}

Field2D KernelTable::convolve(const Field2D& f, KernelKind kind) const {
  if (!f.grid.same_as(grid_))
    throw std::invalid_argument("KernelTable::convolve: grid/kernel size mismatch");
  const int n = grid_.n;
  const int m = m_;
  const std::size_t real_len = static_cast<std::size_t>(m) * m;
  const std::size_t cplx_len = static_cast<std::size_t>(m) * (m / 2 + 1);

  double* real = fftw_alloc_real(real_len);
  fftw_complex* cplx = fftw_alloc_complex(cplx_len);

  for (std::size_t i = 0; i < real_len; ++i) real[i] = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      real[static_cast<std::size_t>(i) * m + j] = f.at(i, j);

  fftw_execute_dft_r2c(fft_->fwd, real, cplx);

  const fftw_complex* spec = fft_->spectrum[static_cast<int>(kind)];
  for (std::size_t i = 0; i < cplx_len; ++i) {
    const double re = cplx[i][0] * spec[i][0] - cplx[i][1] * spec[i][1];
    const double im = cplx[i][0] * spec[i][1] + cplx[i][1] * spec[i][0];
    cplx[i][0] = re;
    cplx[i][1] = im;
  }

  fftw_execute_dft_c2r(fft_->bwd, cplx, real);

  const double scale =
      grid_.cell_weight() / (kTwoPi * static_cast<double>(m) * static_cast<double>(m));
  Field2D out(grid_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.at(i, j) = scale * real[static_cast<std::size_t>(i) * m + j];

  fftw_free(real);
  fftw_free(cplx);
  return out;
}

Field2D KernelTable::convolve_direct(const Field2D& f, KernelKind kind) const {
  if (!f.grid.same_as(grid_))
    throw std::invalid_argument("KernelTable::convolve_direct: grid/kernel size mismatch");
  const int n = grid_.n;
  const int w = 2 * n - 1;
  const std::vector<double>& k = samples_[static_cast<int>(kind)];
  const double scale = grid_.cell_weight() / kTwoPi;
  Field2D out(grid_);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double acc = 0.0;
      for (int j1 = 0; j1 < n; ++j1) {
        const double* krow = k.data() + static_cast<std::size_t>(i1 - j1 + n - 1) * w + (n - 1);
        const double* frow = f.v.data() + f.grid.index(j1, 0);
        for (int j2 = 0; j2 < n; ++j2) acc += krow[i2 - j2] * frow[j2];
      }
      out.at(i1, i2) = scale * acc;
    }
  return out;
}

ConvolutionResult convolve_log(const Field2D& u_sq, const KernelTable& table) {
  return ConvolutionResult{table.convolve(u_sq, KernelKind::log_r)};
}

namespace {
double bilinear(const Field2D& f, const Field2D& g, const KernelTable& t,
                KernelKind kind) {
  return dot(t.convolve(f, kind), g);
}
}  // namespace

double B0(const Field2D& f, const Field2D& g, const KernelTable& t) {
  return bilinear(f, g, t, KernelKind::log_r);
}
double B1(const Field2D& f, const Field2D& g, const KernelTable& t) {
  return bilinear(f, g, t, KernelKind::log1p_r);
}
double B2(const Field2D& f, const Field2D& g, const KernelTable& t) {
  return bilinear(f, g, t, KernelKind::log1p_inv_r);
}

double N0(const Field2D& u, const KernelTable& t) {
  const Field2D us = pointwise_square(u);
  return B0(us, us, t);
}
double N1(const Field2D& u, const KernelTable& t) {
  const Field2D us = pointwise_square(u);
  return B1(us, us, t);
}
double N2(const Field2D& u, const KernelTable& t) {
  const Field2D us = pointwise_square(u);
  return B2(us, us, t);
}

HlsBounds hls_bound_check(const Field2D& u, const KernelTable& t) {
  if (!u.grid.same_as(t.grid()))
    throw std::invalid_argument("hls_bound_check: grid/kernel size mismatch");
  const Grid2D& g = u.grid;
  const int n = g.n;
  const double h = g.spacing;
  const Field2D us = pointwise_square(u);

  std::vector<double> lhs_rows, rhs_rows;
  lhs_rows.reserve(g.node_count());
  rhs_rows.reserve(g.node_count());
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double lhs_acc = 0.0, rhs_acc = 0.0;
      const double ui = us.at(i1, i2);
      if (ui != 0.0) {
        for (int j1 = 0; j1 < n; ++j1)
          for (int j2 = 0; j2 < n; ++j2) {
            const double uj = us.at(j1, j2);
            if (uj == 0.0) continue;
            if (i1 == j1 && i2 == j2) {
              lhs_acc += t.origin_value(KernelKind::log1p_inv_r) * uj;
              continue;  // the r-majorant drops the diagonal
            }
            const double r = std::hypot((i1 - j1) * h, (i2 - j2) * h);
            lhs_acc += std::log1p(1.0 / r) * uj;
            rhs_acc += uj / r;
          }
      }
      lhs_rows.push_back(ui * lhs_acc);
      rhs_rows.push_back(ui * rhs_acc);
    }
  const double w4 = g.cell_weight() * g.cell_weight() / kTwoPi;
  return HlsBounds{w4 * pairwise_sum(lhs_rows), w4 * pairwise_sum(rhs_rows)};
}

}  // namespace logsp
