#include "logsp/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace logsp {

namespace {
constexpr double kInv8Pi = 1.0 / (8.0 * std::numbers::pi);
constexpr double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);
}  // namespace

AmplitudeFiber AmplitudeFiber::from(const EnergyBreakdown& bd) {
  AmplitudeFiber f;
  f.norm_V_sq = bd.norm_V_sq;
  f.n0 = bd.n0;
  f.lp = bd.lp;
  f.b = bd.params.b;
  f.p = bd.params.p;
  return f;
}

double AmplitudeFiber::value(double t) const {
  const double t2 = t * t;
  return 0.5 * t2 * norm_V_sq + 0.25 * t2 * t2 * n0 -
         (b / p) * std::pow(t, p) * lp;
}

double AmplitudeFiber::phi(double t) const {
  return norm_V_sq + t * t * n0 - b * std::pow(t, p - 2.0) * lp;
}

bool AmplitudeFiber::has_interior_max() const {
  if (b == 0.0 || lp == 0.0) return n0 < 0.0;
  if (p == 4.0) return n0 - b * lp < 0.0;
  return p > 4.0;  // b > 0 here
}

double amplitude_fiber(const Field2D& u, const PotentialSpec& V, const Params& prm,
                       const KernelTable& table, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("amplitude_fiber: t > 0 required");
  return AmplitudeFiber::from(compute_breakdown(u, V, prm, table)).value(t);
}

double nehari_scale(const EnergyBreakdown& bd) {
  const Params& prm = bd.params;
  if (!(prm.p >= 4.0 || prm.b == 0.0))
    throw std::invalid_argument("nehari_scale: requires p >= 4 (or b = 0)");
  if (bd.norm_V_sq <= 0.0)
    throw std::invalid_argument("nehari_scale: u must be nonzero");
  const AmplitudeFiber f = AmplitudeFiber::from(bd);
  if (!f.has_interior_max())
    throw Condition32Violated(
        "fiber has no interior maximum (case (ii): h' > 0 on (0,inf))");

  // phi(0+) = ||u||_V^2 > 0; bracket the unique sign change and bisect.
  double hi = 1.0;
  int guard = 0;
  while (f.phi(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 400) throw Condition32Violated("nehari_scale: no sign change found");
  }
  double lo = 0.5 * hi;
  while (f.phi(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw std::runtime_error("nehari_scale: bracket collapse");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f.phi(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double nehari_scale(const Field2D& u, const PotentialSpec& V, const Params& prm,
                    const KernelTable& table) {
  return nehari_scale(compute_breakdown(u, V, prm, table));
}

double GaussianProfile::eval(double x, double y) const {
  const double dx = x - cx, dy = y - cy;
  return amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

Field2D GaussianProfile::on_grid(const Grid2D& g) const {
  return Field2D::from_function(g, [this](double x, double y) { return eval(x, y); });
}

GaussianProfile GaussianProfile::rescaled_Q(double t) const {
  return GaussianProfile{amplitude * t * t, cx / t, cy / t, sigma / t};
}

GaussianProfile GaussianProfile::with_l2_norm(double l2, double sigma, double cx,
                                              double cy) {
  // |u|_2^2 = A^2 pi sigma^2 for the full-plane Gaussian.
  const double amp = l2 / (std::sqrt(std::numbers::pi) * sigma);
  return GaussianProfile{amp, cx, cy, sigma};
}

RescaleResult rescale_Q(const Field2D& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rescale_Q: t > 0 required");
  const Grid2D& g = u.grid;
  RescaleResult out;
  out.method = RescaleMethod::interpolated;
  const double ratio = g.spacing / g.half_width;
  out.resolution_warning = (t < 10.0 * ratio) || (t > 1.0 / (10.0 * ratio));
  out.field = Field2D(g);
  const double t2 = t * t;
  for (int i = 1; i + 1 < g.n; ++i)
    for (int j = 1; j + 1 < g.n; ++j)
      out.field.at(i, j) = t2 * interpolate(u, t * g.x(i), t * g.y(j));
  // Boundary ring stays 0 (Dirichlet truncation), also when t < 1 spreads
  // the profile across the box edge.
  return out;
}

RescaleResult rescale_Q(const GaussianProfile& profile, const Grid2D& g, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rescale_Q: t > 0 required");
  RescaleResult out;
  out.method = RescaleMethod::analytic_profile;
  const GaussianProfile scaled = profile.rescaled_Q(t);
  out.field = scaled.on_grid(g);
  const double ratio = g.spacing / g.half_width;
  out.resolution_warning = (t < 10.0 * ratio) || (t > 1.0 / (10.0 * ratio));
  return out;
}

ScaledFiber ScaledFiber::build(const Field2D& u, const PotentialSpec& V,
                               const Params& prm, const KernelTable& table) {
  return from_parts(compute_breakdown(u, V, prm, table), u, V);
}

ScaledFiber ScaledFiber::from_parts(const EnergyBreakdown& bd, const Field2D& u,
                                    const PotentialSpec& V) {
  if (!V.has_grad())
    throw std::invalid_argument("ScaledFiber: potential gradient required");
  ScaledFiber f;
  f.bd_ = bd;
  f.V_ = V;
  switch (V.kind) {
    case PotentialKind::constant:
      f.path_ = PotentialPath::constant;
      break;
    case PotentialKind::power: {
      f.path_ = PotentialPath::power;
      // V(x/t) u^2 integrates to |u|_2^2 + t^{-q} * this moment.
      const Grid2D& g = u.grid;
      const double q = V.power_q;
      std::vector<double> terms(g.node_count());
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
          const double uij = u.at(i, j);
          terms[g.index(i, j)] = std::pow(g.radius(i, j), q) * uij * uij;
        }
      f.radial_moment_ = g.cell_weight() * pairwise_sum(terms);
      break;
    }
    default:
      f.path_ = PotentialPath::generic;
      f.u_sq_ = pointwise_square(u);
      break;
  }
  return f;
}

double ScaledFiber::pot_term(double t) const {
  switch (path_) {
    case PotentialPath::constant:
      return V_.constant_value * bd_.l2_sq;
    case PotentialPath::power:
      return bd_.l2_sq + radial_moment_ * std::pow(t, -V_.power_q);
    case PotentialPath::generic:
      break;
  }
  const Grid2D& g = u_sq_.grid;
  const double inv_t = 1.0 / t;
  std::vector<double> terms(g.node_count());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const std::size_t k = g.index(i, j);
      terms[k] = V_.eval(g.x(i) * inv_t, g.y(j) * inv_t) * u_sq_.v[k];
    }
  return g.cell_weight() * pairwise_sum(terms);
}

double ScaledFiber::gradx_term(double t) const {
  switch (path_) {
    case PotentialPath::constant:
      return 0.0;
    case PotentialPath::power: {
      // (grad V(x/t), x) = q |x|^q / t^{q-1}.
      const double q = V_.power_q;
      return q * radial_moment_ * std::pow(t, 1.0 - q);
    }
    case PotentialPath::generic:
      break;
  }
  const Grid2D& g = u_sq_.grid;
  const double inv_t = 1.0 / t;
  std::vector<double> terms(g.node_count());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const std::size_t k = g.index(i, j);
      const double x = g.x(i), y = g.y(j);
      if (x == 0.0 && y == 0.0) {
        terms[k] = 0.0;
        continue;
      }
      const auto gr = V_.grad(x * inv_t, y * inv_t);
      terms[k] = (gr[0] * x + gr[1] * y) * u_sq_.v[k];
    }
  return g.cell_weight() * pairwise_sum(terms);
}

double ScaledFiber::value(double t) const {
  const Params& prm = bd_.params;
  const double t2 = t * t, t4 = t2 * t2;
  return 0.5 * t4 * bd_.grad_sq + 0.5 * t2 * pot_term(t) + 0.25 * t4 * bd_.n0 -
         t4 * std::log(t) * kInv8Pi * bd_.l2_sq * bd_.l2_sq -
         (prm.b / prm.p) * std::pow(t, 2.0 * prm.p - 2.0) * bd_.lp;
}

double ScaledFiber::J_of_Q(double t) const {
  const Params& prm = bd_.params;
  const double t2 = t * t, t4 = t2 * t2;
  return 2.0 * t4 * bd_.grad_sq + t2 * pot_term(t) - 0.5 * t * gradx_term(t) +
         t4 * bd_.n0 - t4 * std::log(t) * kInv2Pi * bd_.l2_sq * bd_.l2_sq -
         t4 * kInv8Pi * bd_.l2_sq * bd_.l2_sq -
         (2.0 * prm.p - 2.0) / prm.p * prm.b * std::pow(t, 2.0 * prm.p - 2.0) *
             bd_.lp;
}

double scaled_fiber(const Field2D& u, const PotentialSpec& V, const Params& prm,
                    const KernelTable& table, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("scaled_fiber: t > 0 required");
  return ScaledFiber::build(u, V, prm, table).value(t);
}

double pohozaev_scale(const ScaledFiber& fiber) {
  const Params& prm = fiber.params();
  if (!(prm.p >= 3.0))
    throw std::invalid_argument("pohozaev_scale: requires p >= 3");

  // Derivative-sign scan over the log-t window; the rescaling fiber is
  // unimodal under (V2), so exactly one + -> - crossing is allowed.
  constexpr int kScan = 97;
  constexpr double kLogLo = -6.0, kLogHi = 6.0;
  double prev_t = std::exp(kLogLo);
  double prev_J = fiber.J_of_Q(prev_t);
  double lo = 0.0, hi = 0.0;
  int changes = 0;
  for (int k = 1; k < kScan; ++k) {
    const double t = std::exp(kLogLo + (kLogHi - kLogLo) * k / (kScan - 1));
    const double J = fiber.J_of_Q(t);
    if (prev_J > 0.0 && J <= 0.0) {
      ++changes;
      lo = prev_t;
      hi = t;
    } else if (prev_J <= 0.0 && J > 0.0) {
      ++changes;
    }
    prev_t = t;
    prev_J = J;
  }
  if (changes == 0)
    throw NoInteriorMax("pohozaev_scale: no derivative sign change in window");
  if (changes > 1)
    throw std::runtime_error(
        "pohozaev_scale: multiple fiber sign changes (numerical bug)");

  // Golden-section pass on the fiber value narrows the bracket, then
  // bisection on the derivative sign pins the root.
  {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo), b = std::log(hi);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = fiber.value(std::exp(x1)), f2 = fiber.value(std::exp(x2));
    for (int it = 0; it < 20; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = fiber.value(std::exp(x2));
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = fiber.value(std::exp(x1));
      }
    }
    const double ga = std::exp(a), gb = std::exp(b);
    if (fiber.J_of_Q(ga) > 0.0 && fiber.J_of_Q(gb) <= 0.0) {
      lo = ga;
      hi = gb;
    }
  }

  // Contract: relative t-tolerance 1e-10 and |J(Q(t,u))| small in absolute
  // terms; keep halving until both hold or the interval hits the fp floor.
  const double j_tol = 1e-9 * (fiber.norm_V_sq() + 1.0);
  double best_t = 0.5 * (lo + hi);
  double best_J = std::fabs(fiber.J_of_Q(best_t));
  for (int it = 0; it < 250; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double J = fiber.J_of_Q(mid);
    if (std::fabs(J) < best_J) {
      best_J = std::fabs(J);
      best_t = mid;
    }
    (J > 0.0 ? lo : hi) = mid;
    if ((hi - lo) <= 1e-10 * hi && best_J <= j_tol) break;
  }
  return best_t;
}

double pohozaev_scale(const Field2D& u, const PotentialSpec& V, const Params& prm,
                      const KernelTable& table) {
  return pohozaev_scale(ScaledFiber::build(u, V, prm, table));
}

namespace {

template <class Value, class Deriv>
FiberScan scan_impl(Value&& value, Deriv&& deriv, double t_min, double t_max,
                    int count) {
  if (!(t_min > 0.0 && t_max > t_min && count >= 2))
    throw std::invalid_argument("fiber scan: bad t range");
  FiberScan out;
  const double ratio = std::pow(t_max / t_min, 1.0 / (count - 1));
  double best = -std::numeric_limits<double>::infinity();
  int prev_sign = 0;
  double t = t_min;
  for (int k = 0; k < count; ++k, t *= ratio) {
    const double h = value(t);
    const double d = deriv(t);
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    out.t_values.push_back(t);
    out.h_values.push_back(h);
    out.deriv_sign.push_back(sign);
    if (h > best) {
      best = h;
      out.t_max = t;
    }
    if (k > 0 && sign != 0 && prev_sign != 0 && sign != prev_sign) {
      ++out.sign_changes;
      out.bracket_lo = out.t_values[k - 1];
      out.bracket_hi = t;
    }
    if (sign != 0) prev_sign = sign;
  }
  return out;
}

}  // namespace

FiberScan scan_amplitude(const AmplitudeFiber& fiber, double t_min, double t_max,
                         int count) {
  return scan_impl([&](double t) { return fiber.value(t); },
                   [&](double t) { return fiber.phi(t); }, t_min, t_max, count);
}

FiberScan scan_scaled(const ScaledFiber& fiber, double t_min, double t_max,
                      int count) {
  return scan_impl([&](double t) { return fiber.value(t); },
                   [&](double t) { return fiber.J_of_Q(t); }, t_min, t_max, count);
}

double lemma55_check(const Field2D& u, const PotentialSpec& V, const Params& prm,
                     const KernelTable& table, const std::vector<double>& t_list) {
  if (!(prm.p >= 3.0)) throw std::invalid_argument("lemma55_check: requires p >= 3");
  const ScaledFiber fiber = ScaledFiber::build(u, V, prm, table);
  const double I_u = fiber.value(1.0);
  const double J_u = fiber.J_of_Q(1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : t_list) {
    const double t4 = t * t * t * t;
    const double violation = fiber.value(t) - I_u + 0.25 * (1.0 - t4) * J_u;
    worst = std::max(worst, violation);
  }
  return worst;
}

}  // namespace logsp
