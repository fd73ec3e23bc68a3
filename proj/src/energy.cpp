#include "logsp/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace logsp {

namespace {
constexpr double kInv8Pi = 1.0 / (8.0 * std::numbers::pi);
}

void Params::validate() const {
  if (!(b >= 0.0)) throw std::invalid_argument("Params: b >= 0 required");
  if (!(p > 2.0)) throw std::invalid_argument("Params: p > 2 required");
  if (!(lambda >= 0.5 && lambda <= 1.0))
    throw std::invalid_argument("Params: lambda in [1/2, 1] required");
}

double signed_power(double u, double p) {
  if (u == 0.0) return 0.0;
  if (p == 4.0) return u * u * u;
  if (p == 3.0) return std::fabs(u) * u;
  return std::copysign(std::pow(std::fabs(u), p - 1.0), u);
}

double J_lambda_from(const EnergyBreakdown& bd, double lambda) {
  const Params& prm = bd.params;
  return 2.0 * bd.grad_sq + 0.5 * (2.0 * bd.pot_v - bd.pot_gradx) + bd.n0 -
         kInv8Pi * bd.l2_sq * bd.l2_sq -
         (2.0 * prm.p - 2.0) / prm.p * prm.b * lambda * bd.lp +
         0.5 * (1.0 - lambda) * (2.0 * bd.star_sq - bd.frac_weight);
}

double P_lambda_from(const EnergyBreakdown& bd, double lambda) {
  const Params& prm = bd.params;
  return 0.5 * (2.0 * bd.pot_v + bd.pot_gradx) + bd.n0 +
         kInv8Pi * bd.l2_sq * bd.l2_sq - 2.0 * prm.b * lambda / prm.p * bd.lp +
         0.5 * (1.0 - lambda) * (2.0 * bd.star_sq + bd.frac_weight);
}

namespace {

void assemble(EnergyBreakdown& bd) {
  const Params& prm = bd.params;
  bd.norm_V_sq = bd.grad_sq + bd.pot_v;
  bd.norm_E_sq = bd.norm_V_sq + bd.star_sq;
  bd.a_part = 0.5 * bd.norm_E_sq + 0.25 * bd.n0;
  bd.b_part = 0.5 * bd.star_sq + (prm.b / prm.p) * bd.lp;
  bd.value_I = 0.5 * bd.norm_V_sq + 0.25 * bd.n0 - (prm.b / prm.p) * bd.lp;
  // I_lambda = I + (1-lambda) B(u); the (1-lambda) factor cancels exactly at
  // lambda = 1, so I_1 is bit-identical to I.
  bd.value_I_lambda = bd.value_I + (1.0 - prm.lambda) * bd.b_part;
  if (bd.has_potential_derivatives) {
    bd.value_J = J_lambda_from(bd, 1.0);
    bd.value_J_lambda = J_lambda_from(bd, prm.lambda);
    bd.value_P_lambda = P_lambda_from(bd, prm.lambda);
  } else {
    bd.value_J = bd.value_J_lambda = bd.value_P_lambda =
        std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

EnergyBreakdown EnergyBreakdown::amplitude_scaled(double t) const {
  EnergyBreakdown out = *this;
  const double t2 = t * t;
  const double t4 = t2 * t2;
  out.grad_sq *= t2;
  out.pot_v *= t2;
  out.pot_gradx *= t2;
  out.frac_weight *= t2;
  out.star_sq *= t2;
  out.l2_sq *= t2;
  out.lp *= std::pow(t, params.p);
  out.n0 *= t4;
  if (has_split) {
    out.n1 *= t4;
    out.n2 *= t4;
  }
  assemble(out);
  return out;
}

EnergyEval compute_energy_eval(const Field2D& u, const PotentialSpec& V,
                               const Params& prm, const KernelTable& table,
                               bool with_split) {
  prm.validate();
  const Grid2D& g = u.grid;
  if (!g.same_as(table.grid()))
    throw std::invalid_argument("compute_energy_eval: grid/kernel mismatch");

  EnergyEval out;
  EnergyBreakdown& bd = out.bd;
  bd.params = prm;
  bd.has_potential_derivatives = V.has_grad();

  bd.grad_sq = grad_sq_norm(u);
  bd.l2_sq = l2_sq(u);
  bd.lp = lp_norm_p(u, prm.p);
  bd.star_sq = star_norm_sq(u);

  const std::size_t nn = g.node_count();
  std::vector<double> t_v(nn), t_gx(nn), t_fr(nn);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x = g.x(i), y = g.y(j);
      const double us = u.at(i, j) * u.at(i, j);
      const std::size_t k = g.index(i, j);
      t_v[k] = V.eval(x, y) * us;
      t_gx[k] = bd.has_potential_derivatives ? V.grad_dot_x(x, y) * us : 0.0;
      const double r = std::hypot(x, y);
      t_fr[k] = r / (1.0 + r) * us;
    }
  const double w2 = g.cell_weight();
  bd.pot_v = w2 * pairwise_sum(t_v);
  bd.pot_gradx = bd.has_potential_derivatives
                     ? w2 * pairwise_sum(t_gx)
                     : std::numeric_limits<double>::quiet_NaN();
  bd.frac_weight = w2 * pairwise_sum(t_fr);

  const Field2D u_sq = pointwise_square(u);
  out.w = table.convolve(u_sq, KernelKind::log_r);
  bd.n0 = dot(out.w, u_sq);
  if (with_split) {
    bd.n1 = dot(table.convolve(u_sq, KernelKind::log1p_r), u_sq);
    bd.n2 = dot(table.convolve(u_sq, KernelKind::log1p_inv_r), u_sq);
    bd.has_split = true;
  }

  assemble(bd);
  return out;
}

EnergyBreakdown compute_breakdown(const Field2D& u, const PotentialSpec& V,
                                  const Params& prm, const KernelTable& table,
                                  bool with_split) {
  return compute_energy_eval(u, V, prm, table, with_split).bd;
}

double energy_I(const Field2D& u, const PotentialSpec& V, const Params& prm,
                const KernelTable& table) {
  return compute_breakdown(u, V, prm, table).value_I;
}

double energy_I_lambda(const Field2D& u, const PotentialSpec& V, const Params& prm,
                       const KernelTable& table) {
  return compute_breakdown(u, V, prm, table).value_I_lambda;
}

Field2D grad_I_given_w(const Field2D& u, const Field2D& w, const PotentialSpec& V,
                       const Params& prm) {
  const Grid2D& g = u.grid;
  Field2D out = laplacian(u);
  for (int i = 1; i + 1 < g.n; ++i)
    for (int j = 1; j + 1 < g.n; ++j) {
      const std::size_t k = g.index(i, j);
      const double uij = u.v[k];
      out.v[k] = -out.v[k] + V.eval(g.x(i), g.y(j)) * uij + w.v[k] * uij -
                 prm.b * signed_power(uij, prm.p);
    }
  return out;
}

Field2D grad_I_lambda_given_w(const Field2D& u, const Field2D& w,
                              const PotentialSpec& V, const Params& prm) {
  Field2D out = grad_I_given_w(u, w, V, prm);
  const double c = 1.0 - prm.lambda;
  if (c == 0.0) return out;  // exact reduction at lambda = 1
  const Grid2D& g = u.grid;
  for (int i = 1; i + 1 < g.n; ++i)
    for (int j = 1; j + 1 < g.n; ++j) {
      const std::size_t k = g.index(i, j);
      const double uij = u.v[k];
      out.v[k] += c * (std::log1p(g.radius(i, j)) * uij +
                       prm.b * signed_power(uij, prm.p));
    }
  return out;
}

Field2D grad_I(const Field2D& u, const PotentialSpec& V, const Params& prm,
               const KernelTable& table) {
  prm.validate();
  const Field2D w = table.convolve(pointwise_square(u), KernelKind::log_r);
  return grad_I_given_w(u, w, V, prm);
}

Field2D grad_I_lambda(const Field2D& u, const PotentialSpec& V, const Params& prm,
                      const KernelTable& table) {
  prm.validate();
  const Field2D w = table.convolve(pointwise_square(u), KernelKind::log_r);
  return grad_I_lambda_given_w(u, w, V, prm);
}

double functional_J(const Field2D& u, const PotentialSpec& V, const Params& prm,
                    const KernelTable& table) {
  return compute_breakdown(u, V, prm, table).value_J;
}

double functional_J_lambda(const Field2D& u, const PotentialSpec& V,
                           const Params& prm, const KernelTable& table) {
  return compute_breakdown(u, V, prm, table).value_J_lambda;
}

double functional_P_lambda(const Field2D& u, const PotentialSpec& V,
                           const Params& prm, const KernelTable& table) {
  return compute_breakdown(u, V, prm, table).value_P_lambda;
}

}  // namespace logsp
