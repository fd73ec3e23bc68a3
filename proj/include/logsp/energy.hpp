#pragma once

#include <limits>

#include "logsp/grid.hpp"
#include "logsp/kernel.hpp"
#include "logsp/potential.hpp"

namespace logsp {

/// Model parameters.  gamma is fixed to 1 by rescaling.
struct Params {
  double b = 1.0;     // local nonlinearity strength, >= 0
  double p = 4.0;     // Lebesgue exponent, > 2
  double lambda = 1.0;  // family parameter in [1/2, 1]

  void validate() const;
};

/// Every scalar functional of one field, computed in a single pass
/// (one log-kernel convolution; two more when the N1/N2 split is requested).
struct EnergyBreakdown {
  // raw quadratures
  double grad_sq = 0.0;      // |grad u|_2^2, forward differences
  double pot_v = 0.0;        // integral of V u^2
  double pot_gradx = 0.0;    // integral of (grad V, x) u^2
  double frac_weight = 0.0;  // integral of (|x|/(1+|x|)) u^2
  double star_sq = 0.0;      // integral of log(1+|x|) u^2
  double l2_sq = 0.0;
  double lp = 0.0;           // integral of |u|^p
  double n0 = 0.0;
  double n1 = std::numeric_limits<double>::quiet_NaN();
  double n2 = std::numeric_limits<double>::quiet_NaN();

  // derived
  double norm_V_sq = 0.0;
  double norm_E_sq = 0.0;
  double a_part = 0.0;  // ||u||_E^2/2 + N0/4
  double b_part = 0.0;  // |u|_*^2/2 + (b/p)|u|_p^p
  double value_I = 0.0;
  double value_I_lambda = 0.0;
  double value_J = 0.0;
  double value_J_lambda = 0.0;
  double value_P_lambda = 0.0;

  Params params;
  bool has_split = false;
  bool has_potential_derivatives = false;

  /// Exact homogeneity update for u -> t*u (no new convolution).
  EnergyBreakdown amplitude_scaled(double t) const;
};

double J_lambda_from(const EnergyBreakdown& bd, double lambda);
double P_lambda_from(const EnergyBreakdown& bd, double lambda);

EnergyBreakdown compute_breakdown(const Field2D& u, const PotentialSpec& V,
                                  const Params& prm, const KernelTable& table,
                                  bool with_split = false);

/// Breakdown plus the convolution potential w = (1/2pi)(log * u^2), which the
/// gradient reuses.  Under u -> t*u, w scales by t^2.
struct EnergyEval {
  EnergyBreakdown bd;
  Field2D w;
};

EnergyEval compute_energy_eval(const Field2D& u, const PotentialSpec& V,
                               const Params& prm, const KernelTable& table,
                               bool with_split = false);

double energy_I(const Field2D& u, const PotentialSpec& V, const Params& prm,
                const KernelTable& table);
double energy_I_lambda(const Field2D& u, const PotentialSpec& V, const Params& prm,
                       const KernelTable& table);

/// Euler-Lagrange gradient field: -lap u + V u + w u - b|u|^{p-2}u, zero on
/// the boundary ring.  integrate(grad * v) is the directional derivative.
Field2D grad_I(const Field2D& u, const PotentialSpec& V, const Params& prm,
               const KernelTable& table);
Field2D grad_I_lambda(const Field2D& u, const PotentialSpec& V, const Params& prm,
                      const KernelTable& table);

/// Same, with the convolution potential supplied by the caller.
Field2D grad_I_given_w(const Field2D& u, const Field2D& w, const PotentialSpec& V,
                       const Params& prm);
Field2D grad_I_lambda_given_w(const Field2D& u, const Field2D& w,
                              const PotentialSpec& V, const Params& prm);

double functional_J(const Field2D& u, const PotentialSpec& V, const Params& prm,
                    const KernelTable& table);
double functional_J_lambda(const Field2D& u, const PotentialSpec& V,
                           const Params& prm, const KernelTable& table);
double functional_P_lambda(const Field2D& u, const PotentialSpec& V,
                           const Params& prm, const KernelTable& table);

/// sign(u)|u|^{p-1} with |0|^{p-1} = 0; continuous for p > 2.
double signed_power(double u, double p);

}  // namespace logsp
