#pragma once

#include <stdexcept>
#include <vector>

#include "logsp/energy.hpp"

namespace logsp {

/// The amplitude fiber t -> I(tu) has no interior maximum (case (ii)):
/// thrown when the structure condition behind the Nehari projection fails.
struct Condition32Violated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The scaled-fiber derivative never changes sign inside the search window;
/// signals truncation/window failure, not a mathematical case.
struct NoInteriorMax : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// t -> I(tu) from cached scalars: one convolution, any number of t.
struct AmplitudeFiber {
  double norm_V_sq = 0.0;
  double n0 = 0.0;
  double lp = 0.0;
  double b = 0.0;
  double p = 4.0;

  static AmplitudeFiber from(const EnergyBreakdown& bd);

  double value(double t) const;
  /// h'(t)/t = ||u||_V^2 + t^2 N0 - b t^{p-2} |u|_p^p.
  double phi(double t) const;
  double derivative(double t) const { return t * phi(t); }

  /// True iff the fiber has the single-maximum structure; requires
  /// p >= 4 unless b = 0.
  bool has_interior_max() const;
};

double amplitude_fiber(const Field2D& u, const PotentialSpec& V, const Params& prm,
                       const KernelTable& table, double t);

/// Unique root of phi on (0,inf); t_u * u lies on the Nehari manifold.
/// Throws Condition32Violated in case (ii).
double nehari_scale(const EnergyBreakdown& bd);
double nehari_scale(const Field2D& u, const PotentialSpec& V, const Params& prm,
                    const KernelTable& table);

/// Parameterized profile for exact rescaling in tests and probes.
struct GaussianProfile {
  double amplitude = 1.0;
  double cx = 0.0, cy = 0.0;
  double sigma = 1.0;

  double eval(double x, double y) const;
  Field2D on_grid(const Grid2D& g) const;
  /// Q(t,u)(x) = t^2 u(tx) maps Gaussians to Gaussians.
  GaussianProfile rescaled_Q(double t) const;
  /// Amplitude such that |u|_2 takes the requested value.
  static GaussianProfile with_l2_norm(double l2, double sigma, double cx = 0.0,
                                      double cy = 0.0);
};

enum class RescaleMethod { interpolated, analytic_profile };

struct RescaleResult {
  Field2D field;
  RescaleMethod method = RescaleMethod::interpolated;
  bool resolution_warning = false;  // t pushes the profile under/over the mesh
};

RescaleResult rescale_Q(const Field2D& u, double t);
RescaleResult rescale_Q(const GaussianProfile& profile, const Grid2D& g, double t);

/// t -> I(Q(t,u)) through the closed fiber formula: cached invariant scalars
/// plus the quadrature of V(x/t) u^2.  No interpolation enters.  Constant and
/// power potentials reduce the V-term to one precomputed radial moment, so
/// fiber evaluations are O(1); other potentials pay a per-t node loop.
class ScaledFiber {
 public:
  static ScaledFiber build(const Field2D& u, const PotentialSpec& V,
                           const Params& prm, const KernelTable& table);
  static ScaledFiber from_parts(const EnergyBreakdown& bd, const Field2D& u,
                                const PotentialSpec& V);

  double value(double t) const;
  /// J(Q(t,u)) = t h'(t); sign gives the fiber derivative sign.
  double J_of_Q(double t) const;

  double norm_V_sq() const { return bd_.norm_V_sq; }
  const Params& params() const { return bd_.params; }

 private:
  enum class PotentialPath { constant, power, generic };

  EnergyBreakdown bd_;
  Field2D u_sq_;  // only kept on the generic path
  PotentialSpec V_;
  PotentialPath path_ = PotentialPath::generic;
  double radial_moment_ = 0.0;  // integral of |x|^q u^2 (power path)

  double pot_term(double t) const;    // integral of V(x/t) u^2
  double gradx_term(double t) const;  // integral of (grad V(x/t), x) u^2
};

double scaled_fiber(const Field2D& u, const PotentialSpec& V, const Params& prm,
                    const KernelTable& table, double t);

/// Unique maximizer of t -> I(Q(t,u)) in the window log t in [-6,6];
/// derivative-sign scan (asserts unimodality), then bisection.
double pohozaev_scale(const ScaledFiber& fiber);
double pohozaev_scale(const Field2D& u, const PotentialSpec& V, const Params& prm,
                      const KernelTable& table);

/// Fiber scan rows for the CLI and the sign-structure tests.
struct FiberScan {
  std::vector<double> t_values;
  std::vector<double> h_values;
  std::vector<int> deriv_sign;  // -1, 0, +1
  int sign_changes = 0;
  double t_max = 0.0;    // argmax over the scan
  double bracket_lo = 0.0, bracket_hi = 0.0;
};

FiberScan scan_amplitude(const AmplitudeFiber& fiber, double t_min, double t_max,
                         int count);
FiberScan scan_scaled(const ScaledFiber& fiber, double t_min, double t_max,
                      int count);

/// Max over t_list of I(Q(t,u)) - I(u) + (1-t^4)/4 J(u); nonpositive up to
/// rounding when (V2) holds and p >= 3.
double lemma55_check(const Field2D& u, const PotentialSpec& V, const Params& prm,
                     const KernelTable& table, const std::vector<double>& t_list);

}  // namespace logsp
