#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logsp/fiber.hpp"

namespace logsp {

enum class Manifold { nehari, nehari_pohozaev };

struct InitialProfile {
  enum class Kind { gaussian, field, random };
  Kind kind = Kind::gaussian;
  // gaussian: centered bump of full width `width` (the Gaussian sigma is
  // width/2); amplitude <= 0 means "normalize |u|_2 = 2".
  double center_x = 0.0, center_y = 0.0;
  double width = 0.0;  // <= 0 means L/6
  double amplitude = 0.0;
  std::optional<Field2D> field;
  std::uint64_t seed = 1;
};

struct SolveConfig {
  Manifold manifold = Manifold::nehari;
  int max_iters = 2000;
  double grad_tol = 1e-6;   // relative to ||u||_V
  double armijo_c = 1e-4;
  double shrink = 0.5;
  InitialProfile init;
  // optional per-iteration trace: (iter, I, pg_norm, step, projection t)
  std::function<void(int, double, double, double, double)> trace;
};

enum class SolveStatus {
  converged,
  max_iters_reached,
  condition32_violated,
  no_interior_max,
  stalled,
};

const char* to_string(SolveStatus s);

struct SolveReport {
  Field2D u_star;
  SolveStatus status = SolveStatus::max_iters_reached;
  int iterations = 0;
  double I_value = 0.0;
  double norm_V_sq = 0.0;
  double constraint_residual = 0.0;  // |I'(u)u| on N, |J(u)| on M
  double pg_norm = 0.0;            // fiber-projected gradient norm
  double tangent_residual = 0.0;   // constraint-tangent gradient norm
  double pohozaev_residual = 0.0;      // |P(u*)|
  double pohozaev_residual_rel = 0.0;  // |P(u*)| / (||u||_V^2 + 1)
  bool sign_definite = false;
  double min_value = 0.0, max_value = 0.0;
  double boundary_mass = 0.0;  // outer 10% ring mass fraction of u^2
  double fiber_t_max = 0.0;    // projection scale of u*, should be ~1
  std::vector<double> minimax_crosscheck;  // sup_t fiber values of probes
  std::string diagnostics;
  EnergyBreakdown breakdown;
  Manifold manifold = Manifold::nehari;
};

SolveReport minimize_on_nehari(const PotentialSpec& V, const Params& prm,
                               const SolveConfig& cfg, const Grid2D& grid,
                               const KernelTable& table);

SolveReport minimize_on_nehari_pohozaev(const PotentialSpec& V, const Params& prm,
                                        const SolveConfig& cfg, const Grid2D& grid,
                                        const KernelTable& table);

struct VerificationSummary {
  bool sign_ok = false;
  double pohozaev_residual_rel = 0.0;
  bool minimax_ok = false;
  double minimax_worst_gap = 0.0;  // min over probes of sup - I(u*)
  std::vector<double> probe_sups;
  bool fiber_max_ok = false;
  double fiber_t_max = 0.0;
  bool all_ok = false;
  std::vector<std::string> failures;
};

/// Post-solve checks: sign-definiteness, Pohozaev residual, the minimax
/// characterization against seeded probe fields, and fiber maximality at
/// t = 1.  Fills report.minimax_crosscheck.
VerificationSummary verify_ground_state(SolveReport& report, const PotentialSpec& V,
                                        const Params& prm, const KernelTable& table,
                                        int probes, std::uint64_t seed);

struct LambdaStudyRow {
  double lambda = 0.0;
  double c_hat = 0.0;  // min over probes of sup_t I_lambda(t u_k)
};

struct LambdaStudy {
  std::vector<LambdaStudyRow> rows;
  double I_half_v0 = 0.0;  // I_{1/2} at the large-t rescaled bump
  bool v0_negative = false;
  bool monotone = false;             // c_hat non-increasing in lambda
  bool small_ray_positive = false;   // I_lambda > 0 on a small-norm ray
  int probes_used = 0;
};

LambdaStudy lambda_family_study(const PotentialSpec& V, const Params& prm,
                                const Grid2D& grid, const KernelTable& table,
                                const std::vector<double>& lambda_grid, int probes,
                                std::uint64_t seed);

/// Same study over caller-supplied probe fields.
LambdaStudy lambda_family_study_with_probes(const PotentialSpec& V, const Params& prm,
                                            const Grid2D& grid,
                                            const KernelTable& table,
                                            const std::vector<double>& lambda_grid,
                                            const std::vector<Field2D>& probes);

/// Probe generator shared by verification and the lambda study; localized
/// positive bumps that satisfy the fiber structure condition.
Field2D make_probe_field(const Grid2D& grid, std::uint64_t seed, int index);

Field2D make_initial_field(const InitialProfile& init, const Grid2D& grid);

}  // namespace logsp
