#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "logsp/grid.hpp"

namespace logsp {

enum class PotentialKind { constant, power, checkerboard, tabulated };

/// External potential V with (optional) gradient and the declared lower
/// bound V0 = inf V.  Built-ins: a constant, the coercive power family
/// V = 1 + |x|^q, and the non-coercive checkerboard of unit squares
/// D_n = [n, n+1/(2n)]^2 where V drops back to 1.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::constant;
  double constant_value = 1.0;
  double power_q = 2.0;
  double declared_V0 = 1.0;
  std::string name = "constant:1";
  std::function<double(double, double)> eval_fn;
  std::function<std::array<double, 2>(double, double)> grad_fn;  // empty if n/a

  double eval(double x, double y) const { return eval_fn(x, y); }
  bool has_grad() const { return static_cast<bool>(grad_fn); }
  std::array<double, 2> grad(double x, double y) const { return grad_fn(x, y); }

  /// (grad V(x), x); defined as 0 at the origin node.
  double grad_dot_x(double x, double y) const;

  /// Reduced potential  V(x) - (grad V(x), x)/2.
  double reduced(double x, double y) const;

  static PotentialSpec constant(double c);
  static PotentialSpec power(double q);
  static PotentialSpec checkerboard();
  static PotentialSpec tabulated(std::string name,
                                 std::function<double(double, double)> eval,
                                 double declared_V0,
                                 std::function<std::array<double, 2>(double, double)>
                                     grad = nullptr);

  /// Parses "power:2", "constant:1.5", "checkerboard".
  static PotentialSpec parse(const std::string& text);
};

/// Sublevel-set area scan behind hypothesis (V0).  Areas are node counts of
/// {V <= M} on [-R,R]^2 times the sampling cell area; the verdict is
/// box-limited evidence, not a proof.
struct V0Report {
  struct Row {
    double M = 0.0;
    std::vector<double> areas;  // one per box radius
    bool stabilized = false;
    double fill_fraction = 0.0;  // area / (2R)^2 at the largest box
  };
  std::vector<double> boxes;
  std::vector<Row> rows;
  double min_sampled_V = 0.0;
  bool min_V_ok = false;
  std::string verdict;  // "passes" | "fails (V0) sublevel condition" | "inconclusive"
  bool passes = false;
};

V0Report check_V0(const PotentialSpec& spec, const std::vector<double>& M_list,
                  const std::vector<double>& box_list, int samples_per_axis = 1024);

/// Empirical (V1) constants on the sampled box: alpha_hat bounds
/// |(grad V,x)|/V, beta_hat bounds the negative part of 2V + (grad V,x).
/// Nodes with |x| <= 3h are excluded from the ratio.
struct V1Constants {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double box_half_width = 0.0;
};

V1Constants check_V1(const PotentialSpec& spec, const Grid2D& sample_grid);

/// Monotonicity check for (V2): t -> V_reduced(t x) sampled along rays.
struct V2Report {
  bool passes = false;
  int violating_ray = -1;
  double violating_t = 0.0;
  double worst_drop = 0.0;
  std::string verdict;
};

V2Report check_V2(const PotentialSpec& spec, int rays, int t_samples);

/// Consequences of (V0)+(V2): (grad V,x) >= 0, the reduced potential
/// stays above V0, and (grad V,x) <= 2V.
struct Lemma51Report {
  bool passes = false;
  bool gradx_nonneg = true;
  bool reduced_above_V0 = true;
  bool gradx_below_2V = true;
  double worst_x = 0.0, worst_y = 0.0;
  std::string verdict;
};

Lemma51Report check_lemma51(const PotentialSpec& spec, const Grid2D& sample_grid);

}  // namespace logsp
