#include <doctest.h>

#include <cmath>
#include <numbers>

#include "logsp/energy.hpp"
#include "logsp/fiber.hpp"
#include "logsp/random_fields.hpp"
#include "test_util.hpp"

using namespace logsp;
using testutil::rel_diff;
using testutil::rel_err;

namespace {

Field2D unit_bump(const Grid2D& g, std::uint64_t seed, double l2 = 2.0) {
  Field2D u = random_bump_field(g, seed);
  const double norm = std::sqrt(l2_sq(u));
  return scaled(u, l2 / norm);
}

struct Setup {
  Grid2D grid;
  KernelTable table;
  PotentialSpec V;

  static Setup make(double L = 4.0, int n = 32, const char* pot = "power:2") {
    Grid2D g = Grid2D::make(L, n);
    return Setup{g, KernelTable::build(g), PotentialSpec::parse(pot)};
  }
};

// Direct double-sum N0, fully independent of the FFT path.
double n0_direct(const Field2D& u, const KernelTable& t) {
  const Field2D us = pointwise_square(u);
  return dot(t.convolve_direct(us, KernelKind::log_r), us);
}

}  // namespace

TEST_CASE("energy_I: zero field and fiber recombination") {
  Setup s = Setup::make();
  const Params prm{1.0, 4.0, 1.0};
  CHECK(energy_I(Field2D::zeros(s.grid), s.V, prm, s.table) == 0.0);

  const Field2D u = unit_bump(s.grid, 21);
  const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
  for (double t : {0.5, 2.0}) {
    const double direct = energy_I(scaled(u, t), s.V, prm, s.table);
    const double recomb = 0.5 * t * t * bd.norm_V_sq +
                          0.25 * t * t * t * t * bd.n0 -
                          (prm.b / prm.p) * std::pow(t, prm.p) * bd.lp;
    CHECK(rel_diff(direct, recomb) < 1e-12);
  }
}

TEST_CASE("energy_I at b=0 against the direct double-sum oracle") {
  Setup s = Setup::make();
  const Params prm{0.0, 4.0, 1.0};
  const Field2D u = testutil::gaussian_field(s.grid, 1.2, 0.9);
  const double via_oracle = 0.5 * (grad_sq_norm(u) + [&] {
                              double acc = 0.0;
                              for (int i = 0; i < s.grid.n; ++i)
                                for (int j = 0; j < s.grid.n; ++j)
                                  acc += s.V.eval(s.grid.x(i), s.grid.y(j)) *
                                         u.at(i, j) * u.at(i, j);
                              return acc * s.grid.cell_weight();
                            }()) +
                            0.25 * n0_direct(u, s.table);
  CHECK(rel_diff(energy_I(u, s.V, prm, s.table), via_oracle) < 1e-10);
}

TEST_CASE("grad_I: zero field, Nehari pairing, directional derivative slope") {
  Setup s = Setup::make();
  const Params prm{1.0, 4.0, 1.0};

  const Field2D gz = grad_I(Field2D::zeros(s.grid), s.V, prm, s.table);
  for (double x : gz.v) CHECK(x == 0.0);

  // I'(u)u recombines from the breakdown scalars
  for (int k = 0; k < 4; ++k) {
    const Field2D u = unit_bump(s.grid, 50 + k);
    const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
    const double pairing = dot(grad_I(u, s.V, prm, s.table), u);
    const double recomb = bd.norm_V_sq + bd.n0 - prm.b * bd.lp;
    CHECK(rel_diff(pairing, recomb) < 1e-10);
  }
}

namespace {

// log-log slope of the central-difference error over eps = 1e-2,1e-3,1e-4
double fd_slope(const Setup& s, const Params& prm, std::uint64_t seed,
                bool lambda_path) {
  const Field2D u = unit_bump(s.grid, seed, 2.0);
  const Field2D v = unit_bump(s.grid, seed + 1000, 1.0);
  const Field2D g = lambda_path ? grad_I_lambda(u, s.V, prm, s.table)
                                : grad_I(u, s.V, prm, s.table);
  const double exact = dot(g, v);
  auto energy = [&](const Field2D& f) {
    return lambda_path ? energy_I_lambda(f, s.V, prm, s.table)
                       : energy_I(f, s.V, prm, s.table);
  };
  std::vector<double> errs;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double plus = energy(axpy(eps, v, u));
    const double minus = energy(axpy(-eps, v, u));
    errs.push_back(std::fabs((plus - minus) / (2.0 * eps) - exact));
  }
  if (errs.front() < 1e-13 && errs.back() < 1e-13) return 2.0;  // exact to rounding
  return std::log(errs.front() / errs.back()) / std::log(1e-2 / 1e-4);
}

}  // namespace

TEST_CASE("gradient consistency: central differences, lambda = 1 and 0.6") {
  Setup s = Setup::make();
  for (int k = 0; k < 3; ++k) {
    CHECK(fd_slope(s, Params{1.0, 4.0, 1.0}, 70 + k, false) >= 1.9);
    CHECK(fd_slope(s, Params{1.0, 4.0, 0.6}, 80 + k, true) >= 1.9);
    // non-integer exponent path; p close to 3 keeps |u|^{p} smooth enough
    // for a clean second-order slope
    CHECK(fd_slope(s, Params{1.0, 3.4, 0.6}, 90 + k, true) >= 1.9);
  }
}

TEST_CASE("I_lambda: exact reduction, monotonicity, A/B split") {
  Setup s = Setup::make();
  const Field2D u = unit_bump(s.grid, 31);

  const Params p1{1.0, 4.0, 1.0};
  const EnergyBreakdown bd1 = compute_breakdown(u, s.V, p1, s.table);
  CHECK(bd1.value_I_lambda == bd1.value_I);  // bitwise at lambda = 1

  double prev = -std::numeric_limits<double>::infinity();
  for (double lam : {1.0, 0.75, 0.5}) {
    const Params prm{1.0, 4.0, lam};
    const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
    CHECK(bd.b_part > 0.0);
    CHECK(bd.value_I_lambda > prev);  // B > 0 makes I_lambda decrease in lambda
    prev = bd.value_I_lambda;
    CHECK(rel_diff(bd.value_I_lambda, bd.a_part - lam * bd.b_part) < 1e-12);
  }
}

TEST_CASE("gradient of I_lambda includes both monotonicity-trick terms") {
  // I_lambda = I + (1-lambda)(|u|_*^2/2 + (b/p)|u|_p^p), so the gradient must
  // carry (1-lambda)(log(1+|x|)u + b|u|^{p-2}u); checked against the scalars.
  Setup s = Setup::make();
  const Params prm{2.0, 4.0, 0.5};
  const Field2D u = unit_bump(s.grid, 33);
  const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
  const double pairing = dot(grad_I_lambda(u, s.V, prm, s.table), u);
  // I_lambda'(u)u = ||u||_V^2 + (1-lambda)|u|_*^2 + N0 - lambda b |u|_p^p
  const double recomb = bd.norm_V_sq + (1.0 - prm.lambda) * bd.star_sq + bd.n0 -
                        prm.lambda * prm.b * bd.lp;
  CHECK(rel_diff(pairing, recomb) < 1e-10);
}

TEST_CASE("J, J_lambda, P_lambda: zeros and the defining identity") {
  Setup s = Setup::make();
  const Params prm{1.0, 3.0, 0.7};
  const Field2D zero = Field2D::zeros(s.grid);
  CHECK(functional_J(zero, s.V, prm, s.table) == 0.0);
  CHECK(functional_J_lambda(zero, s.V, prm, s.table) == 0.0);
  CHECK(functional_P_lambda(zero, s.V, prm, s.table) == 0.0);

  // J_lambda(u) = 2 I_lambda'(u)u - P_lambda(u) on arbitrary fields
  for (int k = 0; k < 5; ++k) {
    const Field2D u = unit_bump(s.grid, 110 + k);
    const double lhs = functional_J_lambda(u, s.V, prm, s.table);
    const double rhs = 2.0 * dot(grad_I_lambda(u, s.V, prm, s.table), u) -
                       functional_P_lambda(u, s.V, prm, s.table);
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * (std::fabs(lhs) + std::fabs(rhs) + 1.0));
  }
}

TEST_CASE("lambda = 1 reduction is bit-level for J and P") {
  Setup s = Setup::make();
  const Params prm{1.5, 3.5, 1.0};
  for (int k = 0; k < 3; ++k) {
    const Field2D u = unit_bump(s.grid, 140 + k);
    const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
    CHECK(bd.value_J == bd.value_J_lambda);
    CHECK(rel_diff(bd.value_J, J_lambda_from(bd, 1.0)) == 0.0);
    CHECK(rel_diff(bd.value_P_lambda, P_lambda_from(bd, 1.0)) == 0.0);
  }
}

TEST_CASE("P at constant potential reduces term-by-term") {
  Setup s = Setup::make(4.0, 32, "constant:2");
  const Params prm{1.0, 4.0, 1.0};
  const Field2D u = unit_bump(s.grid, 55);
  const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
  CHECK(bd.pot_gradx == 0.0);  // grad V = 0
  const double expected = bd.pot_v + bd.n0 +
                          bd.l2_sq * bd.l2_sq / (8.0 * std::numbers::pi) -
                          2.0 * prm.b / prm.p * bd.lp;
  CHECK(rel_diff(P_lambda_from(bd, 1.0), expected) < 1e-14);
}

TEST_CASE("J identity with I and P at lambda = 1") {
  Setup s = Setup::make();
  const Params prm{1.0, 3.0, 1.0};
  for (int k = 0; k < 5; ++k) {
    const Field2D u = unit_bump(s.grid, 160 + k);
    const double J = functional_J(u, s.V, prm, s.table);
    const double pairing = dot(grad_I(u, s.V, prm, s.table), u);
    const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
    const double P = P_lambda_from(bd, 1.0);
    CHECK(std::fabs(J - (2.0 * pairing - P)) <=
          1e-10 * (std::fabs(J) + std::fabs(P) + 1.0));
  }
}

TEST_CASE("breakdown bookkeeping: norm_E, split identity, scaled breakdown") {
  Setup s = Setup::make();
  const Params prm{1.0, 4.0, 1.0};
  const Field2D u = unit_bump(s.grid, 77);
  const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table, true);
  CHECK(bd.norm_E_sq == bd.norm_V_sq + bd.star_sq);
  CHECK(bd.has_split);
  CHECK(std::fabs(bd.n0 - (bd.n1 - bd.n2)) <=
        1e-10 * (std::fabs(bd.n1) + std::fabs(bd.n2) + 1.0));

  const double t = 1.7;
  const EnergyBreakdown scaled_bd = bd.amplitude_scaled(t);
  const EnergyBreakdown fresh = compute_breakdown(scaled(u, t), s.V, prm, s.table);
  CHECK(rel_diff(scaled_bd.value_I, fresh.value_I) < 1e-12);
  CHECK(rel_diff(scaled_bd.value_J, fresh.value_J) < 1e-11);
  CHECK(rel_diff(scaled_bd.norm_V_sq, fresh.norm_V_sq) < 1e-12);
}

TEST_CASE("Nehari-Pohozaev recombination identities on J(u) = 0 fields") {
  Setup s = Setup::make(6.0, 49);
  for (double p : {3.0, 3.5}) {
    const Params prm{1.0, p, 1.0};
    // single narrow bump: N0 < 0, so the quartic coefficient of J(a u0)
    // is negative and an amplitude root exists
    const Field2D u0 = testutil::gaussian_field(s.grid, 1.0 + 0.2 * p, 0.8, 0.3, -0.2);
    REQUIRE(compute_breakdown(u0, s.V, prm, s.table).n0 < 0.0);

    auto J_of = [&](double a) {
      return functional_J(scaled(u0, a), s.V, prm, s.table);
    };
    double lo = 1e-3, hi = 1.0;
    REQUIRE(J_of(lo) > 0.0);
    int guard = 0;
    while (J_of(hi) > 0.0) {
      hi *= 2.0;
      REQUIRE(++guard < 60);
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (J_of(mid) > 0.0 ? lo : hi) = mid;
    }
    const Field2D u = scaled(u0, 0.5 * (lo + hi));
    const EnergyBreakdown bd = compute_breakdown(u, s.V, prm, s.table);
    CHECK(std::fabs(bd.value_J) <= 1e-8 * (bd.norm_V_sq + 1.0));

    // I(u) = (1/4) int [V + (grad V, x)/2] u^2 + |u|_2^4/(32 pi)
    //        + b(p-3)/(2p) |u|_p^p on the manifold
    const double rhs = 0.25 * (bd.pot_v + 0.5 * bd.pot_gradx) +
                       bd.l2_sq * bd.l2_sq / (32.0 * std::numbers::pi) +
                       prm.b * (prm.p - 3.0) / (2.0 * prm.p) * bd.lp;
    CHECK(rel_diff(bd.value_I, rhs) < 1e-8);
    // positivity consequence for p >= 3
    CHECK(bd.value_I >= bd.l2_sq * bd.l2_sq / (32.0 * std::numbers::pi) - 1e-12);
    CHECK(bd.value_I > 0.0);
  }
}

TEST_CASE("Nehari recombination: I >= ||u||_V^2 / 4 on the manifold for p >= 4") {
  Setup s = Setup::make();
  const Params prm{1.0, 4.5, 1.0};
  for (int k = 0; k < 4; ++k) {
    const Field2D u0 = unit_bump(s.grid, 300 + k);
    const EnergyBreakdown bd0 = compute_breakdown(u0, s.V, prm, s.table);
    const double t = nehari_scale(bd0);
    const EnergyBreakdown bd = bd0.amplitude_scaled(t);
    CHECK(std::fabs(bd.norm_V_sq + bd.n0 - prm.b * bd.lp) <=
          1e-10 * (bd.norm_V_sq + 1.0));
    CHECK(bd.value_I >= 0.25 * bd.norm_V_sq * (1.0 - 1e-12));
  }
}

TEST_CASE("signed_power edge cases") {
  CHECK(signed_power(0.0, 3.5) == 0.0);
  CHECK(signed_power(2.0, 4.0) == 8.0);
  CHECK(signed_power(-2.0, 4.0) == -8.0);
  CHECK(signed_power(-3.0, 3.0) == -9.0);
  CHECK(signed_power(0.5, 2.5) == doctest::Approx(std::pow(0.5, 1.5)));
}
