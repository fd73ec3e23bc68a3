// Acceptance suite: runs every primary criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.  Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "logsp/field_io.hpp"
#include "logsp/random_fields.hpp"
#include "logsp/solver.hpp"

using namespace logsp;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %-38s %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Field2D normalized_bump(const Grid2D& g, std::uint64_t seed, double l2 = 2.0) {
  Field2D u = random_bump_field(g, seed);
  return scaled(u, l2 / std::sqrt(l2_sq(u)));
}

struct OracleStats {
  double max_rel_error = 0.0;   // FFT vs direct, fields and functionals
  double max_split_mismatch = 0.0;
  double seconds = 0.0;
};

OracleStats kernel_oracle_corpus() {
  const double t0 = now_seconds();
  OracleStats stats;
  const Grid2D g = Grid2D::make(4.0, 32);
  const KernelTable table = KernelTable::build(g);
  for (int k = 0; k < 50; ++k) {
    const Field2D u = random_noise_field(g, 9000 + k);
    const Field2D us = pointwise_square(u);
    const Field2D f = random_noise_field(g, 9100 + k);
    const Field2D h = random_noise_field(g, 9200 + k);
    double n_vals[3];
    for (int kind = 0; kind < 3; ++kind) {
      const KernelKind kk = static_cast<KernelKind>(kind);
      const Field2D fast = table.convolve(us, kk);
      const Field2D slow = table.convolve_direct(us, kk);
      double scale = 0.0;
      for (double x : slow.v) scale = std::max(scale, std::fabs(x));
      for (std::size_t i = 0; i < fast.v.size(); ++i)
        stats.max_rel_error =
            std::max(stats.max_rel_error,
                     std::fabs(fast.v[i] - slow.v[i]) / (scale + 1e-300));
      // N_i via both paths
      const double n_fast = dot(fast, us);
      const double n_slow = dot(slow, us);
      stats.max_rel_error =
          std::max(stats.max_rel_error,
                   std::fabs(n_fast - n_slow) / (std::fabs(n_slow) + 1e-300));
      n_vals[kind] = n_fast;
      // B_i(f, h) via both paths
      const double b_fast = dot(table.convolve(f, kk), h);
      const double b_slow = dot(table.convolve_direct(f, kk), h);
      stats.max_rel_error =
          std::max(stats.max_rel_error,
                   std::fabs(b_fast - b_slow) / (std::fabs(b_slow) + 1e-300));
    }
    const double mism = std::fabs(n_vals[0] - (n_vals[1] - n_vals[2])) /
                        (std::fabs(n_vals[1]) + std::fabs(n_vals[2]) + 1.0);
    stats.max_split_mismatch = std::max(stats.max_split_mismatch, mism);
  }
  stats.seconds = now_seconds() - t0;
  return stats;
}

// Central-difference error triple over eps = 1e-2, 1e-3, 1e-4.
std::vector<double> fd_errors(const Grid2D& g, const KernelTable& table,
                              const PotentialSpec& V, const Params& prm,
                              const Field2D& u, const Field2D& v) {
  const Field2D grad = prm.lambda == 1.0 ? grad_I(u, V, prm, table)
                                         : grad_I_lambda(u, V, prm, table);
  const double exact = dot(grad, v);
  std::vector<double> errs;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    auto energy = [&](const Field2D& f) {
      return prm.lambda == 1.0 ? energy_I(f, V, prm, table)
                               : energy_I_lambda(f, V, prm, table);
    };
    const double plus = energy(axpy(eps, v, u));
    const double minus = energy(axpy(-eps, v, u));
    errs.push_back(std::fabs((plus - minus) / (2.0 * eps) - exact));
  }
  return errs;
}

// Draws (u, v) pairs and keeps those with enough directional cubic content
// to track two decades of eps^2 decay above the fp cancellation floor of the
// centered difference (the conditioning gate looks only at the first error).
double fd_slope_min(const Grid2D& g, const KernelTable& table,
                    const PotentialSpec& V, const Params& prm,
                    std::uint64_t seed_base, int pairs) {
  double worst = 3.0;
  int accepted = 0;
  for (std::uint64_t seed = seed_base; accepted < pairs && seed < seed_base + 200;
       ++seed) {
    const Field2D u = normalized_bump(g, seed, 2.0);
    const Field2D v = normalized_bump(g, seed + 5000, 1.0);
    const std::vector<double> errs = fd_errors(g, table, V, prm, u, v);
    if (errs.front() < 1e-6) continue;
    ++accepted;
    worst = std::min(worst, std::log(errs.front() / errs.back()) /
                                std::log(1e-2 / 1e-4));
  }
  if (accepted < pairs) return 0.0;
  return worst;
}

}  // namespace

int main() {
  std::printf("== acceptance suite ==\n");

  // ------------------------------------------------------------------ 1 & 2
  {
    const OracleStats stats = kernel_oracle_corpus();
    report(1, "kernel oracle equivalence",
           stats.max_rel_error <= 1e-10 && stats.seconds <= 30.0,
           "max_rel=" + fmt(stats.max_rel_error) + " (tol 1e-10), " +
               fmt(stats.seconds) + "s (cap 30s)");
    report(2, "split identity N0 = N1 - N2", stats.max_split_mismatch <= 1e-10,
           "max=" + fmt(stats.max_split_mismatch) + " (tol 1e-10)");
  }

  // --------------------------------------------------------------------- 3
  {
    // oracle-scale grid keeps |I| ~ 1, away from the fp cancellation floor
    // of the centered difference at eps = 1e-4
    const Grid2D g = Grid2D::make(4.0, 32);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const double s1 = fd_slope_min(g, table, V, Params{1.0, 4.0, 1.0}, 300, 10);
    const double s2 = fd_slope_min(g, table, V, Params{1.0, 4.0, 0.6}, 400, 10);
    const double worst = std::min(s1, s2);
    report(3, "gradient consistency (I and I_lambda)", worst >= 1.9,
           "min log-log slope=" + fmt(worst) + " (need >= 1.9; lam=1: " + fmt(s1) +
               ", lam=0.6: " + fmt(s2) + ")");
  }

  // --------------------------------------------------------------------- 4
  {
    const Grid2D g = Grid2D::make(4.0, 32);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const Params prm{1.0, 4.0, 1.0};
    int accepted = 0;
    bool ok = true;
    double worst_rel = 0.0;
    for (std::uint64_t seed = 1; accepted < 100 && seed < 2000; ++seed) {
      const Field2D u = normalized_bump(g, 7000 + seed);
      const EnergyBreakdown bd = compute_breakdown(u, V, prm, table);
      if (!(bd.n0 - prm.b * bd.lp < 0.0)) continue;  // needs condition (3.2)
      ++accepted;
      const FiberScan scan =
          scan_amplitude(AmplitudeFiber::from(bd), 0.01, 100.0, 200);
      if (scan.sign_changes != 1) ok = false;
      const double t = nehari_scale(bd);
      const double closed = std::sqrt(bd.norm_V_sq / (prm.b * bd.lp - bd.n0));
      worst_rel = std::max(worst_rel, std::fabs(t - closed) / closed);
    }
    if (accepted < 100) ok = false;
    if (worst_rel > 1e-8) ok = false;

    // b = 0 fields with N0 >= 0 must report case (ii)
    const Grid2D gw = Grid2D::make(12.0, 33);
    const KernelTable tw = KernelTable::build(gw);
    int case2 = 0, case2_ok = 0;
    for (int k = 0; k < 10; ++k) {
      const Field2D u = GaussianProfile{1.0 + 0.1 * k, 0.0, 0.0, 5.0 + 0.2 * k}
                            .on_grid(gw);
      Params b0{0.0, 4.0, 1.0};
      const EnergyBreakdown bd = compute_breakdown(u, PotentialSpec::power(2.0),
                                                   b0, tw);
      if (bd.n0 < 0.0) continue;
      ++case2;
      try {
        nehari_scale(bd);
      } catch (const Condition32Violated&) {
        const FiberScan scan =
            scan_amplitude(AmplitudeFiber::from(bd), 0.01, 100.0, 200);
        bool all_pos = scan.sign_changes == 0;
        for (int s : scan.deriv_sign) all_pos = all_pos && s == 1;
        if (all_pos) ++case2_ok;
      }
    }
    ok = ok && case2 > 0 && case2 == case2_ok;
    report(4, "amplitude fiber structure", ok,
           "fields=" + std::to_string(accepted) + ", worst closed-form rel=" +
               fmt(worst_rel) + " (tol 1e-8), case(ii)=" + std::to_string(case2_ok) +
               "/" + std::to_string(case2));
  }

  // --------------------------------------------------------------------- 5
  {
    const double t_scale = 2.0;
    auto mismatch = [&](int n) {
      const Grid2D g = Grid2D::make(12.0, n);
      const KernelTable table = KernelTable::build(g);
      const GaussianProfile base{2.0, 0.0, 0.0, 2.5};
      const Field2D u = base.on_grid(g);
      const Field2D v = base.rescaled_Q(t_scale).on_grid(g);
      const double lhs = N0(v, table);
      const double m2 = l2_sq(v);
      const double rhs = std::pow(t_scale, 4.0) * N0(u, table) -
                         std::log(t_scale) / (2.0 * std::numbers::pi) * m2 * m2;
      return std::fabs(lhs - rhs) / std::max(std::fabs(lhs), std::fabs(rhs));
    };
    const double e129 = mismatch(129);
    const double e257 = mismatch(257);
    report(5, "dilation identity for N0", e257 <= 1e-3 && e129 / e257 >= 2.5,
           "rel@257=" + fmt(e257) + " (tol 1e-3), ratio 129/257=" + fmt(e129 / e257) +
               " (need >= 2.5, ~4 expected)");
  }

  // --------------------------------------------------------------------- 6
  {
    const Grid2D g = Grid2D::make(12.0, 65);
    const KernelTable table = KernelTable::build(g);
    const Params prm{1.0, 3.0, 1.0};
    std::vector<double> ts;
    for (int k = 0; k < 32; ++k) ts.push_back(0.05 * std::pow(400.0, k / 31.0));
    double worst = -1e300;
    bool ok = true;
    for (const char* pot : {"constant:1", "power:1.5", "power:2"}) {
      const PotentialSpec V = PotentialSpec::parse(pot);
      for (int k = 0; k < 20; ++k) {
        const Field2D u = normalized_bump(g, 1200 + k);
        const double I = energy_I(u, V, prm, table);
        const double viol = lemma55_check(u, V, prm, table, ts);
        worst = std::max(worst, viol);
        if (viol > 1e-8 * (1.0 + std::fabs(I))) ok = false;
      }
    }
    report(6, "fiber comparison inequality", ok,
           "max violation=" + fmt(worst) + " (tol 1e-8*(1+|I|))");
  }

  // --------------------------------------------- 7, 9, 10: shared solves
  SolveReport nehari257;
  {
    const double t0 = now_seconds();
    const Grid2D g = Grid2D::make(12.0, 257);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const Params prm{1.0, 4.0, 1.0};
    SolveConfig cfg;
    nehari257 = minimize_on_nehari(V, prm, cfg, g, table);
    VerificationSummary sum =
        verify_ground_state(nehari257, V, prm, table, 20, 7);
    const double secs = now_seconds() - t0;
    const bool ok = nehari257.status == SolveStatus::converged &&
                    nehari257.iterations <= 2000 &&
                    nehari257.constraint_residual <=
                        1e-8 * (nehari257.norm_V_sq + 1.0) &&
                    nehari257.sign_definite &&
                    nehari257.I_value >= 0.25 * nehari257.norm_V_sq * (1.0 - 1e-10) &&
                    sum.fiber_max_ok && sum.minimax_ok && sum.sign_ok &&
                    secs <= 300.0;
    report(7, "Nehari ground state (p=4, n=257)", ok,
           "I=" + fmt(nehari257.I_value) + ", res=" +
               fmt(nehari257.constraint_residual) + ", t_max-1=" +
               fmt(sum.fiber_t_max - 1.0) + ", " + std::to_string(nehari257.iterations) +
               " iters, " + fmt(secs) + "s");
  }

  // --------------------------------------------------------------------- 8
  {
    const Grid2D g = Grid2D::make(12.0, 257);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const Params prm{1.0, 3.0, 1.0};
    SolveConfig cfg;
    cfg.manifold = Manifold::nehari_pohozaev;
    SolveReport rep = minimize_on_nehari_pohozaev(V, prm, cfg, g, table);
    const EnergyBreakdown& bd = rep.breakdown;
    const double rhs = 0.25 * (bd.pot_v + 0.5 * bd.pot_gradx) +
                       bd.l2_sq * bd.l2_sq / (32.0 * std::numbers::pi) +
                       prm.b * (prm.p - 3.0) / (2.0 * prm.p) * bd.lp;
    const double recomb = std::fabs(rep.I_value - rhs) /
                          std::max(std::fabs(rep.I_value), std::fabs(rhs));
    const double lower = bd.l2_sq * bd.l2_sq / (32.0 * std::numbers::pi);
    const bool ok = rep.status == SolveStatus::converged &&
                    rep.constraint_residual <= 1e-6 * (rep.norm_V_sq + 1.0) &&
                    recomb <= 1e-6 && rep.I_value >= lower * (1.0 - 1e-9) &&
                    rep.I_value > 0.0 && rep.sign_definite;
    report(8, "Nehari-Pohozaev ground state (p=3)", ok,
           "I=" + fmt(rep.I_value) + ", |J|=" + fmt(rep.constraint_residual) +
               ", recomb=" + fmt(recomb) + " (tol 1e-6)");
  }

  // --------------------------------------------------------------------- 9
  {
    const Grid2D g = Grid2D::make(12.0, 129);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const Params prm{1.0, 4.0, 1.0};
    SolveConfig cfg;
    SolveReport rep129 = minimize_on_nehari(V, prm, cfg, g, table);
    const double r129 = rep129.pohozaev_residual_rel;
    const double r257 = nehari257.pohozaev_residual_rel;
    const bool ok = rep129.status == SolveStatus::converged && r257 <= 1e-2 &&
                    r129 / r257 >= 2.5;
    report(9, "Pohozaev residual refinement", ok,
           "rel@129=" + fmt(r129) + ", rel@257=" + fmt(r257) +
               " (tol 1e-2), ratio=" + fmt(r129 / r257) + " (need >= 2.5, ~4)");
  }

  // -------------------------------------------------------------------- 10
  {
    const Grid2D g = Grid2D::make(12.0, 257);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const Params prm{1.0, 4.0, 1.0};
    SolveConfig cfg;
    cfg.manifold = Manifold::nehari_pohozaev;
    SolveReport np = minimize_on_nehari_pohozaev(V, prm, cfg, g, table);
    const double gap = std::fabs(np.I_value - nehari257.I_value) /
                       std::fabs(nehari257.I_value);
    const bool ok = np.status == SolveStatus::converged && gap <= 0.02;
    report(10, "cross-characterization at p=4", ok,
           "I_N=" + fmt(nehari257.I_value) + ", I_M=" + fmt(np.I_value) +
               ", gap=" + fmt(gap) + " (tol 2%)");
  }

  // -------------------------------------------------------------------- 11
  {
    const Grid2D g = Grid2D::make(12.0, 129);
    const KernelTable table = KernelTable::build(g);
    const PotentialSpec V = PotentialSpec::power(2.0);
    const Params prm{1.0, 4.0, 1.0};
    const std::vector<double> lambdas{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const LambdaStudy study =
        lambda_family_study(V, prm, g, table, lambdas, 20, 5);
    const bool ok =
        study.monotone && study.v0_negative && study.small_ray_positive;
    report(11, "lambda family: monotone c_hat, v0, ray", ok,
           "c(0.5)=" + fmt(study.rows.front().c_hat) + " >= ... >= c(1)=" +
               fmt(study.rows.back().c_hat) + ", I_half(v0)=" + fmt(study.I_half_v0));
  }

  // -------------------------------------------------------------------- 12
  {
    const Grid2D g = Grid2D::make(12.0, 257);
    bool ok = true;
    std::string detail;

    const PotentialSpec q2 = PotentialSpec::power(2.0);
    const V1Constants v1 = check_V1(q2, g);
    ok = ok && v1.alpha_hat < 2.0 && v1.beta_hat == 0.0;
    ok = ok && check_V2(q2, 16, 64).passes && check_lemma51(q2, g).passes;
    ok = ok && check_V0(q2, {5.0}, {6.0, 9.0, 12.0}).passes;
    detail += "alpha=" + fmt(v1.alpha_hat) + " beta=" + fmt(v1.beta_hat);

    ok = ok && !check_V2(PotentialSpec::power(3.0), 16, 64).passes;

    const std::vector<double> boxes{4.0, 6.0, 8.0};
    const V0Report chk = check_V0(PotentialSpec::checkerboard(), {1.5}, boxes);
    double analytic = std::numbers::pi / 2.0;
    for (int m = 1; m + 0.5 / m <= boxes.back(); ++m) analytic += 0.25 / (m * m);
    const double area_err =
        std::fabs(chk.rows[0].areas.back() - analytic) / analytic;
    ok = ok && chk.passes && area_err <= 0.05;
    detail += ", checker area err=" + fmt(area_err) + " (tol 5%)";

    report(12, "potential validators", ok, detail);
  }

  std::printf("== %s: %d criterion failure(s) ==\n",
              g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
  return g_failures == 0 ? 0 : 1;
}
