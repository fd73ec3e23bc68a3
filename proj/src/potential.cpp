#include "logsp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace logsp {

namespace {

bool in_checker_square(double x, double y) {
  // D_n = [n, n+1/(2n)]^2, n = 1,2,...; both coordinates must land in the
  // same square, and 1/(2n) <= 1/2 so n is the integer part.
  if (x < 1.0 || y < 1.0) return false;
  const double nx = std::floor(x);
  if (std::floor(y) != nx) return false;
  const double side = 0.5 / nx;
  return x <= nx + side && y <= nx + side;
}

}  // namespace

double PotentialSpec::grad_dot_x(double x, double y) const {
  if (x == 0.0 && y == 0.0) return 0.0;
  const auto g = grad(x, y);
  return g[0] * x + g[1] * y;
}

double PotentialSpec::reduced(double x, double y) const {
  return eval(x, y) - 0.5 * grad_dot_x(x, y);
}

PotentialSpec PotentialSpec::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant potential needs c > 0");
  PotentialSpec s;
  s.kind = PotentialKind::constant;
  s.constant_value = c;
  s.declared_V0 = c;
  s.name = "constant:" + std::to_string(c);
  s.eval_fn = [c](double, double) { return c; };
  s.grad_fn = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  return s;
}

PotentialSpec PotentialSpec::power(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("power potential needs q > 0");
  PotentialSpec s;
  s.kind = PotentialKind::power;
  s.power_q = q;
  s.declared_V0 = 1.0;
  s.name = "power:" + std::to_string(q);
  s.eval_fn = [q](double x, double y) { return 1.0 + std::pow(std::hypot(x, y), q); };
  // grad V = q |x|^{q-2} x, continuous at 0 for q > 1.
  s.grad_fn = [q](double x, double y) -> std::array<double, 2> {
    const double r = std::hypot(x, y);
    if (r == 0.0) return {0.0, 0.0};
    const double f = q * std::pow(r, q - 2.0);
    return {f * x, f * y};
  };
  return s;
}

PotentialSpec PotentialSpec::checkerboard() {
  PotentialSpec s;
  s.kind = PotentialKind::checkerboard;
  s.declared_V0 = 1.0;
  s.name = "checkerboard";
  s.eval_fn = [](double x, double y) {
    if (in_checker_square(x, y)) return 1.0;
    return 1.0 + x * x + y * y;
  };
  // Discontinuous across square boundaries; treated as tabulated, no gradient.
  s.grad_fn = nullptr;
  return s;
}

PotentialSpec PotentialSpec::tabulated(
    std::string name, std::function<double(double, double)> eval, double declared_V0,
    std::function<std::array<double, 2>(double, double)> grad) {
  PotentialSpec s;
  s.kind = PotentialKind::tabulated;
  s.declared_V0 = declared_V0;
  s.name = std::move(name);
  s.eval_fn = std::move(eval);
  s.grad_fn = std::move(grad);
  return s;
}

PotentialSpec PotentialSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "checkerboard") return checkerboard();
  if (colon == std::string::npos)
    throw std::invalid_argument("potential spec needs kind:value, got '" + text + "'");
  const double val = std::stod(text.substr(colon + 1));
  if (head == "power") return power(val);
  if (head == "constant") return constant(val);
  throw std::invalid_argument("unknown potential kind '" + head + "'");
}

V0Report check_V0(const PotentialSpec& spec, const std::vector<double>& M_list,
                  const std::vector<double>& box_list, int samples_per_axis) {
  if (M_list.empty()) throw std::invalid_argument("check_V0: empty M list");
  if (!std::is_sorted(M_list.begin(), M_list.end()))
    throw std::invalid_argument("check_V0: M list must be increasing");
  if (box_list.size() < 2) throw std::invalid_argument("check_V0: need >= 2 boxes");

  V0Report rep;
  rep.boxes = box_list;
  rep.min_sampled_V = std::numeric_limits<double>::infinity();

  for (double M : M_list) {
    V0Report::Row row;
    row.M = M;
    for (double R : box_list) {
      const int s = samples_per_axis;
      const double cell = 2.0 * R / s;
      long count = 0;
      for (int i = 0; i < s; ++i) {
        const double x = -R + (i + 0.5) * cell;
        for (int j = 0; j < s; ++j) {
          const double y = -R + (j + 0.5) * cell;
          const double v = spec.eval(x, y);
          if (R == box_list.back() && M == M_list.back())
            rep.min_sampled_V = std::min(rep.min_sampled_V, v);
          if (v <= M) ++count;
        }
      }
      row.areas.push_back(static_cast<double>(count) * cell * cell);
    }
    const double last = row.areas[row.areas.size() - 1];
    const double prev = row.areas[row.areas.size() - 2];
    row.stabilized = std::fabs(last - prev) <= 0.01 * std::max(last, 1e-12);
    const double Rl = box_list.back();
    row.fill_fraction = last / (4.0 * Rl * Rl);
    rep.rows.push_back(row);
  }

  rep.min_V_ok = rep.min_sampled_V >= spec.declared_V0 - 1e-12;
  const bool all_stable = std::all_of(rep.rows.begin(), rep.rows.end(),
                                      [](const auto& r) { return r.stabilized; });
  const bool fills_box = std::any_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) {
    return !r.stabilized && r.fill_fraction > 0.9;
  });
  if (all_stable && rep.min_V_ok) {
    rep.verdict = "passes";
    rep.passes = true;
  } else if (fills_box || !rep.min_V_ok) {
    rep.verdict = "fails (V0) sublevel condition";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

V1Constants check_V1(const PotentialSpec& spec, const Grid2D& g) {
  if (!spec.has_grad()) throw std::invalid_argument("check_V1 requires a gradient");
  V1Constants out;
  out.box_half_width = g.half_width;
  const double rmin = 3.0 * g.spacing;
  double alpha = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x = g.x(i), y = g.y(j);
      const double V = spec.eval(x, y);
      const double gx = spec.grad_dot_x(x, y);
      worst = std::min(worst, 2.0 * V + gx);
      if (g.radius(i, j) <= rmin) continue;
      const double ratio = std::fabs(gx) / V;
      if (!std::isfinite(ratio)) {
        alpha = std::numeric_limits<double>::infinity();
        continue;
      }
      alpha = std::max(alpha, ratio);
    }
  out.alpha_hat = alpha;
  out.beta_hat = std::max(0.0, -worst);
  return out;
}

V2Report check_V2(const PotentialSpec& spec, int rays, int t_samples) {
  if (rays < 8) throw std::invalid_argument("check_V2: rays >= 8 required");
  if (t_samples < 16) throw std::invalid_argument("check_V2: t_samples >= 16 required");
  if (!spec.has_grad()) throw std::invalid_argument("check_V2 requires a gradient");

  V2Report rep;
  rep.passes = true;
  const double t_lo = 1e-2, t_hi = 1e2;
  const double ratio = std::pow(t_hi / t_lo, 1.0 / (t_samples - 1));
  for (int r = 0; r < rays; ++r) {
    const double ang = 2.0 * std::numbers::pi * r / rays;
    const double dx = std::cos(ang), dy = std::sin(ang);
    double t = t_lo;
    double prev = spec.reduced(t * dx, t * dy);
    for (int k = 1; k < t_samples; ++k) {
      t *= ratio;
      const double cur = spec.reduced(t * dx, t * dy);
      const double tol = 1e-12 * (1.0 + std::max(std::fabs(prev), std::fabs(cur)));
      if (cur < prev - tol) {
        const double drop = prev - cur;
        if (drop > rep.worst_drop) {
          rep.worst_drop = drop;
          rep.violating_ray = r;
          rep.violating_t = t;
        }
        rep.passes = false;
      }
      prev = cur;
    }
  }
  rep.verdict = rep.passes ? "passes" : "fails";
  return rep;
}

Lemma51Report check_lemma51(const PotentialSpec& spec, const Grid2D& g) {
  if (!spec.has_grad()) throw std::invalid_argument("check_lemma51 requires a gradient");
  Lemma51Report rep;
  const double V0 = spec.declared_V0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x = g.x(i), y = g.y(j);
      const double V = spec.eval(x, y);
      const double gx = spec.grad_dot_x(x, y);
      const double vr = V - 0.5 * gx;
      bool bad = false;
      if (gx < -1e-12) {
        rep.gradx_nonneg = false;
        bad = true;
      }
      if (vr < V0 - 1e-12 * (1.0 + std::fabs(V0))) {
        rep.reduced_above_V0 = false;
        bad = true;
      }
      if (gx > 2.0 * V + 1e-12 * (1.0 + 2.0 * std::fabs(V))) {
        rep.gradx_below_2V = false;
        bad = true;
      }
      if (bad) {
        rep.worst_x = x;
        rep.worst_y = y;
      }
    }
  rep.passes = rep.gradx_nonneg && rep.reduced_above_V0 && rep.gradx_below_2V;
  rep.verdict = rep.passes ? "passes" : "fails";
  return rep;
}

}  // namespace logsp
