// logsp: ground states of the planar log-kernel Schrodinger-Poisson model.
//
// Subcommands: solve, energy-report, fiber-scan, check-potential,
// kernel-selftest, lambda-study.  Every run writes a manifest with the
// resolved parameters; `logsp --config manifest.cfg` reproduces the run.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "logsp/field_io.hpp"
#include "logsp/random_fields.hpp"
#include "logsp/solver.hpp"
#include "logsp/threads.hpp"
#include "logsp/version.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace logsp;

namespace {

struct ManifestEntry {
  std::string key, value;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<ManifestEntry>& entries) {
  fs::create_directories(out_dir);
  std::ofstream f(fs::path(out_dir) / "manifest.cfg");
  if (!f) throw std::runtime_error("cannot write manifest in " + out_dir);
  f << "# logsp manifest (" << kReportSchema << ")\n";
  f << "# rerun with: logsp --config manifest.cfg\n";
  f << "version = " << kVersion << "\n";
  f << "command = " << command << "\n";
  f << "threads = " << thread_cap() << "\n";
  for (const auto& e : entries) f << e.key << " = " << e.value << "\n";
}

// UTF-8 lines "key = value", '#' comments.
std::vector<ManifestEntry> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) entries.push_back({key, value});
  }
  return entries;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

json breakdown_json(const EnergyBreakdown& bd) {
  return json{{"norm_V_sq", bd.norm_V_sq}, {"star_sq", bd.star_sq},
              {"n0", bd.n0},               {"n1", bd.n1},
              {"n2", bd.n2},               {"lp", bd.lp},
              {"l2_sq", bd.l2_sq},         {"I", bd.value_I},
              {"I_lambda", bd.value_I_lambda},
              {"J", bd.value_J},           {"J_lambda", bd.value_J_lambda},
              {"P_lambda", bd.value_P_lambda}};
}

// ---------------------------------------------------------------------------
// per-command option bags

struct SolveOpts {
  std::string manifold;
  std::string potential;
  double b = 1.0, p = 4.0;
  double L = 12.0;
  int n = 257;
  std::uint64_t seed = 7;
  int max_iters = 2000;
  double grad_tol = 1e-6;
  int probes = 20;
  std::string init = "gaussian";
  std::string init_file;
  double init_width = 0.0, init_amplitude = 0.0;
  double init_center_x = 0.0, init_center_y = 0.0;
  std::string out = "logsp_out";
};

struct EnergyOpts {
  std::string field;
  std::string potential;
  double b = 1.0, p = 4.0, lambda = 1.0;
  std::string out = ".";
};

struct FiberOpts {
  std::string field;
  std::string potential;
  std::string mode = "amplitude";
  double b = 1.0, p = 4.0;
  double t_min = 0.01, t_max = 100.0;
  int t_count = 200;
  std::string out = ".";
};

struct CheckPotOpts {
  std::string kind;
  double q = 2.0, c = 1.0;
  double L = 12.0;
  int n = 257;
  std::string M_list = "1.5,5";
  std::string boxes;  // default derived from L
  std::string out = ".";
};

struct SelftestOpts {
  int n = 32;
  double L = 4.0;
  int fields = 50;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct LambdaOpts {
  std::string potential;
  double b = 1.0, p = 4.0;
  double L = 12.0;
  int n = 129;
  std::string lambdas = "0.5,0.6,0.7,0.8,0.9,1.0";
  int probes = 20;
  std::uint64_t seed = 1;
  std::string out = "logsp_out";
};

// ---------------------------------------------------------------------------

int run_solve(const SolveOpts& o) {
  if (o.manifold != "nehari" && o.manifold != "np") {
    std::cerr << "error: --manifold must be nehari or np\n";
    return 2;
  }
  if (o.manifold == "np" && !(o.p >= 3.0)) {
    std::cerr << "error: nehari_pohozaev requires p >= 3\n";
    return 2;
  }
  if (o.manifold == "nehari" && !(o.p >= 4.0 || o.b == 0.0)) {
    std::cerr << "error: nehari requires p >= 4 (or b = 0)\n";
    return 2;
  }

  const Grid2D grid = Grid2D::make(o.L, o.n);
  const KernelTable table = KernelTable::build(grid);
  const PotentialSpec V = PotentialSpec::parse(o.potential);
  const Params prm{o.b, o.p, 1.0};

  SolveConfig cfg;
  cfg.manifold = o.manifold == "np" ? Manifold::nehari_pohozaev : Manifold::nehari;
  cfg.max_iters = o.max_iters;
  cfg.grad_tol = o.grad_tol;
  cfg.init.seed = o.seed;
  cfg.init.width = o.init_width;
  cfg.init.amplitude = o.init_amplitude;
  cfg.init.center_x = o.init_center_x;
  cfg.init.center_y = o.init_center_y;
  if (o.init == "gaussian") {
    cfg.init.kind = InitialProfile::Kind::gaussian;
  } else if (o.init == "random") {
    cfg.init.kind = InitialProfile::Kind::random;
  } else if (o.init == "file") {
    cfg.init.kind = InitialProfile::Kind::field;
    cfg.init.field = read_field(o.init_file);
  } else {
    std::cerr << "error: --init must be gaussian, random or file\n";
    return 2;
  }

  fs::create_directories(o.out);
  write_manifest(o.out, "solve",
                 {{"manifold", o.manifold},
                  {"potential", o.potential},
                  {"b", fmt_double(o.b)},
                  {"p", fmt_double(o.p)},
                  {"L", fmt_double(o.L)},
                  {"n", std::to_string(o.n)},
                  {"seed", std::to_string(o.seed)},
                  {"max-iters", std::to_string(o.max_iters)},
                  {"grad-tol", fmt_double(o.grad_tol)},
                  {"probes", std::to_string(o.probes)},
                  {"init", o.init},
                  {"init-width", fmt_double(o.init_width)},
                  {"init-amplitude", fmt_double(o.init_amplitude)},
                  {"init-center-x", fmt_double(o.init_center_x)},
                  {"init-center-y", fmt_double(o.init_center_y)},
                  {"out", o.out}});

  SolveReport rep = cfg.manifold == Manifold::nehari
                        ? minimize_on_nehari(V, prm, cfg, grid, table)
                        : minimize_on_nehari_pohozaev(V, prm, cfg, grid, table);

  std::vector<std::string> failures;
  VerificationSummary sum;
  if (rep.status == SolveStatus::converged) {
    sum = verify_ground_state(rep, V, prm, table, o.probes, o.seed);
    failures = sum.failures;
    const double res_tol =
        (cfg.manifold == Manifold::nehari ? 1e-8 : 1e-6) * (rep.norm_V_sq + 1.0);
    if (rep.constraint_residual > res_tol)
      failures.push_back("constraint residual above tolerance");
  } else {
    failures.push_back(std::string("solver status: ") + to_string(rep.status) +
                       (rep.diagnostics.empty() ? "" : " (" + rep.diagnostics + ")"));
  }

  const bool have_field = rep.u_star.grid.n >= 8;
  if (have_field) {
    write_field((fs::path(o.out) / "u_star.lspf").string(), rep.u_star);
    write_field_csv((fs::path(o.out) / "u_star.csv").string(), rep.u_star);
  }

  if (have_field) {  // fiber scan around the solution
    std::ofstream f(fs::path(o.out) / "fiber_scan.csv");
    f << "t,h,h_prime_sign\n";
    f.precision(17);
    FiberScan scan;
    if (cfg.manifold == Manifold::nehari) {
      scan = scan_amplitude(AmplitudeFiber::from(rep.breakdown), 0.01, 100.0, 200);
    } else {
      scan = scan_scaled(ScaledFiber::from_parts(rep.breakdown, rep.u_star, V),
                         0.01, 100.0, 200);
    }
    for (std::size_t k = 0; k < scan.t_values.size(); ++k)
      f << scan.t_values[k] << ',' << scan.h_values[k] << ',' << scan.deriv_sign[k]
        << '\n';
  }
  {
    std::ofstream f(fs::path(o.out) / "probes.csv");
    f << "probe,sup_fiber\n";
    f.precision(17);
    for (std::size_t k = 0; k < rep.minimax_crosscheck.size(); ++k)
      f << k << ',' << rep.minimax_crosscheck[k] << '\n';
  }

  json report{{"schema", kReportSchema},
              {"command", "solve"},
              {"manifold", o.manifold},
              {"potential", o.potential},
              {"params",
               {{"b", o.b},
                {"p", o.p},
                {"L", o.L},
                {"n", o.n},
                {"seed", o.seed},
                {"max_iters", o.max_iters},
                {"grad_tol", o.grad_tol},
                {"probes", o.probes}}},
              {"status", to_string(rep.status)},
              {"converged", rep.status == SolveStatus::converged},
              {"iterations", rep.iterations},
              {"I", rep.I_value},
              {"norm_V_sq", rep.norm_V_sq},
              {"constraint_residual", rep.constraint_residual},
              {"pg_norm", rep.pg_norm},
              {"tangent_residual", rep.tangent_residual},
              {"pohozaev_residual", rep.pohozaev_residual},
              {"pohozaev_residual_rel", rep.pohozaev_residual_rel},
              {"sign_definite", rep.sign_definite},
              {"min_value", rep.min_value},
              {"max_value", rep.max_value},
              {"boundary_mass", rep.boundary_mass},
              {"fiber_t_max", rep.fiber_t_max},
              {"breakdown", breakdown_json(rep.breakdown)},
              {"verification",
               {{"sign_ok", sum.sign_ok},
                {"minimax_ok", sum.minimax_ok},
                {"minimax_worst_gap", sum.minimax_worst_gap},
                {"fiber_max_ok", sum.fiber_max_ok},
                {"fiber_t_max", sum.fiber_t_max},
                {"pohozaev_residual_rel", sum.pohozaev_residual_rel}}},
              {"failures", failures}};
  std::ofstream rf(fs::path(o.out) / "report.json");
  rf << report.dump(2) << "\n";
  std::cout << report.dump(2) << std::endl;

  if (!failures.empty()) {
    for (const auto& msg : failures) std::cerr << "FAILED CHECK: " << msg << "\n";
    return 1;
  }
  return 0;
}

int run_energy_report(const EnergyOpts& o) {
  const Field2D u = read_field(o.field);
  const PotentialSpec V = PotentialSpec::parse(o.potential);
  const Params prm{o.b, o.p, o.lambda};
  const KernelTable table = KernelTable::build(u.grid);
  const EnergyBreakdown bd = compute_breakdown(u, V, prm, table, true);

  write_manifest(o.out, "energy-report",
                 {{"field", o.field},
                  {"potential", o.potential},
                  {"b", fmt_double(o.b)},
                  {"p", fmt_double(o.p)},
                  {"lambda", fmt_double(o.lambda)},
                  {"out", o.out}});

  json report = breakdown_json(bd);
  report["schema"] = kReportSchema;
  report["command"] = "energy-report";
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int run_fiber_scan(const FiberOpts& o) {
  if (o.mode != "amplitude" && o.mode != "scaled") {
    std::cerr << "error: --mode must be amplitude or scaled\n";
    return 2;
  }
  const Field2D u = read_field(o.field);
  const PotentialSpec V = PotentialSpec::parse(o.potential);
  const Params prm{o.b, o.p, 1.0};
  const KernelTable table = KernelTable::build(u.grid);

  write_manifest(o.out, "fiber-scan",
                 {{"field", o.field},
                  {"potential", o.potential},
                  {"mode", o.mode},
                  {"b", fmt_double(o.b)},
                  {"p", fmt_double(o.p)},
                  {"t-min", fmt_double(o.t_min)},
                  {"t-max", fmt_double(o.t_max)},
                  {"t-count", std::to_string(o.t_count)},
                  {"out", o.out}});

  FiberScan scan;
  if (o.mode == "amplitude") {
    scan = scan_amplitude(AmplitudeFiber::from(compute_breakdown(u, V, prm, table)),
                          o.t_min, o.t_max, o.t_count);
  } else {
    scan =
        scan_scaled(ScaledFiber::build(u, V, prm, table), o.t_min, o.t_max, o.t_count);
  }
  std::cout << "t,h,h_prime_sign\n";
  std::cout.precision(17);
  for (std::size_t k = 0; k < scan.t_values.size(); ++k)
    std::cout << scan.t_values[k] << ',' << scan.h_values[k] << ','
              << scan.deriv_sign[k] << '\n';
  return 0;
}

int run_check_potential(const CheckPotOpts& o) {
  PotentialSpec spec = [&] {
    if (o.kind == "power") return PotentialSpec::power(o.q);
    if (o.kind == "constant") return PotentialSpec::constant(o.c);
    if (o.kind == "checkerboard") return PotentialSpec::checkerboard();
    throw std::invalid_argument("--kind must be power, constant or checkerboard");
  }();

  const Grid2D grid = Grid2D::make(o.L, o.n);
  const std::vector<double> boxes =
      o.boxes.empty() ? std::vector<double>{0.5 * o.L, 0.75 * o.L, o.L}
                      : parse_list(o.boxes);
  const std::vector<double> Ms = parse_list(o.M_list);

  write_manifest(o.out, "check-potential",
                 {{"kind", o.kind},
                  {"q", fmt_double(o.q)},
                  {"c", fmt_double(o.c)},
                  {"L", fmt_double(o.L)},
                  {"n", std::to_string(o.n)},
                  {"M", o.M_list},
                  {"boxes",
                   [&] {
                     std::string s;
                     for (double b : boxes) s += (s.empty() ? "" : ",") + fmt_double(b);
                     return s;
                   }()},
                  {"out", o.out}});

  const V0Report v0 = check_V0(spec, Ms, boxes);
  json out{{"schema", kReportSchema},
           {"command", "check-potential"},
           {"kind", o.kind},
           {"v0_verdict", v0.verdict},
           {"v0_min_sampled_V", v0.min_sampled_V}};
  json rows = json::array();
  for (const auto& r : v0.rows)
    rows.push_back({{"M", r.M},
                    {"areas", r.areas},
                    {"stabilized", r.stabilized},
                    {"fill_fraction", r.fill_fraction}});
  out["v0_rows"] = rows;

  if (spec.has_grad()) {
    const V1Constants v1 = check_V1(spec, grid);
    out["alpha_hat"] = v1.alpha_hat;
    out["beta_hat"] = v1.beta_hat;
    out["v2_verdict"] = check_V2(spec, 16, 64).verdict;
    out["lemma51_verdict"] = check_lemma51(spec, grid).verdict;
  } else {
    // discontinuous potential: gradient-based validators do not apply
    out["alpha_hat"] = nullptr;
    out["beta_hat"] = nullptr;
    out["v2_verdict"] = "unchecked";
    out["lemma51_verdict"] = "unchecked";
  }
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int run_kernel_selftest(const SelftestOpts& o) {
  std::vector<int> sizes{16, 24};
  if (std::find(sizes.begin(), sizes.end(), o.n) == sizes.end()) sizes.push_back(o.n);
  std::sort(sizes.begin(), sizes.end());

  write_manifest(o.out, "kernel-selftest",
                 {{"n", std::to_string(o.n)},
                  {"L", fmt_double(o.L)},
                  {"fields", std::to_string(o.fields)},
                  {"seed", std::to_string(o.seed)},
                  {"out", o.out}});

  bool all_ok = true;
  std::cout << "n,max_rel_error\n";
  for (int n : sizes) {
    const Grid2D grid = Grid2D::make(o.L, n);
    const KernelTable table = KernelTable::build(grid);
    double worst = 0.0;
    for (int k = 0; k < o.fields; ++k) {
      const Field2D u = random_noise_field(grid, o.seed * 1000 + k);
      const Field2D us = pointwise_square(u);
      for (KernelKind kind :
           {KernelKind::log_r, KernelKind::log1p_r, KernelKind::log1p_inv_r}) {
        const Field2D fast = table.convolve(us, kind);
        const Field2D slow = table.convolve_direct(us, kind);
        double scale = 0.0;
        for (double x : slow.v) scale = std::max(scale, std::fabs(x));
        for (std::size_t i = 0; i < fast.v.size(); ++i)
          worst =
              std::max(worst, std::fabs(fast.v[i] - slow.v[i]) / (scale + 1e-300));
        const double n_fast = dot(fast, us);
        const double n_slow = dot(slow, us);
        worst =
            std::max(worst, std::fabs(n_fast - n_slow) / (std::fabs(n_slow) + 1e-300));
      }
    }
    std::cout << n << ',' << worst << '\n';
    if (worst > 1e-10) all_ok = false;
  }
  return all_ok ? 0 : 1;
}

int run_lambda_study(const LambdaOpts& o) {
  const Grid2D grid = Grid2D::make(o.L, o.n);
  const KernelTable table = KernelTable::build(grid);
  const PotentialSpec V = PotentialSpec::parse(o.potential);
  const Params prm{o.b, o.p, 1.0};
  const std::vector<double> lambdas = parse_list(o.lambdas);

  write_manifest(o.out, "lambda-study",
                 {{"potential", o.potential},
                  {"b", fmt_double(o.b)},
                  {"p", fmt_double(o.p)},
                  {"L", fmt_double(o.L)},
                  {"n", std::to_string(o.n)},
                  {"lambdas", o.lambdas},
                  {"probes", std::to_string(o.probes)},
                  {"seed", std::to_string(o.seed)},
                  {"out", o.out}});

  const LambdaStudy study =
      lambda_family_study(V, prm, grid, table, lambdas, o.probes, o.seed);

  fs::create_directories(o.out);
  {
    std::ofstream f(fs::path(o.out) / "lambda_rows.csv");
    f << "lambda,c_hat\n";
    f.precision(17);
    for (const auto& row : study.rows) f << row.lambda << ',' << row.c_hat << '\n';
  }

  json out{{"schema", kReportSchema},
           {"command", "lambda-study"},
           {"monotone", study.monotone},
           {"I_half_v0", study.I_half_v0},
           {"v0_negative", study.v0_negative},
           {"small_ray_positive", study.small_ray_positive},
           {"probes_used", study.probes_used}};
  json rows = json::array();
  for (const auto& row : study.rows)
    rows.push_back({{"lambda", row.lambda}, {"c_hat", row.c_hat}});
  out["rows"] = rows;
  std::cout << out.dump(2) << std::endl;

  if (!study.monotone || !study.v0_negative || !study.small_ray_positive) {
    std::cerr << "FAILED CHECK: lambda-family verdicts\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // --config FILE merges "key = value" lines as defaults; explicit flags win.
  std::vector<std::string> raw(argv + 1, argv + argc);
  std::vector<std::string> tokens;
  std::string config_path;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "--config") {
      if (i + 1 >= raw.size()) {
        std::cerr << "error: --config needs a file argument\n";
        return 2;
      }
      config_path = raw[++i];
    } else if (raw[i].rfind("--config=", 0) == 0) {
      config_path = raw[i].substr(9);
    } else {
      tokens.push_back(raw[i]);
    }
  }

  std::string command_from_config;
  std::vector<std::string> config_tokens;
  if (!config_path.empty()) {
    try {
      for (const auto& e : read_config(config_path)) {
        if (e.key == "command")
          command_from_config = e.value;
        else if (e.key == "version")
          continue;
        else
          config_tokens.push_back("--" + e.key + "=" + e.value);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  // assemble: subcommand first, then config defaults, then user flags
  std::vector<std::string> args;
  const bool user_has_command = !tokens.empty() && tokens.front()[0] != '-';
  if (user_has_command) {
    args.push_back(tokens.front());
    tokens.erase(tokens.begin());
  } else if (!command_from_config.empty()) {
    args.push_back(command_from_config);
  }
  args.insert(args.end(), config_tokens.begin(), config_tokens.end());
  args.insert(args.end(), tokens.begin(), tokens.end());

  CLI::App app{"planar Schrodinger-Poisson ground states (log kernel)"};
  app.require_subcommand(0, 1);
  int threads = 1;
  if (const char* env = std::getenv("LOGSP_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "cap on internal parallelism");

  SolveOpts so;
  EnergyOpts eo;
  FiberOpts fo;
  CheckPotOpts co;
  SelftestOpts to;
  LambdaOpts lo;

  auto* solve = app.add_subcommand("solve", "constrained ground-state solve");
  solve->fallthrough();
  solve->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve->add_option("--manifold", so.manifold, "nehari | np")->required();
  solve->add_option("--potential", so.potential, "power:Q | constant:C | checkerboard")
      ->required();
  solve->add_option("--b", so.b);
  solve->add_option("--p", so.p);
  solve->add_option("--L", so.L);
  solve->add_option("--n", so.n);
  solve->add_option("--seed", so.seed);
  solve->add_option("--max-iters", so.max_iters);
  solve->add_option("--grad-tol", so.grad_tol);
  solve->add_option("--probes", so.probes);
  solve->add_option("--init", so.init, "gaussian | random | file");
  solve->add_option("--init-file", so.init_file);
  solve->add_option("--init-width", so.init_width);
  solve->add_option("--init-amplitude", so.init_amplitude);
  solve->add_option("--init-center-x", so.init_center_x);
  solve->add_option("--init-center-y", so.init_center_y);
  solve->add_option("--out", so.out);

  auto* energy = app.add_subcommand("energy-report", "all scalar functionals of a field");
  energy->fallthrough();
  energy->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  energy->add_option("--field", eo.field)->required();
  energy->add_option("--potential", eo.potential)->required();
  energy->add_option("--b", eo.b);
  energy->add_option("--p", eo.p);
  energy->add_option("--lambda", eo.lambda);
  energy->add_option("--out", eo.out);

  auto* fiber = app.add_subcommand("fiber-scan", "scan a fibering map");
  fiber->fallthrough();
  fiber->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  fiber->add_option("--field", fo.field)->required();
  fiber->add_option("--potential", fo.potential)->required();
  fiber->add_option("--mode", fo.mode, "amplitude | scaled");
  fiber->add_option("--b", fo.b);
  fiber->add_option("--p", fo.p);
  fiber->add_option("--t-min", fo.t_min);
  fiber->add_option("--t-max", fo.t_max);
  fiber->add_option("--t-count", fo.t_count);
  fiber->add_option("--out", fo.out);

  auto* checkp = app.add_subcommand("check-potential", "hypothesis validators");
  checkp->fallthrough();
  checkp->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  checkp->add_option("--kind", co.kind, "power | constant | checkerboard")->required();
  checkp->add_option("--q", co.q);
  checkp->add_option("--c", co.c);
  checkp->add_option("--L", co.L);
  checkp->add_option("--n", co.n);
  checkp->add_option("--M", co.M_list, "comma-separated sublevel values");
  checkp->add_option("--boxes", co.boxes, "comma-separated box half-widths");
  checkp->add_option("--out", co.out);

  auto* selftest = app.add_subcommand("kernel-selftest", "FFT vs direct-sum oracle table");
  selftest->fallthrough();
  selftest->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  selftest->add_option("--n", to.n);
  selftest->add_option("--L", to.L);
  selftest->add_option("--fields", to.fields);
  selftest->add_option("--seed", to.seed);
  selftest->add_option("--out", to.out);

  auto* lambda = app.add_subcommand("lambda-study", "monotone mountain-pass bounds");
  lambda->fallthrough();
  lambda->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  lambda->add_option("--potential", lo.potential)->required();
  lambda->add_option("--b", lo.b);
  lambda->add_option("--p", lo.p);
  lambda->add_option("--L", lo.L);
  lambda->add_option("--n", lo.n);
  lambda->add_option("--lambdas", lo.lambdas);
  lambda->add_option("--probes", lo.probes);
  lambda->add_option("--seed", lo.seed);
  lambda->add_option("--out", lo.out);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  set_thread_cap(threads);

  try {
    if (solve->parsed()) return run_solve(so);
    if (energy->parsed()) return run_energy_report(eo);
    if (fiber->parsed()) return run_fiber_scan(fo);
    if (checkp->parsed()) return run_check_potential(co);
    if (selftest->parsed()) return run_kernel_selftest(to);
    if (lambda->parsed()) return run_lambda_study(lo);
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
