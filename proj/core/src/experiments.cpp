#include "nlac/experiments.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "nlac/output.hpp"

namespace nlac {

void StudySetup::validate() const {
  kernel.validate();
  potential.validate();
  if (!(tau_base > 0.0)) throw std::invalid_argument("study: tau_base must be positive");
  if (rungs < 1) throw std::invalid_argument("study: need at least one rung");
  if (benchmark_doublings <= rungs - 1)
    throw std::invalid_argument("study: benchmark must be finer than the finest rung");
  if (!(final_time > 0.0)) throw std::invalid_argument("study: final_time must be positive");
  if (fit_window < 2) throw std::invalid_argument("study: fit_window must be at least 2");
}

long long steps_for(double final_time, double tau) {
  const long long steps = std::llround(final_time / tau);
  if (steps < 1)
    throw std::invalid_argument("final_time is shorter than half a time step");
  return steps;
}

namespace {

SchemeConfig make_scheme(const StudySetup& s, Scheme scheme, double tau) {
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.tau = tau;
  cfg.steps = steps_for(s.final_time, tau);
  cfg.fp_tol = s.fp_tol;
  cfg.fp_max_iter = s.fp_max_iter;
  cfg.potential = s.potential;
  return cfg;
}

}  // namespace

RunResult reference_solution(const StudySetup& s, const KernelGrid& k, SpectralContext& ctx,
                             const Field& u0, bool track_energy) {
  const double tau_ref = s.tau_base * std::pow(2.0, -s.benchmark_doublings);
  const SchemeConfig cfg = make_scheme(s, Scheme::SecondOrderImplicit, tau_ref);
  RunOptions opts;
  opts.track_energy = track_energy;
  return run(u0, k, cfg, ctx, opts);
}

LadderReport ladder_study(const StudySetup& s, const KernelGrid& k, SpectralContext& ctx,
                          const Field& u0, const Field& benchmark_final, bool track_energy) {
  s.validate();
  LadderReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  for (int rung = 0; rung < s.rungs; ++rung) {
    const double tau = s.tau_base * std::pow(2.0, -rung);
    const SchemeConfig cfg = make_scheme(s, s.scheme, tau);
    RunOptions opts;
    opts.track_energy = track_energy;
    RunResult res = run(u0, k, cfg, ctx, opts);
    for (const auto& w : res.warnings) rep.warnings.push_back(w);

    Field diff = make_field(u0.grid);
    for (std::size_t i = 0; i < diff.data.size(); ++i)
      diff.data[i] = res.final_state.u.data[i] - benchmark_final.data[i];
    LadderRow row;
    row.tau = tau;
    row.steps = cfg.steps;
    row.error = norm_h(diff);
    row.convolutions = res.convolutions;
    if (!rep.rows.empty() && rep.rows.back().error > 0.0 && row.error > 0.0) {
      row.order = std::log2(rep.rows.back().error / row.error);
      row.has_order = true;
    }
    rep.rows.push_back(row);
    rep.traces.push_back(std::move(res.trace));
  }
  rep.fitted_order = fit_order_loglog(rep.rows, s.fit_window, s.plateau_cutoff,
                                      &rep.fit_points);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double fit_order_loglog(const std::vector<LadderRow>& rows, int window, double min_error,
                        int* points_used) {
  std::vector<std::pair<double, double>> pts;  // (log tau, log error)
  for (const auto& r : rows)
    if (std::isfinite(r.error) && r.error > min_error && r.error > 0.0)
      pts.emplace_back(std::log(r.tau), std::log(r.error));
  if (pts.size() > static_cast<std::size_t>(window))
    pts.erase(pts.begin(), pts.end() - window);
  if (points_used) *points_used = static_cast<int>(pts.size());
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / pts.size(), my = sy / pts.size();
  double num = 0, den = 0;
  for (const auto& [x, y] : pts) {
    num += (x - mx) * (y - my);
    den += (x - mx) * (x - mx);
  }
  return num / den;
}

Grid grid_from_config(const KeyValueConfig& cfg) {
  const int dim = static_cast<int>(cfg.get_int("grid.dim"));
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> ext{0.0, 0.0, 0.0};
  const long long nall = cfg.get_int("grid.n", 0);
  const double eall = cfg.get_double("grid.half_extent", 1.0);
  for (int a = 0; a < dim; ++a) {
    n[a] = static_cast<int>(cfg.get_int("grid.n" + std::to_string(a), nall));
    ext[a] = cfg.get_double("grid.half_extent" + std::to_string(a), eall);
    if (n[a] <= 0)
      throw std::runtime_error("config: grid.n (or grid.n" + std::to_string(a) +
                               ") is required");
  }
  return make_grid(dim, n, ext);
}

KernelSpec kernel_from_config(const KeyValueConfig& cfg, int dim) {
  KernelSpec k;
  k.epsilon = cfg.get_double("kernel.epsilon");
  k.delta = cfg.get_double("kernel.delta");
  k.dim = dim;
  k.validate();
  return k;
}

PotentialSpec potential_from_config(const KeyValueConfig& cfg) {
  const PotentialKind kind = potential_kind_from_string(cfg.get_string("potential.kind"));
  const double c_F = cfg.get_double("potential.c_f", 1.0);
  PotentialSpec p = kind == PotentialKind::Logarithmic
                        ? PotentialSpec::logarithmic(c_F, cfg.get_double("potential.theta_c"))
                        : PotentialSpec{kind, c_F, 0.0};
  p.validate();
  return p;
}

InitialCondition ic_from_config(const KeyValueConfig& cfg) {
  InitialCondition ic;
  ic.name = cfg.get_string("initial.name");
  ic.params = cfg.section_doubles("initial");
  ic.params.erase("name");
  return ic;
}

std::uint64_t seed_from_config(const KeyValueConfig& cfg, const InitialCondition& ic) {
  if (cfg.has("run.seed")) return static_cast<std::uint64_t>(cfg.get_int("run.seed"));
  if (initial_condition_is_random(ic.name))
    throw std::runtime_error("config: random initial condition '" + ic.name +
                             "' requires run.seed (or --seed)");
  return 0;
}

SchemeConfig scheme_from_config(const KeyValueConfig& cfg) {
  SchemeConfig s;
  s.scheme = scheme_from_string(cfg.get_string("scheme.kind", "first"));
  s.tau = cfg.get_double("scheme.tau");
  if (cfg.has("scheme.steps"))
    s.steps = cfg.get_int("scheme.steps");
  else
    s.steps = steps_for(cfg.get_double("scheme.final_time"), s.tau);
  s.fp_tol = cfg.get_double("scheme.fp_tol", 0.0);
  s.fp_max_iter = static_cast<int>(cfg.get_int("scheme.fp_max_iter", 100));
  s.potential = potential_from_config(cfg);
  s.validate();
  return s;
}

StudySetup study_from_config(const KeyValueConfig& cfg) {
  StudySetup s;
  s.grid = grid_from_config(cfg);
  s.kernel = kernel_from_config(cfg, s.grid.dim);
  s.potential = potential_from_config(cfg);
  s.scheme = scheme_from_string(cfg.get_string("scheme.kind", "first"));
  s.tau_base = cfg.get_double("ladder.tau_base", 0.005);
  s.rungs = static_cast<int>(cfg.get_int("ladder.rungs", 7));
  s.benchmark_doublings = static_cast<int>(cfg.get_int("ladder.benchmark_doublings", 10));
  s.final_time = cfg.get_double("ladder.final_time", 0.2);
  s.fp_tol = cfg.get_double("scheme.fp_tol", 0.0);
  s.fp_max_iter = static_cast<int>(cfg.get_int("scheme.fp_max_iter", 100));
  s.ic = ic_from_config(cfg);
  s.seed = seed_from_config(cfg, s.ic);
  s.fit_window = static_cast<int>(cfg.get_int("ladder.fit_window", 4));
  s.plateau_cutoff = cfg.get_double(
      "ladder.plateau_cutoff",
      s.potential.kind == PotentialKind::Regular ? 1e-11 : 0.0);
  s.validate();
  return s;
}

CoupledConfig coupled_from_config(const KeyValueConfig& cfg) {
  CoupledConfig c;
  c.D = cfg.get_double("coupled.d", 1.0);
  c.mu = cfg.get_double("coupled.mu");
  c.latent = cfg.get_double("coupled.latent", 0.0);
  c.alpha = cfg.get_double("coupled.alpha");
  c.rho = cfg.get_double("coupled.rho");
  c.theta_e = cfg.get_double("coupled.theta_e");
  c.tau = cfg.get_double("coupled.tau");
  if (cfg.has("coupled.steps"))
    c.steps = cfg.get_int("coupled.steps");
  else
    c.steps = steps_for(cfg.get_double("coupled.final_time"), c.tau);
  c.c_F = cfg.get_double("coupled.c_f", 1.0);
  c.validate();
  return c;
}

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

std::string snapshot_name(const char* stem, long long step) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_step%08lld.bin", stem, step);
  return buf;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::printf("warning: %s\n", w.c_str());
}

RunManifest base_manifest(const Grid& g, const KernelSpec& k, const InitialCondition& ic,
                          std::uint64_t seed, bool random_ic) {
  RunManifest m;
  m.grid = g;
  m.kernel = k;
  m.ic_name = ic.name;
  m.ic_params = ic.params;
  if (random_ic) m.seed = seed;
  return m;
}

}  // namespace

int run_evolve(const KeyValueConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Grid grid = grid_from_config(cfg);
  const KernelSpec kspec = kernel_from_config(cfg, grid.dim);
  const SchemeConfig scfg = scheme_from_config(cfg);
  const InitialCondition ic = ic_from_config(cfg);
  const std::uint64_t seed = seed_from_config(cfg, ic);

  SpectralContext ctx(grid);
  const KernelGrid kernel = sample_periodic(kspec, grid, ctx);
  print_warnings(kernel.warnings);

  const Field u0 = make_initial_condition(ic, grid, seed);
  RunOptions opts;
  opts.snapshot_times = cfg.get_double_list("run.snapshot_times");
  opts.track_energy = cfg.get_bool("scheme.energy", true);

  const RunResult res = run(u0, kernel, scfg, ctx, opts);
  print_warnings(res.warnings);

  write_energy_csv(out_dir + "/energy.csv", res.trace);
  RunManifest man = base_manifest(grid, kspec, ic, seed, initial_condition_is_random(ic.name));
  man.potential = scfg.potential;
  man.scheme = {{"kind", to_string(scfg.scheme)},
                {"tau", format_double(scfg.tau)},
                {"steps", std::to_string(scfg.steps)},
                {"fp_tol", format_double(effective_fp_tol(scfg))},
                {"fp_max_iter", std::to_string(scfg.fp_max_iter)}};
  man.warnings = res.warnings;
  for (const auto& w : kernel.warnings) man.warnings.push_back(w);
  for (const auto& snap : res.snapshots) {
    const std::string name = snapshot_name("u", snap.step);
    write_snapshot(out_dir + "/" + name, snap.u);
    man.snapshot_files.push_back(name);
  }
  write_manifest(out_dir + "/manifest.json", man);

  std::printf("evolve: %lld steps to t=%s, %llu convolutions, max|u|=%s\n", scfg.steps,
              format_double(res.final_state.time).c_str(),
              static_cast<unsigned long long>(res.convolutions),
              format_double(res.max_abs_u).c_str());
  if (!res.trace.empty() && opts.track_energy)
    std::printf("energy: %s -> %s\n", format_double(res.trace.front().energy).c_str(),
                format_double(res.trace.back().energy).c_str());
  return 0;
}

namespace {

int run_ladder_experiment(const KeyValueConfig& cfg, const std::string& out_dir,
                          bool cost_mode) {
  ensure_dir(out_dir);
  StudySetup s = study_from_config(cfg);
  SpectralContext ctx(s.grid);
  const KernelGrid kernel = sample_periodic(s.kernel, s.grid, ctx);
  print_warnings(kernel.warnings);

  const Field u0 = make_initial_condition(s.ic, s.grid, s.seed);
  const bool energy = !cost_mode && cfg.get_bool("scheme.energy", true);

  std::printf("benchmark: implicit, tau=%s\n",
              format_double(s.tau_base * std::pow(2.0, -s.benchmark_doublings)).c_str());
  const RunResult bench = reference_solution(s, kernel, ctx, u0, energy);
  print_warnings(bench.warnings);

  const LadderReport rep = ladder_study(s, kernel, ctx, u0, bench.final_state.u, energy);
  print_warnings(rep.warnings);

  std::vector<ErrorRow> err_rows;
  std::vector<CostRow> cost_rows;
  for (const auto& r : rep.rows) {
    std::printf("tau=%-12s error=%-16s order=%s conv=%llu\n", format_double(r.tau).c_str(),
                format_double(r.error).c_str(),
                r.has_order ? format_double(r.order).c_str() : "-",
                static_cast<unsigned long long>(r.convolutions));
    err_rows.push_back({r.tau, r.error, r.order, r.has_order});
    cost_rows.push_back({r.tau, r.convolutions, r.error});
  }
  std::printf("fitted order over last %d eligible rows: %s (%.2fs)\n", rep.fit_points,
              format_double(rep.fitted_order).c_str(), rep.wall_seconds);

  write_error_csv(out_dir + "/error.csv", err_rows);
  if (cost_mode) write_cost_csv(out_dir + "/cost.csv", cost_rows);
  if (energy)
    for (std::size_t i = 0; i < rep.traces.size(); ++i)
      write_energy_csv(out_dir + "/energy_rung" + std::to_string(i) + ".csv", rep.traces[i]);

  RunManifest man = base_manifest(s.grid, s.kernel, s.ic, s.seed,
                                  initial_condition_is_random(s.ic.name));
  man.potential = s.potential;
  man.scheme = {{"kind", to_string(s.scheme)},
                {"tau_base", format_double(s.tau_base)},
                {"rungs", std::to_string(s.rungs)},
                {"benchmark_doublings", std::to_string(s.benchmark_doublings)},
                {"final_time", format_double(s.final_time)},
                {"fitted_order", format_double(rep.fitted_order)}};
  man.warnings = rep.warnings;
  write_manifest(out_dir + "/manifest.json", man);
  return 0;
}

}  // namespace

int run_converge(const KeyValueConfig& cfg, const std::string& out_dir) {
  return run_ladder_experiment(cfg, out_dir, false);
}

int run_cost(const KeyValueConfig& cfg, const std::string& out_dir) {
  return run_ladder_experiment(cfg, out_dir, true);
}

int run_coupled_experiment(const KeyValueConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Grid grid = grid_from_config(cfg);
  const KernelSpec kspec = kernel_from_config(cfg, grid.dim);
  const CoupledConfig ccfg = coupled_from_config(cfg);
  const InitialCondition ic = ic_from_config(cfg);
  const std::uint64_t seed = seed_from_config(cfg, ic);

  SpectralContext ctx(grid);
  const KernelGrid kernel = sample_periodic(kspec, grid, ctx);
  print_warnings(kernel.warnings);

  const Field u0 = make_initial_condition(ic, grid, seed);
  const Field theta0 = make_field(grid, cfg.get_double("coupled.theta0", 0.0));

  const CoupledRunResult res =
      run_coupled(u0, theta0, kernel, ccfg, ctx, cfg.get_double_list("run.snapshot_times"));
  print_warnings(res.warnings);

  write_coupled_csv(out_dir + "/coupled.csv", res.trace);
  RunManifest man = base_manifest(grid, kspec, ic, seed, initial_condition_is_random(ic.name));
  man.scheme = {{"kind", "coupled_first_order"},
                {"tau", format_double(ccfg.tau)},
                {"steps", std::to_string(ccfg.steps)},
                {"d", format_double(ccfg.D)},
                {"mu", format_double(ccfg.mu)},
                {"latent", format_double(ccfg.latent)},
                {"alpha", format_double(ccfg.alpha)},
                {"rho", format_double(ccfg.rho)},
                {"theta_e", format_double(ccfg.theta_e)},
                {"c_f", format_double(ccfg.c_F)}};
  man.warnings = res.warnings;
  for (const auto& snap : res.snapshots) {
    const std::string uname = snapshot_name("u", snap.step);
    const std::string tname = snapshot_name("theta", snap.step);
    write_snapshot(out_dir + "/" + uname, snap.u);
    write_snapshot(out_dir + "/" + tname, snap.theta);
    man.snapshot_files.push_back(uname);
    man.snapshot_files.push_back(tname);
  }
  write_manifest(out_dir + "/manifest.json", man);

  const auto& last = res.trace.back();
  std::printf("coupled: %lld steps to t=%s, negative fraction %s -> %s, max|m|=%s\n",
              ccfg.steps, format_double(last.time).c_str(),
              format_double(res.trace.front().negative_fraction).c_str(),
              format_double(last.negative_fraction).c_str(),
              format_double(last.max_abs_m).c_str());
  return 0;
}

}  // namespace nlac
