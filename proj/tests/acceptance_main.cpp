// Release gate. Each numbered criterion below is a shipped guarantee; the
// binary prints one [PASS]/[FAIL] line per criterion and exits nonzero if any
// fail. Tolerances are pinned here on purpose; loosening one is a code change
// that should show up in review.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "nlac/coupled.hpp"
#include "nlac/experiments.hpp"
#include "nlac/initial_conditions.hpp"
#include "nlac/kernel.hpp"
#include "nlac/potentials.hpp"
#include "nlac/spectral.hpp"
#include "nlac/stepper.hpp"
#include "support/oracles.hpp"

using namespace nlac;

namespace {

std::string fmt(const char* f, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

void progress(const std::string& s) {
  std::printf("  .. %s\n", s.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail = "not evaluated";
};

// A finished run whose trace feeds the energy-decay and admissibility scans.
struct TraceRef {
  std::string name;
  Scheme scheme = Scheme::FirstOrder;
  PotentialKind pot = PotentialKind::Obstacle;
  double tau = 0.0;
  double xi = 0.0;
  EnergyTrace trace;
};

struct IterateCollector final : FpObserver {
  std::vector<std::vector<Field>> groups;  // one bucket of iterates per step
  void on_iterate(int m, const Field& u) override {
    if (m == 1) groups.emplace_back();
    groups.back().push_back(u);
  }
};

constexpr double kEnergyTol = 1e-10;

}  // namespace

int main() {
  std::printf("nlac acceptance suite\n");
  std::fflush(stdout);
  std::array<Verdict, 13> v;  // 1-based

  try {
    // Shared workbench: 128^2 box, interaction (epsilon, delta) = (0.1, 0.1),
    // product-of-cosines start. All three wells run the same ladder protocol.
    const Grid grid2 = make_grid(2, {128, 128, 1}, {1.0, 1.0, 0.0});
    SpectralContext ctx2(grid2);
    const KernelGrid kernel2 = sample_periodic(KernelSpec{0.1, 0.1, 2}, grid2, ctx2);
    const Field u0 = make_initial_condition({"cosine_product", {}}, grid2, 0);

    std::vector<TraceRef> traces;

    struct Orders {
      const char* pname = "";
      double fo = 0.0, soi = 0.0, soe = 0.0;
    };
    std::vector<Orders> orders;
    double fo_ladder_seconds = 0.0, so_ladder_seconds = 0.0, bench_seconds = 0.0;

    const PotentialSpec wells[3] = {PotentialSpec::obstacle(1.0), PotentialSpec::regular(1.0),
                                    PotentialSpec::logarithmic(1.0, 0.2)};
    for (const PotentialSpec& pot : wells) {
      StudySetup s;
      s.grid = grid2;
      s.kernel = KernelSpec{0.1, 0.1, 2};
      s.potential = pot;
      s.ic = {"cosine_product", {}};
      const double xi = xi_discrete(kernel2, pot);
      const double tau_ref = s.tau_base * std::pow(2.0, -s.benchmark_doublings);

      progress(fmt("benchmark: implicit, tau=%g, %s well", tau_ref, to_string(pot.kind)));
      const auto tb = std::chrono::steady_clock::now();
      const RunResult bench = reference_solution(s, kernel2, ctx2, u0, true);
      bench_seconds += seconds_since(tb);
      traces.push_back({fmt("%s benchmark", to_string(pot.kind)),
                        Scheme::SecondOrderImplicit, pot.kind, tau_ref, xi, bench.trace});

      Orders o;
      o.pname = to_string(pot.kind);
      for (Scheme scheme : {Scheme::FirstOrder, Scheme::SecondOrderImplicit,
                            Scheme::SecondOrderExplicit}) {
        StudySetup ls = s;
        ls.scheme = scheme;
        // the regular well saturates at the benchmark floor on second order
        ls.plateau_cutoff =
            scheme != Scheme::FirstOrder && pot.kind == PotentialKind::Regular ? 1e-11 : 0.0;
        progress(fmt("ladder: %s scheme, %s well", to_string(scheme), to_string(pot.kind)));
        LadderReport rep = ladder_study(ls, kernel2, ctx2, u0, bench.final_state.u, true);
        (scheme == Scheme::FirstOrder ? fo_ladder_seconds : so_ladder_seconds) +=
            rep.wall_seconds;
        for (std::size_t r = 0; r < rep.rows.size(); ++r)
          traces.push_back({fmt("%s %s rung %zu", to_string(pot.kind), to_string(scheme), r),
                            scheme, pot.kind, rep.rows[r].tau, xi,
                            std::move(rep.traces[r])});
        if (scheme == Scheme::FirstOrder)
          o.fo = rep.fitted_order;
        else if (scheme == Scheme::SecondOrderImplicit)
          o.soi = rep.fitted_order;
        else
          o.soe = rep.fitted_order;
      }
      orders.push_back(o);
    }

    // Criterion 1: first-order slope within [0.9, 1.1] for all three wells.
    {
      bool pass = true;
      std::string d;
      for (const Orders& o : orders) {
        pass = pass && o.fo >= 0.9 && o.fo <= 1.1;
        d += fmt("%s=%.3f ", o.pname, o.fo);
      }
      v[1] = {pass, fmt("first-order slopes %s(window [0.9,1.1]; ladders %.0fs + shared "
                        "benchmarks %.0fs vs 120s target, diagnostic)",
                        d.c_str(), fo_ladder_seconds, bench_seconds)};
    }

    // Criterion 2: both second-order variants fit within [1.8, 2.2]; rungs of
    // the regular well below the 1e-11 benchmark floor sit outside the fit.
    {
      bool pass = true;
      std::string d;
      for (const Orders& o : orders) {
        pass = pass && o.soi >= 1.8 && o.soi <= 2.2 && o.soe >= 1.8 && o.soe <= 2.2;
        d += fmt("%s=%.3f/%.3f ", o.pname, o.soi, o.soe);
      }
      v[2] = {pass, fmt("second-order slopes implicit/explicit %s(window [1.8,2.2])",
                        d.c_str())};
    }

    // Criterion 5: inner fixed-point iterates contract at least as fast as
    // c_gamma_N / (2/tau + xi_N), with 0.05 headroom, until the residual floor.
    {
      progress("fixed-point contraction probe (implicit, obstacle, tau=0.005)");
      SchemeConfig cfg;
      cfg.scheme = Scheme::SecondOrderImplicit;
      cfg.tau = 0.005;
      cfg.steps = 10;
      cfg.potential = PotentialSpec::obstacle(1.0);
      IterateCollector coll;
      RunOptions opts;
      opts.track_energy = false;
      opts.observer = &coll;
      run(u0, kernel2, cfg, ctx2, opts);

      const double bound = contraction_ratio(kernel2, cfg.potential, cfg.tau) + 0.05;
      int checked = 0, violations = 0;
      double worst = 0.0;
      for (const auto& g : coll.groups) {
        if (g.size() < 3) continue;
        const Field& star = g.back();
        std::vector<double> dist(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          Field diff = make_field(grid2);
          for (std::size_t n = 0; n < diff.data.size(); ++n)
            diff.data[n] = g[i].data[n] - star.data[n];
          dist[i] = norm_h(diff);
        }
        for (std::size_t i = 1; i + 1 < g.size(); ++i) {
          if (dist[i - 1] < 1e-12) break;  // at the tolerance floor, ratios are noise
          const double ratio = dist[i] / dist[i - 1];
          worst = std::max(worst, ratio);
          ++checked;
          if (ratio > bound) ++violations;
        }
      }
      v[5] = {violations == 0 && checked >= 10,
              fmt("contraction of %d iterate pairs over 10 steps: worst ratio %.5f vs "
                  "bound %.5f",
                  checked, worst, bound)};
    }

    // Criterion 10: long two-frequency interface run; the near-zero xi kernel
    // locks almost every node to |u| = 1 exactly, the xi = 3 kernel keeps a
    // diffuse band.
    {
      progress("sharp-interface runs: 1d N=1024, 250000 steps per kernel");
      const Grid g1 = make_grid(1, {1024, 1, 1}, {1.0, 0.0, 0.0});
      SpectralContext cx(g1);
      const Field w0 = make_initial_condition({"double_sine", {}}, g1, 0);
      auto saturated_nodes = [&](double delta) {
        const KernelGrid k = sample_periodic(KernelSpec{0.1, delta, 1}, g1, cx);
        SchemeConfig cfg;
        cfg.scheme = Scheme::FirstOrder;
        cfg.tau = 0.001;
        cfg.steps = 250000;
        cfg.potential = PotentialSpec::obstacle(1.0);
        const RunResult res = run(w0, k, cfg, cx, RunOptions{});
        int n = 0;
        for (double x : res.final_state.u.data) n += std::fabs(x) == 1.0;
        traces.push_back({fmt("interface delta=%g", delta), cfg.scheme, cfg.potential.kind,
                          cfg.tau, xi_discrete(k, cfg.potential), std::move(res.trace)});
        return n;
      };
      const int lock = saturated_nodes(0.1999);  // xi close to zero
      const int soft = saturated_nodes(0.1);     // xi = 3
      const int need = (99 * 1024 + 99) / 100;   // ceil of 99%
      v[10] = {lock >= need && soft < lock,
               fmt("saturation |u|==1 at t=250: %d/1024 nodes (need >= %d) near xi=0, "
                   "%d with xi=3 (must be fewer)",
                   lock, need, soft)};
    }

    // Criterion 3: discrete energy never rises by more than 1e-10 * (1+|E|)
    // across any step of the runs above. Second order with the obstacle well
    // only promises decay for tau < 2/xi_N.
    {
      int runs = 0;
      long long steps_checked = 0;
      int violations = 0;
      double worst = -1.0;
      std::string worst_name = "-";
      for (const TraceRef& t : traces) {
        if (t.scheme != Scheme::FirstOrder && t.pot == PotentialKind::Obstacle &&
            !(t.tau < 2.0 / t.xi))
          continue;
        ++runs;
        for (std::size_t i = 1; i < t.trace.size(); ++i) {
          const double prev = t.trace[i - 1].energy;
          const double cur = t.trace[i].energy;
          if (!std::isfinite(prev) || !std::isfinite(cur)) {
            ++violations;
            continue;
          }
          const double rel = (cur - prev) / (1.0 + std::fabs(prev));
          if (rel > worst) {
            worst = rel;
            worst_name = t.name;
          }
          ++steps_checked;
          if (cur - prev > kEnergyTol * (1.0 + std::fabs(prev))) ++violations;
        }
      }
      v[3] = {violations == 0 && steps_checked > 0,
              fmt("energy decay over %d runs / %lld steps: worst scaled increase %.2e "
                  "(tol 1e-10, at %s)",
                  runs, steps_checked, worst, worst_name.c_str())};
    }

    // Criterion 9: the obstacle and logarithmic wells keep every node in
    // [-1, 1] on every recorded step.
    {
      int runs = 0;
      long long rows = 0;
      bool pass = true;
      double peak = 0.0;
      for (const TraceRef& t : traces) {
        if (t.pot == PotentialKind::Regular) continue;
        ++runs;
        for (const TraceRow& r : t.trace) {
          ++rows;
          peak = std::max(peak, r.max_abs_u);
          pass = pass && r.max_abs_u <= 1.0;
        }
      }
      v[9] = {pass && runs > 0,
              fmt("admissibility on %d obstacle/logarithmic runs, %lld rows: peak max|u| "
                  "= %.17g (<= 1)",
                  runs, rows, peak)};
    }

    // Criterion 4: with the obstacle well the pure phases are exact energy
    // minima: E_N(+-1) = 0 to 1e-12 on 1d, 2d and 3d grids.
    {
      progress("pure-phase energies");
      bool pass = true;
      double worst = 0.0;
      const Grid grids[] = {make_grid(1, {128, 1, 1}, {1.0, 0.0, 0.0}),
                            make_grid(2, {64, 64, 1}, {1.0, 1.0, 0.0}),
                            make_grid(3, {8, 8, 8}, {1.0, 1.0, 1.0})};
      for (const Grid& g : grids) {
        SpectralContext cx(g);
        const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, g.dim}, g, cx);
        for (double phase : {1.0, -1.0}) {
          const double e =
              energy_discrete(make_field(g, phase), k, PotentialSpec::obstacle(1.0), cx);
          worst = std::max(worst, std::fabs(e));
          pass = pass && std::fabs(e) <= 1e-12;
        }
      }
      v[4] = {pass, fmt("pure phases u=+-1, obstacle well, 1d/2d/3d grids: max |E_N| = "
                        "%.2e (tol 1e-12)",
                        worst)};
    }

    // Criterion 6: the FFT convolution agrees with a direct O(N^2) periodic
    // sum on a representative sweep of small grids in every dimension.
    {
      progress("convolution cross-check against the direct sum");
      struct Case {
        int dim;
        std::array<int, 3> n;
        std::array<double, 3> ext;
      };
      const Case cases[] = {
          {1, {4, 1, 1}, {1.0, 0.0, 0.0}},     {1, {8, 1, 1}, {0.8, 0.0, 0.0}},
          {1, {16, 1, 1}, {1.0, 0.0, 0.0}},    {1, {32, 1, 1}, {1.2, 0.0, 0.0}},
          {2, {4, 4, 1}, {1.0, 1.0, 0.0}},     {2, {8, 16, 1}, {1.0, 0.8, 0.0}},
          {2, {16, 16, 1}, {1.0, 1.0, 0.0}},   {2, {32, 24, 1}, {1.2, 1.0, 0.0}},
          {2, {32, 32, 1}, {1.0, 1.0, 0.0}},   {3, {4, 4, 4}, {1.0, 1.0, 1.0}},
          {3, {8, 8, 8}, {1.0, 0.8, 1.2}},     {3, {16, 8, 4}, {1.0, 1.0, 1.0}},
          {3, {16, 16, 16}, {1.0, 1.0, 1.0}},  {3, {32, 16, 8}, {1.2, 0.8, 1.0}},
      };
      bool pass = true;
      double worst = 0.0;
      int count = 0;
      for (const Case& c : cases) {
        const Grid g = make_grid(c.dim, c.n, c.ext);
        SpectralContext cx(g);
        const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.15, c.dim}, g, cx);
        const Field u = oracle::random_field(g, 100 + count);
        const Field fft = circular_convolve(u, k, cx);
        const Field direct = oracle::convolve_direct(u, k);
        double diff = 0.0;
        for (std::size_t i = 0; i < u.data.size(); ++i)
          diff = std::max(diff, std::fabs(fft.data[i] - direct.data[i]));
        const double scale = max_abs(u);
        pass = pass && diff <= 1e-12 * scale;
        worst = std::max(worst, diff / scale);
        ++count;
      }
      v[6] = {pass, fmt("fft vs direct sum on %d grids (1d-3d, up to 32 nodes/axis): "
                        "worst %.2e of max|u| (tol 1e-12)",
                        count, worst)};
    }

    // Criterion 7: the discrete interaction constant reproduces the analytic
    // 4 eps^2/delta^2 at production resolution, and the four (eps, delta)
    // pairings land on their stated xi values with c_F = 1.
    {
      progress("interaction constants at N=512");
      const Grid g1 = make_grid(1, {512, 1, 1}, {1.0, 0.0, 0.0});
      const KernelGrid k1 = sample_periodic(KernelSpec{0.1, 0.1, 1}, g1);
      const double rel1 = std::fabs(k1.c_gamma_N - 4.0) / 4.0;

      const Grid g2 = make_grid(2, {512, 512, 1}, {1.0, 1.0, 0.0});
      const struct {
        double eps, delta, xi;
      } pairings[] = {{0.05, 0.1, 0.0}, {0.08, 0.1, 1.56}, {0.1, 0.1, 3.0},
                      {0.18, 0.12, 8.0}};
      bool pass = rel1 <= 1e-6;
      double rel2 = -1.0, worst_xi = 0.0;
      for (const auto& p : pairings) {
        const KernelGrid k = sample_periodic(KernelSpec{p.eps, p.delta, 2}, g2);
        if (p.eps == 0.1 && p.delta == 0.1) {
          rel2 = std::fabs(k.c_gamma_N - 4.0) / 4.0;
          pass = pass && rel2 <= 1e-6;
        }
        const double xi = k.c_gamma_N - 1.0;
        worst_xi = std::max(worst_xi, std::fabs(xi - p.xi));
        pass = pass && std::fabs(xi - p.xi) <= 1e-4;
      }
      v[7] = {pass, fmt("c_gamma_N rel err %.2e (1d), %.2e (2d) at N=512 (tol 1e-6); "
                        "xi pairings off by at most %.2e (tol 1e-4)",
                        rel1, rel2, worst_xi)};
    }

    // Criterion 8: proximal maps against an independent bisection oracle over
    // v in [-100, 100], both scheme stages.
    {
      progress("proximal maps vs bisection");
      const ProxWeight weights[] = {{18.0, 1}, {101.5, 2}};
      double worst_reg = 0.0, worst_log = 0.0;
      for (const ProxWeight& w : weights) {
        for (double c_F : {1.0, 2.0}) {
          const PotentialSpec p = PotentialSpec::regular(c_F);
          for (int i = 0; i < 10000; ++i) {
            const double val = -100.0 + 200.0 * i / 9999.0;
            const double got = prox(p, w, val);
            const double want = oracle::prox_regular_bisect(c_F, w.effective(), val);
            worst_reg = std::max(worst_reg, std::fabs(got - want));
          }
        }
        for (double tc : {0.01, 0.2, 0.5}) {
          const PotentialSpec p = PotentialSpec::logarithmic(1.0, tc);
          for (int i = 0; i < 10000; ++i) {
            const double val = -100.0 + 200.0 * i / 9999.0;
            const double got = prox(p, w, val);
            const double want = oracle::prox_log_bisect(tc, w.effective(), val);
            worst_log = std::max(worst_log, std::fabs(got - want));
          }
        }
      }
      v[8] = {worst_reg <= 1e-12 && worst_log <= 1e-10,
              fmt("prox vs bisection on 10^4-point sweeps: quartic off by %.2e (tol "
                  "1e-12), logarithmic by %.2e (tol 1e-10)",
                  worst_reg, worst_log)};
    }

    // Criterion 11: coupled quench. The undercooled square shrinks
    // monotonically (sampled at the snapshot times) and is gone by t=0.2, the
    // driving term stays under alpha/2, and with no latent heat a constant
    // temperature never moves a bit.
    {
      progress("coupled quench at 128^2, 2000 steps");
      const KernelGrid kq = sample_periodic(KernelSpec{0.0251, 0.1, 2}, grid2, ctx2);
      CoupledConfig cc;
      cc.D = 1.0;
      cc.mu = 0.0003;
      cc.latent = 0.5;
      cc.alpha = 0.9;
      cc.rho = 10.0;
      cc.theta_e = 1.0;
      cc.tau = 1e-4;
      cc.steps = 2000;
      cc.c_F = 0.25;
      const Field b0 = make_initial_condition({"box", {}}, grid2, 0);
      const Field th0 = make_field(grid2, 0.0);
      const CoupledRunResult res =
          run_coupled(b0, th0, kq, cc, ctx2, {0.0, 0.04, 0.08, 0.12, 0.16, 0.2});

      std::vector<double> fr;
      for (const CoupledSnapshot& s : res.snapshots) {
        for (const CoupledTraceRow& r : res.trace)
          if (r.step == s.step) {
            fr.push_back(r.negative_fraction);
            break;
          }
      }
      bool monotone = fr.size() == 6;
      std::string path;
      for (std::size_t i = 0; i < fr.size(); ++i) {
        if (i) monotone = monotone && fr[i] <= fr[i - 1];
        path += fmt("%.4f ", fr[i]);
      }
      const bool vanished = !fr.empty() && fr.back() == 0.0;
      double worst_m = 0.0;
      for (const CoupledTraceRow& r : res.trace) worst_m = std::max(worst_m, r.max_abs_m);

      CoupledConfig cz = cc;
      cz.latent = 0.0;
      const Field th3 = make_field(grid2, 0.3);
      const CoupledRunResult zero = run_coupled(b0, th3, kq, cz, ctx2, {});
      bool theta_const = true;
      for (const CoupledTraceRow& r : zero.trace)
        theta_const = theta_const && r.theta_min == 0.3 && r.theta_max == 0.3;
      for (double t : zero.final_state.theta.data) theta_const = theta_const && t == 0.3;

      v[11] = {monotone && vanished && worst_m < 0.45 && theta_const,
               fmt("negative share %s(monotone=%d, zero at t=0.2=%d); max|m|=%.4f "
                   "(<0.45); constant theta bit-stable without latent heat=%d",
                   path.c_str(), int(monotone), int(vanished), worst_m,
                   int(theta_const))};
    }

    // Criterion 12: the convolution ledger matches the closed forms with
    // energy tracking off: one per step first order, two per step explicit,
    // the sweep count per step implicit.
    {
      progress("convolution accounting");
      const Grid g = make_grid(2, {32, 32, 1}, {1.0, 1.0, 0.0});
      SpectralContext cx(g);
      const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.2, 2}, g, cx);
      const Field w0 = make_initial_condition({"cosine_product", {}}, g, 0);
      bool pass = true;
      std::string d;
      for (Scheme scheme : {Scheme::FirstOrder, Scheme::SecondOrderExplicit,
                            Scheme::SecondOrderImplicit}) {
        SchemeConfig cfg;
        cfg.scheme = scheme;
        cfg.tau = 0.01;
        cfg.steps = 9;
        cfg.potential = PotentialSpec::regular(1.0);
        RunOptions opts;
        opts.track_energy = false;
        const RunResult res = run(w0, k, cfg, cx, opts);
        std::uint64_t expect = 0;
        pass = pass && res.trace.size() == 9;
        for (const TraceRow& r : res.trace) {
          const std::uint64_t per = scheme == Scheme::FirstOrder        ? 1
                                    : scheme == Scheme::SecondOrderExplicit
                                        ? 2
                                        : static_cast<std::uint64_t>(r.fp_iters);
          pass = pass && r.convolutions == per;
          expect += per;
        }
        pass = pass && res.convolutions == expect;
        d += fmt("%s=%llu ", to_string(scheme),
                 static_cast<unsigned long long>(res.convolutions));
      }
      v[12] = {pass, fmt("convolutions over 9 steps, energy off: %s(first=steps, "
                         "explicit=2x steps, implicit=sum of sweeps)",
                         d.c_str())};
    }
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }

  int passed = 0;
  for (int i = 1; i <= 12; ++i) {
    std::printf("[%s] criterion %d: %s\n", v[i].pass ? "PASS" : "FAIL", i,
                v[i].detail.c_str());
    passed += v[i].pass;
  }
  std::printf("acceptance: %d of 12 criteria passed\n", passed);
  return passed == 12 ? 0 : 1;
}
