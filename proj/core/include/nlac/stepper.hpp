#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlac/grid.hpp"
#include "nlac/kernel.hpp"
#include "nlac/potentials.hpp"
#include "nlac/spectral.hpp"

namespace nlac {

enum class Scheme { FirstOrder, SecondOrderImplicit, SecondOrderExplicit };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeConfig {
  Scheme scheme = Scheme::FirstOrder;
  double tau = 1e-3;
  long long steps = 1;
  double fp_tol = 0.0;  // 0 picks the potential's default
  int fp_max_iter = 100;
  PotentialSpec potential;

  void validate() const;  // throws std::invalid_argument
};

// 1e-15 for obstacle/regular, 1e-10 for logarithmic.
double default_fp_tol(PotentialKind kind);
double effective_fp_tol(const SchemeConfig& cfg);

// xi_N = c_gamma_N - c_F; the discrete constant is used everywhere xi appears.
double xi_discrete(const KernelGrid& k, const PotentialSpec& pot);

// First-order prox weight xi_N + 1/tau; throws std::invalid_argument when the
// result is not positive (a prox weight must be).
double lambda_first(double xi_N, double tau);

// Linear rate c_gamma_N / (2/tau + xi_N) of the inner fixed-point iteration.
double contraction_ratio(const KernelGrid& k, const PotentialSpec& pot, double tau);

// Advisory time-step checks (contraction tau < 2/c_F, second-order obstacle
// energy decay tau < 2/xi_N, negative xi_N); never rejects.
std::vector<std::string> scheme_diagnostics(const SchemeConfig& cfg, const KernelGrid& k);

struct StepState {
  Field u;
  long long k = 0;
  double time = 0.0;
};

struct TraceRow {
  long long step = 0;
  double time = 0.0;
  double energy = 0.0;       // NaN when energy tracking is off
  int fp_iters = 0;          // 0 first order, 2 explicit, inner count implicit
  std::uint64_t convolutions = 0;  // consumed by this row's step
  double max_abs_u = 0.0;
};
using EnergyTrace = std::vector<TraceRow>;

// Receives every inner iterate of a second-order implicit solve.
struct FpObserver {
  virtual ~FpObserver() = default;
  virtual void on_iterate(int m, const Field& u_m) = 0;
};

Field step_first_order(const Field& u_prev, const KernelGrid& k, const SchemeConfig& cfg,
                       SpectralContext& ctx);

struct ImplicitStepResult {
  Field u;
  int iterations = 0;
  bool hit_cap = false;  // stopped by fp_max_iter instead of fp_tol
};

ImplicitStepResult step_second_order_implicit(const Field& u_prev, const KernelGrid& k,
                                              const SchemeConfig& cfg, SpectralContext& ctx,
                                              FpObserver* observer = nullptr);

// Exactly the first two sweeps of the implicit iteration; no tolerance check.
Field step_second_order_explicit(const Field& u_prev, const KernelGrid& k,
                                 const SchemeConfig& cfg, SpectralContext& ctx);

// E_N(u) = (xi_N/2) norm_h(u)^2 - (1/2) <gamma (conv) u, u>_h + (c_F/2)|Omega|
//          + (Pi h_a) sum psi(u_i); +infinity when a node is infeasible.
double energy_discrete(const Field& u, const KernelGrid& k, const PotentialSpec& pot,
                       SpectralContext& ctx);
double energy_discrete(const Field& u, const KernelGrid& k, const PotentialSpec& pot,
                       const Field& conv_u);

struct Snapshot {
  double requested_time = 0.0;
  long long step = 0;
  double time = 0.0;
  Field u;
};

struct RunOptions {
  std::vector<double> snapshot_times;
  bool track_energy = true;
  FpObserver* observer = nullptr;
};

struct RunResult {
  StepState final_state;
  EnergyTrace trace;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
  std::uint64_t convolutions = 0;  // context counter delta over the run
  double max_abs_u = 0.0;          // over all steps including u0
};

// Advances cfg.steps steps. With energy tracking on, the convolution computed
// for E_N(u^k) is reused as the next step's gamma (conv) u^{k-1}, so a first-
// order run costs one convolution per step either way.
RunResult run(const Field& u0, const KernelGrid& k, const SchemeConfig& cfg,
              SpectralContext& ctx, const RunOptions& opts = {});

}  // namespace nlac
