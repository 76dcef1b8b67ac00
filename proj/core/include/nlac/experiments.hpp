#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlac/config.hpp"
#include "nlac/coupled.hpp"
#include "nlac/grid.hpp"
#include "nlac/initial_conditions.hpp"
#include "nlac/kernel.hpp"
#include "nlac/potentials.hpp"
#include "nlac/spectral.hpp"
#include "nlac/stepper.hpp"

namespace nlac {

// A time-convergence (or cost) study: one scheme on a tau-halving ladder
// tau_base * 2^-k, k = 0..rungs-1, errors at final_time measured in norm_h
// against a second-order implicit benchmark at tau_base * 2^-benchmark_doublings.
struct StudySetup {
  Grid grid;
  KernelSpec kernel;
  PotentialSpec potential;
  Scheme scheme = Scheme::FirstOrder;
  double tau_base = 0.005;
  int rungs = 7;
  int benchmark_doublings = 10;
  double final_time = 0.2;
  double fp_tol = 0.0;
  int fp_max_iter = 100;
  InitialCondition ic;
  std::uint64_t seed = 0;
  int fit_window = 4;
  double plateau_cutoff = 0.0;  // rows with error below this are left out of the fit

  void validate() const;
};

long long steps_for(double final_time, double tau);

struct LadderRow {
  double tau = 0.0;
  long long steps = 0;
  double error = 0.0;
  double order = 0.0;  // log2(e_{k-1}/e_k)
  bool has_order = false;
  std::uint64_t convolutions = 0;
};

struct LadderReport {
  std::vector<LadderRow> rows;
  std::vector<EnergyTrace> traces;  // one per rung (empty rows when energy off)
  double fitted_order = 0.0;
  int fit_points = 0;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

// Benchmark run for the setup (second-order implicit at the reference tau).
RunResult reference_solution(const StudySetup& s, const KernelGrid& k, SpectralContext& ctx,
                             const Field& u0, bool track_energy);

LadderReport ladder_study(const StudySetup& s, const KernelGrid& k, SpectralContext& ctx,
                          const Field& u0, const Field& benchmark_final, bool track_energy);

// Least-squares slope of log error vs log tau over the last `window` eligible
// rows; rows with error <= min_error (or nonfinite) are ineligible.
double fit_order_loglog(const std::vector<LadderRow>& rows, int window, double min_error,
                        int* points_used = nullptr);

// Config assembly; throws with the offending key in the message.
Grid grid_from_config(const KeyValueConfig& cfg);
KernelSpec kernel_from_config(const KeyValueConfig& cfg, int dim);
PotentialSpec potential_from_config(const KeyValueConfig& cfg);
InitialCondition ic_from_config(const KeyValueConfig& cfg);
std::uint64_t seed_from_config(const KeyValueConfig& cfg, const InitialCondition& ic);
SchemeConfig scheme_from_config(const KeyValueConfig& cfg);
StudySetup study_from_config(const KeyValueConfig& cfg);
CoupledConfig coupled_from_config(const KeyValueConfig& cfg);

// Experiment drivers behind the CLI subcommands; write outputs under out_dir
// and return a process exit code.
int run_evolve(const KeyValueConfig& cfg, const std::string& out_dir);
int run_converge(const KeyValueConfig& cfg, const std::string& out_dir);
int run_cost(const KeyValueConfig& cfg, const std::string& out_dir);
int run_coupled_experiment(const KeyValueConfig& cfg, const std::string& out_dir);

}  // namespace nlac
