#pragma once

#include <string>
#include <vector>

#include "nlac/grid.hpp"
#include "nlac/kernel.hpp"
#include "nlac/spectral.hpp"

namespace nlac {

// Non-isothermal system: obstacle-potential phase field driven by
// c_F * m(theta), m(theta) = (alpha/pi) atan(rho (theta_e - theta)), coupled
// to implicit-Euler heat flow with latent source L d/dt[(1+u)/2] (heat per
// unit of solid fraction frozen), solved per frequency as
// theta_hat = (theta_hat_prev + L/2 (u_hat - u_hat_prev)) /
// (1 - D tau lambda_mul).
struct CoupledConfig {
  double D = 1.0;
  double mu = 1.0;
  double latent = 0.0;  // L
  double alpha = 0.5;
  double rho = 1.0;
  double theta_e = 0.0;
  double tau = 1e-4;
  long long steps = 0;
  double c_F = 1.0;

  void validate() const;  // throws std::invalid_argument
};

double coupling_m(double theta, const CoupledConfig& cfg);

struct CoupledState {
  Field u;
  Field theta;
  long long k = 0;
  double time = 0.0;
};

CoupledState step_coupled(const CoupledState& state, const KernelGrid& k,
                          const CoupledConfig& cfg, SpectralContext& ctx);

struct CoupledTraceRow {
  long long step = 0;
  double time = 0.0;
  double negative_fraction = 0.0;  // share of nodes with u < 0
  double max_abs_m = 0.0;          // max |m(theta)| seen this step
  double theta_min = 0.0;
  double theta_max = 0.0;
};

struct CoupledSnapshot {
  double requested_time = 0.0;
  long long step = 0;
  double time = 0.0;
  Field u;
  Field theta;
};

struct CoupledRunResult {
  CoupledState final_state;
  std::vector<CoupledTraceRow> trace;
  std::vector<CoupledSnapshot> snapshots;
  std::vector<std::string> warnings;
};

CoupledRunResult run_coupled(const Field& u0, const Field& theta0, const KernelGrid& k,
                             const CoupledConfig& cfg, SpectralContext& ctx,
                             const std::vector<double>& snapshot_times = {});

}  // namespace nlac
