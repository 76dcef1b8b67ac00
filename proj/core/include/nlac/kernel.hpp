#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlac/grid.hpp"
#include "nlac/spectral.hpp"

namespace nlac {

// Scaled Gaussian gamma(z) = 4 eps^2 / (pi^{n/2} delta^{n+2}) * exp(-|z|^2/delta^2),
// chosen so the analytic interaction constant is c_gamma = 4 eps^2 / delta^2.
struct KernelSpec {
  double epsilon = 0.1;
  double delta = 0.1;
  int dim = 1;

  double analytic_c_gamma() const { return 4.0 * epsilon * epsilon / (delta * delta); }
  void validate() const;  // throws std::invalid_argument
};

double kernel_value(const KernelSpec& spec, const std::array<double, 3>& z);

// Periodized kernel on a grid. values lives in wrapped-displacement layout:
// values[m] is the image sum of gamma at the displacement of node m from node
// 0, wrapped per axis to [-X, X), so the peak sits at index 0. That layout
// makes hat (the index-space DFT of values times the quadrature weight) a
// plain circular-convolution multiplier.
struct KernelGrid {
  Grid grid;
  Field values;
  double c_gamma_N = 0.0;          // (Pi h_a) * sum of samples
  Spectrum hat;                    // full layout; entry 0 pinned to c_gamma_N
  std::vector<double> hat_half;    // real parts on the r2c half layout
  std::vector<std::string> warnings;
};

KernelGrid sample_periodic(const KernelSpec& spec, const Grid& grid);
KernelGrid sample_periodic(const KernelSpec& spec, const Grid& grid, SpectralContext& ctx);

// gamma_N (convolution) u via FFT; one convolution on the context's counter.
Field circular_convolve(const Field& u, const KernelGrid& k, SpectralContext& ctx);

// Discrete nonlocal diffusion operator c_gamma_N * u - gamma_N (conv) u.
Field nonlocal_apply(const Field& u, const KernelGrid& k, SpectralContext& ctx);

}  // namespace nlac
