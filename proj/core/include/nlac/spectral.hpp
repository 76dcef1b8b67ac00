#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "nlac/grid.hpp"

namespace nlac {

// Complex coefficients over the full frequency index set, stored in standard
// FFT bin order (row-major, same flat indexing as Field). Logical frequencies
// run through {-N/2+1, ..., N/2}; the Nyquist bin N/2 carries +N/2.
struct Spectrum {
  Grid grid;
  std::vector<std::complex<double>> data;
};

// Bin index -> logical frequency for an even transform length n.
inline int logical_frequency(int bin, int n) { return bin <= n / 2 ? bin : bin - n; }

// Discrete L2 inner product (Pi h_a) * sum(u v) and its norm; compensated
// summation keeps long traces reproducible.
double inner_h(const Field& u, const Field& v);
double norm_h(const Field& u);

// -sum_a (pi l_a / X_a)^2 at every bin: the symbol of the periodic Laplacian
// on [-X, X)^n. Full layout and the real-to-complex half layout (last active
// axis cut to N/2+1).
std::vector<double> laplacian_symbol(const Grid& g);
std::vector<double> laplacian_symbol_half(const Grid& g);

std::size_t half_spectrum_size(const Grid& g);

// Owns FFTW plans and scratch for one grid. Not thread-safe: one context per
// concurrently running solver; plan creation itself is serialized internally.
class SpectralContext {
 public:
  explicit SpectralContext(const Grid& g);
  ~SpectralContext();
  SpectralContext(const SpectralContext&) = delete;
  SpectralContext& operator=(const SpectralContext&) = delete;

  const Grid& grid() const;

  // Transform pair with the (-1)^(sum of logical frequencies) phase that a
  // [-X, X) node origin induces: forward is unnormalized, inverse divides by
  // the node count. The inverse discards the imaginary residue after checking
  // it stays below 1e-12 * max|input| and throws std::runtime_error otherwise
  // (non-Hermitian input).
  Spectrum dft_forward(const Field& u);
  Field dft_inverse(const Spectrum& s);

  // Plain index-space DFT without the origin phase (kernel spectra live here).
  Spectrum dft_forward_unphased(const Field& u);

  // Real-to-complex half-spectrum path used on the hot loops. forward_half is
  // unnormalized; inverse_half divides by the node count.
  std::vector<std::complex<double>> forward_half(const Field& u);
  Field inverse_half(const std::vector<std::complex<double>>& s);

  // Circular convolution against a half-layout real multiplier that already
  // carries the quadrature weight. Counts one convolution.
  Field convolve_half(const Field& u, const std::vector<double>& hat_half);

  std::uint64_t convolution_count() const;
  void reset_convolution_count();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nlac
