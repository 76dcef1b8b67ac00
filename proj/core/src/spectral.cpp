#include "nlac/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "nlac/numeric.hpp"

namespace nlac {

namespace {

// FFTW's planner mutates global state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_same_grid(const Grid& a, const Grid& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

double inner_h(const Field& u, const Field& v) {
  check_same_grid(u.grid, v.grid, "inner_h");
  KahanAccumulator acc;
  for (std::size_t i = 0; i < u.data.size(); ++i) acc.add(u.data[i] * v.data[i]);
  return u.grid.cell_volume() * acc.value();
}

double norm_h(const Field& u) { return std::sqrt(inner_h(u, u)); }

std::vector<double> laplacian_symbol(const Grid& g) {
  std::vector<double> sym(g.size());
  std::size_t flat = 0;
  for (int i = 0; i < g.count[0]; ++i)
    for (int j = 0; j < g.count[1]; ++j)
      for (int k = 0; k < g.count[2]; ++k) {
        const int b[3] = {i, j, k};
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          const double kappa =
              M_PI * logical_frequency(b[a], g.count[a]) / g.half_extent[a];
          s -= kappa * kappa;
        }
        sym[flat++] = s;
      }
  return sym;
}

std::size_t half_spectrum_size(const Grid& g) {
  const int last = g.dim - 1;
  return g.size() / static_cast<std::size_t>(g.count[last]) *
         static_cast<std::size_t>(g.count[last] / 2 + 1);
}

std::vector<double> laplacian_symbol_half(const Grid& g) {
  const int last = g.dim - 1;
  int hc[3] = {g.count[0], g.count[1], g.count[2]};
  hc[last] = g.count[last] / 2 + 1;
  std::vector<double> sym;
  sym.reserve(half_spectrum_size(g));
  for (int i = 0; i < (g.dim > 0 ? hc[0] : 1); ++i)
    for (int j = 0; j < hc[1]; ++j)
      for (int k = 0; k < hc[2]; ++k) {
        const int b[3] = {i, j, k};
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          const double kappa =
              M_PI * logical_frequency(b[a], g.count[a]) / g.half_extent[a];
          s -= kappa * kappa;
        }
        sym.push_back(s);
      }
  return sym;
}

struct SpectralContext::Impl {
  Grid grid;
  std::size_t nfull = 0, nhalf = 0;
  fftw_complex* cin = nullptr;
  fftw_complex* cout = nullptr;
  double* rbuf = nullptr;
  fftw_complex* hbuf = nullptr;
  fftw_plan c2c_fwd = nullptr;
  fftw_plan c2c_bwd = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  std::uint64_t conv_count = 0;

  explicit Impl(const Grid& g) : grid(g) {
    nfull = g.size();
    nhalf = half_spectrum_size(g);
    cin = fftw_alloc_complex(nfull);
    cout = fftw_alloc_complex(nfull);
    rbuf = fftw_alloc_real(nfull);
    hbuf = fftw_alloc_complex(nhalf);
    if (!cin || !cout || !rbuf || !hbuf) throw std::bad_alloc();
    int n[3] = {g.count[0], g.count[1], g.count[2]};
    std::lock_guard<std::mutex> lock(planner_mutex());
    c2c_fwd = fftw_plan_dft(g.dim, n, cin, cout, FFTW_FORWARD, FFTW_ESTIMATE);
    c2c_bwd = fftw_plan_dft(g.dim, n, cin, cout, FFTW_BACKWARD, FFTW_ESTIMATE);
    r2c = fftw_plan_dft_r2c(g.dim, n, rbuf, hbuf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r(g.dim, n, hbuf, rbuf, FFTW_ESTIMATE);
    if (!c2c_fwd || !c2c_bwd || !r2c || !c2r)
      throw std::runtime_error("SpectralContext: FFTW plan creation failed");
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (c2c_fwd) fftw_destroy_plan(c2c_fwd);
    if (c2c_bwd) fftw_destroy_plan(c2c_bwd);
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(cin);
    fftw_free(cout);
    fftw_free(rbuf);
    fftw_free(hbuf);
  }

  // Walks bins in flat order handing (index, parity of bin-index sum) to f.
  // N even makes bin parity equal logical-frequency parity, which is all the
  // [-X, X) origin phase (-1)^(l_1+...+l_n) needs.
  template <class F>
  void for_each_bin_parity(F&& f) const {
    std::size_t flat = 0;
    for (int i = 0; i < grid.count[0]; ++i)
      for (int j = 0; j < grid.count[1]; ++j)
        for (int k = 0; k < grid.count[2]; ++k, ++flat) f(flat, (i + j + k) & 1);
  }
};

SpectralContext::SpectralContext(const Grid& g) : impl_(std::make_unique<Impl>(g)) {}
SpectralContext::~SpectralContext() = default;

const Grid& SpectralContext::grid() const { return impl_->grid; }

Spectrum SpectralContext::dft_forward(const Field& u) {
  check_same_grid(u.grid, impl_->grid, "dft_forward");
  for (std::size_t i = 0; i < impl_->nfull; ++i) {
    impl_->cin[i][0] = u.data[i];
    impl_->cin[i][1] = 0.0;
  }
  fftw_execute(impl_->c2c_fwd);
  Spectrum s{impl_->grid, std::vector<std::complex<double>>(impl_->nfull)};
  impl_->for_each_bin_parity([&](std::size_t i, int odd) {
    const double sign = odd ? -1.0 : 1.0;
    s.data[i] = {sign * impl_->cout[i][0], sign * impl_->cout[i][1]};
  });
  return s;
}

Spectrum SpectralContext::dft_forward_unphased(const Field& u) {
  check_same_grid(u.grid, impl_->grid, "dft_forward_unphased");
  for (std::size_t i = 0; i < impl_->nfull; ++i) {
    impl_->cin[i][0] = u.data[i];
    impl_->cin[i][1] = 0.0;
  }
  fftw_execute(impl_->c2c_fwd);
  Spectrum s{impl_->grid, std::vector<std::complex<double>>(impl_->nfull)};
  for (std::size_t i = 0; i < impl_->nfull; ++i)
    s.data[i] = {impl_->cout[i][0], impl_->cout[i][1]};
  return s;
}

Field SpectralContext::dft_inverse(const Spectrum& s) {
  check_same_grid(s.grid, impl_->grid, "dft_inverse");
  if (s.data.size() != impl_->nfull)
    throw std::invalid_argument("dft_inverse: spectrum size mismatch");
  double max_in = 0.0;
  impl_->for_each_bin_parity([&](std::size_t i, int odd) {
    const double sign = odd ? -1.0 : 1.0;
    impl_->cin[i][0] = sign * s.data[i].real();
    impl_->cin[i][1] = sign * s.data[i].imag();
    max_in = std::max(max_in, std::abs(s.data[i]));
  });
  fftw_execute(impl_->c2c_bwd);
  const double scale = 1.0 / static_cast<double>(impl_->nfull);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < impl_->nfull; ++i)
    max_imag = std::max(max_imag, std::abs(impl_->cout[i][1]));
  if (max_imag * scale > 1e-12 * max_in)
    throw std::runtime_error(
        "dft_inverse: imaginary residue above tolerance (input spectrum is not "
        "Hermitian-symmetric)");
  Field out = make_field(impl_->grid);
  for (std::size_t i = 0; i < impl_->nfull; ++i) out.data[i] = impl_->cout[i][0] * scale;
  return out;
}

std::vector<std::complex<double>> SpectralContext::forward_half(const Field& u) {
  check_same_grid(u.grid, impl_->grid, "forward_half");
  std::copy(u.data.begin(), u.data.end(), impl_->rbuf);
  fftw_execute(impl_->r2c);
  std::vector<std::complex<double>> s(impl_->nhalf);
  for (std::size_t i = 0; i < impl_->nhalf; ++i)
    s[i] = {impl_->hbuf[i][0], impl_->hbuf[i][1]};
  return s;
}

Field SpectralContext::inverse_half(const std::vector<std::complex<double>>& s) {
  if (s.size() != impl_->nhalf)
    throw std::invalid_argument("inverse_half: spectrum size mismatch");
  for (std::size_t i = 0; i < impl_->nhalf; ++i) {
    impl_->hbuf[i][0] = s[i].real();
    impl_->hbuf[i][1] = s[i].imag();
  }
  fftw_execute(impl_->c2r);
  const double scale = 1.0 / static_cast<double>(impl_->nfull);
  Field out = make_field(impl_->grid);
  for (std::size_t i = 0; i < impl_->nfull; ++i) out.data[i] = impl_->rbuf[i] * scale;
  return out;
}

Field SpectralContext::convolve_half(const Field& u, const std::vector<double>& hat_half) {
  check_same_grid(u.grid, impl_->grid, "convolve_half");
  if (hat_half.size() != impl_->nhalf)
    throw std::invalid_argument("convolve_half: multiplier size mismatch");
  std::copy(u.data.begin(), u.data.end(), impl_->rbuf);
  fftw_execute(impl_->r2c);
  for (std::size_t i = 0; i < impl_->nhalf; ++i) {
    impl_->hbuf[i][0] *= hat_half[i];
    impl_->hbuf[i][1] *= hat_half[i];
  }
  fftw_execute(impl_->c2r);
  const double scale = 1.0 / static_cast<double>(impl_->nfull);
  Field out = make_field(impl_->grid);
  for (std::size_t i = 0; i < impl_->nfull; ++i) out.data[i] = impl_->rbuf[i] * scale;
  ++impl_->conv_count;
  return out;
}

std::uint64_t SpectralContext::convolution_count() const { return impl_->conv_count; }
void SpectralContext::reset_convolution_count() { impl_->conv_count = 0; }

}  // namespace nlac
