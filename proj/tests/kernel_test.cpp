#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlac/kernel.hpp"
#include "nlac/spectral.hpp"
#include "support/oracles.hpp"

using namespace nlac;

TEST_CASE("kernel spec validation and analytic constant") {
  CHECK_THROWS_AS((KernelSpec{0.0, 0.1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((KernelSpec{0.1, -0.1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((KernelSpec{0.1, 0.1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((KernelSpec{0.1, 0.1, 4}.validate()), std::invalid_argument);
  CHECK(KernelSpec{0.05, 0.1, 2}.analytic_c_gamma() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(KernelSpec{0.08, 0.1, 2}.analytic_c_gamma() ==
        doctest::Approx(2.5599999999999996).epsilon(1e-15));
  CHECK(KernelSpec{0.1, 0.1, 2}.analytic_c_gamma() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(KernelSpec{0.18, 0.12, 2}.analytic_c_gamma() == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("pointwise kernel values") {
  const KernelSpec k1{0.1, 0.1, 1};
  // frozen: 4 eps^2 / (sqrt(pi) delta^3)
  CHECK(kernel_value(k1, {0.0, 0.0, 0.0}) ==
        doctest::Approx(22.567583341910247).epsilon(1e-14));
  // one horizon out drops by exactly e^-1
  CHECK(kernel_value(k1, {0.1, 0.0, 0.0}) / kernel_value(k1, {0.0, 0.0, 0.0}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  const KernelSpec k2{0.1, 0.1, 2};
  CHECK(kernel_value(k2, {0.0, 0.0, 0.0}) ==
        doctest::Approx(127.32395447351625).epsilon(1e-14));
  // unused third coordinate is ignored in 2D
  CHECK(kernel_value(k2, {0.05, 0.02, 99.0}) == kernel_value(k2, {0.05, 0.02, 0.0}));
}

TEST_CASE("sampled kernel layout and symmetry") {
  const Grid g = make_grid(2, {16, 12, 1}, {1.0, 1.0, 0.0});
  const KernelSpec spec{0.1, 0.1, 2};
  const KernelGrid k = sample_periodic(spec, g);

  for (double v : k.values.data) CHECK(v >= 0.0);
  // peak sits at displacement zero
  for (double v : k.values.data) CHECK(v <= k.values.data[0]);

  // index negation is a bit-exact symmetry
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 12; ++j) {
      const double a = k.values.data[g.flat(i, j)];
      const double b = k.values.data[g.flat((16 - i) % 16, (12 - j) % 12)];
      CHECK(a == b);
    }
}

TEST_CASE("sampled kernel mass and pinned zero-frequency entries") {
  const Grid g = make_grid(1, {512, 1, 1}, {1.0, 0.0, 0.0});
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 1}, g);
  CHECK(std::fabs(k.c_gamma_N - 4.0) <= 1e-6 * 4.0);
  CHECK(k.warnings.empty());
  CHECK(k.hat.data[0].real() == k.c_gamma_N);
  CHECK(k.hat.data[0].imag() == 0.0);
  CHECK(k.hat_half[0] == k.c_gamma_N);
  CHECK(k.hat_half.size() == half_spectrum_size(g));
  // positive kernel: no frequency gains over the zero mode
  for (double h : k.hat_half) CHECK(std::fabs(h) <= k.c_gamma_N * (1.0 + 1e-12));
}

TEST_CASE("kernel sampling warnings") {
  // horizon wider than the box
  const Grid g = make_grid(1, {64, 1, 1}, {1.0, 0.0, 0.0});
  const KernelGrid wide = sample_periodic(KernelSpec{0.1, 1.5, 1}, g);
  bool horizon_warned = false;
  for (const auto& w : wide.warnings)
    if (w.find("half extent") != std::string::npos) horizon_warned = true;
  CHECK(horizon_warned);

  // grid too coarse to resolve the kernel
  const Grid coarse = make_grid(1, {4, 1, 1}, {1.0, 0.0, 0.0});
  const KernelGrid rough = sample_periodic(KernelSpec{0.1, 0.1, 1}, coarse);
  bool coarse_warned = false;
  for (const auto& w : rough.warnings)
    if (w.find("coarse") != std::string::npos) coarse_warned = true;
  CHECK(coarse_warned);
}

TEST_CASE("dimension and grid mismatches are rejected") {
  const Grid g = make_grid(2, {8, 8, 1}, {1.0, 1.0, 0.0});
  CHECK_THROWS_AS(sample_periodic(KernelSpec{0.1, 0.1, 1}, g), std::invalid_argument);
  SpectralContext other(make_grid(2, {16, 16, 1}, {1.0, 1.0, 0.0}));
  CHECK_THROWS_AS(sample_periodic(KernelSpec{0.1, 0.1, 2}, g, other),
                  std::invalid_argument);

  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field wrong = make_field(make_grid(2, {16, 16, 1}, {1.0, 1.0, 0.0}));
  CHECK_THROWS_AS(circular_convolve(wrong, k, ctx), std::invalid_argument);
}

TEST_CASE("convolving a constant returns the kernel mass") {
  const Grid g = make_grid(2, {32, 32, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field conv = circular_convolve(make_field(g, 1.0), k, ctx);
  for (double v : conv.data)
    CHECK(v == doctest::Approx(k.c_gamma_N).epsilon(1e-13));
}

TEST_CASE("fft convolution matches the direct sum") {
  struct Case {
    int dim;
    int n0, n1, n2;
  };
  const Case cases[] = {{1, 16, 1, 1}, {1, 30, 1, 1}, {2, 8, 12, 1},
                        {2, 16, 16, 1}, {3, 4, 6, 8},  {3, 8, 8, 8}};
  for (const auto& c : cases) {
    const Grid g = make_grid(c.dim, {c.n0, c.n1, c.n2}, {1.0, 0.8, 1.2});
    SpectralContext ctx(g);
    const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.15, c.dim}, g, ctx);
    const Field u = oracle::random_field(g, 100 + c.n0 + c.n1);
    const Field fast = circular_convolve(u, k, ctx);
    const Field slow = oracle::convolve_direct(u, k);
    double m = 0.0;
    for (std::size_t i = 0; i < u.data.size(); ++i)
      m = std::fmax(m, std::fabs(fast.data[i] - slow.data[i]));
    CHECK(m <= 1e-12 * max_abs(u));
  }
}

TEST_CASE("full-layout multiplier composes with the phased transforms") {
  const Grid g = make_grid(2, {16, 12, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.12, 2}, g, ctx);
  const Field u = oracle::random_field(g, 7);

  Spectrum s = ctx.dft_forward(u);
  for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] *= k.hat.data[i];
  const Field via_full = ctx.dft_inverse(s);
  const Field via_half = circular_convolve(u, k, ctx);

  double m = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i)
    m = std::fmax(m, std::fabs(via_full.data[i] - via_half.data[i]));
  CHECK(m <= 1e-13 * max_abs(u));
}

TEST_CASE("convolution is self-adjoint and Young-bounded") {
  const Grid g = make_grid(2, {16, 16, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field u = oracle::random_field(g, 31);
  const Field v = oracle::random_field(g, 32);
  const Field ku = circular_convolve(u, k, ctx);
  const Field kv = circular_convolve(v, k, ctx);
  CHECK(inner_h(ku, v) == doctest::Approx(inner_h(u, kv)).epsilon(1e-12));
  CHECK(norm_h(ku) <= k.c_gamma_N * norm_h(u) * (1.0 + 1e-12));
}

TEST_CASE("nonlocal operator annihilates constants and is positive") {
  const Grid g = make_grid(2, {24, 24, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);

  const Field zero = nonlocal_apply(make_field(g, 1.0), k, ctx);
  CHECK(max_abs(zero) <= 1e-12 * k.c_gamma_N);

  const Field u = oracle::random_field(g, 77);
  CHECK(inner_h(nonlocal_apply(u, k, ctx), u) >= -1e-10);

  // linear: A(u + 2v) = Au + 2Av
  const Field v = oracle::random_field(g, 78);
  Field w = make_field(g);
  for (std::size_t i = 0; i < w.data.size(); ++i) w.data[i] = u.data[i] + 2.0 * v.data[i];
  const Field aw = nonlocal_apply(w, k, ctx);
  const Field au = nonlocal_apply(u, k, ctx);
  const Field av = nonlocal_apply(v, k, ctx);
  double m = 0.0;
  for (std::size_t i = 0; i < w.data.size(); ++i)
    m = std::fmax(m, std::fabs(aw.data[i] - au.data[i] - 2.0 * av.data[i]));
  CHECK(m <= 1e-11);
}
