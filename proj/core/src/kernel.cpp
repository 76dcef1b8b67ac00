#include "nlac/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nlac/numeric.hpp"

namespace nlac {

void KernelSpec::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("kernel: epsilon must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("kernel: delta must be positive");
  if (dim < 1 || dim > 3) throw std::invalid_argument("kernel: dim must be 1, 2, or 3");
}

double kernel_value(const KernelSpec& spec, const std::array<double, 3>& z) {
  double r2 = 0.0;
  for (int a = 0; a < spec.dim; ++a) r2 += z[a] * z[a];
  const double amp = 4.0 * spec.epsilon * spec.epsilon /
                     (std::pow(M_PI, 0.5 * spec.dim) * std::pow(spec.delta, spec.dim + 2));
  return amp * std::exp(-r2 / (spec.delta * spec.delta));
}

namespace {

std::string format_warning(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

}  // namespace

KernelGrid sample_periodic(const KernelSpec& spec, const Grid& grid) {
  SpectralContext ctx(grid);
  return sample_periodic(spec, grid, ctx);
}

KernelGrid sample_periodic(const KernelSpec& spec, const Grid& grid, SpectralContext& ctx) {
  spec.validate();
  if (spec.dim != grid.dim)
    throw std::invalid_argument("sample_periodic: kernel and grid dimension differ");
  if (!(grid == ctx.grid()))
    throw std::invalid_argument("sample_periodic: context grid mismatch");

  KernelGrid k;
  k.grid = grid;

  for (int a = 0; a < grid.dim; ++a)
    if (grid.half_extent[a] < spec.delta)
      k.warnings.push_back(format_warning(
          "kernel horizon delta=%g exceeds the half extent %g of an axis; "
          "the periodized kernel wraps onto itself",
          spec.delta, grid.half_extent[a]));

  // Canonical octant: per-axis indices 0..N/2. Everything else is a mirror
  // image, copied bit-for-bit below so index negation mod N is an exact
  // symmetry of the samples.
  int ccount[3] = {1, 1, 1};
  for (int a = 0; a < grid.dim; ++a) ccount[a] = grid.count[a] / 2 + 1;
  const std::size_t ncanon = static_cast<std::size_t>(ccount[0]) * ccount[1] * ccount[2];

  // Wrapped displacement of canonical index i: i*h, with the i = N/2 node
  // mapped to -X per the [-X, X) convention.
  auto displacement = [&](int axis, int i) {
    return i < grid.count[axis] / 2 ? i * grid.spacing(axis) : -grid.half_extent[axis];
  };

  std::vector<double> canon(ncanon);
  std::vector<std::array<double, 3>> disp(ncanon);
  {
    std::size_t c = 0;
    for (int i = 0; i < ccount[0]; ++i)
      for (int j = 0; j < ccount[1]; ++j)
        for (int l = 0; l < ccount[2]; ++l, ++c) {
          std::array<double, 3> d{0.0, 0.0, 0.0};
          const int idx[3] = {i, j, l};
          for (int a = 0; a < grid.dim; ++a) d[a] = displacement(a, idx[a]);
          disp[c] = d;
          canon[c] = kernel_value(spec, d);
        }
  }

  // Image sums, added shell by shell (shell S = shifts with max |s_a| = S)
  // until no node gains more than 1e-16 of its running value.
  const double period[3] = {2.0 * grid.half_extent[0], 2.0 * grid.half_extent[1],
                            2.0 * grid.half_extent[2]};
  for (int shell = 1; shell <= 4096; ++shell) {
    bool grew = false;
    std::vector<std::array<int, 3>> shifts;
    const int lo[3] = {-shell, grid.dim > 1 ? -shell : 0, grid.dim > 2 ? -shell : 0};
    const int hi[3] = {shell, grid.dim > 1 ? shell : 0, grid.dim > 2 ? shell : 0};
    for (int sx = lo[0]; sx <= hi[0]; ++sx)
      for (int sy = lo[1]; sy <= hi[1]; ++sy)
        for (int sz = lo[2]; sz <= hi[2]; ++sz) {
          const int m = std::max({std::abs(sx), std::abs(sy), std::abs(sz)});
          if (m == shell) shifts.push_back({sx, sy, sz});
        }
    for (std::size_t c = 0; c < ncanon; ++c) {
      double added = 0.0;
      for (const auto& s : shifts) {
        const std::array<double, 3> z{disp[c][0] + s[0] * period[0],
                                      disp[c][1] + s[1] * period[1],
                                      disp[c][2] + s[2] * period[2]};
        added += kernel_value(spec, z);
      }
      canon[c] += added;
      if (added > 1e-16 * canon[c]) grew = true;
    }
    if (!grew) break;
  }

  // Mirror the canonical octant onto the full grid.
  k.values = make_field(grid);
  {
    std::size_t c = 0;
    for (int i = 0; i < ccount[0]; ++i)
      for (int j = 0; j < ccount[1]; ++j)
        for (int l = 0; l < ccount[2]; ++l, ++c) {
          const int idx[3] = {i, j, l};
          int mir[3][2];
          int nmir[3];
          for (int a = 0; a < 3; ++a) {
            mir[a][0] = idx[a];
            const int neg = idx[a] == 0 ? 0 : grid.count[a] - idx[a];
            nmir[a] = (neg != idx[a]) ? 2 : 1;
            mir[a][1] = neg;
          }
          for (int mi = 0; mi < nmir[0]; ++mi)
            for (int mj = 0; mj < nmir[1]; ++mj)
              for (int ml = 0; ml < nmir[2]; ++ml)
                k.values.data[grid.flat(mir[0][mi], mir[1][mj], mir[2][ml])] = canon[c];
        }
  }

  const double vol = grid.cell_volume();
  k.c_gamma_N = vol * kahan_sum(k.values.data.data(), k.values.data.size());

  const double ca = spec.analytic_c_gamma();
  if (std::abs(k.c_gamma_N - ca) > 0.01 * ca)
    k.warnings.push_back(format_warning(
        "grid too coarse for the kernel: discrete c_gamma %g deviates from "
        "analytic %g by more than 1%%",
        k.c_gamma_N, ca));

  k.hat = ctx.dft_forward_unphased(k.values);
  for (auto& z : k.hat.data) z *= vol;
  k.hat.data[0] = k.c_gamma_N;  // exact by definition; pin against FFT noise

  const auto half = ctx.forward_half(k.values);
  k.hat_half.resize(half.size());
  for (std::size_t i = 0; i < half.size(); ++i) k.hat_half[i] = half[i].real() * vol;
  k.hat_half[0] = k.c_gamma_N;

  return k;
}

Field circular_convolve(const Field& u, const KernelGrid& k, SpectralContext& ctx) {
  if (!(u.grid == k.grid))
    throw std::invalid_argument("circular_convolve: field and kernel grids differ");
  return ctx.convolve_half(u, k.hat_half);
}

Field nonlocal_apply(const Field& u, const KernelGrid& k, SpectralContext& ctx) {
  Field conv = circular_convolve(u, k, ctx);
  Field out = make_field(u.grid);
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = k.c_gamma_N * u.data[i] - conv.data[i];
  return out;
}

}  // namespace nlac
