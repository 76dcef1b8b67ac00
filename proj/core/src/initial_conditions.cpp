#include "nlac/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nlac/numeric.hpp"
#include "nlac/spectral.hpp"

namespace nlac {

namespace {

double param(const InitialCondition& ic, const char* key, double fallback) {
  auto it = ic.params.find(key);
  return it == ic.params.end() ? fallback : it->second;
}

// mt19937_64 with a fixed 53-bit mantissa draw; std::uniform_real_distribution
// is implementation-defined, which would break cross-platform reproducibility.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double unif01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  // Box-Muller; first uniform shifted into (0,1] to keep the log finite.
  double normal() {
    const double u1 = 1.0 - unif01();
    const double u2 = unif01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

template <class F>
Field nodal(const Grid& g, F&& f) {
  Field out = make_field(g);
  std::size_t flat = 0;
  for (int i = 0; i < g.count[0]; ++i)
    for (int j = 0; j < g.count[1]; ++j)
      for (int k = 0; k < g.count[2]; ++k)
        out.data[flat++] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
  return out;
}

Field gaussian_random_field(const InitialCondition& ic, const Grid& g, std::uint64_t seed) {
  const double ell = param(ic, "correlation_length", 0.2);
  const double target_std = param(ic, "std", 0.0);
  const double clip = param(ic, "clip", 0.0);

  Rng rng(seed);
  Field noise = make_field(g);
  for (auto& v : noise.data) v = rng.normal();

  SpectralContext ctx(g);
  auto hat = ctx.forward_half(noise);
  const auto sym = laplacian_symbol_half(g);  // -|kappa|^2
  for (std::size_t i = 0; i < hat.size(); ++i)
    hat[i] *= std::exp(sym[i] * ell * ell / 4.0);
  Field out = ctx.inverse_half(hat);

  KahanAccumulator mean;
  for (double v : out.data) mean.add(v);
  const double mu = mean.value() / static_cast<double>(out.data.size());
  for (auto& v : out.data) v -= mu;

  if (target_std > 0.0) {
    KahanAccumulator ss;
    for (double v : out.data) ss.add(v * v);
    const double sd = std::sqrt(ss.value() / static_cast<double>(out.data.size()));
    if (sd > 0.0)
      for (auto& v : out.data) v *= target_std / sd;
  }
  if (clip > 0.0)
    for (auto& v : out.data) v = std::clamp(v, -clip, clip);
  return out;
}

}  // namespace

Field make_initial_condition(const InitialCondition& ic, const Grid& g, std::uint64_t seed) {
  const std::string& n = ic.name;

  if (n == "cosine_product") {
    const double amp = param(ic, "amplitude", 1.0);
    return nodal(g, [&](double x, double y, double z) {
      double v = amp;
      const double c[3] = {x, y, z};
      for (int a = 0; a < g.dim; ++a) v *= std::cos(M_PI * c[a]);
      return v;
    });
  }
  if (n == "double_sine") {
    const double amp = param(ic, "amplitude", 0.5);
    return nodal(g, [&](double x, double, double) {
      return amp * (std::sin(M_PI * x) + std::sin(2.0 * M_PI * x));
    });
  }
  if (n == "sine_product") {
    const double amp = param(ic, "amplitude", 0.2);
    return nodal(g, [&](double x, double y, double z) {
      double v = amp;
      const double c[3] = {x, y, z};
      for (int a = 0; a < g.dim; ++a) v *= std::sin(M_PI * c[a]);
      return v;
    });
  }
  if (n == "sine_exp") {
    if (g.dim < 2) throw std::invalid_argument("initial condition sine_exp needs dim >= 2");
    const double amp = param(ic, "amplitude", 1.0);
    return nodal(g, [&](double x, double y, double) {
      return amp * std::sin(M_PI * x) * std::exp(-std::abs(y));
    });
  }
  if (n == "two_bubbles") {
    const double eps = param(ic, "epsilon", 0.1);
    const double radius = param(ic, "radius", 0.6);
    const double off = param(ic, "center_offset", 0.35);
    const double w = std::sqrt(2.0) * eps;
    return nodal(g, [&](double x, double y, double z) {
      const double r1 = std::sqrt((x - off) * (x - off) + y * y + z * z);
      const double r2 = std::sqrt((x + off) * (x + off) + y * y + z * z);
      return 0.5 * std::tanh((radius - r1) / w) + 0.5 * std::tanh((radius - r2) / w);
    });
  }
  if (n == "star") {
    if (g.dim < 2) throw std::invalid_argument("initial condition star needs dim >= 2");
    const double eps = param(ic, "epsilon", 0.1);
    const double thresh = param(ic, "branch_threshold", 0.5);
    const double w = std::sqrt(2.0) * eps;
    // Polar angle from the first and last active coordinates; atan covers
    // only half the circle, so the branch flips at x = branch_threshold.
    return nodal(g, [&](double x, double y, double z) {
      const double zz = g.dim == 2 ? y : z;
      const double r = std::sqrt(x * x + y * y + z * z);
      const double ratio = (x == 0.0 && zz == 0.0) ? 0.0 : zz / x;
      const double eta = x > thresh ? std::atan(ratio) : M_PI + std::atan(ratio);
      return std::tanh((0.7 + 0.2 * std::cos(6.0 * eta) - r) / w);
    });
  }
  if (n == "random_uniform") {
    const double lo = param(ic, "lo", -0.95);
    const double hi = param(ic, "hi", 0.95);
    if (!(hi > lo)) throw std::invalid_argument("random_uniform: need hi > lo");
    Rng rng(seed);
    Field out = make_field(g);
    for (auto& v : out.data) v = lo + (hi - lo) * rng.unif01();
    return out;
  }
  if (n == "gaussian_random_field") return gaussian_random_field(ic, g, seed);
  if (n == "box") {
    const double b = param(ic, "half_width", 0.9);
    const double inside = param(ic, "inside_value", -1.0);
    const double outside = param(ic, "outside_value", 1.0);
    return nodal(g, [&](double x, double y, double z) {
      const double c[3] = {x, y, z};
      for (int a = 0; a < g.dim; ++a)
        if (c[a] < -b || c[a] > b) return outside;
      return inside;
    });
  }
  if (n == "constant") {
    return make_field(g, param(ic, "value", 0.0));
  }
  throw std::invalid_argument("unknown initial condition: " + n);
}

std::vector<std::string> initial_condition_names() {
  return {"cosine_product", "double_sine", "sine_product",
          "sine_exp",       "two_bubbles", "star",
          "random_uniform", "gaussian_random_field", "box", "constant"};
}

bool initial_condition_is_random(const std::string& name) {
  return name == "random_uniform" || name == "gaussian_random_field";
}

}  // namespace nlac
