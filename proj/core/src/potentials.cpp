#include "nlac/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlac {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void PotentialSpec::validate() const {
  if (!(c_F > 0.0)) throw std::invalid_argument("potential: c_F must be positive");
  if (kind == PotentialKind::Logarithmic) {
    if (!(theta_c > 0.0) || !(theta_c < c_F))
      throw std::invalid_argument("potential: need 0 < theta_c < c_F for the logarithmic well");
  }
}

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Obstacle: return "obstacle";
    case PotentialKind::Regular: return "regular";
    case PotentialKind::Logarithmic: return "logarithmic";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "obstacle") return PotentialKind::Obstacle;
  if (s == "regular") return PotentialKind::Regular;
  if (s == "logarithmic" || s == "log") return PotentialKind::Logarithmic;
  throw std::invalid_argument("unknown potential kind: " + s);
}

double psi_value(const PotentialSpec& p, double u) {
  switch (p.kind) {
    case PotentialKind::Obstacle:
      return std::abs(u) <= 1.0 ? 0.0 : kInf;
    case PotentialKind::Regular:
      return 0.25 * p.c_F * (u * u * u * u - 1.0);
    case PotentialKind::Logarithmic: {
      double a = std::abs(u);
      if (a > 1.0) return kInf;
      // Continuous extension at the endpoints: (1 -+ u) log(1 -+ u) -> 0.
      if (a == 1.0) return p.theta_c * std::log(2.0);
      return 0.5 * p.theta_c *
             ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u));
    }
  }
  return kInf;
}

double psi_prime(const PotentialSpec& p, double u) {
  switch (p.kind) {
    case PotentialKind::Obstacle:
      throw std::domain_error("psi_prime: obstacle part is set-valued, no pointwise derivative");
    case PotentialKind::Regular:
      return p.c_F * u * u * u;
    case PotentialKind::Logarithmic:
      if (std::abs(u) >= 1.0)
        throw std::domain_error("psi_prime: logarithmic derivative undefined at |u| >= 1");
      // (theta_c/2) (log(1+u) - log(1-u)) = theta_c * atanh(u)
      return 0.5 * p.theta_c * (std::log1p(u) - std::log1p(-u));
  }
  return 0.0;
}

namespace {

// Real root of (c_F/w) s^3 + s = v by Cardano; the discriminant
// zt^2 + p3^3 is positive for every v since p3 > 0, so there is exactly one
// real root. The t - p3/t form with the sign carried by zt keeps the two
// cube-root terms from cancelling when |v| is large.
double prox_regular(double c_F, double w, double v) {
  if (v == 0.0) return 0.0;
  const double p = w / c_F;
  const double p3 = p / 3.0;
  const double zt = 0.5 * p * v;
  const double r = std::sqrt(zt * zt + p3 * p3 * p3);
  const double t = std::cbrt(zt + std::copysign(r, zt));
  double s = t - p3 / t;
  // When p3^3 dwarfs zt^2 (large prox weight, the stepping regime) the
  // closed form cancels two ~sqrt(p3) terms and leaves an absolute error
  // ~eps sqrt(p3), which a long run integrates into a visible error floor.
  // Two Newton sweeps on s^3 + p (s - v) restore the root to full precision;
  // every operation here mirrors under (s, v) -> (-s, -v), keeping the prox
  // exactly odd.
  for (int it = 0; it < 2; ++it) {
    const double f = s * s * s + p * (s - v);
    const double fp = 3.0 * s * s + p;
    s -= f / fp;
  }
  return s;
}

// Solve g(s) = (theta_c/w) atanh(s) + s - v = 0 on (-1,1); g is strictly
// increasing. Newton from the clamped input with a bracket fallback.
double prox_logarithmic(double theta_c, double w, double v) {
  const double c = theta_c / w;
  const double edge = 1.0 - 1e-15;
  // If even s = +-edge cannot push g past zero, the root is within one ulp of
  // the endpoint; skip the iteration entirely.
  static const double atanh_edge = std::atanh(1.0 - 1e-15);
  if (v >= c * atanh_edge + edge) return edge;
  if (v <= -(c * atanh_edge + edge)) return -edge;

  double lo = -edge, hi = edge;
  double s = std::clamp(v, -(1.0 - 1e-3), 1.0 - 1e-3);
  for (int it = 0; it < 50; ++it) {
    const double g = c * std::atanh(s) + s - v;
    if (std::abs(g) <= 1e-13) return s;
    if (g > 0.0) hi = s; else lo = s;
    const double gp = 1.0 + c / ((1.0 - s) * (1.0 + s));
    double step = -g / gp;
    double next = s + step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15) return next;
    s = next;
  }
  // Newton stalled (can only happen for extreme weights); polish by bisection.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    const double g = c * std::atanh(mid) + mid - v;
    if (std::abs(g) <= 1e-13) return mid;
    if (g > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double prox(const PotentialSpec& p, const ProxWeight& w, double v) {
  if (!(w.lambda > 0.0)) throw std::invalid_argument("prox: lambda must be positive");
  if (w.stage != 1 && w.stage != 2) throw std::invalid_argument("prox: stage must be 1 or 2");
  const double we = w.effective();
  switch (p.kind) {
    case PotentialKind::Obstacle:
      return std::clamp(v, -1.0, 1.0);
    case PotentialKind::Regular:
      return prox_regular(p.c_F, we, v);
    case PotentialKind::Logarithmic:
      return prox_logarithmic(p.theta_c, we, v);
  }
  return v;
}

double potential_energy_density(const PotentialSpec& p, double u) {
  return 0.5 * p.c_F * (1.0 - u * u) + psi_value(p, u);
}

}  // namespace nlac
