#pragma once

#include <string>

namespace nlac {

// Double-well splitting F(u) = (c_F/2)(1 - u^2) + psi(u); psi is the convex
// part that distinguishes the three wells (indicator of [-1,1], quartic,
// logarithmic mixing entropy).
enum class PotentialKind { Obstacle, Regular, Logarithmic };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Obstacle;
  double c_F = 1.0;
  double theta_c = 0.0;  // logarithmic well only; needs 0 < theta_c < c_F

  static PotentialSpec obstacle(double c_F) { return {PotentialKind::Obstacle, c_F, 0.0}; }
  static PotentialSpec regular(double c_F) { return {PotentialKind::Regular, c_F, 0.0}; }
  static PotentialSpec logarithmic(double c_F, double theta_c) {
    return {PotentialKind::Logarithmic, c_F, theta_c};
  }
  void validate() const;  // throws std::invalid_argument
};

const char* to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

// Weight of the convex part inside one proximal evaluation,
// prox_{1/(stage*lambda) psi}; stage is 1 for the first-order scheme and 2
// for the second-order one.
struct ProxWeight {
  double lambda = 1.0;
  int stage = 1;
  double effective() const { return static_cast<double>(stage) * lambda; }
};

// psi and its derivative. psi_value returns +infinity outside the admissible
// set; psi_prime throws std::domain_error where the subdifferential is not a
// plain derivative (obstacle everywhere, logarithmic at |u| >= 1).
double psi_value(const PotentialSpec& p, double u);
double psi_prime(const PotentialSpec& p, double u);

// Pointwise proximal map: the unique s with s + psi'(s)/(stage*lambda) = v
// (clamp for the obstacle well, closed-form cube roots for the quartic,
// safeguarded Newton for the logarithmic).
double prox(const PotentialSpec& p, const ProxWeight& w, double v);

// Full well F(u) = (c_F/2)(1 - u^2) + psi(u).
double potential_energy_density(const PotentialSpec& p, double u);

}  // namespace nlac
