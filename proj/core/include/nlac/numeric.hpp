#pragma once

#include <cstddef>

namespace nlac {

// Compensated serial sum; deterministic and accurate enough that quadrature
// sums over ~1e6 nodes stay near one ulp.
struct KahanAccumulator {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

inline double kahan_sum(const double* x, std::size_t n) {
  KahanAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

}  // namespace nlac
