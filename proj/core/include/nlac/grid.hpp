#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlac {

// Uniform grid on a periodic box centered at the origin. Axis a carries
// count[a] nodes on [-half_extent[a], half_extent[a]); the right endpoint is
// identified with the left one and excluded. Unused trailing axes are
// normalized to count 1 / extent 0, so flat indexing is the same for 1D-3D.
struct Grid {
  int dim = 1;
  std::array<int, 3> count{1, 1, 1};
  std::array<double, 3> half_extent{0.0, 0.0, 0.0};

  double spacing(int axis) const {
    return 2.0 * half_extent[axis] / count[axis];
  }
  double coord(int axis, int i) const {
    return -half_extent[axis] + i * spacing(axis);
  }
  std::size_t size() const {
    return static_cast<std::size_t>(count[0]) * count[1] * count[2];
  }
  // product of spacings over active axes (quadrature weight per node)
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing(a);
    return v;
  }
  double domain_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= 2.0 * half_extent[a];
    return v;
  }
  // row-major, first axis slowest
  std::size_t flat(int i, int j = 0, int k = 0) const {
    return (static_cast<std::size_t>(i) * count[1] + j) * count[2] + k;
  }
  bool operator==(const Grid&) const = default;
};

inline Grid make_grid(int dim, std::array<int, 3> count,
                      std::array<double, 3> half_extent) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  Grid g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      g.count[a] = 1;
      g.half_extent[a] = 0.0;
      continue;
    }
    if (count[a] < 4 || count[a] % 2 != 0)
      throw std::invalid_argument("grid: node count on axis " + std::to_string(a) +
                                  " must be even and at least 4");
    if (!(half_extent[a] > 0.0))
      throw std::invalid_argument("grid: half extent on axis " + std::to_string(a) +
                                  " must be positive");
    g.count[a] = count[a];
    g.half_extent[a] = half_extent[a];
  }
  return g;
}

struct Field {
  Grid grid;
  std::vector<double> data;
};

inline Field make_field(const Grid& g, double fill = 0.0) {
  return Field{g, std::vector<double>(g.size(), fill)};
}

inline double max_abs(const Field& u) {
  double m = 0.0;
  for (double x : u.data) {
    double a = x < 0 ? -x : x;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace nlac
