#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlac/grid.hpp"

namespace nlac {

// Named nodal initial states. params carries selector-specific knobs; any key
// left out takes that selector's default. Random selectors draw from a
// deterministic generator, so (name, params, seed) pins the field exactly.
//
//   cosine_product        amplitude (1)                amp * prod cos(pi x_a)
//   double_sine           amplitude (0.5)              amp (sin(pi x) + sin(2 pi x))
//   sine_product          amplitude (0.2)              amp * prod sin(pi x_a)
//   sine_exp              amplitude (1)                amp sin(pi x) exp(-|y|), dim >= 2
//   two_bubbles           epsilon (0.1), radius (0.6), sum of two tanh balls centered
//                         center_offset (0.35)         at (+-offset, 0, 0)
//   star                  epsilon (0.1),               tanh((0.7 + 0.2 cos 6 eta - r)/
//                         branch_threshold (0.5)         (sqrt(2) eps)), dim >= 2
//   random_uniform        lo (-0.95), hi (0.95)        iid uniform per node
//   gaussian_random_field correlation_length (0.2),    spectrally filtered white noise,
//                         std (0 = off), clip (0 = off)  mean removed
//   box                   half_width (0.9),            inside_value in [-b, b]^n
//                         inside_value (-1),             (bounds inclusive),
//                         outside_value (1)              outside_value elsewhere
//   constant              value (0)
struct InitialCondition {
  std::string name = "constant";
  std::map<std::string, double> params;
};

Field make_initial_condition(const InitialCondition& ic, const Grid& g, std::uint64_t seed);

std::vector<std::string> initial_condition_names();
bool initial_condition_is_random(const std::string& name);

}  // namespace nlac
