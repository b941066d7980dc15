#pragma once

#include "finsler/geometry.hpp"
#include "finsler/phase_point.hpp"

#include <cstdint>
#include <vector>

namespace finsler {

// Deterministic point sampling keyed by (seed, index): the i-th point does not
// depend on how many points were drawn before it, so per-point parallelism
// cannot perturb the sequence.
//
// x is uniform in the ball of radius 0.8 * chart_radius; y has a uniform
// direction and |y| uniform in [0.5, 2].
phase_point sample_point(const finsler_spec& spec, std::uint64_t seed, int index);

std::vector<phase_point> sample_points(const finsler_spec& spec, std::uint64_t seed, int count);

inline constexpr double sample_chart_fraction = 0.8;
inline constexpr double sample_min_speed = 0.5;
inline constexpr double sample_max_speed = 2.0;

} // namespace finsler
