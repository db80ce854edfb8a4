#pragma once

#include <cstdint>

#include "pairprobe/types.hpp"

namespace pairprobe {

/// Mixes a base seed with stream identifiers so independent draws never share a stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// rows x cols independent points, uniform in the closed disk of the given radius.
/// The radius only scales a fixed unit-disk draw, so one seed yields
/// proportional perturbations at every radius.
CMatrix uniform_disk_matrix(int rows, int cols, double radius, std::uint64_t seed);

/// Independent point uniform in the ball of the given radius, again a scaled unit-ball draw.
Vec3 uniform_ball_point(double radius, std::uint64_t seed);

}  // namespace pairprobe
