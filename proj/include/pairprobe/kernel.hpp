#pragma once

#include "pairprobe/types.hpp"

namespace pairprobe {

/// Outgoing free-space kernel e^{i kappa r} / (4 pi r).
cplx helmholtz_kernel(double kappa, double r);

/// Integral of the free-space kernel over a ball of radius `ball_radius`
/// whose center is at distance `rho` from the observation point.  Exact for
/// every rho >= 0 (inside and outside the ball) and stable as kappa -> 0.
cplx ball_integrated_kernel(double kappa, double ball_radius, double rho);

}  // namespace pairprobe
