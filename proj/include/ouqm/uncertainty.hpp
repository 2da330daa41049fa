#pragma once

// Commutator suppression factor for time-averaged position/momentum
// operators: f(u) = 1 - (1 - e^-u)^2 / u^2 with u the ratio of averaging
// window to correlation time. f rises linearly from 0 and saturates at 1
// with a u^-2 tail.

#include <vector>

#include "ouqm/errors.hpp"

namespace ouqm {

struct CommutatorCurve {
    std::vector<double> u;
    std::vector<double> f;
};

// Closed form for u >= u_switch; a degree-4 series below it to dodge the
// small-u cancellation. The two branches agree to ~1e-13 at the switch.
double commutator_factor(double u);

constexpr double commutator_u_switch = 1e-3;

// Log-spaced table of (u, f(u)) on [u_min, u_max].
CommutatorCurve uncertainty_curve(double u_min, double u_max, int n_points);

} // namespace ouqm
