#include "ouqm/uncertainty.hpp"

#include <cmath>

namespace ouqm {

double commutator_factor(double u) {
    if (!(u > 0.0)) throw ConfigError("commutator_factor: u must be > 0");
    if (u < commutator_u_switch) {
        // f(u) = u - (7/12) u^2 + (1/4) u^3 - (31/360) u^4 + O(u^5),
        // from squaring (1 - e^-u)/u = sum (-u)^k/(k+1)!.
        return u * (1.0 + u * (-7.0 / 12.0 + u * (0.25 + u * (-31.0 / 360.0))));
    }
    const double g = -std::expm1(-u) / u; // (1 - e^-u)/u without cancellation
    return 1.0 - g * g;
}

CommutatorCurve uncertainty_curve(double u_min, double u_max, int n_points) {
    if (!(u_min > 0.0) || !(u_min < u_max))
        throw ConfigError("uncertainty_curve: need 0 < u_min < u_max");
    if (n_points < 2) throw ConfigError("uncertainty_curve: n_points must be >= 2");
    CommutatorCurve c;
    c.u.resize(static_cast<std::size_t>(n_points));
    c.f.resize(static_cast<std::size_t>(n_points));
    const double l0 = std::log(u_min), l1 = std::log(u_max);
    for (int i = 0; i < n_points; ++i) {
        const double t = double(i) / double(n_points - 1);
        // exact endpoints; log-spaced interior
        const double u = (i == 0) ? u_min : (i == n_points - 1 ? u_max : std::exp(l0 + t * (l1 - l0)));
        c.u[std::size_t(i)] = u;
        c.f[std::size_t(i)] = commutator_factor(u);
    }
    return c;
}

} // namespace ouqm
