#include "ouqm/exact.hpp"

#include <cmath>
#include <string>

namespace ouqm {

double pais_uhlenbeck_energy(const PUSpectrumQuery& q) {
    if (q.n < 0 || q.ell < 0)
        throw ConfigError("pais_uhlenbeck_energy: n and ell must be >= 0");
    if (!(q.omega > 0.0)) throw ConfigError("pais_uhlenbeck_energy: omega must be > 0");
    q.params.validate();
    const double wt = q.omega * q.params.tau_c;
    if (wt >= 1.0)
        throw RegimeError("ill-defined regime: omega*tau_c = " + std::to_string(wt) +
                          " >= 1");
    const double hbar = q.params.hbar;
    return -(hbar / q.params.tau_c) * std::sqrt(1.0 - wt * wt) * (double(q.n) + 0.5) +
           hbar * q.omega * (double(q.ell) + 0.5);
}

bool pu_near_boundary(const PUSpectrumQuery& q) {
    return q.omega * q.params.tau_c >= 0.8;
}

double free_particle_energy(double k, const PhysicalParams& params) {
    params.validate();
    return params.hbar * params.hbar * k * k / (2.0 * params.mass);
}

} // namespace ouqm
