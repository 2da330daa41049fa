#pragma once

// Closed-form reference values: the two-index oscillator spectrum of the
// coupled model with a harmonic well, and the free-particle dispersion
// (tau_c independent).

#include "ouqm/types.hpp"

namespace ouqm {

struct PUSpectrumQuery {
    int n = 0;    // q-sector index
    int ell = 0;  // oscillator level
    double omega = 1.0;
    PhysicalParams params;
};

// E_{n,ell} = -(hbar/tau_c) sqrt(1 - (omega tau_c)^2) (n + 1/2)
//             + hbar omega (ell + 1/2).
// Throws RegimeError for omega*tau_c >= 1. The near-boundary band
// omega*tau_c in [0.8, 1) is valid but fragile; near_boundary_warning
// lets callers surface that.
double pais_uhlenbeck_energy(const PUSpectrumQuery& q);

bool pu_near_boundary(const PUSpectrumQuery& q); // omega*tau_c >= 0.8

// hbar^2 k^2 / (2 m), independent of tau_c.
double free_particle_energy(double k, const PhysicalParams& params);

} // namespace ouqm
