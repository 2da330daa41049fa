#include "doctest.h"

#include <cmath>

#include "ouqm/exact.hpp"

using namespace ouqm;

TEST_CASE("closed-form oscillator energy") {
    PUSpectrumQuery q{0, 0, 1.0, PhysicalParams{1.0, 1.0, 0.1}};
    // -(1/0.1) sqrt(0.99) * 0.5 + 0.5, evaluated at high precision
    CHECK(pais_uhlenbeck_energy(q) ==
          doctest::Approx(-4.474937185533100).epsilon(1e-12));
}

TEST_CASE("small tau_c shift approaches hbar omega^2 tau_c / 4") {
    for (int ell : {0, 2, 5}) {
        const double tau = 1e-4;
        PUSpectrumQuery q{0, ell, 1.0, PhysicalParams{1.0, 1.0, tau}};
        const double shift = pais_uhlenbeck_energy(q) + 0.5 / tau - (ell + 0.5);
        CHECK(std::abs(shift - tau / 4.0) < 1e-6 * tau);
    }
}

TEST_CASE("ill-defined regime raises") {
    PUSpectrumQuery q{0, 0, 1.0, PhysicalParams{1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(pais_uhlenbeck_energy(q), RegimeError);
    PUSpectrumQuery q2{0, 0, 2.0, PhysicalParams{1.0, 1.0, 0.6}};
    CHECK_THROWS_AS(pais_uhlenbeck_energy(q2), RegimeError);
}

TEST_CASE("near-boundary flag") {
    CHECK(pu_near_boundary({0, 0, 1.0, PhysicalParams{1.0, 1.0, 0.85}}));
    CHECK_FALSE(pu_near_boundary({0, 0, 1.0, PhysicalParams{1.0, 1.0, 0.5}}));
}

TEST_CASE("level spacing is exactly hbar omega at fixed sector") {
    const PhysicalParams p{1.0, 1.0, 0.3};
    for (int n : {0, 1, 4})
        for (int ell = 0; ell < 6; ++ell) {
            const double e1 = pais_uhlenbeck_energy({n, ell + 1, 1.7, p});
            const double e0 = pais_uhlenbeck_energy({n, ell, 1.7, p});
            CHECK(e1 - e0 == doctest::Approx(1.7).epsilon(1e-14));
        }
}

TEST_CASE("tau_c -> 0 limit converges linearly") {
    double prev = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double tau = k == 0 ? 1e-2 : 5e-3;
        PUSpectrumQuery q{2, 1, 1.0, PhysicalParams{1.0, 1.0, tau}};
        const double resid =
            std::abs(pais_uhlenbeck_energy(q) + (1.0 / tau) * 2.5 - 1.5);
        if (k == 1) {
            CHECK(prev / resid == doctest::Approx(2.0).epsilon(0.01)); // O(tau_c)
        }
        prev = resid;
    }
}

TEST_CASE("free particle dispersion, tau_c independent") {
    CHECK(free_particle_energy(0.0, PhysicalParams{1, 1, 0.1}) == 0.0);
    CHECK(free_particle_energy(2.0, PhysicalParams{1, 1, 0.1}) == 2.0);
    const double a = free_particle_energy(1.3, PhysicalParams{1, 1, 0.0});
    const double b = free_particle_energy(1.3, PhysicalParams{1, 1, 0.01});
    const double c = free_particle_energy(1.3, PhysicalParams{1, 1, 0.5});
    CHECK(a == b);
    CHECK(b == c);
}
