#include "doctest.h"

#include <cmath>

#include "ouqm/uncertainty.hpp"

using namespace ouqm;

namespace {
// Test-side closed form via expm1 (accurate at small u too).
double closed(double u) {
    const double g = -std::expm1(-u) / u;
    return 1.0 - g * g;
}
double series(double u) {
    return u * (1.0 + u * (-7.0 / 12.0 + u * (0.25 + u * (-31.0 / 360.0))));
}
} // namespace

TEST_CASE("saturation at large u") {
    const double f = commutator_factor(1000.0);
    CHECK(f > 1.0 - 1.01e-6);
    CHECK(std::abs(1000.0 * 1000.0 * (1.0 - f) - 1.0) < 1e-2);
}

TEST_CASE("reference value at u = 1") {
    // 1 - (1 - 1/e)^2, evaluated independently
    const double expect = 1.0 - std::pow(-std::expm1(-1.0), 2);
    CHECK(expect == doctest::Approx(0.6004235992).epsilon(1e-9));
    CHECK(commutator_factor(1.0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("linear onset") {
    CHECK(std::abs(commutator_factor(1e-8) / 1e-8 - 1.0) < 1e-7);
    for (double u : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const double r = commutator_factor(u) / u;
        CHECK(r >= 0.99);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("branch consistency around the switch point") {
    for (double u = commutator_u_switch / 2; u <= 2 * commutator_u_switch; u *= 1.07) {
        CAPTURE(u);
        REQUIRE(std::abs(closed(u) - series(u)) < 1e-13);
        // the produced value matches both
        REQUIRE(std::abs(commutator_factor(u) - closed(u)) < 1e-13);
    }
}

TEST_CASE("large-u identity and tail window") {
    for (double u : {6.0, 8.0, 20.0, 100.0}) {
        const double f = commutator_factor(u);
        const double lhs = u * u * (1.0 - f);
        const double rhs = std::pow(-std::expm1(-u), 2);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, lhs));
        CHECK(rhs >= 0.99);
        CHECK(rhs <= 1.0);
    }
}

TEST_CASE("monotonicity by fine differencing") {
    double prev = commutator_factor(1e-4);
    for (int i = 1; i <= 2000; ++i) {
        const double u = 1e-4 * std::pow(10.0, 7.0 * i / 2000.0); // up to 1e3
        const double f = commutator_factor(u);
        REQUIRE(f > prev);
        prev = f;
    }
}

TEST_CASE("curve table") {
    const auto c = uncertainty_curve(1e-3, 1e3, 121);
    REQUIRE(c.u.size() == 121);
    CHECK(c.u.front() == 1e-3);
    CHECK(c.u.back() == 1e3);
    CHECK(c.f.front() == commutator_factor(1e-3));
    CHECK(c.f.back() == commutator_factor(1e3));
    for (std::size_t i = 1; i < c.f.size(); ++i) REQUIRE(c.f[i] > c.f[i - 1]);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(commutator_factor(0.0), ConfigError);
    CHECK_THROWS_AS(commutator_factor(-1.0), ConfigError);
    CHECK_THROWS_AS(uncertainty_curve(0.0, 1.0, 10), ConfigError);
    CHECK_THROWS_AS(uncertainty_curve(1.0, 0.5, 10), ConfigError);
    CHECK_THROWS_AS(uncertainty_curve(0.1, 1.0, 1), ConfigError);
}
