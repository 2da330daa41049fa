#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "ouqm/errors.hpp"

namespace ouqm {

using cplx = std::complex<double>;

// Physical constants of a run. tau_c = 0 selects the plain Schrodinger limit;
// the extended (x,q) machinery requires tau_c > 0.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
    double tau_c = 0.05;

    // Momentum rescale constant sqrt(m*hbar/tau_c); defined only for tau_c > 0.
    double momentum_rescale() const {
        if (tau_c <= 0.0)
            throw NumericalError("momentum rescale undefined for tau_c <= 0");
        return std::sqrt(mass * hbar / tau_c);
    }

    void validate() const {
        if (!(hbar > 0.0)) throw ConfigError("physical.hbar must be > 0");
        if (!(mass > 0.0)) throw ConfigError("physical.mass must be > 0");
        if (!(tau_c >= 0.0)) throw ConfigError("physical.tau_c must be >= 0");
    }
};

// Polynomial potential V(x) = sum_k c_k x^k with exact derivative coefficients.
class Potential {
public:
    static constexpr int default_max_degree = 8;

    Potential() : Potential(std::vector<double>{0.0}) {}

    explicit Potential(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
        d1_.assign(c_.size() > 1 ? c_.size() - 1 : 1, 0.0);
        for (std::size_t k = 1; k < c_.size(); ++k) d1_[k - 1] = double(k) * c_[k];
        d2_.assign(d1_.size() > 1 ? d1_.size() - 1 : 1, 0.0);
        for (std::size_t k = 1; k < d1_.size(); ++k) d2_[k - 1] = double(k) * d1_[k];
    }

    const std::vector<double>& coefficients() const { return c_; }
    const std::vector<double>& d1_coefficients() const { return d1_; }
    const std::vector<double>& d2_coefficients() const { return d2_; }
    int degree() const { return int(c_.size()) - 1; }

    bool is_identically_zero() const {
        for (double c : c_)
            if (c != 0.0) return false;
        return true;
    }

    // For a purely quadratic well c2*x^2 returns omega = sqrt(2 c2 / m).
    std::optional<double> harmonic_omega(double m) const {
        if (degree() < 2 || c_[2] <= 0.0) return std::nullopt;
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (k != 2 && c_[k] != 0.0) return std::nullopt;
        return std::sqrt(2.0 * c_[2] / m);
    }

private:
    std::vector<double> c_;
    std::vector<double> d1_;
    std::vector<double> d2_;
};

// Uniform position grid on [x_min, x_max]. The stencils use Dirichlet ghosts,
// so the effective hard walls sit one spacing outside the stored endpoints.
struct XGrid {
    double x_min = -10.0;
    double x_max = 10.0;
    int n_points = 201;

    double dx() const { return (x_max - x_min) / double(n_points - 1); }
    double x(int i) const { return x_min + dx() * double(i); }

    std::vector<double> points() const {
        std::vector<double> xs(static_cast<std::size_t>(n_points));
        for (int i = 0; i < n_points; ++i) xs[std::size_t(i)] = x(i);
        return xs;
    }

    void validate() const {
        if (!(x_min < x_max)) throw ConfigError("grid.x_min must be < grid.x_max");
        if (n_points < 8) throw ConfigError("grid.n_points must be >= 8");
    }
};

// Truncation of the oscillator-mode expansion in q: modes 0..n_max.
struct HermiteBasis {
    int n_max = 8;
    int modes() const { return n_max + 1; }
    void validate() const {
        if (n_max < 0) throw ConfigError("basis.n_max must be >= 0");
    }
};

} // namespace ouqm
