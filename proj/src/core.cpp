#include "ouqm/core.hpp"

#include <cmath>
#include <stdexcept>

#include "ouqm/kernels.hpp"

namespace ouqm {

namespace {
constexpr double pi_quarter_inv = 0.75112554446494248; // pi^(-1/4)
}

double hermite_function(int n, double q) {
    if (n < 0) throw std::invalid_argument("hermite_function: n must be >= 0");
    if (!std::isfinite(q)) throw std::invalid_argument("hermite_function: q must be finite");
    const double h0 = pi_quarter_inv * std::exp(-0.5 * q * q);
    if (h0 == 0.0) return 0.0; // Gaussian underflow; all modes vanish here
    if (n == 0) return h0;
    double hm = h0;
    double h = std::sqrt(2.0) * q * h0;
    for (int k = 1; k < n; ++k) {
        const double next =
            std::sqrt(2.0 / double(k + 1)) * q * h - std::sqrt(double(k) / double(k + 1)) * hm;
        hm = h;
        h = next;
    }
    return h;
}

std::vector<std::vector<double>> hermite_table(int n_max, std::span<const double> q) {
    if (n_max < 0) throw std::invalid_argument("hermite_table: n_max must be >= 0");
    const auto& K = kernels::active();
    const std::size_t npts = q.size();
    std::vector<std::vector<double>> h(static_cast<std::size_t>(n_max) + 1, std::vector<double>(npts));
    for (std::size_t i = 0; i < npts; ++i)
        h[0][i] = pi_quarter_inv * std::exp(-0.5 * q[i] * q[i]);
    if (n_max == 0) return h;
    K.recur_step(std::sqrt(2.0), 0.0, q.data(), h[0].data(), h[0].data(), h[1].data(), npts);
    for (int k = 1; k < n_max; ++k) {
        K.recur_step(std::sqrt(2.0 / double(k + 1)), -std::sqrt(double(k) / double(k + 1)),
                     q.data(), h[std::size_t(k)].data(), h[std::size_t(k) - 1].data(),
                     h[std::size_t(k) + 1].data(), npts);
    }
    return h;
}

PotentialValue potential_eval(const Potential& pot, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("potential_eval: x must be finite");
    double v, d1, d2;
    kernels::active().horner3(pot.coefficients().data(), pot.coefficients().size(),
                              pot.d1_coefficients().data(), pot.d1_coefficients().size(),
                              pot.d2_coefficients().data(), pot.d2_coefficients().size(), &x, 1,
                              &v, &d1, &d2);
    return {v, d1, d2};
}

void potential_eval_grid(const Potential& pot, std::span<const double> x, std::span<double> v,
                         std::span<double> d1, std::span<double> d2) {
    if ((!v.empty() && v.size() != x.size()) || (!d1.empty() && d1.size() != x.size()) ||
        (!d2.empty() && d2.size() != x.size()))
        throw std::invalid_argument("potential_eval_grid: output size mismatch");
    kernels::active().horner3(pot.coefficients().data(), pot.coefficients().size(),
                              pot.d1_coefficients().data(), pot.d1_coefficients().size(),
                              pot.d2_coefficients().data(), pot.d2_coefficients().size(),
                              x.data(), x.size(), v.empty() ? nullptr : v.data(),
                              d1.empty() ? nullptr : d1.data(), d2.empty() ? nullptr : d2.data());
}

cplx grid_inner_product(std::span<const cplx> f, std::span<const cplx> g, const XGrid& grid) {
    if (f.size() != g.size() || int(f.size()) != grid.n_points)
        throw std::invalid_argument("grid_inner_product: field length mismatch");
    const std::size_t n = f.size();
    cplx s = kernels::active().dotc(f.data(), g.data(), n);
    s -= 0.5 * (std::conj(f[0]) * g[0] + std::conj(f[n - 1]) * g[n - 1]);
    return s * grid.dx();
}

double grid_inner_product(std::span<const double> f, std::span<const double> g,
                          const XGrid& grid) {
    if (f.size() != g.size() || int(f.size()) != grid.n_points)
        throw std::invalid_argument("grid_inner_product: field length mismatch");
    const std::size_t n = f.size();
    double s = kernels::active().dot_r(f.data(), g.data(), n);
    s -= 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    return s * grid.dx();
}

double grid_norm(std::span<const cplx> f, const XGrid& grid) {
    return std::sqrt(std::abs(grid_inner_product(f, f, grid)));
}

double grid_norm(std::span<const double> f, const XGrid& grid) {
    return std::sqrt(grid_inner_product(f, f, grid));
}

std::vector<double> centered_diff(std::span<const double> f, double dx) {
    std::vector<double> out(f.size(), 0.0);
    kernels::active().stencil_acc_r(1.0 / (2.0 * dx), f.data(), out.data(), f.size());
    return out;
}

std::vector<cplx> centered_diff(std::span<const cplx> f, double dx) {
    std::vector<cplx> out(f.size(), cplx{0.0, 0.0});
    kernels::active().stencil_acc_c(1.0 / (2.0 * dx), f.data(), out.data(), f.size());
    return out;
}

std::vector<double> derivative_field(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) return out;
    kernels::active().stencil_acc_r(1.0 / (2.0 * dx), f.data(), out.data(), n);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    return out;
}

} // namespace ouqm
