#include "ouqm/operators.hpp"

#include <cmath>
#include <cstdio>

#include "ouqm/core.hpp"
#include "ouqm/kernels.hpp"

namespace ouqm {

CoupledOperator::CoupledOperator(PhysicalParams params, Potential pot, XGrid grid,
                                 HermiteBasis basis)
    : params_(params), pot_(std::move(pot)), grid_(grid), basis_(basis) {
    params_.validate();
    grid_.validate();
    basis_.validate();
    if (!(params_.tau_c > 0.0))
        throw NumericalError("extended operator undefined for tau_c <= 0; use baseline solver");

    const int npts = grid_.n_points;
    const int modes = basis_.modes();
    const int N = modes * npts;
    inv2dx_ = 1.0 / (2.0 * grid_.dx());

    const auto xs = grid_.points();
    std::vector<double> V(static_cast<std::size_t>(npts));
    potential_eval_grid(pot_, xs, V, {}, {});

    diag_.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < modes; ++n) {
        const double offset = -(params_.hbar / params_.tau_c) * (double(n) + 0.5);
        for (int i = 0; i < npts; ++i)
            diag_[std::size_t(n) * npts + i] = offset + V[std::size_t(i)];
    }

    const double c =
        std::sqrt(params_.hbar * params_.hbar * params_.hbar / (2.0 * params_.mass * params_.tau_c));
    couple_.resize(static_cast<std::size_t>(std::max(modes - 1, 0)));
    for (int n = 0; n + 1 < modes; ++n) couple_[std::size_t(n)] = c * std::sqrt(double(n + 1));

    // Dense Hermitian matrix; both triangles written from the same formula.
    dense_ = linalg::DenseComplex(N);
    for (int k = 0; k < N; ++k) dense_.at(k, k) = diag_[std::size_t(k)];
    for (int n = 0; n + 1 < modes; ++n) {
        const double g = couple_[std::size_t(n)] * inv2dx_;
        for (int i = 0; i < npts; ++i) {
            const int row = n * npts + i;
            // block (n, n+1): i*g*D, block (n+1, n): its conjugate transpose
            if (i + 1 < npts) {
                dense_.at(row, (n + 1) * npts + i + 1) = cplx(0.0, g);
                dense_.at((n + 1) * npts + i + 1, row) = cplx(0.0, -g);
            }
            if (i - 1 >= 0) {
                dense_.at(row, (n + 1) * npts + i - 1) = cplx(0.0, -g);
                dense_.at((n + 1) * npts + i - 1, row) = cplx(0.0, g);
            }
        }
    }
    norm_inf_ = linalg::norm_inf(dense_);
}

void CoupledOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
    const int npts = grid_.n_points;
    const int modes = basis_.modes();
    if (int(x.size()) != dim() || int(y.size()) != dim())
        throw NumericalError("CoupledOperator::apply: vector length mismatch");
    const auto& K = kernels::active();
    std::fill(y.begin(), y.end(), cplx{0.0, 0.0});
    std::vector<cplx> tmp(static_cast<std::size_t>(npts));
    for (int n = 0; n < modes; ++n) {
        const std::size_t off = std::size_t(n) * npts;
        K.diag_mul_acc(diag_.data() + off, x.data() + off, y.data() + off, static_cast<std::size_t>(npts));
        // i * c_n * D coupling to both neighbours
        if (n + 1 < modes) {
            const double g = couple_[std::size_t(n)] * inv2dx_;
            std::fill(tmp.begin(), tmp.end(), cplx{0.0, 0.0});
            K.stencil_acc_c(g, x.data() + off + npts, tmp.data(), static_cast<std::size_t>(npts));
            K.axpy_c(cplx(0.0, 1.0), tmp.data(), y.data() + off, static_cast<std::size_t>(npts));
            std::fill(tmp.begin(), tmp.end(), cplx{0.0, 0.0});
            K.stencil_acc_c(g, x.data() + off, tmp.data(), static_cast<std::size_t>(npts));
            K.axpy_c(cplx(0.0, 1.0), tmp.data(), y.data() + off + npts, static_cast<std::size_t>(npts));
        }
    }
}

linalg::DenseReal CoupledOperator::real_rotation() const {
    const int npts = grid_.n_points;
    const int modes = basis_.modes();
    linalg::DenseReal t(dim());
    for (int k = 0; k < dim(); ++k) t.at(k, k) = diag_[std::size_t(k)];
    for (int n = 0; n + 1 < modes; ++n) {
        const double g = couple_[std::size_t(n)] * inv2dx_;
        for (int i = 0; i < npts; ++i) {
            const int row = n * npts + i;
            if (i + 1 < npts) {
                t.at(row, (n + 1) * npts + i + 1) = g;
                t.at((n + 1) * npts + i + 1, row) = g;
            }
            if (i - 1 >= 0) {
                t.at(row, (n + 1) * npts + i - 1) = -g;
                t.at((n + 1) * npts + i - 1, row) = -g;
            }
        }
    }
    return t;
}

std::string CoupledOperator::dump_triplets() const {
    std::string out;
    char line[128];
    for (int r = 0; r < dim(); ++r)
        for (int c = 0; c < dim(); ++c) {
            const cplx v = dense_.at(r, c);
            if (v == cplx{0.0, 0.0}) continue;
            std::snprintf(line, sizeof line, "%d %d %.17g %.17g\n", r, c, v.real(), v.imag());
            out += line;
        }
    return out;
}

CoupledOperator assemble_coupled(const PhysicalParams& params, const Potential& pot,
                                 const XGrid& grid, const HermiteBasis& basis) {
    return CoupledOperator(params, pot, grid, basis);
}

namespace {

SchrodingerOperator make_schrodinger(const PhysicalParams& params, const Potential& pot,
                                     const XGrid& grid, double mass_eff, bool wide) {
    params.validate();
    grid.validate();
    if (!(mass_eff > 0.0)) throw NumericalError("assemble_schrodinger: mass_eff must be > 0");

    const int n = grid.n_points;
    const double dx = grid.dx();
    const auto xs = grid.points();
    std::vector<double> V(static_cast<std::size_t>(n));
    potential_eval_grid(pot, xs, V, {}, {});

    SchrodingerOperator op{params, pot, grid, mass_eff, linalg::DenseReal(n)};
    const double hbar2 = params.hbar * params.hbar;
    if (!wide) {
        const double kin = hbar2 / (2.0 * mass_eff * dx * dx);
        for (int i = 0; i < n; ++i) {
            op.matrix.at(i, i) = 2.0 * kin + V[std::size_t(i)];
            if (i + 1 < n) {
                op.matrix.at(i, i + 1) = -kin;
                op.matrix.at(i + 1, i) = -kin;
            }
        }
    } else {
        // -(hbar^2/2m) D D with D the centered difference: a five-point
        // (stride 2) Laplacian. Matches the slow-sector kinetic term the
        // coupled operator generates.
        const double kin = hbar2 / (2.0 * mass_eff) / (4.0 * dx * dx);
        for (int i = 0; i < n; ++i) {
            op.matrix.at(i, i) = 2.0 * kin + V[std::size_t(i)];
            if (i + 2 < n) {
                op.matrix.at(i, i + 2) = -kin;
                op.matrix.at(i + 2, i) = -kin;
            }
        }
    }
    return op;
}

} // namespace

SchrodingerOperator assemble_schrodinger(const PhysicalParams& params, const Potential& pot,
                                         const XGrid& grid, double mass_eff) {
    return make_schrodinger(params, pot, grid, mass_eff, false);
}

SchrodingerOperator assemble_schrodinger_wide(const PhysicalParams& params, const Potential& pot,
                                              const XGrid& grid, double mass_eff) {
    return make_schrodinger(params, pot, grid, mass_eff, true);
}

} // namespace ouqm
