#include "ouqm/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "ouqm/core.hpp"
#include "ouqm/kernels.hpp"

namespace ouqm {

namespace {

using dvec = std::vector<double>;

double gip(const dvec& f, const dvec& g, const XGrid& grid) {
    return grid_inner_product(std::span<const double>(f), std::span<const double>(g), grid);
}

struct Baseline {
    double E1 = 0.0;
    dvec phi;            // grid-normalized, sign-fixed
    linalg::DenseReal H; // operator owning the eigenpair
    // Whole (near-)degenerate eigenspace at E1, plain-normalized. The
    // composed stencil doubles each level with a lattice-parity partner, so
    // the shifted solve must be deflated against every member.
    std::vector<dvec> null_space;
};

// Level extraction. The composed-stencil operator decouples the two grid
// sublattices and doubles every level; degenerate pairs are rotated to
// maximal neighbour coherence and the smooth member is kept.
Baseline baseline_level(const PhysicalParams& params, const Potential& pot, const XGrid& grid,
                        int level, bool wide) {
    SchrodingerOperator op = wide ? assemble_schrodinger_wide(params, pot, grid, params.mass)
                                  : assemble_schrodinger(params, pot, grid, params.mass);
    linalg::DenseReal work = op.matrix;
    std::vector<double> w = linalg::sym_eig_inplace(work);
    const int n = op.dim();

    Baseline out;
    out.H = std::move(op.matrix);
    if (!wide) {
        if (level >= n) throw NumericalError("baseline level out of range");
        out.E1 = w[std::size_t(level)];
        out.phi.assign(work.a.begin() + std::size_t(level) * n,
                       work.a.begin() + std::size_t(level + 1) * n);
        out.null_space.push_back(out.phi);
    } else {
        int found = -1;
        int j = 0;
        bool done = false;
        while (j < n && !done) {
            int g = j + 1;
            while (g < n && std::abs(w[std::size_t(g)] - w[std::size_t(j)]) <=
                                1e-6 * std::max(1.0, std::abs(w[std::size_t(j)])))
                ++g;
            if (++found == level) {
                const int m = g - j;
                auto colp = [&](int a) { return work.a.data() + std::size_t(j + a) * n; };
                for (int a = 0; a < m; ++a)
                    out.null_space.emplace_back(colp(a), colp(a) + n);
                if (m == 1) {
                    out.E1 = w[std::size_t(j)];
                    out.phi.assign(colp(0), colp(0) + n);
                } else {
                    // 2x2 (or larger) coherence form; dominant eigenvector by
                    // shifted power iteration.
                    std::vector<double> G(static_cast<std::size_t>(m) * m, 0.0);
                    for (int a = 0; a < m; ++a)
                        for (int b = a; b < m; ++b) {
                            double s = 0.0;
                            const double* pa = colp(a);
                            const double* pb = colp(b);
                            for (int i = 0; i + 1 < n; ++i)
                                s += 0.5 * (pa[i] * pb[i + 1] + pa[i + 1] * pb[i]);
                            G[std::size_t(a) * m + b] = s;
                            G[std::size_t(b) * m + a] = s;
                        }
                    double shift = 1.0;
                    for (int a = 0; a < m; ++a)
                        shift += std::abs(G[std::size_t(a) * m + a]);
                    std::vector<double> v(static_cast<std::size_t>(m), 1.0 / std::sqrt(double(m)));
                    for (int it = 0; it < 300; ++it) {
                        std::vector<double> t(static_cast<std::size_t>(m), 0.0);
                        for (int a = 0; a < m; ++a)
                            for (int b = 0; b < m; ++b)
                                t[std::size_t(a)] +=
                                    (G[std::size_t(a) * m + b] + (a == b ? shift : 0.0)) *
                                    v[std::size_t(b)];
                        double nn = 0.0;
                        for (double q : t) nn += q * q;
                        nn = std::sqrt(nn);
                        for (int a = 0; a < m; ++a) v[std::size_t(a)] = t[std::size_t(a)] / nn;
                    }
                    out.E1 = 0.0;
                    for (int a = 0; a < m; ++a) out.E1 += w[std::size_t(j + a)] / double(m);
                    out.phi.assign(static_cast<std::size_t>(n), 0.0);
                    for (int a = 0; a < m; ++a)
                        for (int i = 0; i < n; ++i)
                            out.phi[std::size_t(i)] += v[std::size_t(a)] * colp(a)[i];
                }
                done = true;
            }
            j = g;
        }
        if (!done) throw NumericalError("baseline level out of range");
    }

    const double nrm = grid_norm(std::span<const double>(out.phi), grid);
    double peak = 0.0;
    for (double x : out.phi)
        if (std::abs(x) > std::abs(peak)) peak = x;
    const double sign = peak < 0.0 ? -1.0 : 1.0;
    for (double& x : out.phi) x *= sign / nrm;
    return out;
}

struct FirstOrder {
    dvec phi01;
    double ortho_pre = 0.0;
    double rcond = 0.0;
};

FirstOrder solve_first_order(const linalg::DenseReal& H, double E1, double E2, const dvec& phi,
                             const std::vector<dvec>& null_space, const PhysicalParams& params,
                             const Potential& pot, const XGrid& grid, double singular_rcond) {
    const int n = grid.n_points;
    const double hbar = params.hbar;
    const double m = params.mass;
    const double dx = grid.dx();

    const auto xs = grid.points();
    dvec Vp(static_cast<std::size_t>(n)), Vpp(static_cast<std::size_t>(n));
    potential_eval_grid(pot, xs, {}, Vp, Vpp);
    const dvec Dphi = centered_diff(phi, dx);

    dvec rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rhs[std::size_t(i)] =
            (E2 - (hbar / (2.0 * m)) * Vpp[std::size_t(i)]) * phi[std::size_t(i)] -
            (hbar / (2.0 * m)) * Vp[std::size_t(i)] * Dphi[std::size_t(i)];

    // The shifted operator annihilates the whole degenerate eigenspace at
    // E1; deflate every member with a rank-one term so the factorization is
    // well conditioned, then solve in the orthogonal complement.
    const auto& K = kernels::active();
    std::vector<dvec> units = null_space;
    for (auto& u : units) {
        const double s = std::sqrt(K.dot_r(u.data(), u.data(), u.size()));
        for (double& v : u) v /= s;
    }
    for (const auto& u : units) {
        const double proj = K.dot_r(u.data(), rhs.data(), rhs.size());
        for (int i = 0; i < n; ++i) rhs[std::size_t(i)] -= proj * u[std::size_t(i)];
    }

    linalg::DenseReal deflated = H;
    const double sigma = linalg::norm_inf(H);
    for (int r = 0; r < n; ++r) deflated.at(r, r) -= E1;
    for (const auto& u : units)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                deflated.at(r, c) += sigma * u[std::size_t(r)] * u[std::size_t(c)];

    FirstOrder out;
    out.phi01 = linalg::solve_refined(deflated, rhs, &out.rcond);
    if (!(out.rcond > singular_rcond))
        throw NumericalError(
            "resolvent singular: shifted baseline operator singular beyond the target mode "
            "(near-degenerate E1?), rcond=" +
            std::to_string(out.rcond));

    const double phi2 = gip(phi, phi, grid);
    const double pre = gip(phi, out.phi01, grid);
    out.ortho_pre = std::abs(pre) / std::sqrt(phi2);
    for (int i = 0; i < n; ++i) out.phi01[std::size_t(i)] -= (pre / phi2) * phi[std::size_t(i)];
    return out;
}

} // namespace

PerturbationResult energy_correction(const PhysicalParams& params, const Potential& pot,
                                     const XGrid& grid, int level,
                                     const PerturbationOptions& opts) {
    params.validate();
    grid.validate();
    if (level < 0) throw ConfigError("perturb.level must be >= 0");

    Baseline base = baseline_level(params, pot, grid, level, opts.wide_stencil);
    const int n = grid.n_points;
    const double hbar = params.hbar;
    const double m = params.mass;
    const double dx = grid.dx();

    const auto xs = grid.points();
    dvec V(static_cast<std::size_t>(n)), Vp(static_cast<std::size_t>(n)), Vpp(static_cast<std::size_t>(n));
    potential_eval_grid(pot, xs, V, Vp, Vpp);

    const dvec& phi = base.phi;
    const dvec Dphi = centered_diff(phi, dx);
    const double phi2 = gip(phi, phi, grid);

    // Solvability of the first-correction equation fixes E2; the correction
    // operator is applied as V''*phi + V'*(D phi) with the shared stencil.
    dvec num(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        num[std::size_t(i)] = Vpp[std::size_t(i)] * phi[std::size_t(i)] +
                              Vp[std::size_t(i)] * Dphi[std::size_t(i)];
    const double E2 = (hbar / (2.0 * m)) * gip(phi, num, grid) / phi2;

    PerturbationResult result;
    result.E0 = -0.5 * hbar;
    result.E1 = base.E1;
    result.E2 = E2;
    result.phi00 = phi;

    // Alternative quadratures of the same correction, kept as diagnostics.
    {
        dvec gap(static_cast<std::size_t>(n)), ta(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            gap[std::size_t(i)] = (V[std::size_t(i)] - base.E1) * phi[std::size_t(i)];
            ta[std::size_t(i)] = (V[std::size_t(i)] - base.E1) * Dphi[std::size_t(i)];
        }
        const dvec DDgap = centered_diff(centered_diff(gap, dx), dx);
        const dvec Dta = centered_diff(ta, dx);
        dvec diff(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            diff[std::size_t(i)] = DDgap[std::size_t(i)] - Dta[std::size_t(i)];
        result.diagnostics.e2_stencil_form =
            (hbar / (2.0 * m)) * gip(phi, diff, grid) / phi2;

        dvec vpp_phi(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            vpp_phi[std::size_t(i)] = Vpp[std::size_t(i)] * phi[std::size_t(i)];
        result.diagnostics.e2_integrated_form =
            (hbar / (4.0 * m)) * gip(phi, vpp_phi, grid) / phi2;
    }

    FirstOrder fo = solve_first_order(base.H, base.E1, E2, phi, base.null_space, params, pot,
                                      grid, opts.singular_rcond);
    result.phi01 = std::move(fo.phi01);
    result.diagnostics.ortho_pre = fo.ortho_pre;
    result.diagnostics.rcond = fo.rcond;
    result.diagnostics.ortho_post =
        std::abs(gip(phi, result.phi01, grid)) / std::sqrt(phi2);

    // Literal half-mass double-resolvent ratio, reported for comparison.
    if (opts.compute_half_mass_diagnostic) {
        SchrodingerOperator hm2 =
            opts.wide_stencil ? assemble_schrodinger_wide(params, pot, grid, 0.5 * m)
                              : assemble_schrodinger(params, pot, grid, 0.5 * m);
        linalg::DenseReal shifted = std::move(hm2.matrix);
        for (int i = 0; i < n; ++i) shifted.at(i, i) -= base.E1;
        try {
            double rc1 = 0.0, rc2 = 0.0;
            const dvec y = linalg::solve_refined(shifted, num, &rc1);
            const dvec z = linalg::solve_refined(shifted, phi, &rc2);
            const double den = gip(phi, z, grid);
            const double zn = std::sqrt(gip(z, z, grid));
            if (rc1 > 1e-14 && rc2 > 1e-14 && std::abs(den) > 1e-10 * std::sqrt(phi2) * zn)
                result.diagnostics.e2_half_mass_resolvent =
                    (hbar / m) * gip(phi, y, grid) / den;
        } catch (const NumericalError&) {
            // diagnostic stays unset
        }
    }
    return result;
}

std::vector<double> first_order_wavefunction(const PerturbationResult& base,
                                             const PhysicalParams& params, const Potential& pot,
                                             const XGrid& grid,
                                             const PerturbationOptions& opts) {
    SchrodingerOperator op = opts.wide_stencil
                                 ? assemble_schrodinger_wide(params, pot, grid, params.mass)
                                 : assemble_schrodinger(params, pot, grid, params.mass);
    // Recover the full eigenspace at E1 for the deflation.
    linalg::DenseReal work = op.matrix;
    const std::vector<double> w = linalg::sym_eig_inplace(work);
    std::vector<dvec> null_space;
    const int n = op.dim();
    for (int j = 0; j < n; ++j)
        if (std::abs(w[std::size_t(j)] - base.E1) <= 1e-6 * std::max(1.0, std::abs(base.E1)))
            null_space.emplace_back(work.a.begin() + std::size_t(j) * n,
                                    work.a.begin() + std::size_t(j + 1) * n);
    if (null_space.empty())
        throw NumericalError("first_order_wavefunction: E1 is not an eigenvalue of the baseline");
    return solve_first_order(op.matrix, base.E1, base.E2, base.phi00, null_space, params, pot,
                             grid, opts.singular_rcond)
        .phi01;
}

HierarchyFields hierarchy_intermediates(const std::vector<double>& phi00,
                                        const std::vector<double>& phi01,
                                        const PhysicalParams& params, const Potential& pot,
                                        const XGrid& grid, double E1) {
    const int n = grid.n_points;
    const double hbar = params.hbar;
    const double m = params.mass;
    const double dx = grid.dx();

    HierarchyFields out;
    const dvec dphi00 = derivative_field(phi00, dx);
    out.phi10_imag.resize(static_cast<std::size_t>(n));
    const double c10 = std::sqrt(hbar / (2.0 * m));
    for (int i = 0; i < n; ++i) out.phi10_imag[std::size_t(i)] = c10 * dphi00[std::size_t(i)];

    const dvec dphi10 = derivative_field(out.phi10_imag, dx);
    out.phi20_real.resize(static_cast<std::size_t>(n));
    const double c20 = 0.5 * std::sqrt(hbar / m); // i * i phi10' collapses to -phi10'
    for (int i = 0; i < n; ++i) out.phi20_real[std::size_t(i)] = -c20 * dphi10[std::size_t(i)];

    // phi11' with the fourth derivative eliminated through the baseline
    // relation phi00'''' = (2m/hbar^2) [(V - E1) phi00]''.
    const auto xs = grid.points();
    dvec V(static_cast<std::size_t>(n));
    potential_eval_grid(pot, xs, V, {}, {});

    dvec t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        t[std::size_t(i)] = (V[std::size_t(i)] - E1) * dphi00[std::size_t(i)];
    const dvec term1 = derivative_field(t, dx);
    const dvec term2 = derivative_field(derivative_field(phi01, dx), dx);
    dvec gp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        gp[std::size_t(i)] = (V[std::size_t(i)] - E1) * phi00[std::size_t(i)];
    const dvec ddgp = derivative_field(derivative_field(gp, dx), dx);

    const double a1 = std::sqrt(1.0 / (2.0 * m * hbar));
    const double a2 = std::sqrt(hbar / (2.0 * m));
    const double a3 =
        std::sqrt(hbar * hbar * hbar / (8.0 * m * m * m)) * (2.0 * m / (hbar * hbar));
    out.phi11_prime_imag.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.phi11_prime_imag[std::size_t(i)] = a1 * term1[std::size_t(i)] +
                                               a2 * term2[std::size_t(i)] -
                                               a3 * ddgp[std::size_t(i)];
    return out;
}

} // namespace ouqm
