#include "ouqm/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ouqm/core.hpp"
#include "ouqm/kernels.hpp"

namespace ouqm {

namespace {

// Column view into the eigenvector matrix.
struct Col {
    const double* r = nullptr; // real storage (rotation route)
    const cplx* z = nullptr;   // complex storage (Hermitian route)
};

double col_mode_weight_plain(const Col& v, int n, int npts) {
    const auto& K = kernels::active();
    if (v.r) {
        return K.dot_r(v.r + std::size_t(n) * npts, v.r + std::size_t(n) * npts,
                       static_cast<std::size_t>(npts));
    }
    return K.nrm2sq(v.z + std::size_t(n) * npts, static_cast<std::size_t>(npts));
}

// Neighbour coherence between two states, summed within each mode row.
// Smooth states score ~ +||v||^2, lattice-parity partners ~ -||v||^2.
double coherence(const Col& a, const Col& b, int modes, int npts) {
    double s = 0.0;
    for (int n = 0; n < modes; ++n) {
        const std::size_t off = std::size_t(n) * npts;
        if (a.r) {
            const double* ra = a.r + off;
            const double* rb = b.r + off;
            for (int i = 0; i + 1 < npts; ++i)
                s += 0.5 * (ra[i] * rb[i + 1] + ra[i + 1] * rb[i]);
        } else {
            const cplx* ra = a.z + off;
            const cplx* rb = b.z + off;
            for (int i = 0; i + 1 < npts; ++i)
                s += 0.5 * (std::conj(ra[i]) * rb[i + 1] + std::conj(ra[i + 1]) * rb[i]).real();
        }
    }
    return s;
}

// Eigen-decomposition of a tiny symmetric matrix by Jacobi sweeps.
void small_sym_eig(std::vector<double>& g, int m, std::vector<double>& evals,
                   std::vector<double>& evecs) {
    evecs.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) evecs[std::size_t(i) * m + i] = 1.0;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += std::abs(g[std::size_t(p) * m + q]);
        if (off < 1e-15) break;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                const double apq = g[std::size_t(p) * m + q];
                if (apq == 0.0) continue;
                const double app = g[std::size_t(p) * m + p];
                const double aqq = g[std::size_t(q) * m + q];
                const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < m; ++k) {
                    const double gkp = g[std::size_t(k) * m + p];
                    const double gkq = g[std::size_t(k) * m + q];
                    g[std::size_t(k) * m + p] = c * gkp - s * gkq;
                    g[std::size_t(k) * m + q] = s * gkp + c * gkq;
                }
                for (int k = 0; k < m; ++k) {
                    const double gpk = g[std::size_t(p) * m + k];
                    const double gqk = g[std::size_t(q) * m + k];
                    g[std::size_t(p) * m + k] = c * gpk - s * gqk;
                    g[std::size_t(q) * m + k] = s * gpk + c * gqk;
                }
                for (int k = 0; k < m; ++k) {
                    const double vkp = evecs[std::size_t(k) * m + p];
                    const double vkq = evecs[std::size_t(k) * m + q];
                    evecs[std::size_t(k) * m + p] = c * vkp - s * vkq;
                    evecs[std::size_t(k) * m + q] = s * vkp + c * vkq;
                }
            }
    }
    evals.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) evals[std::size_t(i)] = g[std::size_t(i) * m + i];
}

} // namespace

// The coupled-state norm uses plain sums times dx: that is the quadratic
// invariant the Hermitian operator actually conserves (and for states that
// vanish toward the walls it coincides with the trapezoid rule).
double CoupledWavefunction::norm() const {
    const double s = kernels::active().nrm2sq(coeff.data(), coeff.size());
    return std::sqrt(s * grid.dx());
}

void CoupledWavefunction::normalize() {
    const double nrm = norm();
    if (nrm == 0.0) throw NumericalError("cannot normalize a zero state");
    kernels::active().scale_c(cplx(1.0 / nrm, 0.0), coeff.data(), coeff.size());
}

double CoupledWavefunction::mode_weight(int n) const {
    const auto& K = kernels::active();
    const double total = K.nrm2sq(coeff.data(), coeff.size());
    if (total == 0.0) return 0.0;
    const auto m = mode(n);
    return K.nrm2sq(m.data(), m.size()) / total;
}

SectorInfo classify_sector(const CoupledWavefunction& state) {
    const int modes = state.basis.modes();
    std::vector<double> w(static_cast<std::size_t>(modes));
    double total = 0.0;
    for (int n = 0; n < modes; ++n) {
        const auto m = state.mode(n);
        w[std::size_t(n)] = kernels::active().nrm2sq(m.data(), m.size());
        total += w[std::size_t(n)];
    }
    double navg = 0.0;
    for (int n = 0; n < modes; ++n) navg += double(n) * w[std::size_t(n)] / total;
    int sector = int(std::lround(navg));
    sector = std::clamp(sector, 0, modes - 1);
    const double weight = w[std::size_t(sector)] / total;
    return {sector, weight, weight < 0.5};
}

std::vector<double> position_density(const CoupledWavefunction& state) {
    const int npts = state.grid.n_points;
    std::vector<double> p(static_cast<std::size_t>(npts), 0.0);
    for (int n = 0; n < state.basis.modes(); ++n) {
        const auto m = state.mode(n);
        for (int i = 0; i < npts; ++i) p[std::size_t(i)] += std::norm(m[std::size_t(i)]);
    }
    return p;
}

SpectralResult solve_coupled(const CoupledOperator& op, const SolveOptions& opts) {
    if (opts.k < 1) throw NumericalError("solve_coupled: k must be >= 1");
    if (opts.k > op.dim()) throw NumericalError("solve_coupled: k exceeds operator dimension");
    const int N = op.dim();
    const int npts = op.grid().n_points;
    const int modes = op.basis().modes();

    // Full decomposition. The mode-phase rotation route works on a real
    // symmetric matrix (about 4x cheaper); zheevd on the Hermitian matrix is
    // kept as a cross-checkable alternative.
    std::vector<double> evals;
    linalg::DenseReal vr(0);
    linalg::DenseComplex vz(0);
    if (opts.use_hermitian_solver) {
        vz = op.matrix();
        evals = linalg::herm_eig_inplace(vz);
    } else {
        vr = op.real_rotation();
        evals = linalg::sym_eig_inplace(vr);
    }
    auto col = [&](int j) -> Col {
        Col c;
        if (opts.use_hermitian_solver)
            c.z = vz.a.data() + std::size_t(j) * N;
        else
            c.r = vr.a.data() + std::size_t(j) * N;
        return c;
    };

    // Classify every eigenvector by mean mode index (plain sums; the
    // trapezoid end corrections cancel in the ratio for box states).
    std::vector<int> sector(static_cast<std::size_t>(N));
    std::vector<double> weight(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        double tot = 0.0, navg = 0.0, wbest = 0.0;
        std::vector<double> w(static_cast<std::size_t>(modes));
        for (int n = 0; n < modes; ++n) {
            w[std::size_t(n)] = col_mode_weight_plain(col(j), n, npts);
            tot += w[std::size_t(n)];
        }
        for (int n = 0; n < modes; ++n) navg += double(n) * w[std::size_t(n)] / tot;
        int sec = std::clamp(int(std::lround(navg)), 0, modes - 1);
        wbest = w[std::size_t(sec)] / tot;
        sector[std::size_t(j)] = sec;
        weight[std::size_t(j)] = wbest;
    }

    // Group degenerate neighbours of the same sector and rotate each group
    // into coherence eigenstates: the top-coherence member keeps the smooth
    // (physical) content, the rest are lattice-parity partners.
    struct OutState {
        double energy;
        std::vector<cplx> vec; // rotated, still in solver basis (pre mode phase)
        int sector;
        bool spurious;
        bool paired;
        double split;
    };
    std::vector<OutState> out;
    out.reserve(static_cast<std::size_t>(N));

    int j = 0;
    while (j < N) {
        int g = j + 1;
        while (g < N && sector[std::size_t(g)] == sector[std::size_t(j)] &&
               std::abs(evals[std::size_t(g)] - evals[std::size_t(j)]) <=
                   opts.pair_tol * std::max(1.0, std::abs(evals[std::size_t(j)])))
            ++g;
        const int m = g - j;
        if (m == 1) {
            OutState s;
            s.energy = evals[std::size_t(j)];
            s.sector = sector[std::size_t(j)];
            s.spurious = false;
            s.paired = false;
            s.split = 0.0;
            s.vec.resize(static_cast<std::size_t>(N));
            const Col c = col(j);
            for (int r = 0; r < N; ++r)
                s.vec[std::size_t(r)] = c.r ? cplx(c.r[r], 0.0) : c.z[r];
            out.push_back(std::move(s));
        } else {
            std::vector<double> G(static_cast<std::size_t>(m) * m, 0.0);
            for (int a = 0; a < m; ++a)
                for (int b = a; b < m; ++b) {
                    const double v = coherence(col(j + a), col(j + b), modes, npts);
                    G[std::size_t(a) * m + b] = v;
                    G[std::size_t(b) * m + a] = v;
                }
            std::vector<double> gev, gvec;
            small_sym_eig(G, m, gev, gvec);
            // indices of coherence eigenvalues ascending; top one is smooth
            std::vector<int> order(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) order[std::size_t(i)] = i;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return gev[std::size_t(a)] < gev[std::size_t(b)]; });
            double emean = 0.0, emin = evals[std::size_t(j)], emax = evals[std::size_t(j)];
            for (int a = 0; a < m; ++a) {
                emean += evals[std::size_t(j + a)] / double(m);
                emin = std::min(emin, evals[std::size_t(j + a)]);
                emax = std::max(emax, evals[std::size_t(j + a)]);
            }
            for (int rank = 0; rank < m; ++rank) {
                const int which = order[std::size_t(m - 1 - rank)];
                OutState s;
                s.energy = emean;
                s.sector = sector[std::size_t(j)];
                s.spurious = rank > 0;
                s.paired = true;
                s.split = emax - emin;
                s.vec.assign(static_cast<std::size_t>(N), cplx{0.0, 0.0});
                for (int a = 0; a < m; ++a) {
                    const double coefc = gvec[std::size_t(a) * m + which];
                    const Col c = col(j + a);
                    if (c.r) {
                        for (int r = 0; r < N; ++r) s.vec[std::size_t(r)] += coefc * c.r[r];
                    } else {
                        for (int r = 0; r < N; ++r) s.vec[std::size_t(r)] += coefc * c.z[r];
                    }
                }
                out.push_back(std::move(s));
            }
        }
        j = g;
    }

    std::stable_sort(out.begin(), out.end(), [](const OutState& a, const OutState& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.spurious < b.spurious;
    });

    // Filter, materialize the requested states, undo the mode-phase rotation.
    SpectralResult result;
    result.op_norm_inf = op.norm_inf();
    const auto& K = kernels::active();
    std::vector<cplx> av(static_cast<std::size_t>(N));
    for (auto& s : out) {
        if (int(result.entries.size()) >= opts.k) break;
        if (opts.sector && s.sector != *opts.sector) continue;
        if (!opts.include_spurious && s.spurious) continue;

        CoupledWavefunction psi{op.grid(), op.basis(), std::move(s.vec)};
        if (!opts.use_hermitian_solver) {
            // eigenvectors of the rotated matrix map back with (-i)^n per mode
            static const cplx phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
            for (int n = 0; n < modes; ++n) {
                auto row = psi.mode(n);
                K.scale_c(phase[n % 4], row.data(), row.size());
            }
        }
        psi.normalize();
        // Deterministic global phase: largest-magnitude coefficient real > 0.
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t t = 0; t < psi.coeff.size(); ++t) {
            const double a2 = std::norm(psi.coeff[t]);
            if (a2 > best) {
                best = a2;
                imax = t;
            }
        }
        const cplx ph = psi.coeff[imax] / std::abs(psi.coeff[imax]);
        K.scale_c(std::conj(ph), psi.coeff.data(), psi.coeff.size());

        op.apply(psi.coeff, av);
        K.axpy_c(cplx(-s.energy, 0.0), psi.coeff.data(), av.data(), av.size());
        const double resid =
            std::sqrt(K.nrm2sq(av.data(), av.size()) / K.nrm2sq(psi.coeff.data(), psi.coeff.size()));

        SpectralEntry e;
        e.energy = s.energy;
        e.sector = s.sector;
        e.sector_weight = psi.mode_weight(s.sector);
        e.mixed = e.sector_weight < 0.5;
        e.spurious = s.spurious;
        e.paired = s.paired;
        e.pair_split = s.split;
        e.residual = resid;
        result.entries.push_back(e);
        result.states.push_back(std::move(psi));
    }
    return result;
}

SpectralResult solve_coupled(const CoupledOperator& op, int k) {
    SolveOptions opts;
    opts.k = k;
    return solve_coupled(op, opts);
}

SchrodingerSpectrum solve_schrodinger(const SchrodingerOperator& op, int k) {
    if (k < 1 || k > op.dim())
        throw NumericalError("solve_schrodinger: k out of range");
    linalg::DenseReal m = op.matrix;
    std::vector<double> w = linalg::sym_eig_inplace(m);
    SchrodingerSpectrum out;
    out.energies.assign(w.begin(), w.begin() + k);
    out.states.resize(static_cast<std::size_t>(k));
    const int n = op.dim();
    for (int j = 0; j < k; ++j) {
        std::vector<double> v(m.a.begin() + std::size_t(j) * n,
                              m.a.begin() + std::size_t(j + 1) * n);
        const double nrm = grid_norm(v, op.grid);
        double sign = 1.0;
        double best = 0.0;
        for (double x : v)
            if (std::abs(x) > std::abs(best)) best = x;
        if (best < 0.0) sign = -1.0;
        for (double& x : v) x *= sign / nrm;
        out.states[std::size_t(j)] = std::move(v);
    }
    return out;
}

} // namespace ouqm
