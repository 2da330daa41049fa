#include "ouqm/evolution.hpp"

#include <cmath>
#include <string>

#include "ouqm/core.hpp"
#include "ouqm/kernels.hpp"

namespace ouqm {

std::string evolution_cfl_note(const CoupledOperator& op, const EvolutionConfig& cfg) {
    const double q = std::abs(cfg.dt) * op.norm_inf() / op.params().hbar;
    if (q > 10.0)
        return "dt*||A||/hbar = " + std::to_string(q) +
               " is large; the Cayley map stays unitary but phases will be inaccurate";
    return {};
}

Trajectory evolve(const CoupledOperator& op, const CoupledWavefunction& psi0,
                  const EvolutionConfig& cfg, const EvolveOptions& opts) {
    cfg.validate();
    const int N = op.dim();
    if (int(psi0.coeff.size()) != N)
        throw NumericalError("evolve: initial state dimension mismatch");

    const double gamma = cfg.dt / (2.0 * op.params().hbar);
    linalg::DenseComplex mplus = op.matrix();
    for (auto& v : mplus.a) v *= cplx(0.0, gamma);
    for (int i = 0; i < N; ++i) mplus.at(i, i) += 1.0;
    const linalg::LuComplex lu(std::move(mplus));

    const auto& K = kernels::active();
    Trajectory out;
    out.final_state = psi0;
    std::vector<cplx>& psi = out.final_state.coeff;
    std::vector<cplx> work(static_cast<std::size_t>(N));

    auto record = [&](double t) {
        TrajectorySample s;
        s.t = t;
        s.norm = out.final_state.norm();
        op.apply(psi, work);
        const cplx e = K.dotc(psi.data(), work.data(), static_cast<std::size_t>(N));
        const double n2 = K.nrm2sq(psi.data(), static_cast<std::size_t>(N));
        s.energy = e.real() / n2;
        s.sector0_weight = out.final_state.mode_weight(0);
        out.samples.push_back(s);
        if (opts.keep_snapshots) out.snapshots.push_back(out.final_state);
    };

    record(0.0);
    for (int step = 1; step <= cfg.n_steps; ++step) {
        // rhs = psi - i gamma A psi
        op.apply(psi, work);
        std::vector<cplx> rhs = psi;
        K.axpy_c(cplx(0.0, -gamma), work.data(), rhs.data(), static_cast<std::size_t>(N));
        lu.solve_inplace(rhs);
        psi = std::move(rhs);

        const double nrm = out.final_state.norm();
        const double drift = std::abs(nrm - 1.0);
        out.max_norm_drift = std::max(out.max_norm_drift, drift);
        if (drift > opts.norm_drift_limit)
            throw NumericalError("evolve: norm drift " + std::to_string(drift) +
                                 " exceeds limit; operator assembly suspect");
        if (step % cfg.record_every == 0 || step == cfg.n_steps)
            record(double(step) * cfg.dt);
    }
    return out;
}

std::pair<std::vector<cplx>, double> project_sector0(const CoupledWavefunction& psi) {
    const auto m0 = psi.mode(0);
    std::vector<cplx> field(m0.begin(), m0.end());
    return {std::move(field), psi.mode_weight(0)};
}

} // namespace ouqm
