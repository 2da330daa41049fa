#pragma once

// Unitary propagation of the coupled time-dependent equation by the Cayley
// (Crank-Nicolson) map
//   (I + i dt A / 2 hbar) psi_{k+1} = (I - i dt A / 2 hbar) psi_k,
// which preserves the norm unconditionally. One LU factorization is reused
// across steps.

#include <vector>

#include "ouqm/operators.hpp"
#include "ouqm/spectral.hpp"

namespace ouqm {

struct EvolutionConfig {
    double dt = 1e-3;
    int n_steps = 200;
    int record_every = 1;

    void validate() const {
        if (!(dt != 0.0) || !std::isfinite(dt)) throw ConfigError("evolve.dt must be nonzero");
        if (n_steps < 1) throw ConfigError("evolve.n_steps must be >= 1");
        if (record_every < 1) throw ConfigError("evolve.record_every must be >= 1");
    }
};

struct TrajectorySample {
    double t = 0.0;
    double norm = 0.0;
    double energy = 0.0;        // Re <psi|A|psi>
    double sector0_weight = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<CoupledWavefunction> snapshots; // filled only when requested
    CoupledWavefunction final_state;
    double max_norm_drift = 0.0; // max per-step |norm - 1|
};

struct EvolveOptions {
    bool keep_snapshots = false;
    double norm_drift_limit = 1e-8; // per-step guard; exceeding it means mis-assembly
};

// Emits a warning string (returned) when dt*||A||/hbar > 10; empty otherwise.
std::string evolution_cfl_note(const CoupledOperator& op, const EvolutionConfig& cfg);

Trajectory evolve(const CoupledOperator& op, const CoupledWavefunction& psi0,
                  const EvolutionConfig& cfg, const EvolveOptions& opts = {});

// xi_0 field of a state together with its share of the squared norm.
std::pair<std::vector<cplx>, double> project_sector0(const CoupledWavefunction& psi);

} // namespace ouqm
