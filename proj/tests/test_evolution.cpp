#include "doctest.h"

#include <cmath>
#include <random>

#include "ouqm/evolution.hpp"
#include "ouqm/exact.hpp"

using namespace ouqm;

namespace {

const PhysicalParams p05{1.0, 1.0, 0.05};
const Potential harmonic({0.0, 0.0, 0.5});
const XGrid grid{-10.0, 10.0, 201};
const HermiteBasis basis{4};

const CoupledOperator& op() {
    static const CoupledOperator o = assemble_coupled(p05, harmonic, grid, basis);
    return o;
}

CoupledWavefunction ground_state(double* energy = nullptr) {
    SolveOptions opts;
    opts.k = 1;
    opts.sector = 0;
    const auto res = solve_coupled(op(), opts);
    if (energy) *energy = res.entries[0].energy;
    return res.states[0];
}

CoupledWavefunction random_state(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoupledWavefunction psi{grid, basis,
                            std::vector<cplx>(static_cast<std::size_t>(op().dim()), cplx{0, 0})};
    for (auto& c : psi.coeff) c = {u(rng), u(rng)};
    psi.normalize();
    return psi;
}

} // namespace

TEST_CASE("stationary state acquires only a phase") {
    double E = 0.0;
    const auto psi0 = ground_state(&E);
    EvolutionConfig cfg{1e-3, 100, 100};
    const auto traj = evolve(op(), psi0, cfg);

    cplx overlap{0.0, 0.0};
    const auto& psiT = traj.final_state.coeff;
    for (std::size_t i = 0; i < psiT.size(); ++i)
        overlap += std::conj(psi0.coeff[i]) * psiT[i];
    // plain-sum overlap of grid-normalized states carries a 1/dx factor
    const double fidelity = std::abs(overlap) * grid.dx();
    CHECK(fidelity > 1.0 - 1e-8);

    // accumulated phase tracks -E t (the propagator is O(dt^2) accurate,
    // with an |E dt|^3/12 per-step defect)
    const double phase = std::arg(overlap);
    const double expect = -E * 0.1;
    const double wrapped = std::remainder(phase - expect, 2.0 * M_PI);
    CHECK(std::abs(wrapped) < 5e-5);

    // and against the closed-form energy, which carries the discretization
    // offset of the eigenvalue itself
    const double e_pu = pais_uhlenbeck_energy({0, 0, 1.0, p05});
    const double wrapped_pu = std::remainder(phase + e_pu * 0.1, 2.0 * M_PI);
    CHECK(std::abs(wrapped_pu) < 5e-3);
}

TEST_CASE("norm is conserved to solver precision for a random state") {
    const auto psi0 = random_state(1234);
    EvolutionConfig cfg{1e-3, 200, 20};
    const auto traj = evolve(op(), psi0, cfg);
    CHECK(traj.max_norm_drift < 1e-10);
    for (const auto& s : traj.samples) CHECK(std::abs(s.norm - 1.0) < 1e-10);
}

TEST_CASE("energy expectation is constant along the trajectory") {
    const auto psi0 = random_state(77);
    EvolutionConfig cfg{1e-3, 100, 10};
    const auto traj = evolve(op(), psi0, cfg);
    const double e0 = traj.samples.front().energy;
    for (const auto& s : traj.samples) CHECK(std::abs(s.energy - e0) < 1e-8 * std::abs(e0));
}

TEST_CASE("stepping forward then backward returns the initial state") {
    const auto psi0 = random_state(4096);
    EvolutionConfig fwd{1e-3, 50, 50};
    const auto mid = evolve(op(), psi0, fwd);
    EvolutionConfig bwd{-1e-3, 50, 50};
    const auto back = evolve(op(), mid.final_state, bwd);
    double diff2 = 0.0;
    for (std::size_t i = 0; i < psi0.coeff.size(); ++i)
        diff2 += std::norm(back.final_state.coeff[i] - psi0.coeff[i]);
    CHECK(std::sqrt(diff2 * grid.dx()) < 1e-8);
}

TEST_CASE("sector-0 projection") {
    CoupledWavefunction psi{grid, basis,
                            std::vector<cplx>(static_cast<std::size_t>(op().dim()), cplx{0, 0})};
    auto m0 = psi.mode(0);
    for (int i = 0; i < grid.n_points; ++i)
        m0[std::size_t(i)] = std::exp(-0.2 * grid.x(i) * grid.x(i));
    psi.normalize();
    auto [field, w] = project_sector0(psi);
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(field.size() == std::size_t(grid.n_points));

    // equal split between modes 0 and 1
    auto m1 = psi.mode(1);
    for (int i = 0; i < grid.n_points; ++i) m1[std::size_t(i)] = m0[std::size_t(i)];
    psi.normalize();
    CHECK(project_sector0(psi).second == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("small tau_c ground state keeps its sector-0 weight while evolving") {
    PhysicalParams p{1.0, 1.0, 0.02};
    const auto o = assemble_coupled(p, harmonic, grid, HermiteBasis{4});
    SolveOptions opts;
    opts.k = 1;
    opts.sector = 0;
    const auto res = solve_coupled(o, opts);
    EvolutionConfig cfg{1e-3, 100, 10};
    const auto traj = evolve(o, res.states[0], cfg);
    for (const auto& s : traj.samples) CHECK(s.sector0_weight > 0.99);
}

TEST_CASE("config validation") {
    const EvolutionConfig bad_dt{0.0, 10, 1};
    const EvolutionConfig bad_steps{1e-3, 0, 1};
    const EvolutionConfig bad_record{1e-3, 10, 0};
    CHECK_THROWS_AS(bad_dt.validate(), ConfigError);
    CHECK_THROWS_AS(bad_steps.validate(), ConfigError);
    CHECK_THROWS_AS(bad_record.validate(), ConfigError);
    const auto psi0 = random_state(5);
    EvolutionConfig bad{0.0, 10, 1};
    CHECK_THROWS_AS(evolve(op(), psi0, bad), ConfigError);
}
