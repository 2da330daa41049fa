// Acceptance suite: one criterion per invocation (--criterion N), one
// [PASS]/[FAIL] line per criterion on stdout, nonzero exit on failure.
// Criteria 9 and 10 drive the command line tool (--cli PATH).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ouqm/config.hpp"
#include "ouqm/core.hpp"
#include "ouqm/evolution.hpp"
#include "ouqm/exact.hpp"
#include "ouqm/perturbation.hpp"
#include "ouqm/spectral.hpp"
#include "ouqm/uncertainty.hpp"

using namespace ouqm;
namespace fs = std::filesystem;

namespace {

std::string g_cli;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", prec, v);
    return buf;
}

// Lowest physical sector-0 levels of the harmonic coupled operator.
std::vector<double> harmonic_sector_levels(double tau_c, int n_points, int sector, int count) {
    PhysicalParams p{1.0, 1.0, tau_c};
    Potential pot({0.0, 0.0, 0.5});
    XGrid g{-10.0, 10.0, n_points};
    const auto op = assemble_coupled(p, pot, g, HermiteBasis{8});
    SolveOptions opts;
    opts.k = count;
    opts.sector = sector;
    const auto res = solve_coupled(op, opts);
    std::vector<double> e;
    for (const auto& en : res.entries) e.push_back(en.energy);
    return e;
}

// --- C1: direct sector-0 levels against the closed-form spectrum ---------
// Closed form: E(0,l) = -(1/tau)sqrt(1 - tau^2)/2 + (l + 1/2). The refinement
// study doubles the grid and checks the error drops ~4x; the refined limit
// must sit within 1e-4. A companion check against the operator's exact
// normal-mode frequencies Omega_pm separates formula defect from solver
// error.
Outcome criterion1() {
    const double t_start = now_seconds();
    const double tau = 0.05;
    const auto e201 = harmonic_sector_levels(tau, 201, 0, 4);
    const auto e401 = harmonic_sector_levels(tau, 401, 0, 4);
    if (e201.size() < 4 || e401.size() < 4)
        return {false, "criterion 1: fewer than 4 sector-0 levels found"};

    const double r = std::sqrt(1.0 - 4.0 * tau * tau);
    const double omega_fast = std::sqrt((1.0 + r) / 2.0) / tau;
    const double omega_slow = std::sqrt((1.0 - r) / 2.0) / tau;

    bool pass = true;
    bool companion = true;
    std::string detail;
    for (int l = 0; l < 4; ++l) {
        const double closed = pais_uhlenbeck_energy({0, l, 1.0, PhysicalParams{1, 1, tau}});
        const double ec = e201[std::size_t(l)] - closed;
        const double ef = e401[std::size_t(l)] - closed;
        const double ratio = ec / ef;
        const double ext = (4.0 * e401[std::size_t(l)] - e201[std::size_t(l)]) / 3.0 - closed;
        const bool ok = std::abs(ext) <= 1e-4 && ratio >= 2.5 && ratio <= 6.0;
        pass = pass && ok;
        detail += " l=" + std::to_string(l) + ": ext_err=" + fmt(ext) + " ratio=" +
                  fmt(ratio, 2) + ";";

        const double modes = -0.5 * omega_fast + omega_slow * (l + 0.5);
        const double mc = e201[std::size_t(l)] - modes;
        const double mf = e401[std::size_t(l)] - modes;
        const double mext = (4.0 * e401[std::size_t(l)] - e201[std::size_t(l)]) / 3.0 - modes;
        companion = companion && std::abs(mext) <= 1e-4 && (mc / mf) >= 2.5 && (mc / mf) <= 6.0;
    }
    const double dt = now_seconds() - t_start;
    pass = pass && dt < 30.0;
    detail += " runtime=" + fmt(dt, 1) + "s";
    detail += companion ? " [note: same solves meet 1e-4 + 4x-ratio against the exact "
                          "normal-mode spectrum; the closed form carries an O(tau^2) "
                          "slow-frequency defect]"
                        : " [note: normal-mode companion check also failed]";
    return {pass, "closed-form match within 1e-4 after refinement:" + detail};
}

// --- C2: sector universality ---------------------------------------------
Outcome criterion2() {
    const double tau = 0.05;
    const double spacing_expect = 1.0;
    bool spacings_ok = true;
    bool offsets_ok = true;
    std::string detail;
    for (int sec = 0; sec < 3; ++sec) {
        const auto e = harmonic_sector_levels(tau, 201, sec, 4);
        if (e.size() < 4) return {false, "criterion 2: missing levels in sector"};
        double worst = 0.0;
        for (int l = 0; l + 1 < 4; ++l)
            worst = std::max(worst,
                             std::abs(e[std::size_t(l + 1)] - e[std::size_t(l)] - spacing_expect));
        spacings_ok = spacings_ok && worst <= 5e-4;

        const double offset_ref = -(1.0 / tau) * std::sqrt(1.0 - tau * tau) * (sec + 0.5);
        const double offset_meas = e[0] - 0.5;
        const double rel = std::abs(offset_meas - offset_ref) / std::abs(offset_ref);
        offsets_ok = offsets_ok && rel <= 1e-3;
        detail += " n=" + std::to_string(sec) + ": spacing_err=" + fmt(worst) +
                  " offset_rel=" + fmt(rel) + ";";
    }
    return {spacings_ok && offsets_ok,
            "spacings hbar*omega within 5e-4 and offsets within 1e-3 rel:" + detail};
}

// --- C3: harmonic first correction ----------------------------------------
Outcome criterion3() {
    PhysicalParams p{1.0, 1.0, 0.05};
    Potential pot({0.0, 0.0, 0.5});
    XGrid g{-10.0, 10.0, 801};
    bool pass = true;
    std::string detail;
    for (int level = 0; level < 4; ++level) {
        const auto res = energy_correction(p, pot, g, level);
        const double err = res.E2 - 0.25;
        pass = pass && std::abs(err) <= 5e-3;
        detail += " l=" + std::to_string(level) + ": E2=" + fmt(res.E2, 6) + ";";
    }
    return {pass, "E2 = 0.25 within 5e-3 for l = 0..3:" + detail};
}

// --- C4: free-particle exactness ------------------------------------------
Outcome criterion4() {
    PhysicalParams p{1.0, 1.0, 0.05};
    Potential zero({0.0});
    XGrid g{-10.0, 10.0, 201};
    const auto pert = energy_correction(p, zero, g, 0);
    const bool e2_exact = (pert.E2 == 0.0);

    std::vector<std::vector<double>> levels;
    for (double tau : {0.01, 0.05}) {
        PhysicalParams pt{1.0, 1.0, tau};
        const auto op = assemble_coupled(pt, zero, g, HermiteBasis{8});
        SolveOptions opts;
        opts.k = 6;
        opts.sector = 0;
        const auto res = solve_coupled(op, opts);
        std::vector<double> e;
        for (const auto& en : res.entries) e.push_back(en.energy + 0.5 / tau);
        levels.push_back(e);
    }
    double worst = 0.0;
    const std::size_t m = std::min(levels[0].size(), levels[1].size());
    for (std::size_t i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(levels[0][i] - levels[1][i]));
    const bool indep = (m >= 4) && worst <= 1e-6;
    return {e2_exact && indep, "E2 == 0 exactly (" + std::string(e2_exact ? "yes" : "no") +
                                   ") and box levels tau-independent, max diff " + fmt(worst)};
}

// --- C5: expansion vs direct solve for the anharmonic well -----------------
Outcome criterion5() {
    const double t_start = now_seconds();
    Potential quartic({0.0, 0.0, 0.5, 0.0, 0.1});
    XGrid g{-10.0, 10.0, 201};

    // Stencil-matched expansion references: the coupled operator's slow
    // sector carries the composed first-difference Laplacian, so the
    // comparison uses the same kinetic stencil on the expansion side.
    PerturbationOptions popts;
    popts.wide_stencil = true;
    const auto pert =
        energy_correction(PhysicalParams{1.0, 1.0, 0.05}, quartic, g, 0, popts);

    double gval[3];
    const double taus[3] = {0.04, 0.02, 0.01};
    for (int t = 0; t < 3; ++t) {
        PhysicalParams p{1.0, 1.0, taus[t]};
        const auto op = assemble_coupled(p, quartic, g, HermiteBasis{8});
        SolveOptions opts;
        opts.k = 1;
        opts.sector = 0;
        const auto res = solve_coupled(op, opts);
        if (res.entries.empty()) return {false, "criterion 5: missing ground state"};
        gval[t] = res.entries[0].energy + 0.5 / taus[t];
    }
    const double s1 = (gval[1] - gval[0]) / (taus[1] - taus[0]);
    const double s2 = (gval[2] - gval[1]) / (taus[2] - taus[1]);
    const double slope = 2.0 * s2 - s1;
    const double rel = std::abs(slope - pert.E2) / std::abs(pert.E2);

    const double r02 = std::abs(gval[1] - pert.E1 - taus[1] * pert.E2);
    const double r01 = std::abs(gval[2] - pert.E1 - taus[2] * pert.E2);
    const double drop = r02 / r01;

    const double dt = now_seconds() - t_start;
    const bool pass = rel <= 1e-2 && drop >= 3.0 && drop <= 5.5 && dt < 120.0;
    return {pass, "slope " + fmt(slope, 6) + " vs E2 " + fmt(pert.E2, 6) + " (rel " +
                      fmt(rel) + "), residual drop " + fmt(drop, 2) + "x, runtime " +
                      fmt(dt, 1) + "s"};
}

// --- C6: mode-hierarchy residual scales linearly in tau_c ------------------
Outcome criterion6() {
    Potential pot({0.0, 0.0, 0.5});
    XGrid g{-10.0, 10.0, 201};
    double resid[2];
    const double taus[2] = {0.02, 0.01};
    for (int t = 0; t < 2; ++t) {
        PhysicalParams p{1.0, 1.0, taus[t]};
        const auto op = assemble_coupled(p, pot, g, HermiteBasis{8});
        SolveOptions opts;
        opts.k = 1;
        opts.sector = 0;
        const auto res = solve_coupled(op, opts);
        const auto& psi = res.states[0];
        const auto xi0 = psi.mode(0);
        const auto xi1 = psi.mode(1);
        const auto dxi0 = centered_diff(xi0, g.dx());
        double num = 0.0, den = 0.0;
        const cplx coef = cplx(0.0, 1.0) * std::sqrt(taus[t] / 2.0);
        for (std::size_t i = 0; i < dxi0.size(); ++i) {
            num += std::norm(xi1[i] - coef * dxi0[i]);
            den += std::norm(xi1[i]);
        }
        resid[t] = std::sqrt(num / den);
    }
    const double ratio = resid[0] / resid[1];
    const bool pass = ratio >= 1.7 && ratio <= 2.4;
    return {pass, "residual(0.02)=" + fmt(resid[0]) + " residual(0.01)=" + fmt(resid[1]) +
                      " ratio=" + fmt(ratio, 2) + " (expect ~2)"};
}

// --- C7: unitarity of the propagation --------------------------------------
Outcome criterion7() {
    PhysicalParams p{1.0, 1.0, 0.05};
    Potential pot({0.0, 0.0, 0.5});
    XGrid g{-10.0, 10.0, 201};
    const auto op = assemble_coupled(p, pot, g, HermiteBasis{8});

    // random normalized state
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoupledWavefunction psi{g, HermiteBasis{8},
                            std::vector<cplx>(static_cast<std::size_t>(op.dim()))};
    for (auto& c : psi.coeff) c = {u(rng), u(rng)};
    psi.normalize();
    EvolutionConfig cfg{1e-3, 200, 20};
    const auto traj = evolve(op, psi, cfg);

    SolveOptions sopts;
    sopts.k = 1;
    sopts.sector = 0;
    const auto ground = solve_coupled(op, sopts).states[0];
    const auto traj2 = evolve(op, ground, cfg);
    cplx overlap{0, 0};
    for (std::size_t i = 0; i < ground.coeff.size(); ++i)
        overlap += std::conj(ground.coeff[i]) * traj2.final_state.coeff[i];
    const double fidelity = std::abs(overlap) * g.dx();

    const bool pass = traj.max_norm_drift < 1e-10 && fidelity > 1.0 - 1e-8;
    return {pass, "max norm drift " + fmt(traj.max_norm_drift) + ", stationary fidelity 1-" +
                      fmt(1.0 - fidelity)};
}

// --- C8: commutator factor curve -------------------------------------------
Outcome criterion8() {
    const double t_start = now_seconds();
    const auto curve = uncertainty_curve(1e-3, 1e3, 121);
    bool pass = true;
    for (std::size_t i = 0; i < curve.u.size(); ++i) {
        const double u = curve.u[i], f = curve.f[i];
        if (u <= 1e-3) pass = pass && (f / u >= 0.99 && f / u <= 1.0);
        if (u >= 6.0) pass = pass && (u * u * (1.0 - f) >= 0.98 && u * u * (1.0 - f) <= 1.0);
        if (i > 0) pass = pass && (f > curve.f[i - 1]);
    }
    // branch consistency at the series/closed switch
    double branch_gap = 0.0;
    for (double u = commutator_u_switch / 2; u <= 2 * commutator_u_switch; u *= 1.04) {
        const double gexp = -std::expm1(-u) / u;
        const double closed = 1.0 - gexp * gexp;
        const double series =
            u * (1.0 + u * (-7.0 / 12.0 + u * (0.25 + u * (-31.0 / 360.0))));
        branch_gap = std::max(branch_gap, std::abs(closed - series));
    }
    pass = pass && branch_gap <= 1e-13;
    const double dt = now_seconds() - t_start;
    pass = pass && dt < 1.0;
    return {pass, "onset linear, tail ~ u^-2, monotone; branch gap " + fmt(branch_gap) +
                      ", runtime " + fmt(dt, 1) + "s"};
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- C9: regime guard through the CLI ---------------------------------------
Outcome criterion9() {
    if (g_cli.empty()) return {false, "criterion 9 needs --cli"};
    const fs::path work = fs::temp_directory_path() / "ouqm_acceptance_c9";
    fs::remove_all(work);
    fs::create_directories(work);
    {
        std::ofstream cfg(work / "cfg.json");
        cfg << R"({"physical": {"tau_c": 0.5}, "pu_spectrum": {"omega": 2.0}})";
    }
    const int rc = run_cli("pu-spectrum --config " + (work / "cfg.json").string() + " --out " +
                           (work / "out").string());
    return {rc == 4, "omega*tau_c >= 1 exits with code 4 (got " + std::to_string(rc) + ")"};
}

// --- C10: determinism --------------------------------------------------------
Outcome criterion10() {
    if (g_cli.empty()) return {false, "criterion 10 needs --cli"};
    const fs::path work = fs::temp_directory_path() / "ouqm_acceptance_c10";
    fs::remove_all(work);
    fs::create_directories(work);
    {
        std::ofstream cfg(work / "cfg.json");
        cfg << R"({"grid": {"x_min": -8, "x_max": 8, "n_points": 101},
                   "basis": {"n_max": 4}, "solve": {"k": 6, "sector": 0}})";
    }
    bool pass = true;
    std::string detail;
    for (const std::string cmd : {"solve", "uncertainty-curve"}) {
        const int r1 = run_cli(cmd + " --config " + (work / "cfg.json").string() + " --out " +
                               (work / (cmd + "_1")).string());
        const int r2 = run_cli(cmd + " --config " + (work / "cfg.json").string() + " --out " +
                               (work / (cmd + "_2")).string());
        pass = pass && r1 == 0 && r2 == 0;
        for (const auto& entry : fs::directory_iterator(work / (cmd + "_1"))) {
            const auto name = entry.path().filename();
            const bool same = slurp(entry.path()) == slurp(work / (cmd + "_2") / name);
            pass = pass && same;
            if (!same) detail += " mismatch:" + name.string();
        }
    }
    // resolved-config fixed point
    const int r3 = run_cli("solve --config " + (work / "solve_1" / "resolved_config.json").string() +
                           " --out " + (work / "solve_3").string());
    pass = pass && r3 == 0 &&
           slurp(work / "solve_1" / "resolved_config.json") ==
               slurp(work / "solve_3" / "resolved_config.json") &&
           slurp(work / "solve_1" / "spectrum.csv") == slurp(work / "solve_3" / "spectrum.csv");
    return {pass, "byte-identical reruns and resolved-config fixed point" + detail};
}

} // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    for (int i = 1; i + 1 < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion") criterion = std::atoi(argv[i + 1]);
        if (a == "--cli") g_cli = argv[i + 1];
    }
    if (criterion < 1 || criterion > 10) {
        std::cerr << "usage: ouqm_acceptance --criterion <1..10> [--cli <path>]\n";
        return 2;
    }

    Outcome (*table[10])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                              criterion6, criterion7, criterion8, criterion9, criterion10};
    Outcome out;
    try {
        out = table[criterion - 1]();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " C" << criterion << ": " << out.detail
              << "\n";
    return out.pass ? 0 : 1;
}
