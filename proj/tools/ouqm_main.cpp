// ouqm — batch solver suite for quantum mechanics with a finite noise
// correlation time. Subcommands map one-to-one onto the library modules;
// every command reads one JSON config, writes deterministic CSV/JSON into
// the output directory, and echoes the fully resolved config for
// reproducibility.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ouqm/config.hpp"
#include "ouqm/core.hpp"
#include "ouqm/evolution.hpp"
#include "ouqm/exact.hpp"
#include "ouqm/io.hpp"
#include "ouqm/perturbation.hpp"
#include "ouqm/spectral.hpp"
#include "ouqm/uncertainty.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ouqm;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
};

RunConfig load_config(const Cli& cli, json* resolved_out) {
    std::ifstream in(cli.config_path);
    if (!in) throw ConfigError("cannot open config file: " + cli.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    doc = apply_overrides(std::move(doc), cli.overrides);
    RunConfig cfg = parse_config_document(doc);
    if (resolved_out) *resolved_out = resolved_json(cfg);
    return cfg;
}

void write_resolved(const fs::path& dir, const json& resolved) {
    io::write_text(dir / "resolved_config.json", resolved.dump(2) + "\n");
}

void write_summary(const fs::path& dir, const json& summary) {
    io::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void write_spectrum_csv(const fs::path& path, const SpectralResult& res) {
    io::CsvWriter csv({"index", "energy", "sector", "sector_weight"});
    for (std::size_t i = 0; i < res.entries.size(); ++i) {
        const auto& e = res.entries[i];
        csv.row({io::fmt(int(i)), io::fmt(e.energy), io::fmt(e.sector),
                 io::fmt(e.sector_weight)});
    }
    csv.write(path);
}

void write_density_csv(const fs::path& path, const XGrid& grid,
                       const std::vector<double>& density) {
    io::CsvWriter csv({"x", "P"});
    for (int i = 0; i < grid.n_points; ++i)
        csv.row({io::fmt(grid.x(i)), io::fmt(density[std::size_t(i)])});
    csv.write(path);
}

int cmd_solve(const Cli& cli) {
    json resolved;
    const RunConfig cfg = load_config(cli, &resolved);
    fs::create_directories(cli.out_dir);
    write_resolved(cli.out_dir, resolved);

    const CoupledOperator op =
        assemble_coupled(cfg.physical, cfg.potential(), cfg.grid, cfg.basis);
    if (cfg.basis.n_max == 0)
        std::cerr << "warning: n_max = 0 leaves no x-q coupling; the spectrum is the bare "
                     "potential shifted by the mode offset\n";

    SolveOptions opts;
    opts.k = cfg.solve.k;
    if (cfg.solve.sector >= 0) opts.sector = cfg.solve.sector;
    opts.include_spurious = cfg.solve.include_spurious;
    opts.pair_tol = cfg.solve.pair_tol;
    const SpectralResult res = solve_coupled(op, opts);

    write_spectrum_csv(fs::path(cli.out_dir) / "spectrum.csv", res);
    if (cfg.solve.density && !res.states.empty())
        write_density_csv(fs::path(cli.out_dir) / "density.csv", cfg.grid,
                          position_density(res.states.front()));
    if (cfg.solve.dump_operator)
        io::write_text(fs::path(cli.out_dir) / "operator.txt", op.dump_triplets());

    json summary;
    summary["command"] = "solve";
    summary["dimension"] = op.dim();
    summary["states_returned"] = res.entries.size();
    summary["operator_norm_inf"] = op.norm_inf();
    double max_resid = 0.0, max_split = 0.0;
    int n_mixed = 0;
    for (const auto& e : res.entries) {
        max_resid = std::max(max_resid, e.residual);
        max_split = std::max(max_split, e.pair_split);
        n_mixed += e.mixed ? 1 : 0;
    }
    summary["max_residual"] = max_resid;
    summary["max_pair_split"] = max_split;
    summary["mixed_states"] = n_mixed;
    if (auto omega = cfg.potential().harmonic_omega(cfg.physical.mass)) {
        const double wt = *omega * cfg.physical.tau_c;
        summary["omega_tau_c"] = wt;
        if (wt >= 0.8)
            summary["regime_warning"] =
                "omega*tau_c >= 0.8: near the ill-defined boundary, results are fragile";
    }
    write_summary(cli.out_dir, summary);
    return exit_ok;
}

int cmd_perturb(const Cli& cli) {
    json resolved;
    const RunConfig cfg = load_config(cli, &resolved);
    fs::create_directories(cli.out_dir);
    write_resolved(cli.out_dir, resolved);

    const Potential pot = cfg.potential();
    const PerturbationResult res =
        energy_correction(cfg.physical, pot, cfg.grid, cfg.perturb.level);

    json out;
    out["E0"] = res.E0;
    out["E1"] = res.E1;
    out["E2"] = res.E2;
    json diag;
    diag["orthogonality_pre_projection"] = res.diagnostics.ortho_pre;
    diag["orthogonality_post_projection"] = res.diagnostics.ortho_post;
    diag["deflated_solve_rcond"] = res.diagnostics.rcond;
    diag["e2_stencil_form"] = res.diagnostics.e2_stencil_form;
    diag["e2_integrated_form"] = res.diagnostics.e2_integrated_form;
    if (res.diagnostics.e2_half_mass_resolvent)
        diag["e2_half_mass_resolvent"] = *res.diagnostics.e2_half_mass_resolvent;
    out["diagnostics"] = diag;
    io::write_text(fs::path(cli.out_dir) / "perturbation.json", out.dump(2) + "\n");

    io::CsvWriter csv({"x", "phi00", "phi01"});
    for (int i = 0; i < cfg.grid.n_points; ++i)
        csv.row({io::fmt(cfg.grid.x(i)), io::fmt(res.phi00[std::size_t(i)]),
                 io::fmt(res.phi01[std::size_t(i)])});
    csv.write(fs::path(cli.out_dir) / "perturbation_fields.csv");

    json summary;
    summary["command"] = "perturb";
    summary["level"] = cfg.perturb.level;
    summary["E2"] = res.E2;
    write_summary(cli.out_dir, summary);
    return exit_ok;
}

int cmd_evolve(const Cli& cli) {
    json resolved;
    const RunConfig cfg = load_config(cli, &resolved);
    fs::create_directories(cli.out_dir);
    write_resolved(cli.out_dir, resolved);

    const CoupledOperator op =
        assemble_coupled(cfg.physical, cfg.potential(), cfg.grid, cfg.basis);

    CoupledWavefunction psi0{cfg.grid, cfg.basis,
                             std::vector<cplx>(std::size_t(op.dim()), cplx{0.0, 0.0})};
    if (cfg.evolve.initial == "ground") {
        SolveOptions sopt;
        sopt.k = 1;
        sopt.sector = 0;
        const SpectralResult res = solve_coupled(op, sopt);
        if (res.states.empty()) throw NumericalError("no sector-0 state found for 'ground'");
        psi0 = res.states.front();
    } else {
        auto m0 = psi0.mode(0);
        for (int i = 0; i < cfg.grid.n_points; ++i) {
            const double z = (cfg.grid.x(i) - cfg.evolve.gaussian_x0) / cfg.evolve.gaussian_sigma;
            m0[std::size_t(i)] = std::exp(-0.5 * z * z);
        }
        psi0.normalize();
    }

    EvolutionConfig ecfg{cfg.evolve.dt, cfg.evolve.n_steps, cfg.evolve.record_every};
    const std::string note = evolution_cfl_note(op, ecfg);
    if (!note.empty()) std::cerr << "warning: " << note << "\n";

    EvolveOptions eopts;
    eopts.keep_snapshots = cfg.evolve.snapshots;
    const Trajectory traj = evolve(op, psi0, ecfg, eopts);

    io::CsvWriter csv({"t", "norm", "energy_expectation", "sector0_weight"});
    for (const auto& s : traj.samples)
        csv.row({io::fmt(s.t), io::fmt(s.norm), io::fmt(s.energy), io::fmt(s.sector0_weight)});
    csv.write(fs::path(cli.out_dir) / "trajectory.csv");

    if (cfg.evolve.snapshots) {
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
            std::string text;
            char line[160];
            const auto& st = traj.snapshots[k];
            for (int n = 0; n < cfg.basis.modes(); ++n) {
                const auto row = st.mode(n);
                for (int i = 0; i < cfg.grid.n_points; ++i) {
                    std::snprintf(line, sizeof line, "%d %d %.17g %.17g\n", n, i,
                                  row[std::size_t(i)].real(), row[std::size_t(i)].imag());
                    text += line;
                }
            }
            io::write_text(fs::path(cli.out_dir) /
                               ("snapshot_" + std::to_string(k) + ".txt"),
                           text);
        }
    }

    json summary;
    summary["command"] = "evolve";
    summary["steps"] = cfg.evolve.n_steps;
    summary["max_norm_drift"] = traj.max_norm_drift;
    summary["final_energy_expectation"] = traj.samples.back().energy;
    summary["final_sector0_weight"] = traj.samples.back().sector0_weight;
    if (!note.empty()) summary["step_size_warning"] = note;
    write_summary(cli.out_dir, summary);
    return exit_ok;
}

int cmd_pu_spectrum(const Cli& cli) {
    json resolved;
    const RunConfig cfg = load_config(cli, &resolved);
    fs::create_directories(cli.out_dir);
    write_resolved(cli.out_dir, resolved);

    io::CsvWriter csv({"n", "ell", "omega", "tau_c", "energy"});
    bool near = false;
    for (int n = 0; n <= cfg.pu_spectrum.n_max; ++n)
        for (int ell = 0; ell <= cfg.pu_spectrum.ell_max; ++ell) {
            PUSpectrumQuery q{n, ell, cfg.pu_spectrum.omega, cfg.physical};
            near = near || pu_near_boundary(q);
            csv.row({io::fmt(n), io::fmt(ell), io::fmt(q.omega), io::fmt(cfg.physical.tau_c),
                     io::fmt(pais_uhlenbeck_energy(q))});
        }
    csv.write(fs::path(cli.out_dir) / "pu_spectrum.csv");
    if (near)
        std::cerr << "warning: omega*tau_c >= 0.8, near the ill-defined boundary\n";

    json summary;
    summary["command"] = "pu-spectrum";
    summary["rows"] = (cfg.pu_spectrum.n_max + 1) * (cfg.pu_spectrum.ell_max + 1);
    if (near) summary["regime_warning"] = "omega*tau_c >= 0.8";
    write_summary(cli.out_dir, summary);
    return exit_ok;
}

int cmd_uncertainty(const Cli& cli) {
    json resolved;
    const RunConfig cfg = load_config(cli, &resolved);
    fs::create_directories(cli.out_dir);
    write_resolved(cli.out_dir, resolved);

    const CommutatorCurve curve = uncertainty_curve(
        cfg.uncertainty.u_min, cfg.uncertainty.u_max, cfg.uncertainty.n_points);
    io::CsvWriter csv({"u", "f"});
    for (std::size_t i = 0; i < curve.u.size(); ++i)
        csv.row({io::fmt(curve.u[i]), io::fmt(curve.f[i])});
    csv.write(fs::path(cli.out_dir) / "uncertainty.csv");

    json summary;
    summary["command"] = "uncertainty-curve";
    summary["rows"] = curve.u.size();
    write_summary(cli.out_dir, summary);
    return exit_ok;
}

// dx- and n_max-refinement study: tracks the lowest sector-0 levels across
// grid halvings (and an n_max halving), reporting successive differences and
// the observed order log2 |d_coarse/d_fine|.
int cmd_converge(const Cli& cli) {
    json resolved;
    const RunConfig cfg = load_config(cli, &resolved);
    fs::create_directories(cli.out_dir);
    write_resolved(cli.out_dir, resolved);

    const Potential pot = cfg.potential();
    const int L = cfg.converge.levels;

    auto levels_at = [&](int n_points, int n_max) {
        XGrid g = cfg.grid;
        g.n_points = n_points;
        HermiteBasis b{n_max};
        const CoupledOperator op = assemble_coupled(cfg.physical, pot, g, b);
        SolveOptions opts;
        opts.k = L;
        opts.sector = 0;
        opts.pair_tol = cfg.solve.pair_tol;
        const SpectralResult res = solve_coupled(op, opts);
        std::vector<double> e;
        for (const auto& en : res.entries) e.push_back(en.energy);
        return e;
    };

    std::vector<int> grids{cfg.grid.n_points};
    for (int r = 0; r < cfg.converge.refinements; ++r)
        grids.push_back((grids.back() - 1) * 2 + 1);

    std::vector<std::vector<double>> runs;
    for (int np : grids) runs.push_back(levels_at(np, cfg.basis.n_max));
    const std::vector<double> half_basis =
        levels_at(cfg.grid.n_points, std::max(cfg.basis.n_max / 2, 1));

    io::CsvWriter csv({"level", "n_points", "energy"});
    for (std::size_t r = 0; r < runs.size(); ++r)
        for (int l = 0; l < int(runs[r].size()); ++l)
            csv.row({io::fmt(l), io::fmt(grids[r]), io::fmt(runs[r][std::size_t(l)])});
    csv.write(fs::path(cli.out_dir) / "converge.csv");

    json report;
    report["command"] = "converge";
    report["grids"] = grids;
    json orders = json::array();
    for (int l = 0; l < L; ++l) {
        json entry;
        entry["level"] = l;
        bool ok = true;
        for (const auto& run : runs) ok = ok && l < int(run.size());
        if (!ok || runs.size() < 3) {
            entry["observed_order"] = nullptr;
        } else {
            const double d_coarse = runs[1][std::size_t(l)] - runs[0][std::size_t(l)];
            const double d_fine = runs[2][std::size_t(l)] - runs[1][std::size_t(l)];
            entry["delta_coarse"] = d_coarse;
            entry["delta_fine"] = d_fine;
            entry["observed_order"] =
                (d_fine != 0.0) ? json(std::log2(std::abs(d_coarse / d_fine))) : json(nullptr);
        }
        if (l < int(half_basis.size()) && l < int(runs[0].size()))
            entry["n_max_halving_shift"] = half_basis[std::size_t(l)] - runs[0][std::size_t(l)];
        orders.push_back(entry);
    }
    report["levels"] = orders;
    io::write_text(fs::path(cli.out_dir) / "converge.json", report.dump(2) + "\n");
    write_summary(cli.out_dir, report);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver suite for quantum mechanics with a finite noise correlation time"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand name

    Cli cli;
    app.add_option("--config", cli.config_path, "JSON config file")->required();
    app.add_option("--out", cli.out_dir, "output directory (default: out)");
    app.add_option("--override", cli.overrides,
                   "config override key.path=value (may be repeated)");

    auto* c_solve = app.add_subcommand("solve", "assemble and diagonalize the coupled operator");
    auto* c_perturb = app.add_subcommand("perturb", "tau_c energy correction for one level");
    auto* c_evolve = app.add_subcommand("evolve", "unitary Cayley propagation");
    auto* c_pu = app.add_subcommand("pu-spectrum", "closed-form oscillator spectrum table");
    auto* c_unc = app.add_subcommand("uncertainty-curve", "commutator factor table");
    auto* c_conv = app.add_subcommand("converge", "grid/basis refinement study");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config_error;
    }

    try {
        if (c_solve->parsed()) return cmd_solve(cli);
        if (c_perturb->parsed()) return cmd_perturb(cli);
        if (c_evolve->parsed()) return cmd_evolve(cli);
        if (c_pu->parsed()) return cmd_pu_spectrum(cli);
        if (c_unc->parsed()) return cmd_uncertainty(cli);
        if (c_conv->parsed()) return cmd_converge(cli);
    } catch (const ConfigError& e) {
        nlohmann::ordered_json err{{"error", "config"}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return exit_config_error;
    } catch (const RegimeError& e) {
        nlohmann::ordered_json err{{"error", "regime"}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return exit_regime_error;
    } catch (const NumericalError& e) {
        nlohmann::ordered_json err{{"error", "numerical"}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return exit_numerical_error;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
    return 0;
}
