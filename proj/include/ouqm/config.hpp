#pragma once

// Run configuration: JSON document -> validated RunConfig with defaults
// filled, unknown keys rejected, and all violations reported in one pass.

#include <optional>
#include <string>
#include <vector>

#include "ouqm/types.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace ouqm {

struct SolveBlock {
    int k = 8;
    int sector = 0;           // -1 selects all sectors
    bool include_spurious = false;
    double pair_tol = 1e-9;
    bool density = true;
    bool dump_operator = false;
};

struct PerturbBlock {
    int level = 0;
};

struct EvolveBlock {
    double dt = 1e-3;
    int n_steps = 200;
    int record_every = 10;
    std::string initial = "ground"; // "ground" | "gaussian"
    double gaussian_x0 = 0.0;
    double gaussian_sigma = 1.0;
    bool snapshots = false;
};

struct PUSpectrumBlock {
    double omega = 1.0;
    int n_max = 2;
    int ell_max = 3;
};

struct UncertaintyBlock {
    double u_min = 1e-3;
    double u_max = 1e3;
    int n_points = 121;
};

struct ConvergeBlock {
    int levels = 4;        // sector-0 levels to track
    int refinements = 2;   // dx halvings on top of the base grid
};

struct RunConfig {
    PhysicalParams physical;
    std::vector<double> potential_coefficients{0.0, 0.0, 0.5};
    XGrid grid;
    HermiteBasis basis;
    SolveBlock solve;
    PerturbBlock perturb;
    EvolveBlock evolve;
    PUSpectrumBlock pu_spectrum;
    UncertaintyBlock uncertainty;
    ConvergeBlock converge;

    Potential potential() const { return Potential(potential_coefficients); }
};

// Parse + validate. Throws ConfigError (unknown keys, type errors, invariant
// violations; all collected into one message) or RegimeError when the only
// blocking violations are regime ones (omega*tau_c >= 1).
RunConfig parse_config(const std::string& json_text);

// Apply "a.b.c=value" overrides to the raw document before validation.
nlohmann::ordered_json apply_overrides(nlohmann::ordered_json doc,
                                       const std::vector<std::string>& overrides);

// Canonical resolved form: every field present, schema order, stable float
// encoding. parse_config(resolved_json(cfg)) round-trips exactly.
nlohmann::ordered_json resolved_json(const RunConfig& cfg);

RunConfig parse_config_document(const nlohmann::ordered_json& doc);

} // namespace ouqm
