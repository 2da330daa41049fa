#include "ouqm/config.hpp"

#include <set>

namespace ouqm {

using json = nlohmann::ordered_json;

namespace {

struct Collector {
    std::vector<std::string> errors;
    std::vector<std::string> regime_errors;

    void add(const std::string& e) { errors.push_back(e); }
    void add_regime(const std::string& e) { regime_errors.push_back(e); }

    void raise_if_any() const {
        if (errors.empty() && regime_errors.empty()) return;
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  - " + e;
        for (const auto& e : regime_errors) msg += "\n  - " + e;
        if (errors.empty()) throw RegimeError(msg);
        throw ConfigError(msg);
    }
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, Collector& col) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            col.add("unknown key '" + (path.empty() ? it.key() : path + "." + it.key()) + "'");
}

template <typename T>
void read_field(const json& obj, const std::string& path, const char* key, T& out,
                Collector& col) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        col.add("field '" + path + "." + key + "' has the wrong type");
    }
}

} // namespace

RunConfig parse_config_document(const json& doc) {
    Collector col;
    RunConfig cfg;

    if (!doc.is_object()) {
        col.add("top-level document must be an object");
        col.raise_if_any();
    }
    check_keys(doc, "",
               {"physical", "potential", "grid", "basis", "solve", "perturb", "evolve",
                "pu_spectrum", "uncertainty", "converge"},
               col);

    if (doc.contains("physical")) {
        const auto& p = doc["physical"];
        check_keys(p, "physical", {"hbar", "mass", "tau_c"}, col);
        read_field(p, "physical", "hbar", cfg.physical.hbar, col);
        read_field(p, "physical", "mass", cfg.physical.mass, col);
        read_field(p, "physical", "tau_c", cfg.physical.tau_c, col);
    }
    if (doc.contains("potential")) {
        const auto& p = doc["potential"];
        check_keys(p, "potential", {"coefficients"}, col);
        read_field(p, "potential", "coefficients", cfg.potential_coefficients, col);
    }
    if (doc.contains("grid")) {
        const auto& p = doc["grid"];
        check_keys(p, "grid", {"x_min", "x_max", "n_points"}, col);
        read_field(p, "grid", "x_min", cfg.grid.x_min, col);
        read_field(p, "grid", "x_max", cfg.grid.x_max, col);
        read_field(p, "grid", "n_points", cfg.grid.n_points, col);
    }
    if (doc.contains("basis")) {
        const auto& p = doc["basis"];
        check_keys(p, "basis", {"n_max"}, col);
        read_field(p, "basis", "n_max", cfg.basis.n_max, col);
    }
    if (doc.contains("solve")) {
        const auto& p = doc["solve"];
        check_keys(p, "solve",
                   {"k", "sector", "include_spurious", "pair_tol", "density", "dump_operator"},
                   col);
        read_field(p, "solve", "k", cfg.solve.k, col);
        read_field(p, "solve", "sector", cfg.solve.sector, col);
        read_field(p, "solve", "include_spurious", cfg.solve.include_spurious, col);
        read_field(p, "solve", "pair_tol", cfg.solve.pair_tol, col);
        read_field(p, "solve", "density", cfg.solve.density, col);
        read_field(p, "solve", "dump_operator", cfg.solve.dump_operator, col);
    }
    if (doc.contains("perturb")) {
        const auto& p = doc["perturb"];
        check_keys(p, "perturb", {"level"}, col);
        read_field(p, "perturb", "level", cfg.perturb.level, col);
    }
    if (doc.contains("evolve")) {
        const auto& p = doc["evolve"];
        check_keys(p, "evolve",
                   {"dt", "n_steps", "record_every", "initial", "gaussian_x0", "gaussian_sigma",
                    "snapshots"},
                   col);
        read_field(p, "evolve", "dt", cfg.evolve.dt, col);
        read_field(p, "evolve", "n_steps", cfg.evolve.n_steps, col);
        read_field(p, "evolve", "record_every", cfg.evolve.record_every, col);
        read_field(p, "evolve", "initial", cfg.evolve.initial, col);
        read_field(p, "evolve", "gaussian_x0", cfg.evolve.gaussian_x0, col);
        read_field(p, "evolve", "gaussian_sigma", cfg.evolve.gaussian_sigma, col);
        read_field(p, "evolve", "snapshots", cfg.evolve.snapshots, col);
    }
    if (doc.contains("pu_spectrum")) {
        const auto& p = doc["pu_spectrum"];
        check_keys(p, "pu_spectrum", {"omega", "n_max", "ell_max"}, col);
        read_field(p, "pu_spectrum", "omega", cfg.pu_spectrum.omega, col);
        read_field(p, "pu_spectrum", "n_max", cfg.pu_spectrum.n_max, col);
        read_field(p, "pu_spectrum", "ell_max", cfg.pu_spectrum.ell_max, col);
    }
    if (doc.contains("uncertainty")) {
        const auto& p = doc["uncertainty"];
        check_keys(p, "uncertainty", {"u_min", "u_max", "n_points"}, col);
        read_field(p, "uncertainty", "u_min", cfg.uncertainty.u_min, col);
        read_field(p, "uncertainty", "u_max", cfg.uncertainty.u_max, col);
        read_field(p, "uncertainty", "n_points", cfg.uncertainty.n_points, col);
    }
    if (doc.contains("converge")) {
        const auto& p = doc["converge"];
        check_keys(p, "converge", {"levels", "refinements"}, col);
        read_field(p, "converge", "levels", cfg.converge.levels, col);
        read_field(p, "converge", "refinements", cfg.converge.refinements, col);
    }

    // Invariants, all collected before raising.
    if (!(cfg.physical.hbar > 0.0)) col.add("physical.hbar must be > 0");
    if (!(cfg.physical.mass > 0.0)) col.add("physical.mass must be > 0");
    if (!(cfg.physical.tau_c >= 0.0)) col.add("physical.tau_c must be >= 0");
    if (cfg.potential_coefficients.empty()) col.add("potential.coefficients must be nonempty");
    if (int(cfg.potential_coefficients.size()) - 1 > Potential::default_max_degree)
        col.add("potential degree exceeds " + std::to_string(Potential::default_max_degree));
    for (double c : cfg.potential_coefficients)
        if (!std::isfinite(c)) {
            col.add("potential.coefficients must all be finite");
            break;
        }
    if (!(cfg.grid.x_min < cfg.grid.x_max)) col.add("grid.x_min must be < grid.x_max");
    if (cfg.grid.n_points < 8) col.add("grid.n_points must be >= 8");
    if (cfg.basis.n_max < 0) col.add("basis.n_max must be >= 0");
    if (cfg.solve.k < 1) col.add("solve.k must be >= 1");
    if (cfg.solve.sector < -1 || cfg.solve.sector > cfg.basis.n_max)
        col.add("solve.sector must be -1 (all) or in [0, basis.n_max]");
    if (!(cfg.solve.pair_tol > 0.0)) col.add("solve.pair_tol must be > 0");
    if (cfg.perturb.level < 0) col.add("perturb.level must be >= 0");
    if (!(cfg.evolve.dt != 0.0) || !std::isfinite(cfg.evolve.dt))
        col.add("evolve.dt must be a nonzero finite number");
    if (cfg.evolve.n_steps < 1) col.add("evolve.n_steps must be >= 1");
    if (cfg.evolve.record_every < 1) col.add("evolve.record_every must be >= 1");
    if (cfg.evolve.initial != "ground" && cfg.evolve.initial != "gaussian")
        col.add("evolve.initial must be 'ground' or 'gaussian'");
    if (!(cfg.evolve.gaussian_sigma > 0.0)) col.add("evolve.gaussian_sigma must be > 0");
    if (!(cfg.pu_spectrum.omega > 0.0)) col.add("pu_spectrum.omega must be > 0");
    if (cfg.pu_spectrum.n_max < 0) col.add("pu_spectrum.n_max must be >= 0");
    if (cfg.pu_spectrum.ell_max < 0) col.add("pu_spectrum.ell_max must be >= 0");
    if (!(cfg.uncertainty.u_min > 0.0) || !(cfg.uncertainty.u_min < cfg.uncertainty.u_max))
        col.add("uncertainty requires 0 < u_min < u_max");
    if (cfg.uncertainty.n_points < 2) col.add("uncertainty.n_points must be >= 2");
    if (cfg.converge.levels < 1) col.add("converge.levels must be >= 1");
    if (cfg.converge.refinements < 1 || cfg.converge.refinements > 3)
        col.add("converge.refinements must be in [1, 3]");

    // Regime violation: the closed-form oscillator spectrum is undefined at
    // omega*tau_c >= 1. Reported with its own exit category.
    if (cfg.pu_spectrum.omega > 0.0 && cfg.physical.tau_c > 0.0 &&
        cfg.pu_spectrum.omega * cfg.physical.tau_c >= 1.0)
        col.add_regime("pu_spectrum: omega*tau_c = " +
                       std::to_string(cfg.pu_spectrum.omega * cfg.physical.tau_c) +
                       " >= 1 (ill-defined regime)");

    col.raise_if_any();
    return cfg;
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config_document(doc);
}

nlohmann::ordered_json apply_overrides(json doc, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "' is not of the form key.path=value");
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);

        json* node = &doc;
        std::size_t pos = 0;
        while (true) {
            const auto dot = path.find('.', pos);
            const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
            if (key.empty()) throw ConfigError("override '" + ov + "' has an empty path segment");
            if (dot == std::string::npos) {
                json parsed;
                try {
                    parsed = json::parse(value);
                } catch (const json::exception&) {
                    parsed = value; // bare strings allowed unquoted
                }
                (*node)[key] = parsed;
                break;
            }
            node = &(*node)[key];
            pos = dot + 1;
        }
    }
    return doc;
}

nlohmann::ordered_json resolved_json(const RunConfig& cfg) {
    json doc;
    doc["physical"] = {{"hbar", cfg.physical.hbar},
                       {"mass", cfg.physical.mass},
                       {"tau_c", cfg.physical.tau_c}};
    doc["potential"] = {{"coefficients", cfg.potential_coefficients}};
    doc["grid"] = {{"x_min", cfg.grid.x_min},
                   {"x_max", cfg.grid.x_max},
                   {"n_points", cfg.grid.n_points}};
    doc["basis"] = {{"n_max", cfg.basis.n_max}};
    doc["solve"] = {{"k", cfg.solve.k},
                    {"sector", cfg.solve.sector},
                    {"include_spurious", cfg.solve.include_spurious},
                    {"pair_tol", cfg.solve.pair_tol},
                    {"density", cfg.solve.density},
                    {"dump_operator", cfg.solve.dump_operator}};
    doc["perturb"] = {{"level", cfg.perturb.level}};
    doc["evolve"] = {{"dt", cfg.evolve.dt},
                     {"n_steps", cfg.evolve.n_steps},
                     {"record_every", cfg.evolve.record_every},
                     {"initial", cfg.evolve.initial},
                     {"gaussian_x0", cfg.evolve.gaussian_x0},
                     {"gaussian_sigma", cfg.evolve.gaussian_sigma},
                     {"snapshots", cfg.evolve.snapshots}};
    doc["pu_spectrum"] = {{"omega", cfg.pu_spectrum.omega},
                          {"n_max", cfg.pu_spectrum.n_max},
                          {"ell_max", cfg.pu_spectrum.ell_max}};
    doc["uncertainty"] = {{"u_min", cfg.uncertainty.u_min},
                          {"u_max", cfg.uncertainty.u_max},
                          {"n_points", cfg.uncertainty.n_points}};
    doc["converge"] = {{"levels", cfg.converge.levels},
                       {"refinements", cfg.converge.refinements}};
    return doc;
}

} // namespace ouqm
