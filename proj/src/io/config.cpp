#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "irs/errors.hpp"
#include "irs/io.hpp"
#include "json.hpp"

namespace irs::io {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path, const std::string& field) {
    std::ifstream in(path);
    if (!in) throw ConfigError(field, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json(const std::string& text, const std::string& field) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(field, e.what());
    }
}

void only_keys(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(section, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw ConfigError(section.empty() ? key : section + "." + key, "unknown key");
    }
}

template <class T>
T get(const json& obj, const char* key, const std::string& field) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(field, e.what());
    }
}

Direction direction_value(const json& v, const std::string& field) {
    if (v.is_string()) return parse_direction(v.get<std::string>(), field);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(field, "expected [theta_deg, phi_deg]");
    }
    return Direction::from_degrees(v[0].get<double>(), v[1].get<double>());
}

AngleRange range_value(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(field, "expected [start_deg, stop_deg]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

cd complex_value(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(field, "expected [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void check_range(AngleRange r, const std::string& field) {
    if (!std::isfinite(r.start) || !std::isfinite(r.stop) || r.start > r.stop) {
        throw ConfigError(field, "range must be finite with start <= stop");
    }
}

} // namespace

LatticeKind parse_lattice_kind(const std::string& text) {
    if (text == "rect" || text == "rectangular") return LatticeKind::Rectangular;
    if (text == "tri" || text == "triangular") return LatticeKind::Triangular;
    throw ConfigError("lattice", "expected rect or tri, got '" + text + "'");
}

SolverChoice parse_solver(const std::string& text) {
    if (text == "auto") return SolverChoice::Auto;
    if (text == "threshold") return SolverChoice::Threshold;
    if (text == "opa") return SolverChoice::Opa;
    if (text == "gopa") return SolverChoice::Gopa;
    if (text == "kopa") return SolverChoice::Kopa;
    if (text == "brute") return SolverChoice::Brute;
    throw ConfigError("solver", "unknown solver '" + text + "'");
}

std::string to_string(SolverChoice solver) {
    switch (solver) {
    case SolverChoice::Auto: return "auto";
    case SolverChoice::Threshold: return "threshold";
    case SolverChoice::Opa: return "opa";
    case SolverChoice::Gopa: return "gopa";
    case SolverChoice::Kopa: return "kopa";
    case SolverChoice::Brute: return "brute";
    }
    return "auto";
}

Direction parse_direction(const std::string& text, const std::string& field) {
    std::istringstream is(text);
    double theta = 0.0;
    double phi = 0.0;
    char comma = 0;
    if (!(is >> theta >> comma >> phi) || comma != ',' || !(is >> std::ws).eof() ||
        !std::isfinite(theta) || !std::isfinite(phi)) {
        throw ConfigError(field, "expected 'theta,phi' in degrees, got '" + text + "'");
    }
    return Direction::from_degrees(theta, phi);
}

std::pair<int, int> parse_size(const std::string& text) {
    std::istringstream is(text);
    int m = 0;
    int n = 0;
    char x = 0;
    if (!(is >> m >> x >> n) || (x != 'x' && x != 'X') || !(is >> std::ws).eof()) {
        throw ConfigError("lattice.size", "expected MxN, got '" + text + "'");
    }
    return {m, n};
}

Lattice ScenarioConfig::lattice() const {
    try {
        return Lattice(kind, m, n, d_over_lambda);
    } catch (const ArgumentError& e) {
        throw ConfigError("lattice", e.what());
    }
}

void ScenarioConfig::validate(bool require_targets) const {
    if (m < 1 || n < 1) throw ConfigError("lattice.size", "M and N must be positive");
    if (!(d_over_lambda > 0.0) || !std::isfinite(d_over_lambda)) {
        throw ConfigError("lattice.d_over_lambda", "must be a positive finite number");
    }
    if (require_targets && targets.empty()) throw ConfigError("targets", "at least one target is required");
    if (bits && alphabet_file) throw ConfigError("alphabet", "give either bits or an alphabet file, not both");
    if (bits && (*bits < 1 || *bits > 8)) throw ConfigError("alphabet.bits", "must lie in [1, 8]");
    if (kappa && prephase_file) throw ConfigError("prephase", "give either kappa or a prephase file, not both");
    if (kappa && !(*kappa >= 0.0 && *kappa <= 1.0)) throw ConfigError("prephase.kappa", "must lie in [0, 1]");
    if (!(grid_step > 0.0)) throw ConfigError("grid.step", "must be positive");
    check_range(grid_theta, "grid.theta");
    check_range(grid_phi, "grid.phi");
    if (!(sweep_step > 0.0)) throw ConfigError("sweep.step", "must be positive");
    check_range(sweep_theta, "sweep.theta");
    check_range(sweep_phi, "sweep.phi");
    if (sim_points < 3) throw ConfigError("sweep.sim_points", "must be at least 3");
    if (!(sim_cost_limit > 0.0)) throw ConfigError("sweep.cost_limit", "must be positive");
    if (cophase_points < 1) throw ConfigError("multibeam.cophase_points", "must be at least 1");
    if (max_iters < 1) throw ConfigError("multibeam.max_iters", "must be at least 1");
    if (!(tol > 0.0)) throw ConfigError("multibeam.tol", "must be positive");
    if (out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

ScenarioConfig config_from_json(const std::string& text, ScenarioConfig cfg) {
    const json doc = parse_json(text, "config");
    only_keys(doc, "", {"lattice", "incident", "targets", "alphabet", "prephase", "seed", "solver",
                        "brute_force_cap", "grid", "sweep", "multibeam", "output"});

    if (doc.contains("lattice")) {
        const json& l = doc["lattice"];
        only_keys(l, "lattice", {"kind", "size", "m", "n", "d_over_lambda"});
        if (l.contains("kind")) cfg.kind = parse_lattice_kind(get<std::string>(l, "kind", "lattice.kind"));
        if (l.contains("size")) {
            std::tie(cfg.m, cfg.n) = parse_size(get<std::string>(l, "size", "lattice.size"));
        }
        if (l.contains("m")) cfg.m = get<int>(l, "m", "lattice.m");
        if (l.contains("n")) cfg.n = get<int>(l, "n", "lattice.n");
        if (l.contains("d_over_lambda")) cfg.d_over_lambda = get<double>(l, "d_over_lambda", "lattice.d_over_lambda");
    }
    if (doc.contains("incident")) cfg.incident = direction_value(doc["incident"], "incident");
    if (doc.contains("targets")) {
        const json& t = doc["targets"];
        if (!t.is_array()) throw ConfigError("targets", "expected a list of [theta_deg, phi_deg]");
        cfg.targets.clear();
        for (std::size_t i = 0; i < t.size(); ++i) {
            cfg.targets.push_back(direction_value(t[i], "targets[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("alphabet")) {
        const json& a = doc["alphabet"];
        only_keys(a, "alphabet", {"bits", "file"});
        if (a.contains("bits")) cfg.bits = get<int>(a, "bits", "alphabet.bits");
        if (a.contains("file")) cfg.alphabet_file = get<std::string>(a, "file", "alphabet.file");
    }
    if (doc.contains("prephase")) {
        const json& p = doc["prephase"];
        only_keys(p, "prephase", {"kappa", "file"});
        if (p.contains("kappa")) cfg.kappa = get<double>(p, "kappa", "prephase.kappa");
        if (p.contains("file")) cfg.prephase_file = get<std::string>(p, "file", "prephase.file");
    }
    if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", "seed");
    if (doc.contains("solver")) cfg.solver = parse_solver(get<std::string>(doc, "solver", "solver"));
    if (doc.contains("brute_force_cap")) {
        cfg.brute_force_cap = get<std::uint64_t>(doc, "brute_force_cap", "brute_force_cap");
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        only_keys(g, "grid", {"step", "theta", "phi"});
        if (g.contains("step")) cfg.grid_step = get<double>(g, "step", "grid.step");
        if (g.contains("theta")) cfg.grid_theta = range_value(g["theta"], "grid.theta");
        if (g.contains("phi")) cfg.grid_phi = range_value(g["phi"], "grid.phi");
    }
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        only_keys(s, "sweep", {"step", "theta", "phi", "sim_points", "cost_limit"});
        if (s.contains("step")) cfg.sweep_step = get<double>(s, "step", "sweep.step");
        if (s.contains("theta")) cfg.sweep_theta = range_value(s["theta"], "sweep.theta");
        if (s.contains("phi")) cfg.sweep_phi = range_value(s["phi"], "sweep.phi");
        if (s.contains("sim_points")) cfg.sim_points = get<std::size_t>(s, "sim_points", "sweep.sim_points");
        if (s.contains("cost_limit")) cfg.sim_cost_limit = get<double>(s, "cost_limit", "sweep.cost_limit");
    }
    if (doc.contains("multibeam")) {
        const json& mb = doc["multibeam"];
        only_keys(mb, "multibeam", {"cophase_points", "max_iters", "tol"});
        if (mb.contains("cophase_points")) {
            cfg.cophase_points = get<std::size_t>(mb, "cophase_points", "multibeam.cophase_points");
        }
        if (mb.contains("max_iters")) cfg.max_iters = get<std::size_t>(mb, "max_iters", "multibeam.max_iters");
        if (mb.contains("tol")) cfg.tol = get<double>(mb, "tol", "multibeam.tol");
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        only_keys(o, "output", {"dir", "simulate", "force"});
        if (o.contains("dir")) cfg.out_dir = get<std::string>(o, "dir", "output.dir");
        if (o.contains("simulate")) cfg.simulate = get<bool>(o, "simulate", "output.simulate");
        if (o.contains("force")) cfg.force = get<bool>(o, "force", "output.force");
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
    return config_from_json(read_file(path, "config"), std::move(base));
}

WeightAlphabet load_alphabet(const std::string& path, std::size_t element_count) {
    const json doc = parse_json(read_file(path, "alphabet.file"), "alphabet.file");
    only_keys(doc, "alphabet.file", {"members", "per_element"});
    if (doc.contains("members") == doc.contains("per_element")) {
        throw ConfigError("alphabet.file", "expected exactly one of 'members' or 'per_element'");
    }
    try {
        if (doc.contains("members")) {
            std::vector<cd> members;
            for (const auto& v : doc["members"]) members.push_back(complex_value(v, "alphabet.file.members"));
            return GlobalSet(std::move(members));
        }
        const json& sets = doc["per_element"];
        if (!sets.is_array() || sets.size() != element_count) {
            throw ConfigError("alphabet.file.per_element",
                              "expected " + std::to_string(element_count) + " pairs");
        }
        std::vector<std::pair<cd, cd>> pairs;
        for (const auto& p : sets) {
            if (!p.is_array() || p.size() != 2) throw ConfigError("alphabet.file.per_element", "expected pairs");
            pairs.emplace_back(complex_value(p[0], "alphabet.file.per_element"),
                               complex_value(p[1], "alphabet.file.per_element"));
        }
        return PerElementBinary(std::move(pairs));
    } catch (const ArgumentError& e) {
        throw ConfigError("alphabet.file", e.what());
    }
}

WeightAlphabet resolve_alphabet(const ScenarioConfig& config, std::size_t element_count) {
    if (config.alphabet_file) return load_alphabet(*config.alphabet_file, element_count);
    return GlobalSet::phase_shift_bits(config.bits.value_or(1));
}

} // namespace irs::io
