#include "irs/prephasing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "irs/errors.hpp"
#include "json.hpp"

namespace irs {

using nlohmann::json;

void PrephaseConfig::validate(std::size_t element_count) const {
    if (prephases.empty()) throw ArgumentError("prephase list is empty");
    for (double p : prephases) {
        if (!std::isfinite(p)) throw ArgumentError("prephases must be finite");
    }
    if (assignment.size() != element_count) {
        std::ostringstream os;
        os << "prephase assignment covers " << assignment.size() << " of " << element_count
           << " elements";
        throw ArgumentError(os.str());
    }
    for (std::size_t idx : assignment) {
        if (idx >= prephases.size()) throw ArgumentError("prephase index out of range");
    }
}

std::size_t PrephaseConfig::count_with(std::size_t prephase_index) const {
    return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), prephase_index));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("uniform_below needs a positive bound");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    while (true) {
        const std::uint64_t r = rng();
        if (r <= limit) return r % bound;
    }
}

PrephaseConfig build_random_binary_prephase(const Lattice& lattice, double kappa,
                                            std::uint64_t rng_seed) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw ArgumentError("kappa must lie in [0, 1]");
    const std::size_t n = lattice.size();
    const auto chosen = static_cast<std::size_t>(std::llround(kappa * static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(rng_seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(order[i - 1], order[j]);
    }
    PrephaseConfig cfg{{0.0, kPi / 2.0}, std::vector<std::size_t>(n, 0), kappa, rng_seed};
    for (std::size_t t = 0; t < chosen; ++t) cfg.assignment[order[t]] = 1;
    return cfg;
}

PerElementBinary prephase_alphabets(const PrephaseConfig& config) {
    std::vector<std::pair<cd, cd>> sets;
    sets.reserve(config.assignment.size());
    for (std::size_t idx : config.assignment) {
        if (idx >= config.prephases.size()) throw ArgumentError("prephase index out of range");
        const cd base = unit_phasor(config.prephases[idx]);
        sets.emplace_back(base, -base);
    }
    return PerElementBinary(std::move(sets));
}

SolveResult prephase_solve(const Lattice& lattice, const Direction& incident, const Direction& target,
                           const PrephaseConfig& config) {
    config.validate(lattice.size());
    const SteeringVector z = steering_vector(lattice, incident, target);
    return gopa_solve(z.values(), prephase_alphabets(config));
}

std::string prephase_to_json(const Lattice& lattice, const PrephaseConfig& config) {
    config.validate(lattice.size());
    json out;
    json degrees = json::array();
    for (double p : config.prephases) degrees.push_back(rad2deg(p));
    out["prephases_deg"] = degrees;
    json assignment = json::object();
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const ElementIndex e = lattice.elements()[i];
        assignment[std::to_string(e.m) + "," + std::to_string(e.n)] = config.assignment[i];
    }
    out["assignment"] = assignment;
    out["kappa"] = config.kappa ? json(*config.kappa) : json(nullptr);
    out["rng_seed"] = config.rng_seed;
    return out.dump(2);
}

PrephaseConfig prephase_from_json(const Lattice& lattice, const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("prephase", e.what());
    }
    if (!in.is_object()) throw ConfigError("prephase", "expected a JSON object");
    for (const auto& [key, value] : in.items()) {
        if (key != "prephases_deg" && key != "assignment" && key != "kappa" && key != "rng_seed") {
            throw ConfigError("prephase." + key, "unknown key");
        }
    }
    PrephaseConfig cfg;
    try {
        for (const auto& v : in.at("prephases_deg")) cfg.prephases.push_back(deg2rad(v.get<double>()));
        if (in.contains("kappa") && !in["kappa"].is_null()) cfg.kappa = in["kappa"].get<double>();
        if (in.contains("rng_seed")) cfg.rng_seed = in["rng_seed"].get<std::uint64_t>();

        constexpr auto unset = std::numeric_limits<std::size_t>::max();
        cfg.assignment.assign(lattice.size(), unset);
        for (const auto& [key, value] : in.at("assignment").items()) {
            int m = 0;
            int n = 0;
            char comma = 0;
            std::istringstream is(key);
            if (!(is >> m >> comma >> n) || comma != ',' || !is.eof()) {
                throw ConfigError("prephase.assignment", "bad element key '" + key + "'");
            }
            if (!lattice.contains({m, n})) {
                throw ConfigError("prephase.assignment", "element '" + key + "' is not in the lattice");
            }
            cfg.assignment[lattice.ordinal({m, n})] = value.get<std::size_t>();
        }
        for (std::size_t idx : cfg.assignment) {
            if (idx == unset) throw ConfigError("prephase.assignment", "not every element is assigned");
        }
    } catch (const json::exception& e) {
        throw ConfigError("prephase", e.what());
    }
    try {
        cfg.validate(lattice.size());
    } catch (const ArgumentError& e) {
        throw ConfigError("prephase", e.what());
    }
    return cfg;
}

} // namespace irs
