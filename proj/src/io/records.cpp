#include <cmath>
#include <limits>

#include "irs/errors.hpp"
#include "irs/io.hpp"
#include "json.hpp"

namespace irs::io {

using nlohmann::json;

namespace {

double field_db(double linear) {
    return linear > 0.0 ? 20.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

} // namespace

std::string weights_to_json(const Lattice& lattice, std::span<const cd> weights) {
    if (weights.size() != lattice.size()) throw DimensionError("weight count does not match the lattice");
    json doc;
    doc["lattice"] = {{"kind", lattice.kind() == LatticeKind::Rectangular ? "rect" : "tri"},
                      {"m", lattice.m_count()},
                      {"n", lattice.n_count()},
                      {"d_over_lambda", lattice.spacing_over_lambda()}};
    doc["element_order"] = "weights[i] belongs to elements[i], listed in lattice order";
    json elements = json::array();
    json values = json::array();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const ElementIndex e = lattice.elements()[i];
        elements.push_back({e.m, e.n});
        values.push_back({weights[i].real(), weights[i].imag()});
    }
    doc["elements"] = elements;
    doc["weights"] = values;
    return doc.dump(1);
}

WeightFile weights_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("weights", e.what());
    }
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key != "lattice" && key != "element_order" && key != "elements" && key != "weights") {
                throw ConfigError("weights." + key, "unknown key");
            }
        }
        const json& l = doc.at("lattice");
        Lattice lattice(parse_lattice_kind(l.at("kind").get<std::string>()), l.at("m").get<int>(),
                        l.at("n").get<int>(), l.at("d_over_lambda").get<double>());
        const json& elements = doc.at("elements");
        const json& values = doc.at("weights");
        if (elements.size() != lattice.size() || values.size() != lattice.size()) {
            throw ConfigError("weights", "expected " + std::to_string(lattice.size()) + " elements");
        }
        std::vector<cd> weights(lattice.size());
        std::vector<char> seen(lattice.size(), 0);
        for (std::size_t i = 0; i < elements.size(); ++i) {
            const ElementIndex e{elements[i].at(0).get<int>(), elements[i].at(1).get<int>()};
            if (!lattice.contains(e)) throw ConfigError("weights.elements", "element outside the lattice");
            const std::size_t k = lattice.ordinal(e);
            if (seen[k]) throw ConfigError("weights.elements", "element listed twice");
            seen[k] = 1;
            weights[k] = {values[i].at(0).get<double>(), values[i].at(1).get<double>()};
        }
        return {std::move(lattice), std::move(weights)};
    } catch (const json::exception& e) {
        throw ConfigError("weights", e.what());
    } catch (const ArgumentError& e) {
        throw ConfigError("weights.lattice", e.what());
    }
}

std::vector<TargetMetrics> compute_metrics(const Lattice& lattice, std::span<const cd> weights,
                                           const Direction& incident,
                                           std::span<const Direction> targets) {
    std::vector<TargetMetrics> out;
    for (const Direction& t : targets) {
        TargetMetrics m;
        m.target = t;
        m.g_linear = std::abs(array_factor(lattice, weights, incident, t));
        m.g_field_db = field_db(m.g_linear);
        m.g_power_db = m.g_linear > 0.0 ? 10.0 * std::log10(m.g_linear * m.g_linear)
                                        : -std::numeric_limits<double>::infinity();
        m.gain_db = mainlobe_gain(lattice, weights, incident, t);
        m.achieved = locate_mainlobe(lattice, weights, incident, t).direction;
        m.beamforming_error_deg = beamforming_error(t, m.achieved);
        out.push_back(m);
    }
    return out;
}

} // namespace irs::io
