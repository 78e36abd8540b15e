#pragma once

// Scenario configuration, file formats and the command-line front end.
// Every angle crossing this boundary is in degrees.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irs/analysis.hpp"
#include "irs/array_model.hpp"
#include "irs/prephasing.hpp"

namespace irs::io {

enum class SolverChoice { Auto, Threshold, Opa, Gopa, Kopa, Brute };

struct ScenarioConfig {
    LatticeKind kind = LatticeKind::Rectangular;
    int m = 0;
    int n = 0;
    double d_over_lambda = 0.5;
    Direction incident;
    std::vector<Direction> targets;

    // At most one of bits / alphabet_file; neither means 1 bit.
    std::optional<int> bits;
    std::optional<std::string> alphabet_file;

    std::optional<double> kappa;
    std::optional<std::string> prephase_file;
    std::uint64_t seed = 0;

    SolverChoice solver = SolverChoice::Auto;
    std::uint64_t brute_force_cap = kDefaultBruteForceCap;

    // pattern sampling
    double grid_step = 1.0;
    AngleRange grid_theta{0.0, 90.0};
    AngleRange grid_phi{0.0, 360.0};

    // gl-map sweep; phi_in follows phi0 + 180
    AngleRange sweep_theta{-90.0, 90.0};
    AngleRange sweep_phi{0.0, 360.0};
    double sweep_step = 5.0;
    std::size_t sim_points = 121;                 // per axis of the (u, v) map
    double sim_cost_limit = 2e10;                 // element-sample products

    std::size_t cophase_points = 30;
    std::size_t max_iters = 50;
    double tol = 1e-9;

    std::string out_dir = ".";
    bool simulate = false;
    bool force = false;

    Lattice lattice() const;
    // Throws ConfigError naming the offending field.
    void validate(bool require_targets = true) const;
};

// JSON document with sections "lattice", "alphabet", "prephase", "grid",
// "sweep", "multibeam", "output" and top-level "incident", "targets",
// "solver", "seed". Unknown keys are rejected.
ScenarioConfig config_from_json(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

LatticeKind parse_lattice_kind(const std::string& text);
SolverChoice parse_solver(const std::string& text);
std::string to_string(SolverChoice solver);
// "theta,phi" in degrees.
Direction parse_direction(const std::string& text, const std::string& field);
// "MxN"
std::pair<int, int> parse_size(const std::string& text);

// Alphabet file: {"members": [[re, im], ...]} for one global set or
// {"per_element": [[[re, im], [re, im]], ...]} with one pair per element.
WeightAlphabet load_alphabet(const std::string& path, std::size_t element_count);
WeightAlphabet resolve_alphabet(const ScenarioConfig& config, std::size_t element_count);

struct WeightFile {
    Lattice lattice;
    std::vector<cd> weights;
};

std::string weights_to_json(const Lattice& lattice, std::span<const cd> weights);
WeightFile weights_from_json(const std::string& text);

struct TargetMetrics {
    Direction target;
    double g_linear = 0.0;
    double g_field_db = 0.0;   // 20 log10 |G|
    double g_power_db = 0.0;   // 10 log10 |G|^2, numerically the same value
    double gain_db = 0.0;      // 20 log10 (element_count |G|)
    Direction achieved;        // refined mainlobe peak
    double beamforming_error_deg = 0.0;
};

std::vector<TargetMetrics> compute_metrics(const Lattice& lattice, std::span<const cd> weights,
                                           const Direction& incident,
                                           std::span<const Direction> targets);

// Exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCostCap = 3;
inline constexpr int kExitNumeric = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace irs::io
