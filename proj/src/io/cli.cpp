#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "irs/errors.hpp"
#include "irs/io.hpp"

namespace irs::io {

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> lattice;
    std::optional<std::string> size;
    std::optional<double> d_over_lambda;
    std::optional<std::string> incident;
    std::vector<std::string> targets;
    std::optional<int> bits;
    std::optional<std::string> alphabet;
    std::optional<double> kappa;
    std::optional<std::string> prephase;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> solver;
    std::optional<double> grid;
    std::optional<std::string> out;
    std::optional<std::uint64_t> cap;
    std::optional<std::size_t> cophase_points;
    std::optional<std::size_t> sim_points;
    std::optional<std::string> weights;
    bool simulate = false;
    bool force = false;
};

void add_scenario_options(CLI::App& sub, Flags& f) {
    sub.add_option("--config", f.config, "JSON scenario file; flags override its values");
    sub.add_option("--lattice", f.lattice, "rect or tri");
    sub.add_option("--size", f.size, "MxN");
    sub.add_option("--d-over-lambda", f.d_over_lambda, "element spacing in wavelengths");
    sub.add_option("--incident", f.incident, "theta,phi of the incident wave in degrees");
    sub.add_option("--target", f.targets, "theta,phi in degrees; repeat for several beams");
    sub.add_option("--bits", f.bits, "uniform phase-shift alphabet with 2^b members");
    sub.add_option("--alphabet", f.alphabet, "JSON alphabet file");
    sub.add_option("--seed", f.seed, "RNG seed");
    sub.add_option("--solver", f.solver, "auto, threshold, opa, gopa, kopa or brute");
    sub.add_option("--grid", f.grid, "pattern resolution in degrees (sweep step for gl-map)");
    sub.add_option("--out", f.out, "output directory");
}

ScenarioConfig build_config(const Flags& f, const std::string& command) {
    ScenarioConfig cfg;
    if (f.config) cfg = load_config(*f.config);
    if (f.lattice) cfg.kind = parse_lattice_kind(*f.lattice);
    if (f.size) std::tie(cfg.m, cfg.n) = parse_size(*f.size);
    if (f.d_over_lambda) cfg.d_over_lambda = *f.d_over_lambda;
    if (f.incident) cfg.incident = parse_direction(*f.incident, "--incident");
    if (!f.targets.empty()) {
        cfg.targets.clear();
        for (const auto& t : f.targets) cfg.targets.push_back(parse_direction(t, "--target"));
    }
    // A flag choosing one alphabet form replaces the other form from the file.
    if (f.bits) {
        cfg.bits = f.bits;
        if (!f.alphabet) cfg.alphabet_file.reset();
    }
    if (f.alphabet) {
        cfg.alphabet_file = f.alphabet;
        if (!f.bits) cfg.bits.reset();
    }
    if (f.kappa) {
        cfg.kappa = f.kappa;
        if (!f.prephase) cfg.prephase_file.reset();
    }
    if (f.prephase) {
        cfg.prephase_file = f.prephase;
        if (!f.kappa) cfg.kappa.reset();
    }
    if (f.seed) cfg.seed = *f.seed;
    if (f.solver) cfg.solver = parse_solver(*f.solver);
    if (f.grid) {
        if (command == "gl-map") {
            cfg.sweep_step = *f.grid;
        } else {
            cfg.grid_step = *f.grid;
        }
    }
    if (f.out) cfg.out_dir = *f.out;
    if (f.cap) cfg.brute_force_cap = *f.cap;
    if (f.cophase_points) cfg.cophase_points = *f.cophase_points;
    if (f.sim_points) cfg.sim_points = *f.sim_points;
    if (f.simulate) cfg.simulate = true;
    if (f.force) cfg.force = true;
    return cfg;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal discrete beamforming for reflecting surfaces"};
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "solve one beam and report metrics");
    auto* pattern = app.add_subcommand("pattern", "solve, sample the pattern and summarize lobes");
    auto* glmap = app.add_subcommand("gl-map", "grating-lobe map over a (theta0, phi0) sweep");
    auto* multibeam = app.add_subcommand("multibeam", "several beams from one weight set");
    auto* prephase = app.add_subcommand("prephase", "1-bit solve with a prephase assignment");
    auto* oracle = app.add_subcommand("oracle", "exhaustive search, compared with the fast solver");
    auto* evaluate = app.add_subcommand("evaluate", "metrics of an existing weight file");
    for (auto* sub : {solve, pattern, glmap, multibeam, prephase, oracle, evaluate}) {
        add_scenario_options(*sub, f);
    }
    glmap->add_flag("--simulate", f.simulate, "also solve every point and record its SLL");
    glmap->add_flag("--force", f.force, "run the simulated sweep even above the cost limit");
    glmap->add_option("--sim-points", f.sim_points, "samples per axis of each simulated (u, v) map");
    multibeam->add_option("--cophase-points", f.cophase_points, "phase grid size per extra beam");
    prephase->add_option("--kappa", f.kappa, "fraction of elements with the second prephase");
    prephase->add_option("--prephase", f.prephase, "JSON prephase assignment file");
    for (auto* sub : {solve, oracle}) {
        sub->add_option("--cap", f.cap, "largest number of configurations brute force may enumerate");
    }
    evaluate->add_option("--weights", f.weights, "weights.json to evaluate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const CLI::App* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        const ScenarioConfig cfg = build_config(f, name);
        if (name == "solve") commands::solve(cfg, out);
        else if (name == "pattern") commands::pattern(cfg, out);
        else if (name == "gl-map") commands::gl_map(cfg, out);
        else if (name == "multibeam") commands::multibeam(cfg, out);
        else if (name == "prephase") commands::prephase(cfg, out);
        else if (name == "oracle") commands::oracle(cfg, out);
        else commands::evaluate(cfg, *f.weights, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ArgumentError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DimensionError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CostCapError& e) {
        err << "refused: " << e.what() << '\n';
        return kExitCostCap;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace irs::io
