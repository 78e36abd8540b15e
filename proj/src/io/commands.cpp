#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "irs/errors.hpp"
#include "irs/solvers.hpp"
#include "json.hpp"

namespace irs::io::commands {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double field_db(double linear) {
    return linear > 0.0 ? 20.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

// JSON has no infinities; -inf dB is written as null.
json db_value(double db) { return std::isfinite(db) ? json(db) : json(nullptr); }

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void write_file(const ScenarioConfig& cfg, const std::string& name, const std::string& content) {
    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream f(path);
    if (!f) throw ConfigError("output.dir", "cannot write '" + path.string() + "'");
    f << content;
    if (!content.empty() && content.back() != '\n') f << '\n';
}

json direction_json(const Direction& d) { return json::array({d.theta_deg(), d.phi_deg()}); }

json lattice_json(const Lattice& lat) {
    return {{"kind", lat.kind() == LatticeKind::Rectangular ? "rect" : "tri"},
            {"m", lat.m_count()},
            {"n", lat.n_count()},
            {"elements", lat.size()},
            {"d_over_lambda", lat.spacing_over_lambda()}};
}

json metrics_json(const std::vector<TargetMetrics>& metrics) {
    json arr = json::array();
    for (const auto& m : metrics) {
        arr.push_back({{"target_deg", direction_json(m.target)},
                       {"abs_g_linear", m.g_linear},
                       {"abs_g_field_db", db_value(m.g_field_db)},
                       {"abs_g2_power_db", db_value(m.g_power_db)},
                       {"gain_field_db", db_value(m.gain_db)},
                       {"achieved_deg", direction_json(m.achieved)},
                       {"beamforming_error_deg", m.beamforming_error_deg}});
    }
    return arr;
}

bool is_plain_binary(const GlobalSet& set) {
    if (set.size() != 2) return false;
    const cd a = set[0];
    const cd b = set[1];
    auto near = [](cd x, cd y) { return std::abs(x - y) < 1e-15; };
    return (near(a, 1.0) && near(b, -1.0)) || (near(a, -1.0) && near(b, 1.0));
}

PerElementBinary as_binary(const WeightAlphabet& alphabet, std::size_t n, const char* solver) {
    if (const auto* sets = std::get_if<PerElementBinary>(&alphabet)) return *sets;
    const auto& set = std::get<GlobalSet>(alphabet);
    if (set.size() != 2) {
        throw ConfigError("solver", std::string(solver) + " needs a two-member alphabet");
    }
    return PerElementBinary::uniform(n, set[0], set[1]);
}

struct Solved {
    SolveResult result;
    std::string solver;
    double runtime_s = 0.0;
};

Solved run_solver(SolverChoice choice, std::span<const cd> z, const WeightAlphabet& alphabet,
                  std::uint64_t cap) {
    const auto* global = std::get_if<GlobalSet>(&alphabet);
    if (choice == SolverChoice::Auto) {
        if (global == nullptr) {
            choice = SolverChoice::Gopa;
        } else if (is_plain_binary(*global)) {
            choice = SolverChoice::Opa;
        } else {
            choice = global->size() == 2 ? SolverChoice::Gopa : SolverChoice::Kopa;
        }
    }
    const auto start = Clock::now();
    std::optional<SolveResult> res;
    switch (choice) {
    case SolverChoice::Threshold:
        res = threshold_solve(z, alphabet);
        break;
    case SolverChoice::Opa:
        if (global == nullptr || !is_plain_binary(*global)) {
            throw ConfigError("solver", "opa needs the 1-bit alphabet {1, -1}");
        }
        res = opa_solve(z);
        break;
    case SolverChoice::Gopa:
        res = gopa_solve(z, as_binary(alphabet, z.size(), "gopa"));
        break;
    case SolverChoice::Kopa:
        if (global == nullptr) throw ConfigError("solver", "kopa needs a global alphabet");
        res = kopa_solve(z, *global);
        break;
    case SolverChoice::Brute:
        res = brute_force_solve(z, alphabet, cap);
        break;
    case SolverChoice::Auto:
        break;
    }
    Solved out{std::move(*res), to_string(choice), seconds_since(start)};
    return out;
}

void require_single_target(const ScenarioConfig& cfg) {
    if (cfg.targets.size() != 1) {
        throw ConfigError("targets", "this command takes exactly one target; use multibeam for more");
    }
}

json base_summary(const char* command, const ScenarioConfig& cfg, const Lattice& lat) {
    json targets = json::array();
    for (const auto& t : cfg.targets) targets.push_back(direction_json(t));
    return {{"command", command},
            {"lattice", lattice_json(lat)},
            {"incident_deg", direction_json(cfg.incident)},
            {"targets_deg", targets}};
}

void print_metrics(std::ostream& out, const std::vector<TargetMetrics>& metrics) {
    for (const auto& m : metrics) {
        out << "target (" << m.target.theta_deg() << ", " << m.target.phi_deg() << ") deg: |G| = "
            << m.g_linear << ", |G|^2 = " << m.g_power_db << " dB, gain = " << m.gain_db
            << " dB, BE = " << m.beamforming_error_deg << " deg\n";
    }
}

std::string pattern_csv(const PatternGrid& grid) {
    const double peak = grid.magnitude.empty() ? 0.0 : *std::max_element(grid.magnitude.begin(), grid.magnitude.end());
    std::ostringstream os;
    os << "theta_deg,phi_deg,abs_g_linear,abs_g_field_db,abs_g_field_db_normalized\n";
    for (std::size_t it = 0; it < grid.theta_axis.size(); ++it) {
        for (std::size_t ip = 0; ip < grid.phi_axis.size(); ++ip) {
            const double g = grid.at(it, ip);
            os << csv_number(grid.theta_axis[it]) << ',' << csv_number(grid.phi_axis[ip]) << ','
               << csv_number(g) << ',' << csv_number(field_db(g)) << ','
               << csv_number(peak > 0.0 ? field_db(g / peak) : field_db(0.0)) << '\n';
        }
    }
    return os.str();
}

std::string cut_csv(const PatternCut& cut, double phi_deg) {
    const double peak = cut.magnitude.empty() ? 0.0 : *std::max_element(cut.magnitude.begin(), cut.magnitude.end());
    std::ostringstream os;
    os << "theta_deg,phi_deg,abs_g_linear,abs_g_field_db,abs_g_field_db_normalized\n";
    for (std::size_t i = 0; i < cut.t.size(); ++i) {
        const double g = cut.magnitude[i];
        os << csv_number(cut.t[i]) << ',' << csv_number(phi_deg) << ',' << csv_number(g) << ','
           << csv_number(field_db(g)) << ',' << csv_number(peak > 0.0 ? field_db(g / peak) : field_db(0.0))
           << '\n';
    }
    return os.str();
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 64);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < std::min(workers, count); ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

void solve(const ScenarioConfig& cfg, std::ostream& out) {
    cfg.validate();
    require_single_target(cfg);
    const Lattice lat = cfg.lattice();
    const WeightAlphabet alphabet = resolve_alphabet(cfg, lat.size());
    const SteeringVector z = steering_vector(lat, cfg.incident, cfg.targets.front());
    const Solved s = run_solver(cfg.solver, z.values(), alphabet, cfg.brute_force_cap);
    const auto metrics = compute_metrics(lat, s.result.weights.values(), cfg.incident, cfg.targets);

    json summary = base_summary("solve", cfg, lat);
    summary["solver"] = s.solver;
    summary["objective_linear"] = s.result.objective;
    summary["partitions_examined"] = s.result.partitions_examined;
    summary["metrics"] = metrics_json(metrics);
    summary["runtime_s"] = s.runtime_s;
    write_file(cfg, "weights.json", weights_to_json(lat, s.result.weights.values()));
    write_file(cfg, "summary.json", summary.dump(2));

    out << "solver " << s.solver << " on " << lat.size() << " elements in " << s.runtime_s << " s\n";
    print_metrics(out, metrics);
}

void pattern(const ScenarioConfig& cfg, std::ostream& out) {
    cfg.validate();
    require_single_target(cfg);
    const Lattice lat = cfg.lattice();
    const WeightAlphabet alphabet = resolve_alphabet(cfg, lat.size());
    const Direction& target = cfg.targets.front();
    const SteeringVector z = steering_vector(lat, cfg.incident, target);
    const Solved s = run_solver(cfg.solver, z.values(), alphabet, cfg.brute_force_cap);
    const auto w = s.result.weights.values();

    const auto start = Clock::now();
    const PatternGrid grid = sample_pattern(lat, w, cfg.incident, cfg.grid_theta, cfg.grid_phi,
                                            cfg.grid_step, cfg.grid_step, false);
    const double peak = *std::max_element(grid.magnitude.begin(), grid.magnitude.end());
    const LobeEstimate main = find_mainlobe(grid, target);

    json summary = base_summary("pattern", cfg, lat);
    summary["solver"] = s.solver;
    summary["metrics"] = metrics_json(compute_metrics(lat, w, cfg.incident, cfg.targets));
    summary["grid"] = {{"theta_deg", {cfg.grid_theta.start, cfg.grid_theta.stop}},
                       {"phi_deg", {cfg.grid_phi.start, cfg.grid_phi.stop}},
                       {"step_deg", cfg.grid_step},
                       {"samples", grid.magnitude.size()}};
    summary["mainlobe"] = {{"direction_deg", direction_json(main.direction)},
                           {"abs_g_linear", main.magnitude},
                           {"abs_g_field_db", db_value(field_db(main.magnitude))}};
    json peaks = json::array();
    for (const LobeEstimate& p : find_peaks(grid, 5, 2.0 * cfg.grid_step)) {
        peaks.push_back({{"direction_deg", direction_json(p.direction)},
                         {"abs_g_linear", p.magnitude},
                         {"field_db_normalized", db_value(field_db(p.magnitude / peak))}});
    }
    summary["peaks"] = peaks;
    summary["sll_field_db"] = db_value(sidelobe_level(grid, target));

    // Beamwidth on a fine theta cut through the target azimuth.
    const PatternCut cut = sample_theta_cut(lat, w, cfg.incident, target.phi_deg(), {-90.0, 90.0},
                                            std::min(0.05, cfg.grid_step), false);
    try {
        summary["beamwidth_3db_deg"] = {{"theta_cut", beamwidth_3db(cut, target)}};
    } catch (const UnresolvedWidthError&) {
        summary["beamwidth_3db_deg"] = {{"theta_cut", nullptr}};
    }
    summary["runtime_s"] = {{"solve", s.runtime_s}, {"pattern", seconds_since(start)}};

    write_file(cfg, "weights.json", weights_to_json(lat, w));
    write_file(cfg, "pattern.csv", pattern_csv(grid));
    write_file(cfg, "summary.json", summary.dump(2));
    out << "pattern " << grid.theta_axis.size() << " x " << grid.phi_axis.size() << " samples, SLL "
        << summary["sll_field_db"] << " dB\n";
}

void gl_map(const ScenarioConfig& cfg, std::ostream& out) {
    cfg.validate(false);
    const Lattice lat = cfg.lattice();
    const auto thetas = angle_axis(cfg.sweep_theta, cfg.sweep_step);
    const auto phis = angle_axis(cfg.sweep_phi, cfg.sweep_step, true);
    const std::size_t points = thetas.size() * phis.size();
    const double theta_in = cfg.incident.theta_deg();

    auto point = [&](std::size_t i) {
        const double t0 = thetas[i / phis.size()];
        const double p0 = phis[i % phis.size()];
        return std::pair{Direction::from_degrees(theta_in, p0 + 180.0), Direction::from_degrees(t0, p0)};
    };

    std::ostringstream theory;
    theory << "theta0_deg,phi0_deg,grating_lobe,lobe_theta_deg,lobe_phi_deg,a,b\n";
    std::size_t with_lobe = 0;
    for (std::size_t i = 0; i < points; ++i) {
        const auto [inc, target] = point(i);
        const auto pred = predict_grating_lobe(lat.kind(), inc, target, lat.spacing_over_lambda());
        theory << csv_number(target.theta_deg()) << ',' << csv_number(target.phi_deg()) << ','
               << (pred.exists ? 1 : 0);
        if (pred.exists) {
            ++with_lobe;
            theory << ',' << csv_number(pred.lobe_direction->theta_deg()) << ','
                   << csv_number(pred.lobe_direction->phi_deg()) << ',' << pred.integer_pair->first << ','
                   << pred.integer_pair->second << '\n';
        } else {
            theory << ",,,,\n";
        }
    }
    json summary = base_summary("gl-map", cfg, lat);
    summary["sweep"] = {{"theta0_deg", {cfg.sweep_theta.start, cfg.sweep_theta.stop}},
                        {"phi0_deg", {cfg.sweep_phi.start, cfg.sweep_phi.stop}},
                        {"step_deg", cfg.sweep_step},
                        {"points", points},
                        {"points_with_lobe", with_lobe}};

    std::string sim_text;
    if (cfg.simulate) {
        const double n = static_cast<double>(lat.size());
        const double samples = static_cast<double>(cfg.sim_points) * static_cast<double>(cfg.sim_points);
        const double cost = static_cast<double>(points) * (samples * n + n * std::log2(n + 1.0));
        if (cost > cfg.sim_cost_limit && !cfg.force) {
            std::ostringstream os;
            os << "simulated sweep needs about " << std::setprecision(3) << cost
               << " element evaluations over " << points << " points, above the limit of "
               << cfg.sim_cost_limit << "; rerun with --force or reduce the sweep";
            throw CostCapError(os.str());
        }
        const WeightAlphabet alphabet = resolve_alphabet(cfg, lat.size());
        std::vector<double> sll(points, 0.0);
        const auto start = Clock::now();
        parallel_for(points, [&](std::size_t i) {
            const auto [inc, target] = point(i);
            const SteeringVector z = steering_vector(lat, inc, target);
            const Solved s = run_solver(cfg.solver, z.values(), alphabet, cfg.brute_force_cap);
            const TransverseGrid map = sample_transverse_grid(lat, s.result.weights.values(), inc, cfg.sim_points);
            sll[i] = sidelobe_level(map, target);
        });
        std::ostringstream sim;
        sim << "theta0_deg,phi0_deg,sll_field_db\n";
        for (std::size_t i = 0; i < points; ++i) {
            const auto target = point(i).second;
            sim << csv_number(target.theta_deg()) << ',' << csv_number(target.phi_deg()) << ','
                << csv_number(sll[i]) << '\n';
        }
        sim_text = sim.str();
        summary["simulation"] = {{"points_per_axis", cfg.sim_points}, {"runtime_s", seconds_since(start)}};
    }
    write_file(cfg, "glmap_theory.csv", theory.str());
    if (cfg.simulate) write_file(cfg, "glmap_sim.csv", sim_text);
    write_file(cfg, "summary.json", summary.dump(2));
    out << "gl-map " << points << " points, " << with_lobe << " with a predicted grating lobe\n";
}

void multibeam(const ScenarioConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (cfg.targets.size() < 2) throw ConfigError("targets", "multibeam needs at least two targets");
    const Lattice lat = cfg.lattice();
    const WeightAlphabet alphabet = resolve_alphabet(cfg, lat.size());
    std::vector<std::vector<cd>> zs;
    for (const auto& t : cfg.targets) {
        const SteeringVector z = steering_vector(lat, cfg.incident, t);
        zs.emplace_back(z.values().begin(), z.values().end());
    }
    const auto seeds = default_cophase_seeds(cfg.targets.size(), cfg.cophase_points);
    const auto start = Clock::now();
    const MultibeamResult res = multibeam_solve(zs, alphabet, seeds, {cfg.max_iters, cfg.tol});
    const double runtime = seconds_since(start);
    const auto w = res.best.weights.values();

    std::ostringstream log;
    log << "seed,k,c_k,d_k\n";
    std::size_t unconverged = 0;
    for (std::size_t s = 0; s < res.traces.size(); ++s) {
        const auto& trace = res.traces[s];
        if (!trace.converged) ++unconverged;
        for (std::size_t k = 0; k < trace.history.size(); ++k) {
            log << s << ',' << k + 1 << ',' << std::setprecision(17) << trace.history[k].c << ','
                << trace.history[k].d << '\n';
        }
    }

    const PatternGrid grid = sample_pattern(lat, w, cfg.incident, cfg.grid_theta, cfg.grid_phi,
                                            cfg.grid_step, cfg.grid_step, false);
    json summary = base_summary("multibeam", cfg, lat);
    summary["metrics"] = metrics_json(compute_metrics(lat, w, cfg.incident, cfg.targets));
    summary["beam_sum_linear"] = res.best.objective;
    summary["best_seed"] = res.best_seed;
    summary["seeds"] = res.traces.size();
    summary["unconverged_seeds"] = unconverged;
    summary["convergence_columns"] = "c_k and d_k are unnormalized sums over elements";
    summary["sll_field_db"] = db_value(sidelobe_level(grid, cfg.targets));
    summary["runtime_s"] = runtime;

    write_file(cfg, "weights.json", weights_to_json(lat, w));
    write_file(cfg, "convergence.csv", log.str());
    write_file(cfg, "summary.json", summary.dump(2));
    out << "multibeam " << cfg.targets.size() << " beams, " << res.traces.size() << " seeds, best seed "
        << res.best_seed << ", SLL " << summary["sll_field_db"] << " dB\n";
}

void prephase(const ScenarioConfig& cfg, std::ostream& out) {
    cfg.validate();
    require_single_target(cfg);
    if (!cfg.kappa && !cfg.prephase_file) throw ConfigError("prephase", "give --kappa or a prephase file");
    if (cfg.bits || cfg.alphabet_file) {
        throw ConfigError("alphabet", "prephasing fixes the alphabet to {e^{j psi}, -e^{j psi}}");
    }
    const Lattice lat = cfg.lattice();
    PrephaseConfig pc;
    if (cfg.kappa) {
        pc = build_random_binary_prephase(lat, *cfg.kappa, cfg.seed);
    } else {
        std::ifstream in(*cfg.prephase_file);
        if (!in) throw ConfigError("prephase.file", "cannot open '" + *cfg.prephase_file + "'");
        std::ostringstream os;
        os << in.rdbuf();
        pc = prephase_from_json(lat, os.str());
    }
    const Direction& target = cfg.targets.front();
    const auto start = Clock::now();
    const SolveResult res = prephase_solve(lat, cfg.incident, target, pc);
    const double runtime = seconds_since(start);
    const auto w = res.weights.values();

    const PatternCut cut = sample_theta_cut(lat, w, cfg.incident, target.phi_deg(), {-90.0, 90.0},
                                            cfg.grid_step, false);
    json summary = base_summary("prephase", cfg, lat);
    summary["kappa"] = pc.kappa ? json(*pc.kappa) : json(nullptr);
    summary["rng_seed"] = pc.rng_seed;
    summary["elements_per_prephase"] = json::array();
    for (std::size_t p = 0; p < pc.prephases.size(); ++p) summary["elements_per_prephase"].push_back(pc.count_with(p));
    summary["objective_linear"] = res.objective;
    summary["metrics"] = metrics_json(compute_metrics(lat, w, cfg.incident, cfg.targets));
    summary["sll_field_db_theta_cut"] = db_value(sidelobe_level(cut, target));
    summary["runtime_s"] = runtime;

    write_file(cfg, "weights.json", weights_to_json(lat, w));
    write_file(cfg, "prephase.json", prephase_to_json(lat, pc));
    write_file(cfg, "pattern.csv", cut_csv(cut, target.phi_deg()));
    write_file(cfg, "summary.json", summary.dump(2));
    out << "prephase solve, SLL on the theta cut " << summary["sll_field_db_theta_cut"] << " dB\n";
}

void oracle(const ScenarioConfig& cfg, std::ostream& out) {
    cfg.validate();
    require_single_target(cfg);
    const Lattice lat = cfg.lattice();
    const WeightAlphabet alphabet = resolve_alphabet(cfg, lat.size());
    const SteeringVector z = steering_vector(lat, cfg.incident, cfg.targets.front());
    const Solved brute = run_solver(SolverChoice::Brute, z.values(), alphabet, cfg.brute_force_cap);
    const Solved fast = run_solver(SolverChoice::Auto, z.values(), alphabet, cfg.brute_force_cap);
    const double gap = brute.result.objective - fast.result.objective;

    json summary = base_summary("oracle", cfg, lat);
    summary["objective_linear"] = brute.result.objective;
    summary["configurations"] = brute.result.partitions_examined;
    summary["fast_solver"] = fast.solver;
    summary["fast_objective_linear"] = fast.result.objective;
    summary["agree"] = std::abs(gap) <= 1e-9 * std::max(1.0, brute.result.objective);
    summary["metrics"] = metrics_json(compute_metrics(lat, brute.result.weights.values(), cfg.incident, cfg.targets));
    summary["runtime_s"] = {{"brute", brute.runtime_s}, {"fast", fast.runtime_s}};

    write_file(cfg, "weights.json", weights_to_json(lat, brute.result.weights.values()));
    write_file(cfg, "summary.json", summary.dump(2));
    out << "brute force " << brute.result.objective << " vs " << fast.solver << ' ' << fast.result.objective << '\n';
}

void evaluate(const ScenarioConfig& cfg, const std::string& weights_path, std::ostream& out) {
    std::ifstream in(weights_path);
    if (!in) throw ConfigError("weights", "cannot open '" + weights_path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    const WeightFile file = weights_from_json(os.str());
    if (cfg.targets.empty()) throw ConfigError("targets", "at least one target is required");
    const auto metrics = compute_metrics(file.lattice, file.weights, cfg.incident, cfg.targets);
    json summary = base_summary("evaluate", cfg, file.lattice);
    summary["metrics"] = metrics_json(metrics);
    write_file(cfg, "summary.json", summary.dump(2));
    print_metrics(out, metrics);
}

} // namespace irs::io::commands
