// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "irs/analysis.hpp"
#include "irs/prephasing.hpp"
#include "irs/solvers.hpp"
#include "scenario.hpp"

using namespace irs;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double db20(double x) { return 20.0 * std::log10(x); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Lattice random_lattice(std::mt19937_64& rng, int max_m, int max_n, bool allow_tri, double d = 0.5) {
    std::uniform_int_distribution<int> m(1, max_m);
    std::uniform_int_distribution<int> n(1, max_n);
    const bool tri = allow_tri && std::bernoulli_distribution(0.5)(rng);
    return Lattice(tri ? LatticeKind::Triangular : LatticeKind::Rectangular, m(rng), n(rng), d);
}

std::vector<cd> scenario_z(const Lattice& lat, std::mt19937_64& rng) {
    const auto in = testing::random_direction(rng, 85);
    const auto out = testing::random_direction(rng, 85);
    const auto z = steering_vector(lat, in, out);
    return {z.values().begin(), z.values().end()};
}

// ---------------------------------------------------------------- 1 - 3

Outcome opa_oracle() {
    std::mt19937_64 rng(101);
    const GlobalSet binary({1.0, -1.0});
    double worst = 0.0;
    const auto start = Clock::now();
    for (int trial = 0; trial < 500; ++trial) {
        const Lattice lat = random_lattice(rng, 4, 4, false);
        const auto z = scenario_z(lat, rng);
        const double fast = opa_solve(z).objective;
        const double exact = brute_force_solve(z, binary).objective;
        worst = std::max(worst, std::abs(fast - exact));
    }
    const double t = seconds_since(start);
    return {worst <= 1e-9 && t < 30.0, fmt("500 scenarios up to 4x4, max |opa - brute| = %.2e, %.2f s", worst, t)};
}

Outcome gopa_oracle() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> mag(0.75, 1.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::uniform_real_distribution<double> gap(deg2rad(160.0), deg2rad(180.0));
    std::uniform_int_distribution<int> count(1, 12);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(count(rng));
        const auto z = testing::random_unit(rng, n);
        std::vector<std::pair<cd, cd>> sets;
        for (std::size_t i = 0; i < n; ++i) {
            const double alpha = phase(rng);
            const double a = mag(rng);
            const double b = mag(rng);
            sets.emplace_back(std::polar(a, alpha), std::polar(b, alpha + gap(rng)));
        }
        const PerElementBinary alphabet(sets);
        const double fast = gopa_solve(z, alphabet).objective;
        const double exact = brute_force_solve(z, alphabet).objective;
        worst = std::max(worst, std::abs(fast - exact));
    }
    return {worst <= 1e-9, fmt("200 scenarios n <= 12, max |gopa - brute| = %.2e", worst)};
}

Outcome kopa_oracle() {
    std::mt19937_64 rng(303);
    const GlobalSet three({cd{1, 0}, cd{0, 1}, cd{-1, 0}});
    const GlobalSet four = GlobalSet::phase_shift_bits(2);
    std::uniform_int_distribution<int> count(1, 9);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto z = testing::random_unit(rng, static_cast<std::size_t>(count(rng)));
        for (const GlobalSet* set : {&three, &four}) {
            const double fast = kopa_solve(z, *set).objective;
            const double exact = brute_force_solve(z, *set).objective;
            worst = std::max(worst, std::abs(fast - exact));
        }
    }
    return {worst <= 1e-9, fmt("100 scenarios n <= 9 x {1,j,-1} and 2-bit, max |kopa - brute| = %.2e", worst)};
}

// ---------------------------------------------------------------- 4, 5

Outcome worked_example() {
    const Lattice lat(LatticeKind::Rectangular, 3, 3);
    const auto z = steering_vector(lat, Direction::from_degrees(-45, 215), Direction::from_degrees(-30, 35));
    const double thr = db20(threshold_solve(z.values()).objective / 9.0);
    const double opt = db20(opa_solve(z.values()).objective / 9.0);
    const bool ok = std::abs(thr - (-3.86)) <= 0.02 && std::abs(opt - (-2.95)) <= 0.02;
    return {ok, fmt("3x3 |G|^2: threshold %.3f dB (ref -3.86), OPA %.3f dB (ref -2.95)", thr, opt)};
}

Outcome dominance() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> spacing(0.25, 1.0);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Lattice lat = random_lattice(rng, 16, 16, true, spacing(rng));
        const auto z = scenario_z(lat, rng);
        const double gap = opa_solve(z).objective - threshold_solve(z).objective;
        worst = std::min(worst, gap);
        if (gap < -1e-9) ++violations;
    }
    return {violations == 0, fmt("10000 scenarios, %zu violations, min(opa - threshold) = %.2e", violations, worst)};
}

// ---------------------------------------------------------------- 6

Outcome table_one() {
    struct Row {
        int size;
        double width;
        double gain;
    };
    const Row rows[] = {{7, 15.8, 31.0}, {10, 10.3, 36.4}, {15, 6.8, 43.7}, {30, 3.4, 55.3}};
    const Direction incident = Direction::from_degrees(0, 0);
    bool ok = true;
    std::ostringstream os;
    os << "normal incidence, phi0 = 30, mean over theta0 in [-45, 45] step 5;";
    for (const Row& r : rows) {
        const Lattice lat(LatticeKind::Rectangular, r.size, r.size);
        double gain = 0.0;
        double width = 0.0;
        double width_theta = 0.0;
        int count = 0;
        for (int t0 = -45; t0 <= 45; t0 += 5) {
            const Direction target = Direction::from_degrees(t0, 30);
            const auto z = steering_vector(lat, incident, target);
            const auto w = opa_solve(z.values()).weights;
            gain += mainlobe_gain(lat, w.values(), incident, target);
            const PatternCut across = sample_great_circle_cut(lat, w.values(), incident, target,
                                                              azimuthal_tangent(target), {-45, 45}, 0.01);
            width += beamwidth_3db(across, target);
            const PatternCut along = sample_theta_cut(lat, w.values(), incident, 30, {-90, 90}, 0.01);
            width_theta += beamwidth_3db(along, target);
            ++count;
        }
        gain /= count;
        width /= count;
        width_theta /= count;
        const bool row_ok = std::abs(gain - r.gain) <= 1.0 && std::abs(width - r.width) <= 0.1 * r.width;
        ok = ok && row_ok;
        os << fmt(" %dx%d: %.2f deg (ref %.1f, theta-cut %.2f) / %.2f dB (ref %.1f)%s;", r.size, r.size, width,
                  r.width, width_theta, gain, r.gain, row_ok ? "" : " OUT");
    }
    return {ok, os.str() + " width measured across the phi0 plane"};
}

// ---------------------------------------------------------------- 7 - 9

Outcome lobe_certificate() {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> spacing(0.3, 1.0);
    std::uniform_int_distribution<int> size(2, 10);
    std::bernoulli_distribution coin(0.5);
    std::ostringstream os;
    bool ok = true;
    for (LatticeKind kind : {LatticeKind::Rectangular, LatticeKind::Triangular}) {
        int pairs = 0;
        int attempts = 0;
        double worst = 0.0;
        while (pairs < 1000 && attempts < 200000) {
            ++attempts;
            const Lattice lat(kind, size(rng), size(rng), spacing(rng));
            const auto in = testing::random_direction(rng, 80);
            const auto target = testing::random_direction(rng, 80);
            const auto pred = predict_grating_lobe(kind, in, target, lat.spacing_over_lambda());
            if (!pred.exists) continue;
            std::vector<cd> w(lat.size());
            for (auto& v : w) v = coin(rng) ? 1.0 : -1.0;
            const double main = std::abs(array_factor(lat, w, in, target));
            for (const GratingLobe& lobe : pred.lobes) {
                worst = std::max(worst, std::abs(std::abs(array_factor(lat, w, in, lobe.direction)) - main));
            }
            ++pairs;
        }
        ok = ok && pairs == 1000 && worst <= 1e-9;
        os << (kind == LatticeKind::Rectangular ? "rect" : "tri") << fmt(": %d pairs, max ||G*| - |G0|| = %.2e; ", pairs, worst);
    }
    return {ok, os.str()};
}

Outcome conjugate_symmetry() {
    std::mt19937_64 rng(808);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> azimuth(0.0, 360.0);
    double worst = 0.0;
    std::size_t samples = 0;
    for (LatticeKind kind : {LatticeKind::Rectangular, LatticeKind::Triangular}) {
        const Lattice lat(kind, 10, 8);
        const Direction incident = Direction::from_degrees(0, azimuth(rng));
        std::vector<cd> random_w(lat.size());
        for (auto& v : random_w) v = coin(rng) ? 1.0 : -1.0;
        const auto z = steering_vector(lat, incident, Direction::from_degrees(35, 20));
        const auto solved = opa_solve(z.values()).weights;
        std::vector<cd> opa_w(solved.values().begin(), solved.values().end());
        for (const std::vector<cd>* w : {&random_w, &opa_w}) {
            for (double t = 0.0; t <= 90.0; t += 0.5) {
                for (double p = 0.0; p < 360.0; p += 0.5) {
                    const double a = std::abs(array_factor(lat, *w, incident, Direction::from_degrees(t, p)));
                    const double b = std::abs(array_factor(lat, *w, incident, Direction::from_degrees(-t, p)));
                    worst = std::max(worst, std::abs(a - b));
                    ++samples;
                }
            }
        }
    }
    return {worst <= 1e-12, fmt("%zu sample pairs (rect and tri, random and OPA weights), max diff %.2e", samples, worst)};
}

Outcome triangular_corollary() {
    const Direction incident = Direction::from_degrees(-45, 180);
    auto predict = [&](double t0) {
        return predict_grating_lobe_tri(incident, Direction::from_degrees(t0, 0), 0.5);
    };
    bool none_low = true;
    for (double t0 = 0.0; t0 <= 24.0 + 1e-9; t0 += 0.25) none_low = none_low && !predict(t0).exists;
    bool lobe_high = true;
    for (double t0 = 26.0; t0 < 45.0 - 1e-9; t0 += 0.25) lobe_high = lobe_high && predict(t0).exists;
    // At specular reflection the only solution of the lobe condition is the
    // mainlobe direction itself.
    const Direction spec = Direction::from_degrees(45, 0);
    const auto self = grating_lobe_for_pair(LatticeKind::Triangular, incident, spec, 0.5, 0, 0);
    const bool endpoint = !predict(45.0).exists && self &&
                          rad2deg(angular_distance(self->first, spec)) < 1e-6;
    double onset = 0.0;
    for (double t0 = 24.0; t0 <= 26.0; t0 += 0.001) {
        if (predict(t0).exists) {
            onset = t0;
            break;
        }
    }
    return {none_low && lobe_high && endpoint,
            fmt("no lobe on [0, 24]: %s; lobe on [26, 45): %s; onset %.3f deg (ref 24.5); at 45 the lobe "
                "condition is met only by the mainlobe itself: %s",
                none_low ? "yes" : "no", lobe_high ? "yes" : "no", onset, endpoint ? "yes" : "no")};
}

// ---------------------------------------------------------------- 10

double prephase_sll(const Lattice& lat, double kappa, std::uint64_t seed, double theta0) {
    const Direction incident = Direction::from_degrees(0, 180);
    const Direction target = Direction::from_degrees(theta0, 0);
    const auto cfg = build_random_binary_prephase(lat, kappa, seed);
    const auto res = prephase_solve(lat, incident, target, cfg);
    const PatternCut cut = sample_theta_cut(lat, res.weights.values(), incident, 0, {-90, 90}, 0.05);
    return sidelobe_level(cut, target);
}

Outcome prephasing() {
    const Lattice lat(LatticeKind::Rectangular, 30, 30);
    struct Ref {
        double kappa;
        double sll;
    };
    const Ref refs[] = {{0.1, -2.0}, {0.3, -7.6}, {0.5, -10.9}};
    bool zero_exact = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        zero_exact = zero_exact && prephase_sll(lat, 0.0, seed, -45) == 0.0;
    }
    bool ok = zero_exact;
    std::ostringstream os;
    os << "kappa=0: " << (zero_exact ? "0 dB exactly" : "not 0 dB") << "; mean over seeds 0-9:";
    for (const Ref& r : refs) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) sum += prephase_sll(lat, r.kappa, seed, -45);
        const double mean = sum / 10.0;
        const bool in_band = std::abs(mean - r.sll) <= 1.5;
        ok = ok && in_band;
        os << fmt(" kappa=%.1f %.2f dB (ref %.1f)%s;", r.kappa, mean, r.sll, in_band ? "" : " OUT");
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (int t0 = -30; t0 <= 30; t0 += 10) worst = std::max(worst, prephase_sll(lat, 0.5, seed, t0));
    }
    ok = ok && worst <= -7.0;
    os << fmt(" scan [-30, 30] kappa=0.5 worst %.2f dB (limit -7, ref -8.6)", worst);
    return {ok, os.str()};
}

// ---------------------------------------------------------------- 11, 12

Outcome multibeam_monotone() {
    std::mt19937_64 rng(1111);
    std::uniform_int_distribution<int> beams(2, 3);
    std::size_t chains = 0;
    std::size_t bad = 0;
    std::size_t longest = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Lattice lat = random_lattice(rng, 4, 4, false);
        const std::size_t l = static_cast<std::size_t>(beams(rng));
        const auto in = testing::random_direction(rng, 80);
        std::vector<std::vector<cd>> zs;
        for (std::size_t j = 0; j < l; ++j) {
            const auto z = steering_vector(lat, in, testing::random_direction(rng, 80));
            zs.emplace_back(z.values().begin(), z.values().end());
        }
        const WeightAlphabet alphabet = trial % 2 == 0 ? GlobalSet::phase_shift_bits(1) : GlobalSet::phase_shift_bits(2);
        const auto seeds = default_cophase_seeds(l, 6);
        const auto res = multibeam_solve(zs, alphabet, seeds);
        for (const auto& trace : res.traces) {
            ++chains;
            longest = std::max(longest, trace.history.size());
            bool fine = trace.converged && trace.history.size() <= 50;
            for (std::size_t k = 0; k < trace.history.size(); ++k) {
                const auto& h = trace.history[k];
                fine = fine && h.c <= h.d + 1e-9;
                if (k + 1 < trace.history.size()) fine = fine && h.d <= trace.history[k + 1].c + 1e-9;
            }
            if (!fine) ++bad;
        }
    }
    return {bad == 0, fmt("100 instances, %zu iterate chains, %zu violating or unconverged, longest %zu iterations",
                          chains, bad, longest)};
}

Outcome multibeam_figure() {
    const Lattice lat(LatticeKind::Rectangular, 30, 30);
    const Direction incident = Direction::from_degrees(60, 210);
    const std::vector<Direction> targets{Direction::from_degrees(0, 30), Direction::from_degrees(-40, 30)};
    std::vector<std::vector<cd>> zs;
    for (const auto& t : targets) {
        const auto z = steering_vector(lat, incident, t);
        zs.emplace_back(z.values().begin(), z.values().end());
    }
    const auto res = multibeam_solve(zs, GlobalSet::phase_shift_bits(1), default_cophase_seeds(2, 30));
    const auto w = res.best.weights.values();
    double worst_be = 0.0;
    for (const auto& t : targets) {
        worst_be = std::max(worst_be, beamforming_error(t, locate_mainlobe(lat, w, incident, t).direction));
    }
    const PatternCut cut = sample_theta_cut(lat, w, incident, 30, {-90, 90}, 0.05);
    const double sll = sidelobe_level(cut, targets);
    const PatternGrid grid = sample_pattern(lat, w, incident, {0, 90}, {0, 360}, 1.0, 1.0);
    const double sll_grid = sidelobe_level(grid, targets);
    return {worst_be <= 1.0 && sll <= -8.0,
            fmt("30x30, mainlobe offset max %.3f deg, SLL on the phi=30 cut %.2f dB (limit -8, ref ~-10); "
                "hemisphere grid SLL %.2f dB for reference",
                worst_be, sll, sll_grid)};
}

// ---------------------------------------------------------------- 13

Outcome performance() {
    std::mt19937_64 rng(1313);
    const Lattice lat(LatticeKind::Rectangular, 30, 30);
    double worst_solve = 0.0;
    double worst_cut = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto in = testing::random_direction(rng, 70);
        const auto target = testing::random_direction(rng, 70);
        const auto z = steering_vector(lat, in, target);
        auto t = Clock::now();
        const auto res = opa_solve(z.values());
        worst_solve = std::max(worst_solve, seconds_since(t));
        t = Clock::now();
        const PatternCut cut = sample_theta_cut(lat, res.weights.values(), in, target.phi_deg(), {-90, 90}, 1.0);
        worst_cut = std::max(worst_cut, seconds_since(t));
        if (cut.t.size() != 181) return {false, "cut does not have 181 points"};
    }
    return {worst_solve < 0.1 && worst_cut < 1.0,
            fmt("30x30 over 10 scenarios: opa_solve max %.4f s (limit 0.1), 181-point cut max %.4f s (limit 1)",
                worst_solve, worst_cut)};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"oracle optimality, 1-bit", opa_oracle},
        {"oracle optimality, per-element binary sets", gopa_oracle},
        {"oracle optimality, k-ary global sets", kopa_oracle},
        {"3x3 worked example", worked_example},
        {"optimal dominates thresholding", dominance},
        {"beamwidth and gain table", table_one},
        {"grating-lobe certificate", lobe_certificate},
        {"conjugate symmetry at normal incidence", conjugate_symmetry},
        {"triangular lobe-free region", triangular_corollary},
        {"prephasing sidelobe levels", prephasing},
        {"multibeam monotone iterates", multibeam_monotone},
        {"two-beam 30x30 pattern", multibeam_figure},
        {"solver and pattern runtime", performance},
    };
    int failures = 0;
    int id = 0;
    for (const auto& [name, run] : criteria) {
        ++id;
        Outcome o;
        const auto start = Clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << " - " << o.detail
                  << fmt(" (%.2f s)", seconds_since(start)) << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
