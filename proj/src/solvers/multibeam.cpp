#include <cmath>
#include <sstream>

#include "irs/solvers.hpp"
#include "sweep_util.hpp"

namespace irs {

namespace {

constexpr double kInnerZeroTol = 1e-14;

// Maximizes |sum_i w_i y_i| over the alphabet; returns member indices.
std::vector<std::size_t> inner_solve(std::span<const cd> y, const WeightAlphabet& alphabet,
                                     std::size_t& partitions) {
    if (const auto* sets = std::get_if<PerElementBinary>(&alphabet)) {
        auto sweep = detail::gopa_sweep(y, *sets, kInnerZeroTol);
        partitions += sweep.line.partitions;
        return std::move(sweep.line.assignment);
    }
    const auto& global = std::get<GlobalSet>(alphabet);
    if (global.size() == 2) {
        const auto pair = PerElementBinary::uniform(y.size(), global[0], global[1]);
        auto sweep = detail::gopa_sweep(y, pair, kInnerZeroTol);
        partitions += sweep.line.partitions;
        return std::move(sweep.line.assignment);
    }
    auto sweep = detail::kopa_sweep(y, global, kInnerZeroTol);
    partitions += sweep.partitions;
    return std::move(sweep.assignment);
}

cd dot(std::span<const cd> w, std::span<const cd> z) {
    cd sum{0.0, 0.0};
    for (std::size_t i = 0; i < z.size(); ++i) sum += w[i] * z[i];
    return sum;
}

} // namespace

MultibeamResult multibeam_solve(std::span<const std::vector<cd>> zs, const WeightAlphabet& alphabet,
                                std::span<const CoPhaseTuple> seeds, MultibeamOptions options) {
    const std::size_t beams = zs.size();
    if (beams < 2) throw ArgumentError("multibeam_solve needs at least two steering vectors");
    const std::size_t n = zs[0].size();
    if (n == 0) throw ArgumentError("multibeam_solve: empty steering vectors");
    for (const auto& z : zs) {
        if (z.size() != n) throw DimensionError("steering vectors differ in length");
    }
    if (seeds.empty()) throw ArgumentError("multibeam_solve needs at least one seed");
    for (const auto& s : seeds) {
        if (s.size() != beams - 1) {
            std::ostringstream os;
            os << "seed has " << s.size() << " multipliers, expected " << beams - 1;
            throw DimensionError(os.str());
        }
    }
    if (options.max_iters == 0) throw ArgumentError("max_iters must be positive");

    MultibeamResult result{SolveResult{WeightMatrix({}, GlobalSet({1.0, -1.0})), 0.0, std::nullopt, 0},
                           0, {}};
    result.traces.reserve(seeds.size());
    std::vector<cd> best_weights;
    double best_sum = -1.0;
    std::size_t partitions = 0;

    std::vector<cd> y(n);
    std::vector<cd> g(beams);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        SeedTrace trace{seeds[s], {}, {}, false, 0.0};
        std::vector<cd> alpha = seeds[s].alphas();
        for (std::size_t k = 0; k < options.max_iters; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                cd v = zs[0][i];
                for (std::size_t j = 1; j < beams; ++j) v += alpha[j - 1] * zs[j][i];
                y[i] = v;
            }
            const auto assignment = inner_solve(y, alphabet, partitions);
            std::vector<cd> w = weights_from_assignment(alphabet, assignment);

            double d = 0.0;
            for (std::size_t j = 0; j < beams; ++j) {
                g[j] = dot(w, zs[j]);
                d += std::abs(g[j]);
            }
            trace.history.push_back({std::abs(dot(w, y)), d});
            trace.weights = std::move(w);
            trace.beam_sum = d;

            // Co-phase every beam onto the first; a zero beam keeps its
            // multiplier, and a zero first beam defers to the next nonzero one.
            double reference = 0.0;
            bool have_reference = false;
            if (g[0] != cd{0.0, 0.0}) {
                reference = std::arg(g[0]);
                have_reference = true;
            } else {
                for (std::size_t j = 1; j < beams && !have_reference; ++j) {
                    if (g[j] != cd{0.0, 0.0}) {
                        reference = std::arg(alpha[j - 1] * g[j]);
                        have_reference = true;
                    }
                }
            }
            if (have_reference) {
                for (std::size_t j = 1; j < beams; ++j) {
                    if (g[j] != cd{0.0, 0.0}) alpha[j - 1] = std::polar(1.0, reference - std::arg(g[j]));
                }
            }

            const auto& h = trace.history;
            if (h.size() >= 2 && h.back().d - h[h.size() - 2].d < options.tol) {
                trace.converged = true;
                break;
            }
        }
        if (trace.beam_sum > best_sum) {
            best_sum = trace.beam_sum;
            best_weights = trace.weights;
            result.best_seed = s;
        }
        result.traces.push_back(std::move(trace));
    }

    result.best = SolveResult{WeightMatrix(std::move(best_weights), alphabet), best_sum, std::nullopt,
                              partitions};
    return result;
}

std::vector<CoPhaseTuple> default_cophase_seeds(std::size_t beams, std::size_t points) {
    if (beams < 2) throw ArgumentError("co-phasing seeds need at least two beams");
    if (points == 0) throw ArgumentError("co-phasing grid needs at least one point");
    const std::size_t free = beams - 1;
    std::size_t total = 1;
    for (std::size_t j = 0; j < free; ++j) {
        if (total > 1'000'000 / points) throw CostCapError("co-phasing seed grid exceeds 1e6 tuples");
        total *= points;
    }
    std::vector<CoPhaseTuple> seeds;
    seeds.reserve(total);
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t rest = t;
        std::vector<cd> alphas(free);
        for (std::size_t j = free; j-- > 0;) {
            const std::size_t k = rest % points + 1;
            rest /= points;
            alphas[j] = unit_phasor(kTwoPi * static_cast<double>(k) / static_cast<double>(points));
        }
        seeds.emplace_back(std::move(alphas));
    }
    return seeds;
}

} // namespace irs
