#include <cmath>
#include <limits>

#include "irs/solvers.hpp"
#include "sweep_util.hpp"

namespace irs {

namespace {

std::size_t nearest(const std::vector<cd>& candidates, cd target) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const double dist = std::abs(candidates[j] - target);
        if (dist < best_dist) {
            best_dist = dist;
            best = j;
        }
    }
    return best;
}

} // namespace

SolveResult threshold_solve(std::span<const cd> z) {
    if (z.empty()) throw ArgumentError("threshold_solve: empty input");
    std::vector<std::size_t> assignment(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double phase = std::arg(std::conj(z[i]));
        assignment[i] = (phase >= -kPi / 2.0 && phase < kPi / 2.0) ? 0 : 1;
    }
    const WeightAlphabet alphabet = detail::plus_minus_one();
    std::vector<cd> w = weights_from_assignment(alphabet, assignment);
    const double objective = objective_of(w, z);
    return {WeightMatrix(std::move(w), alphabet), objective, std::nullopt, 0};
}

SolveResult threshold_solve(std::span<const cd> z, const WeightAlphabet& alphabet) {
    if (z.empty()) throw ArgumentError("threshold_solve: empty input");
    std::vector<std::size_t> assignment(z.size(), 0);
    const auto* global = std::get_if<GlobalSet>(&alphabet);
    const auto* sets = std::get_if<PerElementBinary>(&alphabet);
    if (sets != nullptr && sets->size() != z.size()) {
        throw DimensionError("per-element alphabet size differs from input size");
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == cd{0.0, 0.0}) continue;
        const cd continuous = std::conj(z[i]) / std::abs(z[i]);
        if (global != nullptr) {
            assignment[i] = nearest(global->members(), continuous);
        } else {
            assignment[i] = nearest({(*sets)[i].first, (*sets)[i].second}, continuous);
        }
    }
    std::vector<cd> w = weights_from_assignment(alphabet, assignment);
    const double objective = objective_of(w, z);
    return {WeightMatrix(std::move(w), alphabet), objective, std::nullopt, 0};
}

} // namespace irs
