#include <cmath>
#include <sstream>

#include "irs/solvers.hpp"
#include "sweep_util.hpp"

namespace irs {

SolveResult brute_force_solve(std::span<const cd> z, const WeightAlphabet& alphabet,
                              std::uint64_t cap) {
    const std::size_t n = z.size();
    if (n == 0) throw ArgumentError("brute_force_solve: empty input");

    // options[i] lists the members allowed for element i.
    std::vector<std::vector<cd>> options(n);
    if (const auto* global = std::get_if<GlobalSet>(&alphabet)) {
        for (auto& o : options) o = global->members();
    } else {
        const auto& sets = std::get<PerElementBinary>(alphabet);
        if (sets.size() != n) throw DimensionError("per-element alphabet size differs from input size");
        for (std::size_t i = 0; i < n; ++i) options[i] = {sets[i].first, sets[i].second};
    }

    std::uint64_t configurations = 1;
    for (const auto& o : options) {
        if (configurations > cap / o.size()) {
            std::ostringstream os;
            os << "brute force over " << n << " elements exceeds the cap of " << cap
               << " configurations";
            throw CostCapError(os.str());
        }
        configurations *= o.size();
    }

    // prefix[i] = sum_{t < i} w_t z_t; after a digit change only the tail is
    // rebuilt, so every configuration is summed left to right in one fixed
    // order and sign-flipped configurations tie exactly.
    std::vector<std::size_t> digits(n, 0);
    std::vector<cd> prefix(n + 1, cd{0.0, 0.0});
    auto rebuild_from = [&](std::size_t p) {
        for (std::size_t i = p; i < n; ++i) prefix[i + 1] = prefix[i] + options[i][digits[i]] * z[i];
    };
    rebuild_from(0);

    double best = -1.0;
    std::vector<std::size_t> best_digits = digits;
    for (std::uint64_t visited = 0;; ) {
        ++visited;
        const double value = std::abs(prefix[n]);
        if (value > best) {
            best = value;
            best_digits = digits;
        }
        // Odometer increment, last digit fastest: lexicographic order.
        std::size_t p = n;
        while (p > 0) {
            --p;
            if (++digits[p] < options[p].size()) break;
            digits[p] = 0;
            if (p == 0) {
                p = n;
                break;
            }
        }
        if (p == n) break;
        rebuild_from(p);
        if (visited > configurations) break;
    }

    std::vector<cd> w = weights_from_assignment(alphabet, best_digits);
    const double objective = objective_of(w, z);
    return {WeightMatrix(std::move(w), alphabet), objective, std::nullopt,
            static_cast<std::size_t>(configurations)};
}

} // namespace irs
