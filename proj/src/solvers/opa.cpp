#include <algorithm>
#include <cmath>
#include <sstream>

#include "irs/solvers.hpp"
#include "sweep_util.hpp"

namespace irs {

namespace detail {

namespace {

struct Item {
    double angle;
    std::size_t index;
};

struct Group {
    double first;  // smallest member argument
    double last;   // largest member argument
    cd sum;
};

} // namespace

BinarySweep opa_sweep(std::span<const cd> x, double zero_tol) {
    BinarySweep out;
    out.assignment.assign(x.size(), 0);

    std::vector<Item> items;
    items.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!skipped(x[i], zero_tol)) items.push_back({sweep_arg(x[i]), i});
    }
    if (items.empty()) return out;
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        return a.angle < b.angle || (a.angle == b.angle && a.index < b.index);
    });

    std::vector<Group> groups;
    for (std::size_t t = 0; t < items.size(); ++t) {
        const Item& it = items[t];
        if (t == 0 || it.angle - items[t - 1].angle > kAngleMergeTol) {
            groups.push_back({it.angle, it.angle, cd{0.0, 0.0}});
        }
        groups.back().last = it.angle;
        groups.back().sum += x[it.index];
    }

    const std::size_t count = groups.size();
    cd total{0.0, 0.0};
    for (const Group& g : groups) total += g.sum;

    auto unrolled = [&](std::size_t h) {
        return groups[h % count].first + (h >= count ? kTwoPi : 0.0);
    };

    // Candidate set for group g: every group whose argument lies in
    // [first_g, first_g + pi), kept as the window [g, end) over the unrolled
    // circle.
    std::size_t end = 0;
    cd inside{0.0, 0.0};
    double best = -1.0;
    std::size_t best_group = 0;
    std::size_t best_end = 1;
    for (std::size_t g = 0; g < count; ++g) {
        while (end < g + count && unrolled(end) - groups[g].first < kPi) {
            inside += groups[end % count].sum;
            ++end;
        }
        const double value = std::abs(2.0 * inside - total);
        if (value > best + 1e-12 * std::max(1.0, best)) {
            best = value;
            best_group = g;
            best_end = end;
        }
        inside -= groups[g].sum;
    }
    out.partitions = count;

    // Rotate the line back by half the clearance on either side so that no
    // argument lies on it.
    const Group& lead = groups[best_group];
    const std::size_t tail = best_end - 1;
    const double tail_last = groups[tail % count].last + (tail >= count ? kTwoPi : 0.0);
    const double prev_last = best_group == 0 ? groups[count - 1].last - kTwoPi
                                             : groups[best_group - 1].last;
    const double clearance = std::min(lead.first - prev_last, lead.first + kPi - tail_last);
    out.line_angle = wrap_two_pi(lead.first - 0.5 * clearance);

    for (const Item& it : items) {
        const bool in = wrap_two_pi(it.angle - out.line_angle) < kPi;
        out.assignment[it.index] = in ? 0 : 1;
    }
    // Sign convention: the lowest-index swept element gets member 0.
    const std::size_t lowest =
        std::min_element(items.begin(), items.end(),
                         [](const Item& a, const Item& b) { return a.index < b.index; })
            ->index;
    if (out.assignment[lowest] == 1) {
        out.flipped = true;
        for (const Item& it : items) out.assignment[it.index] ^= 1;
    }
    return out;
}

GeneralizedSweep gopa_sweep(std::span<const cd> z, const PerElementBinary& sets, double zero_tol) {
    const std::size_t n = z.size();
    if (sets.size() != n) {
        std::ostringstream os;
        os << "per-element set count " << sets.size() << " differs from input size " << n;
        throw DimensionError(os.str());
    }
    std::vector<cd> x(n + 1, cd{0.0, 0.0});
    cd synthetic{0.0, 0.0};
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (skipped(z[i], zero_tol)) continue;
        const auto& [a, b] = sets[i];
        x[i] = 0.5 * (a - b) * z[i];
        const cd shift = 0.5 * (a + b) * z[i];
        synthetic += shift;
        scale += std::abs(shift);
    }
    GeneralizedSweep out;
    out.synthetic_dropped =
        synthetic == cd{0.0, 0.0} || std::abs(synthetic) < 1e-14 * std::max(1.0, scale);
    if (!out.synthetic_dropped) x[n] = synthetic;

    out.line = opa_sweep(x, 0.0);
    if (!out.synthetic_dropped && out.line.assignment[n] == 1) {
        out.line.flipped = !out.line.flipped;
        for (std::size_t i = 0; i <= n; ++i) {
            if (x[i] != cd{0.0, 0.0}) out.line.assignment[i] ^= 1;
        }
    }
    out.line.assignment.resize(n);
    return out;
}

} // namespace detail

SolveResult opa_solve(std::span<const cd> z) {
    detail::require_nonzero(z, "opa_solve");
    detail::BinarySweep sweep = detail::opa_sweep(z, 0.0);
    const WeightAlphabet alphabet = detail::plus_minus_one();
    std::vector<cd> w = weights_from_assignment(alphabet, sweep.assignment);
    const double objective = objective_of(w, z);
    PartitionCertificate cert{PartitionCertificate::Kind::SeparatingLine, sweep.line_angle,
                              sweep.flipped, std::move(sweep.assignment)};
    return {WeightMatrix(std::move(w), alphabet), objective, std::move(cert), sweep.partitions};
}

SolveResult gopa_solve(std::span<const cd> z, const PerElementBinary& sets) {
    detail::require_nonzero(z, "gopa_solve");
    detail::GeneralizedSweep sweep = detail::gopa_sweep(z, sets, 0.0);
    const WeightAlphabet alphabet = sets;
    std::vector<cd> w = weights_from_assignment(alphabet, sweep.line.assignment);
    const double objective = objective_of(w, z);
    PartitionCertificate cert{PartitionCertificate::Kind::SeparatingLine, sweep.line.line_angle,
                              sweep.line.flipped, std::move(sweep.line.assignment)};
    return {WeightMatrix(std::move(w), alphabet), objective, std::move(cert),
            sweep.line.partitions};
}

} // namespace irs
