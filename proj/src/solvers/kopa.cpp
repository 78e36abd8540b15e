#include <algorithm>
#include <cmath>

#include "irs/solvers.hpp"
#include "sweep_util.hpp"

namespace irs {

namespace {

double cross(cd o, cd a, cd b) noexcept {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

// Indices of the strict convex hull of `pts`, counter-clockwise.
std::vector<std::size_t> convex_hull(const std::vector<cd>& pts) {
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].real() < pts[b].real() ||
               (pts[a].real() == pts[b].real() && pts[a].imag() < pts[b].imag());
    });
    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (std::size_t i : order) {
        while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0) --k;
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
        while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[*it]) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

RadialPartition::RadialPartition(const GlobalSet& alphabet) : alphabet_(alphabet) {
    // Member a owns direction psi when conj(a) is the support point of the
    // conjugated alphabet's hull in direction psi, so cone edges are the
    // outward normals of the hull edges.
    std::vector<cd> conj_pts;
    conj_pts.reserve(alphabet.size());
    for (const cd& a : alphabet.members()) conj_pts.push_back(std::conj(a));
    const std::vector<std::size_t> hull = convex_hull(conj_pts);
    const std::size_t h = hull.size();

    std::vector<Cone> cones;
    cones.reserve(h);
    for (std::size_t c = 0; c < h; ++c) {
        const cd d = conj_pts[hull[(c + 1) % h]] - conj_pts[hull[c]];
        const double normal = wrap_two_pi(std::atan2(-d.real(), d.imag()));
        cones.push_back({hull[(c + 1) % h], normal, 0.0});
    }
    std::rotate(cones.begin(),
                std::min_element(cones.begin(), cones.end(),
                                 [](const Cone& a, const Cone& b) { return a.lower_edge < b.lower_edge; }),
                cones.end());
    for (std::size_t c = 0; c < h; ++c) {
        cones[c].upper_edge = c + 1 < h ? cones[c + 1].lower_edge : cones[0].lower_edge + kTwoPi;
    }
    cones_ = std::move(cones);
}

std::vector<double> RadialPartition::edge_angles() const {
    std::vector<double> out;
    out.reserve(cones_.size());
    for (const Cone& c : cones_) out.push_back(c.lower_edge);
    return out;
}

std::size_t RadialPartition::cone_at(double arg) const noexcept {
    arg = wrap_two_pi(arg);
    if (arg < cones_.front().lower_edge) return cones_.size() - 1;
    const auto it = std::upper_bound(cones_.begin(), cones_.end(), arg,
                                     [](double v, const Cone& c) { return v < c.lower_edge; });
    return static_cast<std::size_t>(it - cones_.begin()) - 1;
}

std::optional<std::size_t> RadialPartition::member_of(cd z, double tol) const {
    const auto& a = alphabet_.members();
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool inside = true;
        for (std::size_t j = 0; j < a.size() && inside; ++j) {
            if (j != i && !(((a[i] - a[j]) * z).real() > tol)) inside = false;
        }
        if (inside) return i;
    }
    return std::nullopt;
}

namespace detail {

namespace {

struct Event {
    double delta;
    std::size_t element;
    std::size_t cone;  // the element leaves this cone for the previous one
};

double event_arg(double a) noexcept {
    a = wrap_two_pi(a);
    return kTwoPi - a < kAngleMergeTol ? 0.0 : a;
}

} // namespace

RadialSweep kopa_sweep(std::span<const cd> z, const GlobalSet& alphabet, double zero_tol) {
    const RadialPartition partition(alphabet);
    const auto& cones = partition.cones();
    const std::size_t h = cones.size();
    const auto& members = alphabet.members();

    RadialSweep out;
    out.assignment.assign(z.size(), 0);

    std::vector<std::size_t> active;
    std::vector<Event> events;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (skipped(z[i], zero_tol)) continue;
        active.push_back(i);
        const double arg = std::arg(z[i]);
        for (std::size_t c = 0; c < h; ++c) events.push_back({event_arg(arg - cones[c].lower_edge), i, c});
    }
    if (active.empty()) return out;
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.delta < b.delta || (a.delta == b.delta && a.element < b.element);
    });

    // Group boundaries: [starts[g], starts[g + 1]).
    std::vector<std::size_t> starts;
    for (std::size_t t = 0; t < events.size(); ++t) {
        if (t == 0 || events[t].delta - events[t - 1].delta > kAngleMergeTol) starts.push_back(t);
    }
    const std::size_t groups = starts.size();
    starts.push_back(events.size());

    auto assign_at = [&](double delta) {
        for (std::size_t i : active) {
            out.assignment[i] = cones[partition.cone_at(std::arg(z[i]) - delta)].member;
        }
    };

    // The wrap-around partition comes first: it contains delta = 0.
    const double wrap_delta =
        wrap_two_pi(0.5 * (events.back().delta + events.front().delta + kTwoPi));
    std::vector<std::size_t> cone_of(z.size(), 0);
    cd sum{0.0, 0.0};
    for (std::size_t i : active) {
        cone_of[i] = partition.cone_at(std::arg(z[i]) - wrap_delta);
        sum += members[cones[cone_of[i]].member] * z[i];
    }
    double best = std::abs(sum);
    double best_delta = wrap_delta;
    out.partitions = 1;

    for (std::size_t g = 0; g + 1 < groups; ++g) {
        for (std::size_t t = starts[g]; t < starts[g + 1]; ++t) {
            const Event& e = events[t];
            const std::size_t next = (e.cone + h - 1) % h;
            sum += (members[cones[next].member] - members[cones[cone_of[e.element]].member]) * z[e.element];
            cone_of[e.element] = next;
        }
        ++out.partitions;
        const double value = std::abs(sum);
        if (value > best + 1e-12 * std::max(1.0, best)) {
            best = value;
            best_delta = 0.5 * (events[starts[g + 1] - 1].delta + events[starts[g + 1]].delta);
        }
    }
    out.angle = best_delta;
    assign_at(best_delta);
    return out;
}

} // namespace detail

SolveResult kopa_solve(std::span<const cd> z, const GlobalSet& alphabet) {
    detail::require_nonzero(z, "kopa_solve");
    detail::RadialSweep sweep = detail::kopa_sweep(z, alphabet, 0.0);
    const WeightAlphabet wa = alphabet;
    std::vector<cd> w = weights_from_assignment(wa, sweep.assignment);
    const double objective = objective_of(w, z);
    PartitionCertificate cert{PartitionCertificate::Kind::RotatedRadialPartition, sweep.angle, false,
                              std::move(sweep.assignment)};
    return {WeightMatrix(std::move(w), wa), objective, std::move(cert), sweep.partitions};
}

} // namespace irs
