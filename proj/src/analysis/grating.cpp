#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "irs/analysis.hpp"
#include "irs/errors.hpp"

namespace irs {

namespace {

// Largest |lambda * c / 2d| worth enumerating for the second integer. For the
// triangular lattice the second condition mixes a and b, so reaching
// |B| <= 1 can need |lambda * b / 2d| up to (3 sqrt(3) + 4) / 2 < 5.
double second_bound(LatticeKind kind) { return kind == LatticeKind::Rectangular ? 4.0 : 5.0; }

} // namespace

std::optional<std::pair<Direction, Direction>> grating_lobe_for_pair(LatticeKind kind,
                                                                       const Direction& incident,
                                                                       const Direction& mainlobe,
                                                                       double d_over_lambda, int a,
                                                                       int b) {
    if (a % 2 != 0 || b % 2 != 0) return std::nullopt;
    if (!(d_over_lambda > 0.0)) throw ArgumentError("d_over_lambda must be positive");
    const double scale = 1.0 / (2.0 * d_over_lambda);
    const double si = std::sin(incident.theta());
    const double s0 = std::sin(mainlobe.theta());
    const double shift_b = kind == LatticeKind::Rectangular ? b : (2.0 * b - a) / std::sqrt(3.0);
    const double A = -2.0 * si * std::cos(incident.phi()) + s0 * std::cos(mainlobe.phi()) + scale * a;
    const double B = -2.0 * si * std::sin(incident.phi()) + s0 * std::sin(mainlobe.phi()) + scale * shift_b;
    const double r2 = A * A + B * B;
    // Slack so that lobes exactly at grazing survive rounding.
    if (r2 > 1.0 + 1e-12) return std::nullopt;
    const double theta = std::asin(std::sqrt(std::min(r2, 1.0)));
    // -sin(t) cos(p) = A and -sin(t) sin(p) = B on both branches.
    return std::pair{Direction::from_radians(theta, std::atan2(-B, -A)),
                     Direction::from_radians(-theta, std::atan2(B, A))};
}

GratingLobePrediction predict_grating_lobe(LatticeKind kind, const Direction& incident,
                                           const Direction& mainlobe, double d_over_lambda) {
    if (!(d_over_lambda > 0.0)) throw ArgumentError("d_over_lambda must be positive");
    const int a_max = static_cast<int>(std::floor(4.0 * 2.0 * d_over_lambda + 1e-9));
    const int b_max = static_cast<int>(std::floor(second_bound(kind) * 2.0 * d_over_lambda + 1e-9));
    const double distinct = deg2rad(kLobeDistinctDeg);

    GratingLobePrediction out;
    int best_order = 0;
    for (int a = -a_max; a <= a_max; ++a) {
        if (a % 2 != 0) continue;
        for (int b = -b_max; b <= b_max; ++b) {
            if (b % 2 != 0) continue;
            const auto lobe = grating_lobe_for_pair(kind, incident, mainlobe, d_over_lambda, a, b);
            if (!lobe) continue;
            if (angular_distance(lobe->first, mainlobe) <= distinct) continue;
            out.lobes.push_back({lobe->first, a, b});
            const int order = std::abs(a) + std::abs(b);
            if (!out.exists || order < best_order) {
                out.exists = true;
                best_order = order;
                out.lobe_direction = lobe->first;
                out.integer_pair = std::pair{a, b};
            }
        }
    }
    return out;
}

} // namespace irs
