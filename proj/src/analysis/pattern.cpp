#include <algorithm>
#include <cmath>
#include <limits>

#include "irs/analysis.hpp"
#include "irs/errors.hpp"

namespace irs {

namespace {

void normalize_in_place(std::vector<double>& mag) {
    const double peak = mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
    if (peak > 0.0) {
        for (double& m : mag) m /= peak;
    }
}

} // namespace

bool PatternGrid::phi_wraps() const noexcept {
    if (phi_axis.size() < 2) return false;
    const double step = phi_axis[1] - phi_axis[0];
    return std::abs(phi_axis.back() + step - phi_axis.front() - 360.0) < 1e-6;
}

Direction TransverseGrid::direction(std::size_t iu, std::size_t iv) const {
    const double u = u_axis[iu];
    const double v = v_axis[iv];
    const double r = std::min(1.0, std::hypot(u, v));
    return Direction::from_radians(std::asin(r), r == 0.0 ? 0.0 : std::atan2(v, u));
}

double beamforming_error(const Direction& desired, const Direction& achieved) noexcept {
    const double c = std::sin(desired.theta()) * std::sin(achieved.theta()) *
                         std::cos(std::abs(desired.phi() - achieved.phi())) +
                     std::cos(desired.theta()) * std::cos(achieved.theta());
    return rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

std::vector<double> angle_axis(AngleRange range, double step, bool periodic) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("angle step must be positive");
    if (!(range.stop >= range.start)) throw ArgumentError("empty angle range");
    const double span = range.stop - range.start;
    std::size_t count = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
    if (periodic && span >= 360.0 - 1e-9) {
        count = static_cast<std::size_t>(std::llround(360.0 / step));
    }
    if (count > 50'000'000) throw ArgumentError("angle axis too large");
    // Interpolate between the end points instead of accumulating the step, so
    // an axis symmetric about zero has exactly negated samples.
    const bool wrapped = periodic && span >= 360.0 - 1e-9;
    const std::size_t intervals = wrapped ? count : count - 1;
    double end = range.start + static_cast<double>(intervals) * step;
    if (wrapped) end = range.start + 360.0;
    else if (std::abs(end - range.stop) <= 1e-9 * std::max(1.0, std::abs(range.stop))) end = range.stop;
    std::vector<double> axis(count);
    if (intervals == 0) {
        axis[0] = range.start;
        return axis;
    }
    const double n = static_cast<double>(intervals);
    for (std::size_t i = 0; i < count; ++i) {
        const double k = static_cast<double>(i);
        axis[i] = (range.start * (n - k) + end * k) / n;
    }
    return axis;
}

PatternGrid sample_pattern(const Lattice& lattice, std::span<const cd> weights,
                           const Direction& incident, AngleRange theta, AngleRange phi,
                           double theta_step, double phi_step, bool normalize) {
    if (theta.start < -90.0 - 1e-9 || theta.stop > 90.0 + 1e-9) {
        throw ArgumentError("theta range must lie within [-90, 90]");
    }
    PatternGrid grid;
    grid.theta_axis = angle_axis(theta, theta_step);
    grid.phi_axis = angle_axis(phi, phi_step, true);
    const ArrayFactorEvaluator eval(lattice, weights, incident);

    std::vector<double> cos_phi(grid.phi_axis.size());
    std::vector<double> sin_phi(grid.phi_axis.size());
    for (std::size_t ip = 0; ip < grid.phi_axis.size(); ++ip) {
        cos_phi[ip] = std::cos(deg2rad(grid.phi_axis[ip]));
        sin_phi[ip] = std::sin(deg2rad(grid.phi_axis[ip]));
    }
    grid.magnitude.resize(grid.theta_axis.size() * grid.phi_axis.size());
    for (std::size_t it = 0; it < grid.theta_axis.size(); ++it) {
        const double s = std::sin(deg2rad(std::clamp(grid.theta_axis[it], -90.0, 90.0)));
        for (std::size_t ip = 0; ip < grid.phi_axis.size(); ++ip) {
            grid.magnitude[grid.index(it, ip)] =
                std::abs(eval.at_direction_cosines(s * cos_phi[ip], s * sin_phi[ip]));
        }
    }
    if (normalize) {
        normalize_in_place(grid.magnitude);
        grid.normalized = true;
    }
    return grid;
}

PatternCut sample_theta_cut(const Lattice& lattice, std::span<const cd> weights,
                            const Direction& incident, double phi_deg, AngleRange theta,
                            double step, bool normalize) {
    if (theta.start < -90.0 - 1e-9 || theta.stop > 90.0 + 1e-9) {
        throw ArgumentError("theta range must lie within [-90, 90]");
    }
    PatternCut cut;
    cut.t = angle_axis(theta, step);
    const ArrayFactorEvaluator eval(lattice, weights, incident);
    cut.directions.reserve(cut.t.size());
    cut.magnitude.reserve(cut.t.size());
    for (double t : cut.t) {
        const Direction d = Direction::from_degrees(std::clamp(t, -90.0, 90.0), phi_deg);
        cut.directions.push_back(d);
        cut.magnitude.push_back(std::abs(eval(d)));
    }
    if (normalize) {
        normalize_in_place(cut.magnitude);
        cut.normalized = true;
    }
    return cut;
}

Vec3 azimuthal_tangent(const Direction& d) noexcept {
    return {-std::sin(d.phi()), std::cos(d.phi()), 0.0};
}

Direction direction_from_vector(const Vec3& v) {
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(norm > 0.0)) throw ArgumentError("zero direction vector");
    const double z = v[2] / norm;
    if (z < -1e-12) throw ArgumentError("direction lies below the surface plane");
    const double r = std::hypot(v[0], v[1]) / norm;
    return Direction::from_radians(std::atan2(r, std::max(z, 0.0)),
                                   r == 0.0 ? 0.0 : std::atan2(v[1], v[0]));
}

PatternCut sample_great_circle_cut(const Lattice& lattice, std::span<const cd> weights,
                                   const Direction& incident, const Direction& center,
                                   const Vec3& tangent, AngleRange t, double step,
                                   bool normalize) {
    const Vec3 c = unit_vector(center, Sense::Reflected);
    const double tn = std::sqrt(tangent[0] * tangent[0] + tangent[1] * tangent[1] + tangent[2] * tangent[2]);
    const double dot = (c[0] * tangent[0] + c[1] * tangent[1] + c[2] * tangent[2]) / tn;
    if (!(tn > 0.0) || std::abs(dot) > 1e-9) throw ArgumentError("tangent must be nonzero and orthogonal");

    PatternCut cut;
    cut.t = angle_axis(t, step);
    const ArrayFactorEvaluator eval(lattice, weights, incident);
    for (double deg : cut.t) {
        const double a = deg2rad(deg);
        const Vec3 p{std::cos(a) * c[0] + std::sin(a) * tangent[0] / tn,
                     std::cos(a) * c[1] + std::sin(a) * tangent[1] / tn,
                     std::cos(a) * c[2] + std::sin(a) * tangent[2] / tn};
        cut.directions.push_back(direction_from_vector(p));
        cut.magnitude.push_back(std::abs(eval.at_direction_cosines(p[0], p[1])));
    }
    if (normalize) {
        normalize_in_place(cut.magnitude);
        cut.normalized = true;
    }
    return cut;
}

TransverseGrid sample_transverse_grid(const Lattice& lattice, std::span<const cd> weights,
                                      const Direction& incident, std::size_t points_per_axis,
                                      bool normalize) {
    if (points_per_axis < 3) throw ArgumentError("transverse grid needs at least 3 points per axis");
    TransverseGrid grid;
    grid.u_axis.resize(points_per_axis);
    for (std::size_t i = 0; i < points_per_axis; ++i) {
        grid.u_axis[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points_per_axis - 1);
    }
    grid.v_axis = grid.u_axis;
    const ArrayFactorEvaluator eval(lattice, weights, incident);
    grid.magnitude = eval.magnitude_grid(grid.u_axis, grid.v_axis);
    grid.visible.assign(grid.magnitude.size(), 0);
    for (std::size_t iu = 0; iu < points_per_axis; ++iu) {
        for (std::size_t iv = 0; iv < points_per_axis; ++iv) {
            const std::size_t k = grid.index(iu, iv);
            const double u = grid.u_axis[iu];
            const double v = grid.v_axis[iv];
            grid.visible[k] = u * u + v * v <= 1.0 + 1e-12;
            if (!grid.visible[k]) grid.magnitude[k] = 0.0;
        }
    }
    if (normalize) {
        normalize_in_place(grid.magnitude);
        grid.normalized = true;
    }
    return grid;
}

double mainlobe_gain(const Lattice& lattice, std::span<const cd> weights, const Direction& incident,
                     const Direction& direction) {
    const double g = std::abs(array_factor(lattice, weights, incident, direction));
    if (g == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(static_cast<double>(lattice.size()) * g);
}

} // namespace irs
