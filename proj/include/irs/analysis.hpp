#pragma once

// Pattern sampling and lobe metrics. Angles in these structures are degrees
// (they are written out as-is); Direction values stay radian-based.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "irs/array_model.hpp"

namespace irs {

// Inclusive angle interval in degrees.
struct AngleRange {
    double start = 0.0;
    double stop = 0.0;
};

// |G| sampled on theta x phi; magnitude is row-major with theta as the slow
// index. Note that theta in [-90, 90] with phi over a full turn covers every
// direction twice.
struct PatternGrid {
    std::vector<double> theta_axis;
    std::vector<double> phi_axis;
    std::vector<double> magnitude;
    bool normalized = false;

    std::size_t index(std::size_t it, std::size_t ip) const noexcept { return it * phi_axis.size() + ip; }
    double at(std::size_t it, std::size_t ip) const noexcept { return magnitude[index(it, ip)]; }
    Direction direction(std::size_t it, std::size_t ip) const {
        return Direction::from_degrees(theta_axis[it], phi_axis[ip]);
    }
    // True when phi_axis closes on itself (last + step == first + 360).
    bool phi_wraps() const noexcept;
};

// |G| along a one-parameter path of directions; `t` is the path coordinate
// in degrees (theta for a fixed-phi cut, arc angle for a great circle).
struct PatternCut {
    std::vector<double> t;
    std::vector<Direction> directions;
    std::vector<double> magnitude;
    bool normalized = false;
};

// |G| over transverse direction cosines (u, v) = (sin t cos p, sin t sin p);
// cells outside the unit disk are marked invisible and hold 0.
struct TransverseGrid {
    std::vector<double> u_axis;
    std::vector<double> v_axis;
    std::vector<double> magnitude;  // row-major in u
    std::vector<char> visible;
    bool normalized = false;

    std::size_t index(std::size_t iu, std::size_t iv) const noexcept { return iu * v_axis.size() + iv; }
    Direction direction(std::size_t iu, std::size_t iv) const;
};

// Great-circle angle between two directions, degrees in [0, 180].
double beamforming_error(const Direction& desired, const Direction& achieved) noexcept;

// Evenly spaced samples from start to stop inclusive; a range spanning a full
// turn or more is made half-open so the first sample is not repeated.
std::vector<double> angle_axis(AngleRange range, double step, bool periodic = false);

PatternGrid sample_pattern(const Lattice& lattice, std::span<const cd> weights,
                           const Direction& incident, AngleRange theta, AngleRange phi,
                           double theta_step, double phi_step, bool normalize = false);

// theta sweep in the vertical plane at azimuth phi_deg; negative theta
// stands for the opposite half plane.
PatternCut sample_theta_cut(const Lattice& lattice, std::span<const cd> weights,
                            const Direction& incident, double phi_deg, AngleRange theta,
                            double step, bool normalize = false);

// Directions cos(t) c + sin(t) e for the reflected unit vector c of `center`
// and a unit tangent e orthogonal to it.
PatternCut sample_great_circle_cut(const Lattice& lattice, std::span<const cd> weights,
                                   const Direction& incident, const Direction& center,
                                   const Vec3& tangent, AngleRange t, double step,
                                   bool normalize = false);

// Horizontal tangent (-sin p, cos p, 0), orthogonal to the vertical plane of d.
Vec3 azimuthal_tangent(const Direction& d) noexcept;

// Reflected-sense direction of a unit vector with non-negative z.
Direction direction_from_vector(const Vec3& v);

TransverseGrid sample_transverse_grid(const Lattice& lattice, std::span<const cd> weights,
                                      const Direction& incident, std::size_t points_per_axis,
                                      bool normalize = false);

struct LobeEstimate {
    Direction direction;
    double magnitude = 0.0;
    std::size_t cell = 0;  // sample index of the peak cell
};

// Peak of the lobe containing the sample nearest `desired`, found by
// hill-climbing from that sample and refined by a parabola through the peak
// and its neighbours along each axis.
LobeEstimate find_mainlobe(const PatternGrid& grid, const Direction& desired);
LobeEstimate find_mainlobe(const PatternCut& cut, const Direction& desired);
LobeEstimate find_mainlobe(const TransverseGrid& grid, const Direction& desired);

// Largest local maxima of the grid, strongest first. Peaks closer than
// min_separation_deg to a stronger one (including aliases of the same
// direction) are dropped.
std::vector<LobeEstimate> find_peaks(const PatternGrid& grid, std::size_t max_count,
                                     double min_separation_deg = 1.0);

// Continuous peak search in direction cosines starting at `desired`.
LobeEstimate locate_mainlobe(const Lattice& lattice, std::span<const cd> weights,
                             const Direction& incident, const Direction& desired);

// 20 log10(largest |G| outside the mainlobe regions / smallest mainlobe peak).
// Each mainlobe region is everything reachable from its peak along
// non-increasing |G|, i.e. the lobe down to its first nulls, plus every sample
// within exclusion_radius_deg of a mainlobe direction. Throws ArgumentError
// if nothing is left outside.
double sidelobe_level(const PatternGrid& grid, std::span<const Direction> mainlobes,
                      double exclusion_radius_deg = 0.0);
double sidelobe_level(const PatternCut& cut, std::span<const Direction> mainlobes,
                      double exclusion_radius_deg = 0.0);
double sidelobe_level(const TransverseGrid& grid, std::span<const Direction> mainlobes,
                      double exclusion_radius_deg = 0.0);

inline double sidelobe_level(const PatternCut& cut, const Direction& mainlobe,
                             double exclusion_radius_deg = 0.0) {
    return sidelobe_level(cut, std::span<const Direction>(&mainlobe, 1), exclusion_radius_deg);
}
inline double sidelobe_level(const PatternGrid& grid, const Direction& mainlobe,
                             double exclusion_radius_deg = 0.0) {
    return sidelobe_level(grid, std::span<const Direction>(&mainlobe, 1), exclusion_radius_deg);
}
inline double sidelobe_level(const TransverseGrid& grid, const Direction& mainlobe,
                             double exclusion_radius_deg = 0.0) {
    return sidelobe_level(grid, std::span<const Direction>(&mainlobe, 1), exclusion_radius_deg);
}

// Width in degrees of the path coordinate over which |G| stays at or above
// peak / sqrt(2), with linear interpolation at both crossings. Throws
// UnresolvedWidthError when a crossing falls outside the cut.
double beamwidth_3db(const PatternCut& cut, const Direction& mainlobe);

// 20 log10(element_count * |G(direction)|); -infinity when G vanishes.
double mainlobe_gain(const Lattice& lattice, std::span<const cd> weights, const Direction& incident,
                     const Direction& direction);

// ------------------------------------------------------------ grating lobes

inline constexpr double kLobeDistinctDeg = 0.5;

struct GratingLobe {
    Direction direction;
    int a = 0;
    int b = 0;
};

struct GratingLobePrediction {
    bool exists = false;
    std::optional<Direction> lobe_direction;
    std::optional<std::pair<int, int>> integer_pair;
    // Every distinct lobe found, one entry per (a, b) pair.
    std::vector<GratingLobe> lobes;
};

// Directions satisfying the 1-bit lobe condition for one integer pair, or
// nullopt when a or b is odd or A^2 + B^2 > 1. Both arcsine branches are
// returned; they are aliases of the same physical direction.
std::optional<std::pair<Direction, Direction>> grating_lobe_for_pair(LatticeKind kind,
                                                                       const Direction& incident,
                                                                       const Direction& mainlobe,
                                                                       double d_over_lambda, int a,
                                                                       int b);

// Enumerates even (a, b) up to the bounds that make |A|, |B| <= 1 reachable
// and reports lobes more than kLobeDistinctDeg away from the mainlobe. The
// reported lobe is the one with the smallest |a| + |b|.
GratingLobePrediction predict_grating_lobe(LatticeKind kind, const Direction& incident,
                                           const Direction& mainlobe, double d_over_lambda);

inline GratingLobePrediction predict_grating_lobe_rect(const Direction& incident,
                                                       const Direction& mainlobe,
                                                       double d_over_lambda) {
    return predict_grating_lobe(LatticeKind::Rectangular, incident, mainlobe, d_over_lambda);
}
inline GratingLobePrediction predict_grating_lobe_tri(const Direction& incident,
                                                      const Direction& mainlobe,
                                                      double d_over_lambda) {
    return predict_grating_lobe(LatticeKind::Triangular, incident, mainlobe, d_over_lambda);
}

} // namespace irs
