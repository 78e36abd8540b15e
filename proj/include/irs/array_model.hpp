#pragma once

// Geometry of a reflecting surface, steering phases and the normalized array
// factor. Angles are radians everywhere in this header; degree conversion is
// done once at the I/O boundary (Direction::from_degrees / theta_deg()).

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace irs {

using cd = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) noexcept { return rad * (180.0 / kPi); }

// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle) noexcept;

// e^{j*angle}, exact for integer multiples of pi/2.
cd unit_phasor(double angle) noexcept;

// Angle pair in the forward-scatter-alignment convention.
// theta in [-pi/2, pi/2], phi in [0, 2*pi). (-theta, phi) and
// (theta, phi + pi) describe the same unit vector.
class Direction {
public:
    Direction() = default;

    // Throws ArgumentError when |theta| exceeds 90 degrees; phi is wrapped.
    static Direction from_radians(double theta, double phi);
    static Direction from_degrees(double theta_deg, double phi_deg);

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }
    double theta_deg() const noexcept { return rad2deg(theta_); }
    double phi_deg() const noexcept { return rad2deg(phi_); }

    // Representative with theta >= 0.
    Direction canonical() const noexcept;

    // Both forms are compared after canonicalization.
    friend bool operator==(const Direction& a, const Direction& b) noexcept;

private:
    Direction(double theta, double phi) noexcept : theta_(theta), phi_(phi) {}
    double theta_ = 0.0;
    double phi_ = 0.0;
};

enum class Sense { Incident, Reflected };

// (sin t cos p, sin t sin p, +-cos t); the z component is negative for an
// incident wavevector and positive for a reflected one.
Vec3 unit_vector(const Direction& dir, Sense sense) noexcept;

// Great-circle angle between two reflected-sense directions, radians.
double angular_distance(const Direction& a, const Direction& b) noexcept;

enum class LatticeKind { Rectangular, Triangular };

struct ElementIndex {
    int m = 0;
    int n = 0;
    friend bool operator==(const ElementIndex&, const ElementIndex&) = default;
};

// Element position in units of the spacing d, in the surface plane.
struct ElementPosition {
    double x = 0.0;
    double y = 0.0;
};

// Surface geometry. Rectangular elements are {1..M} x {1..N} ordered
// row-major by (m, n). Triangular elements are
// {(m, n) : 0 <= n <= N, -floor(n/2) <= m <= M - ceil(n/2)} ordered by n
// then m, placed at m*d1 + n*d2 with d1 = d(1, 0), d2 = d(1/2, sqrt(3)/2).
class Lattice {
public:
    Lattice(LatticeKind kind, int m_count, int n_count, double spacing_over_lambda = 0.5);

    static Lattice rectangular(int m_count, int n_count, double spacing_over_lambda = 0.5) {
        return {LatticeKind::Rectangular, m_count, n_count, spacing_over_lambda};
    }
    static Lattice triangular(int m_count, int n_count, double spacing_over_lambda = 0.5) {
        return {LatticeKind::Triangular, m_count, n_count, spacing_over_lambda};
    }

    LatticeKind kind() const noexcept { return kind_; }
    int m_count() const noexcept { return m_count_; }
    int n_count() const noexcept { return n_count_; }
    double spacing_over_lambda() const noexcept { return spacing_; }

    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<ElementIndex>& elements() const noexcept { return elements_; }
    const std::vector<ElementPosition>& positions() const noexcept { return positions_; }

    bool contains(ElementIndex e) const noexcept;
    // Linear ordinal of an element; throws IndexError when outside the set.
    std::size_t ordinal(ElementIndex e) const;

    ElementPosition position(ElementIndex e) const;

    // Runs of consecutive ordinals [begin, end) whose positions advance by a
    // fixed unit step along x (dx = 1) or y (dy = 1) from (x0, y0).
    struct Line {
        std::size_t begin;
        std::size_t end;
        double x0;
        double y0;
        bool along_x;
    };
    const std::vector<Line>& lines() const noexcept { return lines_; }

private:
    LatticeKind kind_;
    int m_count_;
    int n_count_;
    double spacing_;
    std::vector<ElementIndex> elements_;
    std::vector<ElementPosition> positions_;
    std::vector<Line> lines_;
};

// Global k-ary alphabet {a_1, ..., a_k}; k >= 2, members pairwise distinct.
class GlobalSet {
public:
    explicit GlobalSet(std::vector<cd> members);

    // {e^{j 2 pi i / 2^bits} : i = 0 .. 2^bits - 1}; bits = 1 gives {1, -1}.
    static GlobalSet phase_shift_bits(int bits);

    const std::vector<cd>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    const cd& operator[](std::size_t i) const noexcept { return members_[i]; }

private:
    std::vector<cd> members_;
};

// One {a_i, b_i} pair per element, a_i != b_i.
class PerElementBinary {
public:
    explicit PerElementBinary(std::vector<std::pair<cd, cd>> sets);

    // The same pair for every element.
    static PerElementBinary uniform(std::size_t count, cd a, cd b);

    const std::vector<std::pair<cd, cd>>& sets() const noexcept { return sets_; }
    std::size_t size() const noexcept { return sets_.size(); }
    const std::pair<cd, cd>& operator[](std::size_t i) const noexcept { return sets_[i]; }

private:
    std::vector<std::pair<cd, cd>> sets_;
};

using WeightAlphabet = std::variant<GlobalSet, PerElementBinary>;

// True when w equals one of the members allowed for element i.
bool alphabet_allows(const WeightAlphabet& alphabet, std::size_t i, cd w) noexcept;

// Per-element complex weights in lattice order; every entry is checked against
// the alphabet on construction.
class WeightMatrix {
public:
    WeightMatrix(std::vector<cd> weights, const WeightAlphabet& alphabet);

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const cd> values() const noexcept { return weights_; }
    const cd& operator[](std::size_t i) const noexcept { return weights_[i]; }

private:
    std::vector<cd> weights_;
};

// z_i = e^{j phi_i} for one (incident, target) scenario, in lattice order.
class SteeringVector {
public:
    explicit SteeringVector(std::vector<cd> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const cd> values() const noexcept { return entries_; }
    const cd& operator[](std::size_t i) const noexcept { return entries_[i]; }

private:
    std::vector<cd> entries_;
};

// phi_i = (2 pi / lambda) r_i^T (-u(theta, phi) + u(pi - theta_in, phi_in)).
double steering_phase(const Lattice& lattice, const Direction& incident, const Direction& observe,
                      ElementIndex element);

SteeringVector steering_vector(const Lattice& lattice, const Direction& incident,
                               const Direction& target);

// (1 / element_count) * sum_i w_i e^{j phi_i(observe)}.
cd array_factor(const Lattice& lattice, std::span<const cd> weights, const Direction& incident,
                const Direction& observe);
cd array_factor(const Lattice& lattice, const WeightMatrix& weights, const Direction& incident,
                const Direction& observe);

// Fast repeated evaluation of the array factor for fixed weights and
// incidence. Accepts observation directions as transverse direction cosines
// (u, v) = (sin t cos p, sin t sin p); phasors along a row are generated by
// recurrence, so results agree with array_factor() to ~1e-13.
class ArrayFactorEvaluator {
public:
    ArrayFactorEvaluator(const Lattice& lattice, std::span<const cd> weights,
                         const Direction& incident);

    cd operator()(const Direction& observe) const;
    cd at_direction_cosines(double u, double v) const;

    // |G| over the outer product u_axis x v_axis, row-major in u; cells with
    // u^2 + v^2 > 1 are still evaluated (callers mask them).
    std::vector<double> magnitude_grid(std::span<const double> u_axis,
                                       std::span<const double> v_axis) const;

    std::size_t element_count() const noexcept { return weights_.size(); }

private:
    std::vector<Lattice::Line> lines_;
    std::vector<cd> weights_;
    double k_;  // 2 pi d / lambda
    double u_in_;
    double v_in_;
};

} // namespace irs
