#include "irs/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "irs/errors.hpp"

namespace irs {

namespace {

constexpr double kThetaSlack = 1e-12;
constexpr double kMemberTol = 1e-12;

bool same_member(cd a, cd b) noexcept {
    return std::abs(a - b) <= kMemberTol * std::max({1.0, std::abs(a), std::abs(b)});
}

int floor_half(int n) { return n / 2; }
int ceil_half(int n) { return (n + 1) / 2; }

} // namespace

double wrap_two_pi(double angle) noexcept {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

cd unit_phasor(double angle) noexcept {
    const double quarters = angle / (kPi / 2.0);
    const double nearest = std::round(quarters);
    if (std::abs(quarters - nearest) < 1e-12) {
        switch (((static_cast<long long>(nearest) % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------- Direction

Direction Direction::from_radians(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw ArgumentError("direction angles must be finite");
    }
    if (std::abs(theta) > kPi / 2.0 + kThetaSlack) {
        std::ostringstream os;
        os << "theta = " << rad2deg(theta) << " deg outside [-90, 90]";
        throw ArgumentError(os.str());
    }
    theta = std::clamp(theta, -kPi / 2.0, kPi / 2.0);
    return Direction(theta, wrap_two_pi(phi));
}

Direction Direction::from_degrees(double theta_deg, double phi_deg) {
    return from_radians(deg2rad(theta_deg), deg2rad(phi_deg));
}

Direction Direction::canonical() const noexcept {
    if (theta_ == 0.0) return Direction(0.0, 0.0);
    if (theta_ < 0.0) return Direction(-theta_, wrap_two_pi(phi_ + kPi));
    return *this;
}

bool operator==(const Direction& a, const Direction& b) noexcept {
    const Direction ca = a.canonical();
    const Direction cb = b.canonical();
    return ca.theta_ == cb.theta_ && ca.phi_ == cb.phi_;
}

Vec3 unit_vector(const Direction& dir, Sense sense) noexcept {
    const double st = std::sin(dir.theta());
    const double ct = std::cos(dir.theta());
    const double z = sense == Sense::Incident ? -ct : ct;
    return {st * std::cos(dir.phi()), st * std::sin(dir.phi()), z};
}

double angular_distance(const Direction& a, const Direction& b) noexcept {
    const Vec3 p = unit_vector(a, Sense::Reflected);
    const Vec3 q = unit_vector(b, Sense::Reflected);
    const double dot = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    const double cx = p[1] * q[2] - p[2] * q[1];
    const double cy = p[2] * q[0] - p[0] * q[2];
    const double cz = p[0] * q[1] - p[1] * q[0];
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

// ------------------------------------------------------------------ Lattice

Lattice::Lattice(LatticeKind kind, int m_count, int n_count, double spacing_over_lambda)
    : kind_(kind), m_count_(m_count), n_count_(n_count), spacing_(spacing_over_lambda) {
    if (m_count < 1 || n_count < 1) {
        throw ArgumentError("lattice dimensions must be positive");
    }
    if (!(spacing_over_lambda > 0.0) || !std::isfinite(spacing_over_lambda)) {
        throw ArgumentError("spacing_over_lambda must be a positive finite number");
    }

    if (kind == LatticeKind::Rectangular) {
        elements_.reserve(static_cast<std::size_t>(m_count) * n_count);
        for (int m = 1; m <= m_count; ++m) {
            const std::size_t begin = elements_.size();
            for (int n = 1; n <= n_count; ++n) {
                elements_.push_back({m, n});
                positions_.push_back({static_cast<double>(m), static_cast<double>(n)});
            }
            lines_.push_back({begin, elements_.size(), static_cast<double>(m), 1.0, false});
        }
    } else {
        const double row_height = std::sqrt(3.0) / 2.0;
        for (int n = 0; n <= n_count; ++n) {
            const std::size_t begin = elements_.size();
            const int lo = -floor_half(n);
            const int hi = m_count - ceil_half(n);
            for (int m = lo; m <= hi; ++m) {
                elements_.push_back({m, n});
                positions_.push_back({m + 0.5 * n, row_height * n});
            }
            lines_.push_back({begin, elements_.size(), lo + 0.5 * n, row_height * n, true});
        }
    }
}

bool Lattice::contains(ElementIndex e) const noexcept {
    if (kind_ == LatticeKind::Rectangular) {
        return e.m >= 1 && e.m <= m_count_ && e.n >= 1 && e.n <= n_count_;
    }
    return e.n >= 0 && e.n <= n_count_ && e.m >= -floor_half(e.n) && e.m <= m_count_ - ceil_half(e.n);
}

std::size_t Lattice::ordinal(ElementIndex e) const {
    if (!contains(e)) {
        std::ostringstream os;
        os << "element (" << e.m << ", " << e.n << ") is not part of the lattice";
        throw IndexError(os.str());
    }
    if (kind_ == LatticeKind::Rectangular) {
        return static_cast<std::size_t>(e.m - 1) * n_count_ + static_cast<std::size_t>(e.n - 1);
    }
    const Line& line = lines_[static_cast<std::size_t>(e.n)];
    return line.begin + static_cast<std::size_t>(e.m + floor_half(e.n));
}

ElementPosition Lattice::position(ElementIndex e) const { return positions_[ordinal(e)]; }

// ----------------------------------------------------------------- Alphabets

GlobalSet::GlobalSet(std::vector<cd> members) : members_(std::move(members)) {
    if (members_.size() < 2) throw ArgumentError("alphabet needs at least two members");
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (!std::isfinite(members_[i].real()) || !std::isfinite(members_[i].imag())) {
            throw ArgumentError("alphabet members must be finite");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (same_member(members_[i], members_[j])) {
                throw ArgumentError("alphabet members must be distinct");
            }
        }
    }
}

GlobalSet GlobalSet::phase_shift_bits(int bits) {
    if (bits < 1 || bits > 8) throw ArgumentError("bits must lie in [1, 8]");
    const std::size_t k = std::size_t{1} << bits;
    std::vector<cd> members;
    members.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        members.push_back(unit_phasor(kTwoPi * static_cast<double>(i) / static_cast<double>(k)));
    }
    return GlobalSet(std::move(members));
}

PerElementBinary::PerElementBinary(std::vector<std::pair<cd, cd>> sets) : sets_(std::move(sets)) {
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        if (same_member(sets_[i].first, sets_[i].second)) {
            std::ostringstream os;
            os << "element " << i << " has a_i == b_i";
            throw ArgumentError(os.str());
        }
    }
}

PerElementBinary PerElementBinary::uniform(std::size_t count, cd a, cd b) {
    return PerElementBinary(std::vector<std::pair<cd, cd>>(count, {a, b}));
}

bool alphabet_allows(const WeightAlphabet& alphabet, std::size_t i, cd w) noexcept {
    if (const auto* global = std::get_if<GlobalSet>(&alphabet)) {
        return std::any_of(global->members().begin(), global->members().end(),
                           [&](cd a) { return same_member(a, w); });
    }
    const auto& sets = std::get<PerElementBinary>(alphabet);
    if (i >= sets.size()) return false;
    return same_member(sets[i].first, w) || same_member(sets[i].second, w);
}

WeightMatrix::WeightMatrix(std::vector<cd> weights, const WeightAlphabet& alphabet)
    : weights_(std::move(weights)) {
    if (const auto* sets = std::get_if<PerElementBinary>(&alphabet)) {
        if (sets->size() != weights_.size()) {
            throw DimensionError("per-element alphabet size differs from weight count");
        }
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!alphabet_allows(alphabet, i, weights_[i])) {
            std::ostringstream os;
            os << "weight " << i << " = (" << weights_[i].real() << ", " << weights_[i].imag()
               << ") is not in the element's alphabet";
            throw ArgumentError(os.str());
        }
    }
}

SteeringVector::SteeringVector(std::vector<cd> entries) : entries_(std::move(entries)) {
    for (const cd& z : entries_) {
        if (std::abs(std::abs(z) - 1.0) > 1e-12) {
            throw ArgumentError("steering entries must have unit modulus");
        }
    }
}

// ------------------------------------------------------------ Steering/AF

namespace {

struct Transverse {
    double u;
    double v;
};

// Transverse components of u(pi - theta_in, phi_in).
Transverse incident_transverse(const Direction& incident) {
    const Vec3 k = unit_vector(incident, Sense::Incident);
    return {k[0], k[1]};
}

Transverse observe_transverse(const Direction& observe) {
    const Vec3 k = unit_vector(observe, Sense::Reflected);
    return {k[0], k[1]};
}

} // namespace

double steering_phase(const Lattice& lattice, const Direction& incident, const Direction& observe,
                      ElementIndex element) {
    const ElementPosition r = lattice.position(element);
    const Transverse in = incident_transverse(incident);
    const Transverse out = observe_transverse(observe);
    const double k = kTwoPi * lattice.spacing_over_lambda();
    return k * (r.x * (in.u - out.u) + r.y * (in.v - out.v));
}

SteeringVector steering_vector(const Lattice& lattice, const Direction& incident,
                               const Direction& target) {
    const Transverse in = incident_transverse(incident);
    const Transverse out = observe_transverse(target);
    const double k = kTwoPi * lattice.spacing_over_lambda();
    std::vector<cd> z;
    z.reserve(lattice.size());
    for (const ElementPosition& r : lattice.positions()) {
        const double phase = k * (r.x * (in.u - out.u) + r.y * (in.v - out.v));
        z.emplace_back(std::cos(phase), std::sin(phase));
    }
    return SteeringVector(std::move(z));
}

cd array_factor(const Lattice& lattice, std::span<const cd> weights, const Direction& incident,
                const Direction& observe) {
    if (weights.size() != lattice.size()) {
        std::ostringstream os;
        os << "weight count " << weights.size() << " differs from lattice size " << lattice.size();
        throw DimensionError(os.str());
    }
    const Transverse in = incident_transverse(incident);
    const Transverse out = observe_transverse(observe);
    const double k = kTwoPi * lattice.spacing_over_lambda();
    cd sum{0.0, 0.0};
    const auto& pos = lattice.positions();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double phase = k * (pos[i].x * (in.u - out.u) + pos[i].y * (in.v - out.v));
        sum += weights[i] * cd(std::cos(phase), std::sin(phase));
    }
    return sum / static_cast<double>(lattice.size());
}

cd array_factor(const Lattice& lattice, const WeightMatrix& weights, const Direction& incident,
                const Direction& observe) {
    return array_factor(lattice, weights.values(), incident, observe);
}

// ------------------------------------------------------ ArrayFactorEvaluator

ArrayFactorEvaluator::ArrayFactorEvaluator(const Lattice& lattice, std::span<const cd> weights,
                                           const Direction& incident)
    : lines_(lattice.lines()),
      weights_(weights.begin(), weights.end()),
      k_(kTwoPi * lattice.spacing_over_lambda()) {
    if (weights.size() != lattice.size()) {
        throw DimensionError("weight count differs from lattice size");
    }
    const Transverse in = incident_transverse(incident);
    u_in_ = in.u;
    v_in_ = in.v;
}

cd ArrayFactorEvaluator::operator()(const Direction& observe) const {
    const Transverse out = observe_transverse(observe);
    return at_direction_cosines(out.u, out.v);
}

cd ArrayFactorEvaluator::at_direction_cosines(double u, double v) const {
    const double du = u_in_ - u;
    const double dv = v_in_ - v;
    const cd step_x{std::cos(k_ * du), std::sin(k_ * du)};
    const cd step_y{std::cos(k_ * dv), std::sin(k_ * dv)};
    cd sum{0.0, 0.0};
    for (const auto& line : lines_) {
        const double start = k_ * (line.x0 * du + line.y0 * dv);
        cd phasor{std::cos(start), std::sin(start)};
        const cd step = line.along_x ? step_x : step_y;
        cd partial{0.0, 0.0};
        for (std::size_t i = line.begin; i < line.end; ++i) {
            partial += weights_[i] * phasor;
            phasor *= step;
        }
        sum += partial;
    }
    return sum / static_cast<double>(weights_.size());
}

std::vector<double> ArrayFactorEvaluator::magnitude_grid(std::span<const double> u_axis,
                                                         std::span<const double> v_axis) const {
    const std::size_t nu = u_axis.size();
    const std::size_t nv = v_axis.size();
    std::vector<cd> acc(nu * nv, cd{0.0, 0.0});
    std::vector<cd> inner;
    std::vector<cd> outer;

    for (const auto& line : lines_) {
        // The inner sum runs along the line's stepping axis; the line's fixed
        // coordinate contributes a separable outer phase.
        const auto inner_axis = line.along_x ? u_axis : v_axis;
        const auto outer_axis = line.along_x ? v_axis : u_axis;
        const double inner_in = line.along_x ? u_in_ : v_in_;
        const double outer_in = line.along_x ? v_in_ : u_in_;
        const double inner_start = line.along_x ? line.x0 : line.y0;
        const double outer_coord = line.along_x ? line.y0 : line.x0;

        inner.assign(inner_axis.size(), cd{0.0, 0.0});
        for (std::size_t a = 0; a < inner_axis.size(); ++a) {
            const double d = inner_in - inner_axis[a];
            const double start = k_ * inner_start * d;
            cd phasor{std::cos(start), std::sin(start)};
            const cd step{std::cos(k_ * d), std::sin(k_ * d)};
            cd partial{0.0, 0.0};
            for (std::size_t i = line.begin; i < line.end; ++i) {
                partial += weights_[i] * phasor;
                phasor *= step;
            }
            inner[a] = partial;
        }
        outer.resize(outer_axis.size());
        for (std::size_t b = 0; b < outer_axis.size(); ++b) {
            const double ph = k_ * outer_coord * (outer_in - outer_axis[b]);
            outer[b] = {std::cos(ph), std::sin(ph)};
        }
        if (line.along_x) {
            for (std::size_t iu = 0; iu < nu; ++iu) {
                for (std::size_t iv = 0; iv < nv; ++iv) acc[iu * nv + iv] += inner[iu] * outer[iv];
            }
        } else {
            for (std::size_t iu = 0; iu < nu; ++iu) {
                const cd o = outer[iu];
                for (std::size_t iv = 0; iv < nv; ++iv) acc[iu * nv + iv] += o * inner[iv];
            }
        }
    }

    std::vector<double> mag(nu * nv);
    const double norm = static_cast<double>(weights_.size());
    for (std::size_t i = 0; i < acc.size(); ++i) mag[i] = std::abs(acc[i]) / norm;
    return mag;
}

} // namespace irs
