#pragma once

// Weight-selection algorithms. All objectives are unnormalized,
// |sum_i w_i z_i|; divide by the element count to obtain |G|.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "irs/array_model.hpp"

namespace irs {

// Describes the geometric partition that produced a solution.
//
// SeparatingLine: elements with arg(x_i) in [angle, angle + pi) take member 0
// of their set, the rest member 1, or the reverse when `flipped` is set. x_i is
// the swept point: z_i for a plain binary alphabet and the
// ((a_i - b_i) / 2) z_i transform for per-element sets. The line never passes
// through a swept point.
//
// RotatedRadialPartition: element i takes the member whose cone of the
// partition rotated by `angle` contains z_i; no z_i lies on a cone edge.
struct PartitionCertificate {
    enum class Kind { SeparatingLine, RotatedRadialPartition };
    Kind kind = Kind::SeparatingLine;
    double angle = 0.0;
    bool flipped = false;
    // member index chosen for each element
    std::vector<std::size_t> assignment;
};

struct SolveResult {
    WeightMatrix weights;
    double objective = 0.0;
    std::optional<PartitionCertificate> certificate;
    // distinct partitions evaluated by the sweep (or configurations enumerated
    // by brute force)
    std::size_t partitions_examined = 0;
};

// Radial partition of the plane induced by a global alphabet:
// A_i = {z : Re((a_i - a_j) z) > 0 for all j != i}. Only members on the strict
// convex hull of the alphabet own a nonempty cone.
class RadialPartition {
public:
    explicit RadialPartition(const GlobalSet& alphabet);

    struct Cone {
        std::size_t member;  // index into the alphabet
        double lower_edge;   // in [0, 2 pi)
        double upper_edge;   // lower_edge < upper_edge, may exceed 2 pi
    };

    // Ordered by lower_edge; cone i+1 starts where cone i ends.
    const std::vector<Cone>& cones() const noexcept { return cones_; }

    // Edge angles sorted ascending in [0, 2 pi).
    std::vector<double> edge_angles() const;

    // Index into cones() containing the direction angle `arg` (radians).
    std::size_t cone_at(double arg) const noexcept;

    // Member owning z, or nullopt when z lies on an edge within `tol`
    // (tested with the defining half-plane inequalities).
    std::optional<std::size_t> member_of(cd z, double tol = 0.0) const;

private:
    GlobalSet alphabet_;
    std::vector<Cone> cones_;
};

// Unit-modulus multipliers (alpha_2, ..., alpha_l) for multi-beam co-phasing.
class CoPhaseTuple {
public:
    explicit CoPhaseTuple(std::vector<cd> alphas);
    const std::vector<cd>& alphas() const noexcept { return alphas_; }
    std::size_t size() const noexcept { return alphas_.size(); }

private:
    std::vector<cd> alphas_;
};

// Quantized conjugate-phase baseline. With no alphabet the weight is +1 when
// arg conj(z_i) lies in [-pi/2, pi/2) and -1 otherwise; with an alphabet each
// element takes the member nearest to conj(z_i)/|z_i| (lowest index on ties).
SolveResult threshold_solve(std::span<const cd> z);
SolveResult threshold_solve(std::span<const cd> z, const WeightAlphabet& alphabet);

// Optimal +-1 weights. Throws ArgumentError on empty input or zero entries.
SolveResult opa_solve(std::span<const cd> z);

// Optimal weights from per-element pairs {a_i, b_i}.
SolveResult gopa_solve(std::span<const cd> z, const PerElementBinary& sets);

// Optimal weights from a global k-ary alphabet via a rotating radial partition.
SolveResult kopa_solve(std::span<const cd> z, const GlobalSet& alphabet);

inline constexpr std::uint64_t kDefaultBruteForceCap = std::uint64_t{1} << 24;

// Exhaustive search; ties resolved by the lexicographically first member
// index tuple. Throws CostCapError when k^n exceeds `cap`.
SolveResult brute_force_solve(std::span<const cd> z, const WeightAlphabet& alphabet,
                              std::uint64_t cap = kDefaultBruteForceCap);

// Reapplies a certificate to z and returns the member index per element.
std::vector<std::size_t> assignment_from_certificate(std::span<const cd> z,
                                                     const WeightAlphabet& alphabet,
                                                     const PartitionCertificate& certificate);

// Members selected by an assignment.
std::vector<cd> weights_from_assignment(const WeightAlphabet& alphabet,
                                        std::span<const std::size_t> assignment);

// |sum_i w_i z_i|
double objective_of(std::span<const cd> weights, std::span<const cd> z);

struct MultibeamOptions {
    std::size_t max_iters = 50;
    double tol = 1e-9;
};

struct IterateRecord {
    double c = 0.0;  // max_w |G_1 + sum alpha_j G_j| at the iterate's alphas
    double d = 0.0;  // sum_j |G_j| at the iterate's weights
};

struct SeedTrace {
    CoPhaseTuple seed;
    std::vector<IterateRecord> history;
    std::vector<cd> weights;
    bool converged = false;
    double beam_sum = 0.0;  // final sum_j |G_j|
};

struct MultibeamResult {
    SolveResult best;  // objective is the unnormalized sum_j |G_j|
    std::size_t best_seed = 0;
    std::vector<SeedTrace> traces;
};

// Alternating co-phasing / inner optimal solve for several beams.
MultibeamResult multibeam_solve(std::span<const std::vector<cd>> zs, const WeightAlphabet& alphabet,
                                std::span<const CoPhaseTuple> seeds, MultibeamOptions options = {});

// Uniform phase grid {e^{j 2 pi k / points}, k = 1..points}^(beams - 1).
std::vector<CoPhaseTuple> default_cophase_seeds(std::size_t beams, std::size_t points = 30);

namespace detail {

// Sweep cores shared with the multi-beam inner solver. Entries that are
// exactly zero or have |z_i| < zero_tol are skipped and receive member 0.
struct BinarySweep {
    std::vector<std::size_t> assignment;  // 0 -> +1, 1 -> -1
    double line_angle = 0.0;
    bool flipped = false;
    std::size_t partitions = 0;
};
BinarySweep opa_sweep(std::span<const cd> z, double zero_tol);

struct RadialSweep {
    std::vector<std::size_t> assignment;
    double angle = 0.0;
    std::size_t partitions = 0;
};
RadialSweep kopa_sweep(std::span<const cd> z, const GlobalSet& alphabet, double zero_tol);

// gOPA on possibly-zero inputs; returns member indices (0 -> a_i, 1 -> b_i).
struct GeneralizedSweep {
    BinarySweep line;
    bool synthetic_dropped = false;
};
GeneralizedSweep gopa_sweep(std::span<const cd> z, const PerElementBinary& sets, double zero_tol);

} // namespace detail

} // namespace irs
