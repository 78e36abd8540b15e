#include <cmath>
#include <sstream>

#include "irs/solvers.hpp"
#include "sweep_util.hpp"

namespace irs {

CoPhaseTuple::CoPhaseTuple(std::vector<cd> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw ArgumentError("co-phasing tuple must be nonempty");
    for (const cd& a : alphas_) {
        if (std::abs(std::abs(a) - 1.0) > 1e-12) {
            throw ArgumentError("co-phasing multipliers must have unit modulus");
        }
    }
}

double objective_of(std::span<const cd> weights, std::span<const cd> z) {
    if (weights.size() != z.size()) throw DimensionError("weights and input differ in length");
    cd sum{0.0, 0.0};
    for (std::size_t i = 0; i < z.size(); ++i) sum += weights[i] * z[i];
    return std::abs(sum);
}

std::vector<cd> weights_from_assignment(const WeightAlphabet& alphabet,
                                        std::span<const std::size_t> assignment) {
    std::vector<cd> w(assignment.size());
    if (const auto* global = std::get_if<GlobalSet>(&alphabet)) {
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] >= global->size()) throw IndexError("member index outside the alphabet");
            w[i] = (*global)[assignment[i]];
        }
        return w;
    }
    const auto& sets = std::get<PerElementBinary>(alphabet);
    if (sets.size() != assignment.size()) {
        throw DimensionError("per-element alphabet size differs from assignment length");
    }
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] > 1) throw IndexError("member index outside the element's pair");
        w[i] = assignment[i] == 0 ? sets[i].first : sets[i].second;
    }
    return w;
}

std::vector<std::size_t> assignment_from_certificate(std::span<const cd> z,
                                                     const WeightAlphabet& alphabet,
                                                     const PartitionCertificate& certificate) {
    std::vector<std::size_t> out(z.size(), 0);
    if (certificate.kind == PartitionCertificate::Kind::RotatedRadialPartition) {
        const auto* global = std::get_if<GlobalSet>(&alphabet);
        if (global == nullptr) throw ArgumentError("radial certificates need a global alphabet");
        const RadialPartition partition(*global);
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] == cd{0.0, 0.0}) continue;
            out[i] = partition.cones()[partition.cone_at(std::arg(z[i]) - certificate.angle)].member;
        }
        return out;
    }

    std::vector<cd> x(z.begin(), z.end());
    if (const auto* sets = std::get_if<PerElementBinary>(&alphabet)) {
        if (sets->size() != z.size()) throw DimensionError("per-element alphabet size differs");
        for (std::size_t i = 0; i < z.size(); ++i) {
            x[i] = 0.5 * ((*sets)[i].first - (*sets)[i].second) * z[i];
        }
    } else if (std::get<GlobalSet>(alphabet).size() != 2) {
        throw ArgumentError("separating-line certificates need a binary alphabet");
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (x[i] == cd{0.0, 0.0}) continue;
        const bool in = wrap_two_pi(detail::sweep_arg(x[i]) - certificate.angle) < kPi;
        out[i] = (in != certificate.flipped) ? 0 : 1;
    }
    return out;
}

} // namespace irs
