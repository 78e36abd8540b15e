#pragma once

// Fixed baseline phases that turn the 1-bit set of an element into
// {e^{j psi}, -e^{j psi}}, solved with the per-element binary solver.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "irs/array_model.hpp"
#include "irs/solvers.hpp"

namespace irs {

struct PrephaseConfig {
    std::vector<double> prephases;        // radians
    std::vector<std::size_t> assignment;  // prephase index per element, lattice order
    std::optional<double> kappa;          // set by the random two-phase scheme
    std::uint64_t rng_seed = 0;

    // Throws ArgumentError unless every element has a valid prephase index.
    void validate(std::size_t element_count) const;
    std::size_t count_with(std::size_t prephase_index) const;
};

// Uniform draw in [0, bound) by rejection from the raw 64-bit stream, so the
// sequence does not depend on the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// prephases {0, pi/2}; exactly round(kappa * n) elements, picked by a seeded
// Fisher-Yates shuffle, get pi/2.
PrephaseConfig build_random_binary_prephase(const Lattice& lattice, double kappa,
                                            std::uint64_t rng_seed);

PerElementBinary prephase_alphabets(const PrephaseConfig& config);

SolveResult prephase_solve(const Lattice& lattice, const Direction& incident, const Direction& target,
                           const PrephaseConfig& config);

// {"prephases_deg": [...], "assignment": {"m,n": index, ...}, "kappa", "rng_seed"}
std::string prephase_to_json(const Lattice& lattice, const PrephaseConfig& config);
// Rejects unknown keys, unknown elements and incomplete coverage.
PrephaseConfig prephase_from_json(const Lattice& lattice, const std::string& text);

} // namespace irs
