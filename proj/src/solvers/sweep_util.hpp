#pragma once

#include <cmath>
#include <span>

#include "irs/array_model.hpp"
#include "irs/errors.hpp"

namespace irs::detail {

// Arguments closer than this are treated as one sweep event.
inline constexpr double kAngleMergeTol = 1e-12;

inline bool skipped(cd x, double zero_tol) noexcept {
    return x == cd{0.0, 0.0} || std::abs(x) < zero_tol;
}

// arg(x) in [0, 2 pi), with values within kAngleMergeTol below 2 pi folded to 0
// so that they group with arguments just above 0.
inline double sweep_arg(cd x) noexcept {
    const double a = wrap_two_pi(std::arg(x));
    return kTwoPi - a < kAngleMergeTol ? 0.0 : a;
}

inline void require_nonzero(std::span<const cd> z, const char* who) {
    if (z.empty()) throw ArgumentError(std::string(who) + ": empty input");
    for (const cd& v : z) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ArgumentError(std::string(who) + ": non-finite input");
        }
        if (v == cd{0.0, 0.0}) throw ArgumentError(std::string(who) + ": zero entry");
    }
}

// Binary alphabet {+1, -1} used for plain OPA results.
inline const GlobalSet& plus_minus_one() {
    static const GlobalSet set({cd{1.0, 0.0}, cd{-1.0, 0.0}});
    return set;
}

} // namespace irs::detail
