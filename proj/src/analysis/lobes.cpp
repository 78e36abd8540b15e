#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "irs/analysis.hpp"
#include "irs/errors.hpp"

namespace irs {

namespace {

// Neighbourhood and geometry of one sampled pattern, so the lobe searches
// below are written once for grids, cuts and direction-cosine maps.
struct Samples {
    const std::vector<double>& mag;
    const std::vector<char>* visible = nullptr;
    std::function<void(std::size_t, std::vector<std::size_t>&)> neighbours;
    std::function<Direction(std::size_t)> direction;

    bool usable(std::size_t i) const { return visible == nullptr || (*visible)[i] != 0; }
};

std::size_t climb(const Samples& s, std::size_t start) {
    std::vector<std::size_t> nb;
    std::size_t cur = start;
    while (true) {
        std::size_t best = cur;
        s.neighbours(cur, nb);
        for (std::size_t j : nb) {
            if (s.usable(j) && s.mag[j] > s.mag[best]) best = j;
        }
        if (best == cur) return cur;
        cur = best;
    }
}

std::size_t nearest_sample(const Samples& s, const Direction& d) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.mag.size(); ++i) {
        if (!s.usable(i)) continue;
        const double dist = angular_distance(s.direction(i), d);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

double sidelobe_core(const Samples& s, const std::vector<std::vector<std::size_t>>& seeds,
                     std::span<const Direction> mainlobes, double radius_deg) {
    if (mainlobes.empty()) throw ArgumentError("at least one mainlobe is required");
    std::vector<char> excluded(s.mag.size(), 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> nb;
    double reference = std::numeric_limits<double>::infinity();
    for (const auto& lobe_seeds : seeds) {
        double peak_mag = 0.0;
        for (std::size_t seed : lobe_seeds) {
            const std::size_t peak = climb(s, seed);
            peak_mag = std::max(peak_mag, s.mag[peak]);
            // Rounding noise on flat ridges must not stop the flood.
            const double slack = 1e-12 * s.mag[peak];
            // Flood downhill from the peak; the region stops at the first
            // samples where the pattern starts rising again.
            stack.assign(1, peak);
            excluded[peak] = 1;
            while (!stack.empty()) {
                const std::size_t i = stack.back();
                stack.pop_back();
                s.neighbours(i, nb);
                for (std::size_t j : nb) {
                    if (!excluded[j] && s.usable(j) && s.mag[j] <= s.mag[i] + slack) {
                        excluded[j] = 1;
                        stack.push_back(j);
                    }
                }
            }
        }
        reference = std::min(reference, peak_mag);
    }
    if (radius_deg > 0.0) {
        const double radius = deg2rad(radius_deg);
        for (std::size_t i = 0; i < s.mag.size(); ++i) {
            if (excluded[i] || !s.usable(i)) continue;
            const Direction d = s.direction(i);
            for (const Direction& m : mainlobes) {
                if (angular_distance(d, m) <= radius) {
                    excluded[i] = 1;
                    break;
                }
            }
        }
    }
    double outside = -1.0;
    for (std::size_t i = 0; i < s.mag.size(); ++i) {
        if (!excluded[i] && s.usable(i)) outside = std::max(outside, s.mag[i]);
    }
    if (outside < 0.0) throw ArgumentError("the mainlobe exclusion covers the whole pattern");
    if (!(reference > 0.0)) throw NumericError("mainlobe magnitude is zero");
    if (outside == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(outside / reference);
}

// Vertex offset of the parabola through (-1, l), (0, c), (1, r), in [-0.5, 0.5].
double parabola_offset(double l, double c, double r) {
    const double denom = l - 2.0 * c + r;
    if (!(denom < 0.0)) return 0.0;
    return std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
}

double parabola_peak(double l, double c, double r, double p) { return c - 0.25 * (l - r) * p; }

// ------------------------------------------------------------- grid views

Samples grid_samples(const PatternGrid& g) {
    const std::size_t nt = g.theta_axis.size();
    const std::size_t np = g.phi_axis.size();
    const bool wraps = g.phi_wraps();
    Samples s{g.magnitude, nullptr, {}, {}};
    s.neighbours = [nt, np, wraps](std::size_t i, std::vector<std::size_t>& out) {
        out.clear();
        const long it = static_cast<long>(i / np);
        const long ip = static_cast<long>(i % np);
        for (long dt = -1; dt <= 1; ++dt) {
            for (long dp = -1; dp <= 1; ++dp) {
                if (dt == 0 && dp == 0) continue;
                const long t = it + dt;
                long p = ip + dp;
                if (t < 0 || t >= static_cast<long>(nt)) continue;
                if (p < 0 || p >= static_cast<long>(np)) {
                    if (!wraps) continue;
                    p = (p + static_cast<long>(np)) % static_cast<long>(np);
                }
                out.push_back(static_cast<std::size_t>(t) * np + static_cast<std::size_t>(p));
            }
        }
    };
    s.direction = [&g, np](std::size_t i) { return g.direction(i / np, i % np); };
    return s;
}

// Nearest grid sample to each angular representation of d that the grid
// actually covers.
std::vector<std::size_t> grid_seeds(const PatternGrid& g, const Direction& d) {
    std::vector<std::size_t> out;
    const double t_step = g.theta_axis.size() > 1 ? g.theta_axis[1] - g.theta_axis[0] : 1.0;
    const double p_step = g.phi_axis.size() > 1 ? g.phi_axis[1] - g.phi_axis[0] : 1.0;
    const double reps[2][2] = {{d.theta_deg(), d.phi_deg()}, {-d.theta_deg(), d.phi_deg() + 180.0}};
    for (const auto& rep : reps) {
        const double theta = rep[0];
        if (theta < g.theta_axis.front() - t_step || theta > g.theta_axis.back() + t_step) continue;
        const auto it = static_cast<std::size_t>(std::clamp(
            std::llround((theta - g.theta_axis.front()) / t_step), 0LL,
            static_cast<long long>(g.theta_axis.size()) - 1));
        double phi = rep[1];
        if (g.phi_wraps()) phi = g.phi_axis.front() + std::fmod(std::fmod(phi - g.phi_axis.front(), 360.0) + 360.0, 360.0);
        const long long raw = std::llround((phi - g.phi_axis.front()) / p_step);
        long long ip = raw;
        if (g.phi_wraps()) {
            ip = raw % static_cast<long long>(g.phi_axis.size());
        } else if (raw < 0 || raw >= static_cast<long long>(g.phi_axis.size())) {
            continue;
        }
        const std::size_t cell = g.index(it, static_cast<std::size_t>(ip));
        if (angular_distance(g.direction(it, static_cast<std::size_t>(ip)), d) <=
            deg2rad(2.0 * std::max(t_step, p_step))) {
            out.push_back(cell);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Samples cut_samples(const PatternCut& c) {
    const std::size_t n = c.t.size();
    Samples s{c.magnitude, nullptr, {}, {}};
    s.neighbours = [n](std::size_t i, std::vector<std::size_t>& out) {
        out.clear();
        if (i > 0) out.push_back(i - 1);
        if (i + 1 < n) out.push_back(i + 1);
    };
    s.direction = [&c](std::size_t i) { return c.directions[i]; };
    return s;
}

Samples transverse_samples(const TransverseGrid& g) {
    const std::size_t nu = g.u_axis.size();
    const std::size_t nv = g.v_axis.size();
    Samples s{g.magnitude, &g.visible, {}, {}};
    s.neighbours = [nu, nv](std::size_t i, std::vector<std::size_t>& out) {
        out.clear();
        const long iu = static_cast<long>(i / nv);
        const long iv = static_cast<long>(i % nv);
        for (long du = -1; du <= 1; ++du) {
            for (long dv = -1; dv <= 1; ++dv) {
                if (du == 0 && dv == 0) continue;
                const long a = iu + du;
                const long b = iv + dv;
                if (a < 0 || b < 0 || a >= static_cast<long>(nu) || b >= static_cast<long>(nv)) continue;
                out.push_back(static_cast<std::size_t>(a) * nv + static_cast<std::size_t>(b));
            }
        }
    };
    s.direction = [&g, nv](std::size_t i) { return g.direction(i / nv, i % nv); };
    return s;
}

void require_nonempty(std::size_t n) {
    if (n == 0) throw ArgumentError("pattern has no samples");
}

} // namespace

LobeEstimate find_mainlobe(const PatternGrid& grid, const Direction& desired) {
    require_nonempty(grid.magnitude.size());
    const Samples s = grid_samples(grid);
    const std::size_t peak = climb(s, nearest_sample(s, desired));
    const std::size_t np = grid.phi_axis.size();
    const std::size_t it = peak / np;
    const std::size_t ip = peak % np;
    const double c = grid.at(it, ip);

    double theta = grid.theta_axis[it];
    double phi = grid.phi_axis[ip];
    double mag = c;
    if (it > 0 && it + 1 < grid.theta_axis.size()) {
        const double l = grid.at(it - 1, ip);
        const double r = grid.at(it + 1, ip);
        const double p = parabola_offset(l, c, r);
        theta += p * (grid.theta_axis[it + 1] - grid.theta_axis[it]);
        mag = std::max(mag, parabola_peak(l, c, r, p));
    }
    const bool wraps = grid.phi_wraps();
    if (np > 2 && (wraps || (ip > 0 && ip + 1 < np))) {
        const double l = grid.at(it, (ip + np - 1) % np);
        const double r = grid.at(it, (ip + 1) % np);
        const double p = parabola_offset(l, c, r);
        phi += p * (grid.phi_axis[1] - grid.phi_axis[0]);
        mag = std::max(mag, parabola_peak(l, c, r, p));
    }
    return {Direction::from_degrees(std::clamp(theta, -90.0, 90.0), phi), mag, peak};
}

std::vector<LobeEstimate> find_peaks(const PatternGrid& grid, std::size_t max_count,
                                     double min_separation_deg) {
    require_nonempty(grid.magnitude.size());
    const Samples s = grid_samples(grid);
    const auto& m = grid.magnitude;
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> nb;
    for (std::size_t i = 0; i < m.size(); ++i) {
        s.neighbours(i, nb);
        // Plateaus keep only their lowest-index cell.
        const bool top = std::all_of(nb.begin(), nb.end(), [&](std::size_t j) {
            return m[i] > m[j] || (m[i] == m[j] && i < j);
        });
        if (top) maxima.push_back(i);
    }
    std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });
    std::vector<LobeEstimate> out;
    const double sep = deg2rad(min_separation_deg);
    for (std::size_t i : maxima) {
        if (out.size() == max_count) break;
        const Direction d = s.direction(i);
        const bool apart = std::none_of(out.begin(), out.end(), [&](const LobeEstimate& e) {
            return angular_distance(e.direction, d) <= sep;
        });
        if (apart) out.push_back({d, m[i], i});
    }
    return out;
}

LobeEstimate find_mainlobe(const PatternCut& cut, const Direction& desired) {
    require_nonempty(cut.magnitude.size());
    const Samples s = cut_samples(cut);
    const std::size_t peak = climb(s, nearest_sample(s, desired));
    const double c = cut.magnitude[peak];
    if (peak == 0 || peak + 1 >= cut.t.size()) return {cut.directions[peak], c, peak};
    const double l = cut.magnitude[peak - 1];
    const double r = cut.magnitude[peak + 1];
    const double p = parabola_offset(l, c, r);
    // Interpolate the direction along the chord towards the neighbour.
    const Direction& next = p >= 0.0 ? cut.directions[peak + 1] : cut.directions[peak - 1];
    const Vec3 a = unit_vector(cut.directions[peak], Sense::Reflected);
    const Vec3 b = unit_vector(next, Sense::Reflected);
    const double w = std::abs(p);
    const Vec3 m{(1 - w) * a[0] + w * b[0], (1 - w) * a[1] + w * b[1], (1 - w) * a[2] + w * b[2]};
    return {direction_from_vector(m), std::max(c, parabola_peak(l, c, r, p)), peak};
}

LobeEstimate find_mainlobe(const TransverseGrid& grid, const Direction& desired) {
    require_nonempty(grid.magnitude.size());
    const Samples s = transverse_samples(grid);
    const std::size_t peak = climb(s, nearest_sample(s, desired));
    const std::size_t nv = grid.v_axis.size();
    return {grid.direction(peak / nv, peak % nv), grid.magnitude[peak], peak};
}

LobeEstimate locate_mainlobe(const Lattice& lattice, std::span<const cd> weights,
                             const Direction& incident, const Direction& desired) {
    const ArrayFactorEvaluator eval(lattice, weights, incident);
    double extent = 1.0;
    {
        double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
        bool first = true;
        for (const auto& p : lattice.positions()) {
            if (first) {
                xmin = xmax = p.x;
                ymin = ymax = p.y;
                first = false;
            }
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        extent = 1.0 + std::max(xmax - xmin, ymax - ymin);
    }
    const Vec3 start = unit_vector(desired, Sense::Reflected);
    double u = start[0];
    double v = start[1];
    double best = std::abs(eval.at_direction_cosines(u, v));
    // Pattern search; the first step is a small fraction of the lobe width.
    double step = 0.05 / (extent * lattice.spacing_over_lambda());
    while (step > 1e-12) {
        double bu = u;
        double bv = v;
        double bm = best;
        for (int du = -1; du <= 1; ++du) {
            for (int dv = -1; dv <= 1; ++dv) {
                if (du == 0 && dv == 0) continue;
                const double cu = u + du * step;
                const double cv = v + dv * step;
                if (cu * cu + cv * cv > 1.0) continue;
                const double m = std::abs(eval.at_direction_cosines(cu, cv));
                if (m > bm) {
                    bm = m;
                    bu = cu;
                    bv = cv;
                }
            }
        }
        if (bm > best) {
            best = bm;
            u = bu;
            v = bv;
        } else {
            step *= 0.5;
        }
    }
    const double r = std::min(1.0, std::hypot(u, v));
    const Direction found = Direction::from_radians(std::asin(r), r == 0.0 ? 0.0 : std::atan2(v, u));
    return {found, best, 0};
}

double sidelobe_level(const PatternGrid& grid, std::span<const Direction> mainlobes,
                      double exclusion_radius_deg) {
    require_nonempty(grid.magnitude.size());
    const Samples s = grid_samples(grid);
    std::vector<std::vector<std::size_t>> seeds;
    for (const Direction& d : mainlobes) {
        auto cells = grid_seeds(grid, d);
        if (cells.empty()) cells.push_back(nearest_sample(s, d));
        seeds.push_back(std::move(cells));
    }
    return sidelobe_core(s, seeds, mainlobes, exclusion_radius_deg);
}

double sidelobe_level(const PatternCut& cut, std::span<const Direction> mainlobes,
                      double exclusion_radius_deg) {
    require_nonempty(cut.magnitude.size());
    const Samples s = cut_samples(cut);
    std::vector<std::vector<std::size_t>> seeds;
    for (const Direction& d : mainlobes) seeds.push_back({nearest_sample(s, d)});
    return sidelobe_core(s, seeds, mainlobes, exclusion_radius_deg);
}

double sidelobe_level(const TransverseGrid& grid, std::span<const Direction> mainlobes,
                      double exclusion_radius_deg) {
    require_nonempty(grid.magnitude.size());
    const Samples s = transverse_samples(grid);
    std::vector<std::vector<std::size_t>> seeds;
    for (const Direction& d : mainlobes) seeds.push_back({nearest_sample(s, d)});
    return sidelobe_core(s, seeds, mainlobes, exclusion_radius_deg);
}

double beamwidth_3db(const PatternCut& cut, const Direction& mainlobe) {
    require_nonempty(cut.magnitude.size());
    const Samples s = cut_samples(cut);
    const std::size_t peak = climb(s, nearest_sample(s, mainlobe));
    const auto& m = cut.magnitude;
    if (!(m[peak] > 0.0)) throw NumericError("mainlobe magnitude is zero");
    const double level = m[peak] / std::sqrt(2.0);

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double f = (m[inside] - level) / (m[inside] - m[outside]);
        return cut.t[inside] + f * (cut.t[outside] - cut.t[inside]);
    };
    std::size_t lo = peak;
    while (lo > 0 && m[lo - 1] >= level) --lo;
    std::size_t hi = peak;
    while (hi + 1 < m.size() && m[hi + 1] >= level) ++hi;
    if (lo == 0 || hi + 1 == m.size()) {
        std::ostringstream os;
        os << "3-dB crossing of the lobe at t = " << cut.t[peak] << " deg is outside the cut";
        throw UnresolvedWidthError(os.str());
    }
    return crossing(hi, hi + 1) - crossing(lo, lo - 1);
}

} // namespace irs
