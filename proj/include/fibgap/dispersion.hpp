#pragma once

/**
 * @file dispersion.hpp
 * @brief Floquet-Bloch dispersion cos(K L_n) = x_n / 2 for the periodic medium
 *        with unit cell F_n.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "fibgap/errors.hpp"
#include "fibgap/grid.hpp"
#include "fibgap/systems.hpp"
#include "fibgap/tiling.hpp"
#include "fibgap/tracemap.hpp"

namespace fibgap {

struct BlochPoint {
    double omega = 0.0;
    int n = 0;
    double trace_half = 1.0; ///< x_n / 2
    double K_L = 0.0;        ///< real part of K L_n in [0, pi]
    double attenuation = 0.0; ///< imaginary part of K L_n; +inf for escaped traces
    bool propagating = true;
    bool negative_branch = false; ///< x_n < -2: K L_n = pi + i attenuation
};

/// Bloch point from a known trace value.
inline BlochPoint bloch_from_trace(double omega, int n, double x, bool escaped = false) {
    BlochPoint p;
    p.omega = omega;
    p.n = n;
    p.trace_half = x / 2.0;
    if (!escaped && std::abs(p.trace_half) <= 1.0) {
        p.propagating = true;
        p.K_L = std::acos(p.trace_half);
        p.attenuation = 0.0;
        return p;
    }
    p.propagating = false;
    p.negative_branch = x < 0.0;
    p.K_L = p.negative_branch ? std::numbers::pi : 0.0;
    p.attenuation = escaped || is_saturated(x) ? std::numeric_limits<double>::infinity()
                                               : std::acosh(std::abs(p.trace_half));
    return p;
}

inline BlochPoint bloch_point(const SystemSpec& spec, const TilingRule& rule, int n, double omega) {
    if (n < 2) return bloch_from_trace(omega, n, trace_at(spec, rule, omega, n));
    const TraceSequence seq = trace_sequence(spec, rule, omega, n);
    return bloch_from_trace(omega, n, seq.x(n), seq.escaped(n));
}

/// L_n. The mass-spring chain has no physical length: each element counts as one
/// unit, so K L_n is a dimensionless phase per cell.
inline double cell_length(const SystemSpec& spec, const TilingRule& rule, int n) {
    const auto [count_A, count_B] = letter_counts(rule, n);
    switch (spec.kind()) {
    case SystemKind::MassSpring: return static_cast<double>(count_A + count_B);
    case SystemKind::Rod:
        return static_cast<double>(count_A) * spec.rod().length_A + static_cast<double>(count_B) * spec.rod().length_B;
    case SystemKind::Beam:
        return static_cast<double>(count_A) * spec.beam().span_A + static_cast<double>(count_B) * spec.beam().span_B;
    }
    return 0.0;
}

struct BandDiagram {
    int n = 0;
    std::vector<BlochPoint> points;
    std::vector<double> skipped; ///< grid frequencies at beam poles
    double cell_length = 0.0;
};

inline BandDiagram band_diagram(const SystemSpec& spec, const TilingRule& rule, int n, const FrequencyGrid& grid,
                                unsigned workers = 0) {
    BandDiagram out;
    out.n = n;
    out.cell_length = cell_length(spec, rule, n);
    const auto pts = parallel_map(
        grid.points,
        [&](std::size_t i) -> std::optional<BlochPoint> {
            try {
                return bloch_point(spec, rule, n, grid.at(i));
            } catch (const BeamPoleError&) {
                return std::nullopt;
            }
        },
        workers);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i]) out.points.push_back(*pts[i]);
        else out.skipped.push_back(grid.at(i));
    }
    return out;
}

/// |x_n(omega)| <= 2, with beam poles and escaped traces counted as stop band.
inline bool in_passband(const SystemSpec& spec, const TilingRule& rule, int n, double omega) {
    try {
        return bloch_point(spec, rule, n, omega).propagating;
    } catch (const BeamPoleError&) {
        return false;
    }
}

/// Maximal intervals with |x_n| <= 2. Endpoints are bisected on the band-edge
/// condition |x_n| = 2 and reported on the propagating side.
inline std::vector<Interval> passbands(const SystemSpec& spec, const TilingRule& rule, int n,
                                       const FrequencyGrid& grid, double rel_tol = 1e-6, unsigned workers = 0) {
    const auto pass = parallel_map(
        grid.points, [&](std::size_t i) { return in_passband(spec, rule, n, grid.at(i)) ? 1 : 0; }, workers);
    auto pred = [&](double w) { return in_passband(spec, rule, n, w); };

    std::vector<Interval> out;
    std::size_t i = 0;
    while (i < pass.size()) {
        if (!pass[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < pass.size() && pass[j + 1]) ++j;
        Interval band{grid.at(i), grid.at(j)};
        if (i > 0) band.lo = bisect_edge(grid.at(i), grid.at(i - 1), pred, rel_tol);
        if (j + 1 < pass.size()) band.hi = bisect_edge(grid.at(j), grid.at(j + 1), pred, rel_tol);
        out.push_back(band);
        i = j + 1;
    }
    return out;
}

} // namespace fibgap
