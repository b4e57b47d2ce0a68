#pragma once

// Parameter sets of the reference figures, plus the frequency windows used for
// random sampling in the validation suites.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibgap/grid.hpp"
#include "fibgap/systems.hpp"

namespace fibgap::presets {

/// k_A = 2 k_B = 200 N/m, unit masses.
inline MassSpringParams fig4_mass_spring() { return {1.0, 1.0, 200.0, 100.0}; }

/// Canonical rod: shared material and length, areas differ by a factor of two.
inline RodParams fig5_rod() { return {0.07, 0.07, 9.815e-4, 1.963e-3, 3.3e9, 3.3e9, 1140.0, 1140.0}; }

inline BeamParams fig7_beam() { return {0.025, 0.1, 0.05, 1.0}; }

/// Rod used for the transmission comparison: l_B = l_A / 2, A_B = 4 A_A.
inline RodParams fig8_rod() { return {0.07, 0.035, 4.9075e-4, 1.963e-3, 3.3e9, 3.3e9, 1140.0, 1140.0}; }

/// Half period pi / (sqrt(Q) l) of a canonical rod; traces are even about it.
inline double canonical_half_period(const RodParams& p) { return std::numbers::pi / (std::sqrt(p.Q_A()) * p.length_A); }

/**
 * Frequency window for random sampling:
 *   mass-spring  (0, 1.5 x largest single-element cutoff]
 *   rod          (0, 2 pi / (sqrt(min Q) min l)], two periods of the shorter element
 *   beam         (0, omega at which k max(span) = 15]
 */
inline Interval sampling_window(const SystemSpec& spec) {
    switch (spec.kind()) {
    case SystemKind::MassSpring: {
        const auto& p = spec.mass_spring();
        return {0.0, 1.5 * std::max(p.cutoff(Letter::A), p.cutoff(Letter::B))};
    }
    case SystemKind::Rod: {
        const auto& p = spec.rod();
        const double q = std::min(p.Q_A(), p.Q_B());
        return {0.0, 2.0 * std::numbers::pi / (std::sqrt(q) * std::min(p.length_A, p.length_B))};
    }
    case SystemKind::Beam: {
        const auto& p = spec.beam();
        const double kr = 15.0 * p.radius_of_inertia / std::max(p.span_A, p.span_B);
        return {0.0, kr * kr / std::sqrt(p.P)};
    }
    }
    return {0.0, 1.0};
}

} // namespace fibgap::presets
