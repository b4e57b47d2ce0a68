#pragma once

/**
 * @file systems.hpp
 * @brief Element transfer matrices T^A(omega), T^B(omega) for the three wave systems.
 *
 *  - mass-spring: state [u_j, f_j], one mass m_X and one spring k_X per element
 *  - rod:         state [u, N], axial waves with Q_X = rho_X / E_X
 *  - beam:        state [phi, phi'] at the supports of a multi-supported beam,
 *                 composite parameter P = rho r^4 / (E I)
 *
 * All inputs are SI. The beam matrix is evaluated from real hyperbolic
 * identities (k3 = i kappa gives k3 cot(k3 l) = kappa coth(kappa l) and
 * k3 csc(k3 l) = kappa csch(kappa l)), so no complex arithmetic is involved.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "fibgap/errors.hpp"
#include "fibgap/mat2.hpp"
#include "fibgap/tiling.hpp"

namespace fibgap {

struct MassSpringParams {
    double mass_A = 1.0;
    double mass_B = 1.0;
    double stiffness_A = 1.0;
    double stiffness_B = 1.0;

    double mass(Letter x) const noexcept { return x == Letter::A ? mass_A : mass_B; }
    double stiffness(Letter x) const noexcept { return x == Letter::A ? stiffness_A : stiffness_B; }

    /// 2 sqrt(k_X / m_X): above this a single element has trace < -2.
    double cutoff(Letter x) const noexcept { return 2.0 * std::sqrt(stiffness(x) / mass(x)); }
};

struct RodParams {
    double length_A = 1.0;
    double length_B = 1.0;
    double area_A = 1.0;
    double area_B = 1.0;
    double young_A = 1.0;
    double young_B = 1.0;
    double density_A = 1.0;
    double density_B = 1.0;

    double length(Letter x) const noexcept { return x == Letter::A ? length_A : length_B; }
    double area(Letter x) const noexcept { return x == Letter::A ? area_A : area_B; }
    double young(Letter x) const noexcept { return x == Letter::A ? young_A : young_B; }
    double density(Letter x) const noexcept { return x == Letter::A ? density_A : density_B; }

    /// Q_X = rho_X / E_X in s^2/m^2.
    double Q(Letter x) const noexcept { return density(x) / young(x); }
    double Q_A() const noexcept { return Q(Letter::A); }
    double Q_B() const noexcept { return Q(Letter::B); }
};

struct BeamParams {
    double span_A = 1.0;
    double span_B = 1.0;
    double radius_of_inertia = 1.0; ///< r
    double P = 1.0;                 ///< rho r^4 / (E I), s^2

    double span(Letter x) const noexcept { return x == Letter::A ? span_A : span_B; }

    /// k_1(omega) = sqrt(omega sqrt(P)) / r.
    double wavenumber(double omega) const noexcept {
        return std::sqrt(omega * std::sqrt(P)) / radius_of_inertia;
    }
};

enum class SystemKind { MassSpring, Rod, Beam };

inline std::string_view to_string(SystemKind kind) noexcept {
    switch (kind) {
    case SystemKind::MassSpring: return "mass-spring";
    case SystemKind::Rod: return "rod";
    case SystemKind::Beam: return "beam";
    }
    return "unknown";
}

/// Tagged physical model. The kind is carried by the active parameter record,
/// so kind/params consistency holds by construction.
class SystemSpec {
public:
    using Params = std::variant<MassSpringParams, RodParams, BeamParams>;

    SystemSpec(MassSpringParams p) : params_(p) { validate(); }
    SystemSpec(RodParams p) : params_(p) { validate(); }
    SystemSpec(BeamParams p) : params_(p) { validate(); }

    SystemKind kind() const noexcept { return static_cast<SystemKind>(params_.index()); }
    const Params& params() const noexcept { return params_; }

    const MassSpringParams& mass_spring() const { return std::get<MassSpringParams>(params_); }
    const RodParams& rod() const { return std::get<RodParams>(params_); }
    const BeamParams& beam() const { return std::get<BeamParams>(params_); }

private:
    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("SystemSpec: ") + name + " must be > 0");
        };
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, MassSpringParams>) {
                    positive(p.mass_A, "mass_A");
                    positive(p.mass_B, "mass_B");
                    positive(p.stiffness_A, "stiffness_A");
                    positive(p.stiffness_B, "stiffness_B");
                } else if constexpr (std::is_same_v<T, RodParams>) {
                    positive(p.length_A, "length_A");
                    positive(p.length_B, "length_B");
                    positive(p.area_A, "area_A");
                    positive(p.area_B, "area_B");
                    positive(p.young_A, "young_A");
                    positive(p.young_B, "young_B");
                    positive(p.density_A, "density_A");
                    positive(p.density_B, "density_B");
                } else {
                    positive(p.span_A, "span_A");
                    positive(p.span_B, "span_B");
                    positive(p.radius_of_inertia, "radius_of_inertia");
                    positive(p.P, "P");
                }
            },
            params_);
    }

    Params params_;
};

// ---------------------------------------------------------------------------
// Beam helpers

/// Pole thresholds for the beam element matrix.
inline constexpr double kBeamSinTolerance = 1e-10;
inline constexpr double kBeamSinhTolerance = 1e-300;
inline constexpr double kBeamPsiTolerance = 1e-12;

/// Below this value of k1 l the Psi functions are evaluated from their Taylor
/// series; the direct formulas cancel catastrophically as omega -> 0.
inline constexpr double kBeamSeriesThreshold = 1e-2;

struct BeamPsi {
    double aa = 0.0; ///< Psi_aa = -Psi_bb
    double ab = 0.0; ///< Psi_ab = -Psi_ba
};

struct BeamPoleInfo {
    double phase_distance = 0.0; ///< distance of k1 l_X from the nearest multiple of pi
    double psi_ab = 0.0;         ///< |Psi_ab|, NaN when k1 l_X is exactly at a pole
};

namespace detail {

inline double distance_to_pi_multiple(double phase) noexcept {
    const double pi = std::numbers::pi;
    const double nearest = std::round(phase / pi) * pi;
    return std::abs(phase - nearest);
}

/// Psi_aa = (coth x - cot x) / (2k), Psi_ab = (csc x - csch x) / (2k), x = k l.
inline BeamPsi beam_psi(double k, double span) noexcept {
    const double x = k * span;
    if (x < kBeamSeriesThreshold) {
        // coth x - cot x = 2x/3 + 4x^5/945 + O(x^9); csc x - csch x = x/3 + 31x^5/7560 + O(x^9)
        const double x4 = x * x * x * x;
        return {span * (1.0 / 3.0 + 2.0 * x4 / 945.0), span * (1.0 / 6.0 + 31.0 * x4 / 15120.0)};
    }
    const double cot = std::cos(x) / std::sin(x);
    const double csc = 1.0 / std::sin(x);
    const double coth = 1.0 / std::tanh(x);
    const double csch = 1.0 / std::sinh(x);
    return {(coth - cot) / (2.0 * k), (csc - csch) / (2.0 * k)};
}

} // namespace detail

/// Psi_aa and Psi_ab for element X at omega > 0. Throws BeamPoleError at poles.
inline BeamPsi beam_psi(const BeamParams& params, Letter label, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("beam_psi: omega must be > 0");
    const double k = params.wavenumber(omega);
    const double x = k * params.span(label);
    if (x >= kBeamSeriesThreshold && std::abs(std::sin(x)) < kBeamSinTolerance)
        throw BeamPoleError("beam element at sin(k1 l) = 0", omega);
    if (std::abs(std::sinh(x)) < kBeamSinhTolerance)
        throw BeamPoleError("beam element at sinh(k1 l) = 0", omega);
    const BeamPsi psi = detail::beam_psi(k, params.span(label));
    if (std::abs(psi.ab) < kBeamPsiTolerance * std::max(std::abs(psi.aa), 1.0))
        throw BeamPoleError("beam element with vanishing Psi_ab", omega);
    return psi;
}

/// Distance of k1(omega) l_X from the nearest multiple of pi, plus |Psi_ab|.
inline BeamPoleInfo beam_pole_distance(const BeamParams& params, Letter label, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("beam_pole_distance: omega must be > 0");
    const double k = params.wavenumber(omega);
    const double x = k * params.span(label);
    BeamPoleInfo info;
    info.phase_distance = detail::distance_to_pi_multiple(x);
    if (x >= kBeamSeriesThreshold && std::sin(x) == 0.0) {
        info.psi_ab = std::numeric_limits<double>::quiet_NaN();
    } else {
        info.psi_ab = std::abs(detail::beam_psi(k, params.span(label)).ab);
    }
    return info;
}

/// The omega -> 0 limit [[-2, l/2], [6/l, -2]] of the beam element matrix.
inline Mat2 beam_small_omega_limit(const BeamParams& params, Letter label) noexcept {
    const double l = params.span(label);
    return {-2.0, l / 2.0, 6.0 / l, -2.0};
}

// ---------------------------------------------------------------------------

inline Mat2 mass_spring_matrix(const MassSpringParams& p, Letter label, double omega) {
    if (omega < 0.0) throw std::invalid_argument("mass-spring: omega must be >= 0");
    const double m = p.mass(label);
    const double k = p.stiffness(label);
    const double mw2 = m * omega * omega;
    return {1.0, -1.0 / k, mw2, 1.0 - mw2 / k};
}

inline Mat2 rod_matrix(const RodParams& p, Letter label, double omega) {
    if (omega < 0.0) throw std::invalid_argument("rod: omega must be >= 0");
    const double ea = p.young(label) * p.area(label);
    const double l = p.length(label);
    if (omega == 0.0) return {1.0, l / ea, 0.0, 1.0};
    const double sq = std::sqrt(p.Q(label));
    const double phase = sq * omega * l;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    return {c, s / (ea * sq * omega), -ea * omega * sq * s, c};
}

inline Mat2 beam_matrix(const BeamParams& p, Letter label, double omega) {
    if (omega < 0.0) throw std::invalid_argument("beam: omega must be >= 0");
    if (omega == 0.0) return beam_small_omega_limit(p, label);
    const BeamPsi psi = beam_psi(p, label, omega);
    const double ratio = psi.aa / psi.ab;
    return {-ratio, -psi.ab + psi.aa * ratio, 1.0 / psi.ab, -ratio};
}

/// T^X(omega) for element X of the given system.
inline Mat2 element_matrix(const SystemSpec& spec, Letter label, double omega) {
    return std::visit(
        [&](const auto& p) -> Mat2 {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MassSpringParams>) return mass_spring_matrix(p, label, omega);
            else if constexpr (std::is_same_v<T, RodParams>) return rod_matrix(p, label, omega);
            else return beam_matrix(p, label, omega);
        },
        spec.params());
}

/// Dimensionless frequency used on figure axes: sqrt(m_A) omega, sqrt(Q_A) omega or sqrt(P) omega.
inline double normalised_frequency(const SystemSpec& spec, double omega) noexcept {
    switch (spec.kind()) {
    case SystemKind::MassSpring: return std::sqrt(spec.mass_spring().mass_A) * omega;
    case SystemKind::Rod: return std::sqrt(spec.rod().Q_A()) * omega;
    case SystemKind::Beam: return std::sqrt(spec.beam().P) * omega;
    }
    return omega;
}

/// Inverse of normalised_frequency.
inline double physical_frequency(const SystemSpec& spec, double normalised) noexcept {
    return normalised / normalised_frequency(spec, 1.0);
}

// ---------------------------------------------------------------------------
// Sign-pattern classes of unimodular matrices

enum class SigmaClass { SigmaPlus, SigmaMinus, Neither };

inline std::string_view to_string(SigmaClass c) noexcept {
    switch (c) {
    case SigmaClass::SigmaPlus: return "Sigma+";
    case SigmaClass::SigmaMinus: return "Sigma-";
    case SigmaClass::Neither: return "neither";
    }
    return "neither";
}

/// Sigma+: det 1, positive diagonal, negative off-diagonal. Sigma-: the negation.
/// Saturated matrices are classified on signs alone.
inline SigmaClass sigma_classify(const Mat2& mat, double det_tol = 1e-9) noexcept {
    if (!mat.escaped() && !is_unimodular(mat, det_tol)) return SigmaClass::Neither;
    if (mat.a11 > 0 && mat.a22 > 0 && mat.a12 < 0 && mat.a21 < 0) return SigmaClass::SigmaPlus;
    if (mat.a11 < 0 && mat.a22 < 0 && mat.a12 > 0 && mat.a21 > 0) return SigmaClass::SigmaMinus;
    return SigmaClass::Neither;
}

} // namespace fibgap
