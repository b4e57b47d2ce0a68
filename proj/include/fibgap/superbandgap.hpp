#pragma once

/**
 * @file superbandgap.hpp
 * @brief Growth-condition detectors for super band gaps
 *        S_N = { omega : |x_n(omega)| > 2 for all n >= N }.
 *
 * Each detector inspects (x_N, x_{N+1}, x_{N+2}) and, when the hypotheses of the
 * matching theorem hold, certifies that |x_n| > 2 for every n >= N:
 *
 *   golden / silver   |x_N| > 2, |x_{N+1}| >= |x_N|, |x_{N+2}| >= |x_{N+1}|
 *   precious (m >= 2) |x_N| > 2, |x_{N+1}| >= |d_{m-1}(x_N) x_N|,
 *                     |x_{N+2}| >= |d_{m-1}(x_{N+1}) x_{N+1}|
 *   metal (l >= 2)    |x_N| > 2, |x_{N+1}| >= 5/2,
 *                     |x_{N+2}| >= max(|x_{N+1}|, |d_{l+1}(x_N)|)
 *
 * Rules with m >= 2 and l >= 2 are not covered by any theorem and are rejected.
 * A saturated (escaped) trace satisfies every lower bound.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fibgap/chebyshev.hpp"
#include "fibgap/errors.hpp"
#include "fibgap/grid.hpp"
#include "fibgap/systems.hpp"
#include "fibgap/tiling.hpp"
#include "fibgap/tracemap.hpp"

namespace fibgap {

enum class Theorem { Golden, Silver, Precious, Metal };

inline std::string to_string(Theorem t) {
    switch (t) {
    case Theorem::Golden: return "Golden";
    case Theorem::Silver: return "Silver";
    case Theorem::Precious: return "Precious";
    case Theorem::Metal: return "Metal";
    }
    return "?";
}

struct SBGCertificate {
    TilingRule rule;
    int N = 0;                        ///< gap order being certified
    Theorem condition = Theorem::Golden;
    int parameter = 1;                ///< m for Precious, l for Metal, else 1
    int anchor = 0;                   ///< index K >= N at which the growth condition held
    std::array<double, 3> seed_values{}; ///< (x_K, x_{K+1}, x_{K+2})
};

// ---------------------------------------------------------------------------
// Pure checks

namespace detail {

/// |value| >= bound, with saturated values exceeding any bound.
inline bool at_least(double value, double bound) noexcept {
    if (std::isnan(value)) return false;
    if (is_saturated(value)) return true;
    if (std::isnan(bound)) return false;
    return std::abs(value) >= std::abs(bound);
}

inline bool outside_band(double x) noexcept { return !std::isnan(x) && std::abs(x) > 2.0; }

} // namespace detail

inline bool check_golden(double xN, double xN1, double xN2) noexcept {
    return detail::outside_band(xN) && detail::at_least(xN1, xN) && detail::at_least(xN2, xN1);
}

/// Same hypotheses as the golden theorem; only the governing recursion differs.
inline bool check_silver(double xN, double xN1, double xN2) noexcept {
    return check_golden(xN, xN1, xN2);
}

inline bool check_precious(int m, double xN, double xN1, double xN2) {
    if (m < 2) throw std::invalid_argument("check_precious: m must be >= 2");
    if (!detail::outside_band(xN)) return false;
    const auto k = static_cast<unsigned>(m - 1);
    return detail::at_least(xN1, saturate(cheb_eval(k, xN) * xN)) &&
           detail::at_least(xN2, saturate(cheb_eval(k, xN1) * xN1));
}

inline bool check_metal(int l, double xN, double xN1, double xN2) {
    if (l < 1) throw std::invalid_argument("check_metal: l must be >= 1");
    if (l == 1) return check_golden(xN, xN1, xN2);
    if (!detail::outside_band(xN)) return false;
    if (!detail::at_least(xN1, 2.5)) return false;
    return detail::at_least(xN2, xN1) &&
           detail::at_least(xN2, cheb_eval(static_cast<unsigned>(l + 1), xN));
}

/// The theorem that governs a rule, or UnsupportedRule when none does.
inline Theorem theorem_for(const TilingRule& rule) {
    if (rule.m() == 1 && rule.l() == 1) return Theorem::Golden;
    if (rule.l() == 1) return rule.m() == 2 ? Theorem::Silver : Theorem::Precious;
    if (rule.m() == 1) return Theorem::Metal;
    throw UnsupportedRule("no growth-condition theorem covers rule " + to_string(rule) +
                          " (m >= 2 and l >= 2)");
}

/// Applies the rule-matched check to (x_N, x_{N+1}, x_{N+2}).
inline bool check_rule(const TilingRule& rule, double xN, double xN1, double xN2) {
    switch (theorem_for(rule)) {
    case Theorem::Golden: return check_golden(xN, xN1, xN2);
    case Theorem::Silver: return check_silver(xN, xN1, xN2);
    case Theorem::Precious: return check_precious(rule.m(), xN, xN1, xN2);
    case Theorem::Metal: return check_metal(rule.l(), xN, xN1, xN2);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Estimator

/// H_n(omega) = |x_n(omega) x_{n+1}(omega)|.
inline double estimator_H(const SystemSpec& spec, const TilingRule& rule, double omega, int n) {
    if (n < 0) throw std::invalid_argument("estimator_H: n must be >= 0");
    const TraceSequence seq = trace_sequence(spec, rule, omega, std::max(2, n + 1));
    return saturate(std::abs(seq.x(n) * seq.x(n + 1)));
}

// ---------------------------------------------------------------------------
// Membership

struct MembershipOptions {
    /// Extra anchors K in (N, N + anchor_lookahead] tried when the condition
    /// fails at N. A certificate anchored at K > N additionally requires
    /// |x_n| > 2 for N <= n < K, checked directly. Zero means the plain
    /// test at N.
    int anchor_lookahead = 0;
};

/// Certificate from an already computed trace sequence (must reach N + lookahead + 2).
inline std::optional<SBGCertificate> membership_from_sequence(const TraceSequence& seq, int N,
                                                              MembershipOptions opts = {}) {
    const Theorem thm = theorem_for(seq.rule);
    if (N < 0) throw std::invalid_argument("membership: N must be >= 0");
    if (seq.n_max() < N + opts.anchor_lookahead + 2)
        throw std::invalid_argument("membership: trace sequence too short");
    for (int K = N; K <= N + opts.anchor_lookahead; ++K) {
        if (!detail::outside_band(seq.x(K))) return std::nullopt;
        if (check_rule(seq.rule, seq.x(K), seq.x(K + 1), seq.x(K + 2))) {
            SBGCertificate cert;
            cert.rule = seq.rule;
            cert.N = N;
            cert.condition = thm;
            cert.parameter = thm == Theorem::Precious ? seq.rule.m()
                             : thm == Theorem::Metal  ? seq.rule.l()
                                                      : 1;
            cert.anchor = K;
            cert.seed_values = {seq.x(K), seq.x(K + 1), seq.x(K + 2)};
            return cert;
        }
    }
    return std::nullopt;
}

/// Certificate that omega lies in S_N, or nullopt. Throws UnsupportedRule for
/// m >= 2 with l >= 2 and propagates BeamPoleError.
inline std::optional<SBGCertificate> membership(const SystemSpec& spec, const TilingRule& rule,
                                                double omega, int N, MembershipOptions opts = {}) {
    theorem_for(rule);
    if (N < 0) throw std::invalid_argument("membership: N must be >= 0");
    const TraceSequence seq = trace_sequence(spec, rule, omega, N + opts.anchor_lookahead + 2);
    return membership_from_sequence(seq, N, opts);
}

// ---------------------------------------------------------------------------
// Sweep

enum class GridState : unsigned char { NotCertified = 0, Certified = 1, Pole = 2 };

struct GapInterval {
    Interval range;
    SBGCertificate certificate; ///< sampled at the interval midpoint (or nearest certified grid point)
};

struct GapReport {
    std::vector<GapInterval> intervals;
    int N = 0;
    TilingRule rule;
    FrequencyGrid grid;
    std::vector<GridState> mask; ///< per grid point
    std::vector<double> skipped; ///< grid frequencies at beam poles even after a half-step nudge
};

struct SweepOptions {
    MembershipOptions membership{};
    double rel_tol = 1e-6;
    unsigned workers = 0;
};

namespace detail {

inline std::optional<SBGCertificate> safe_membership(const SystemSpec& spec, const TilingRule& rule,
                                                     double omega, int N, MembershipOptions opts) {
    try {
        return membership(spec, rule, omega, N, opts);
    } catch (const BeamPoleError&) {
        return std::nullopt;
    }
}

} // namespace detail

/// Evaluates membership on the grid, merges runs of certified points into
/// intervals and bisects each endpoint against its uncertified neighbour.
/// Endpoints are reported on the certified side.
inline GapReport sweep(const SystemSpec& spec, const TilingRule& rule, const FrequencyGrid& grid, int N,
                       SweepOptions opts = {}) {
    theorem_for(rule);
    GapReport report;
    report.N = N;
    report.rule = rule;
    report.grid = grid;

    struct Sample {
        GridState state = GridState::NotCertified;
        std::optional<SBGCertificate> cert;
    };
    const auto samples = parallel_map(
        grid.points,
        [&](std::size_t i) {
            Sample s;
            // A point at a beam pole is retried half a grid step inward.
            const double nudge = i + 1 == grid.points ? -0.5 * grid.step() : 0.5 * grid.step();
            for (const double w : {grid.at(i), grid.at(i) + nudge}) {
                try {
                    s.cert = membership(spec, rule, w, N, opts.membership);
                    s.state = s.cert ? GridState::Certified : GridState::NotCertified;
                    return s;
                } catch (const BeamPoleError&) {
                    s.state = GridState::Pole;
                }
            }
            return s;
        },
        opts.workers);

    report.mask.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        report.mask.push_back(samples[i].state);
        if (samples[i].state == GridState::Pole) report.skipped.push_back(grid.at(i));
    }

    auto certified = [&](double w) {
        return detail::safe_membership(spec, rule, w, N, opts.membership).has_value();
    };

    std::size_t i = 0;
    while (i < samples.size()) {
        if (samples[i].state != GridState::Certified) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < samples.size() && samples[j + 1].state == GridState::Certified) ++j;

        Interval range{grid.at(i), grid.at(j)};
        if (i > 0) range.lo = bisect_edge(grid.at(i), grid.at(i - 1), certified, opts.rel_tol);
        if (j + 1 < samples.size()) range.hi = bisect_edge(grid.at(j), grid.at(j + 1), certified, opts.rel_tol);

        GapInterval gap{range, {}};
        if (auto mid = detail::safe_membership(spec, rule, range.mid(), N, opts.membership)) {
            gap.certificate = *mid;
        } else {
            std::size_t best = i;
            for (std::size_t k = i; k <= j; ++k)
                if (std::abs(grid.at(k) - range.mid()) < std::abs(grid.at(best) - range.mid())) best = k;
            gap.certificate = *samples[best].cert;
        }
        report.intervals.push_back(gap);
        i = j + 1;
    }
    return report;
}

// ---------------------------------------------------------------------------
// High-frequency gaps of the mass-spring chain

struct HighFrequencyThreshold {
    double omega_star = 0.0;        ///< numerically located threshold
    double analytic_bound = 0.0;    ///< sqrt(2 max k / min m): min m omega^2 / max k > 2 above it
    double max_single_cutoff = 0.0; ///< max_X 2 sqrt(k_X / m_X)
    double min_single_cutoff = 0.0; ///< min_X 2 sqrt(k_X / m_X)
    int window_samples = 50;
    MembershipOptions membership{};
};

/// Default anchor lookahead used when certifying S_0 at high frequency. At large
/// omega, x_K ~ omega^(2 F_K); the K = 0 condition compares traces of the two
/// different single elements, which need not be ordered, while K = 1 always
/// holds asymptotically.
inline constexpr int kHighFrequencyLookahead = 2;

/**
 * Locates omega* above which S_0 membership is certified. Starting from twice the
 * largest single-element cutoff, the candidate doubles until a window of
 * `window` log-spaced samples in [candidate, 2 candidate] all certify; the edge is
 * then bisected on "the point and the whole window above it certify".
 */
inline HighFrequencyThreshold highfreq_threshold_mass_spring(const MassSpringParams& params,
                                                             const TilingRule& rule, int window = 50,
                                                             MembershipOptions opts = {kHighFrequencyLookahead}) {
    const SystemSpec spec(params);
    HighFrequencyThreshold out;
    out.max_single_cutoff = std::max(params.cutoff(Letter::A), params.cutoff(Letter::B));
    out.min_single_cutoff = std::min(params.cutoff(Letter::A), params.cutoff(Letter::B));
    out.analytic_bound = std::sqrt(2.0 * std::max(params.stiffness_A, params.stiffness_B) /
                                   std::min(params.mass_A, params.mass_B));
    out.window_samples = window;
    out.membership = opts;

    auto window_certified = [&](double lo, double hi) {
        for (int s = 0; s < window; ++s) {
            const double w = lo * std::pow(hi / lo, static_cast<double>(s) / (window - 1));
            if (!membership(spec, rule, w, 0, opts)) return false;
        }
        return true;
    };

    double candidate = 2.0 * out.max_single_cutoff;
    double below = out.max_single_cutoff;
    int doublings = 0;
    while (!window_certified(candidate, 2.0 * candidate)) {
        below = candidate;
        candidate *= 2.0;
        if (++doublings > 200) throw Error("highfreq_threshold_mass_spring: no certified window found");
    }
    const double top = 2.0 * candidate;
    auto certified_above = [&](double w) { return window_certified(w, top); };
    out.omega_star = certified_above(below) ? below : bisect_edge(candidate, below, certified_above, 1e-6);
    return out;
}

// ---------------------------------------------------------------------------
// Low-frequency gaps of the multi-supported beam

struct LowFrequencyCell {
    int n = 0;
    std::int64_t F_n = 0;
    SigmaClass sigma = SigmaClass::Neither;
    SigmaClass expected = SigmaClass::Neither;
    double trace = 0.0;
    double bound = 0.0; ///< 2^(F_n + 1), capped at kSaturation
    bool parity_ok = false;
    bool bound_ok = false;
};

struct LowFrequencyCheck {
    bool ok = false;
    std::string diagnostic;
    std::vector<LowFrequencyCell> cells;
};

/**
 * Builds T_n by explicit products for n <= n_max and checks the small-omega
 * structure: T_n in Sigma- when F_n is odd, Sigma+ when F_n is even, and
 * |tr(T_n)| >= 2^(F_n + 1). When both element matrices are not in Sigma- the
 * frequency is outside the small-omega regime and the check reports false.
 */
inline LowFrequencyCheck lowfreq_beam_check(const BeamParams& params, const TilingRule& rule, double omega,
                                            int n_max, std::int64_t cap = kDirectProductCap) {
    if (!(omega > 0.0)) throw std::invalid_argument("lowfreq_beam_check: omega must be > 0");
    const SystemSpec spec(params);
    LowFrequencyCheck out;
    const Mat2 tA = element_matrix(spec, Letter::A, omega);
    const Mat2 tB = element_matrix(spec, Letter::B, omega);
    if (sigma_classify(tA) != SigmaClass::SigmaMinus || sigma_classify(tB) != SigmaClass::SigmaMinus) {
        out.diagnostic = "outside small-omega regime: element matrices not in Sigma-";
        return out;
    }
    out.ok = true;
    for (int n = 0; n <= n_max; ++n) {
        LowFrequencyCell cell;
        cell.n = n;
        cell.F_n = fib_number(rule, n);
        const Mat2 tn = word_matrix(word(rule, n, cap).letters, tA, tB);
        cell.sigma = sigma_classify(tn);
        cell.expected = cell.F_n % 2 == 1 ? SigmaClass::SigmaMinus : SigmaClass::SigmaPlus;
        cell.trace = trace(tn);
        cell.bound = cell.F_n + 1 >= 997 ? kSaturation
                                         : std::min(kSaturation, std::ldexp(1.0, static_cast<int>(cell.F_n + 1)));
        cell.parity_ok = cell.sigma == cell.expected;
        cell.bound_ok = tn.escaped() || std::abs(cell.trace) >= cell.bound;
        if (!cell.parity_ok || !cell.bound_ok) {
            if (out.ok) {
                out.diagnostic = "n=" + std::to_string(n) + ": " +
                                 (!cell.parity_ok ? "sign class " + std::string(to_string(cell.sigma)) +
                                                        " does not match parity of F_n"
                                                  : "|tr(T_n)| below 2^(F_n+1)");
            }
            out.ok = false;
        }
        out.cells.push_back(cell);
    }
    return out;
}

} // namespace fibgap
