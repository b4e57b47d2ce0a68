#pragma once

/**
 * @file tracemap.hpp
 * @brief Trace sequences x_n = tr(T_n) and t_n = tr(T_{n-2} T_{n-1}).
 *
 * The recursions run for n >= 2 from seeds (x_0, x_1, x_2, t_2) built from
 * explicit element matrices. Inside band gaps the traces grow doubly
 * exponentially; once a value leaves [-kEscapeThreshold, kEscapeThreshold]
 * (or is not finite) the sequence is frozen at +/-kSaturation from that index
 * on and escaped_at records where it happened.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fibgap/chebyshev.hpp"
#include "fibgap/mat2.hpp"
#include "fibgap/systems.hpp"
#include "fibgap/tiling.hpp"

namespace fibgap {

inline constexpr double kEscapeThreshold = 1e100;

/// Default cap on F_n for direct-product oracles.
inline constexpr std::int64_t kDirectProductCap = 100'000;

struct TraceSeed {
    double x0 = 2.0; ///< tr(T^B)
    double x1 = 2.0; ///< tr(T^A)
    double x2 = 2.0; ///< tr(T_2), T_2 = (T^B)^l (T^A)^m
    double t2 = 2.0; ///< tr(T_0 T_1)
};

/// Which closed recursion governs a rule.
enum class Recursion { Golden, Silver, Precious, Metal, General };

inline Recursion recursion_for(const TilingRule& rule) noexcept {
    if (rule.m() == 1 && rule.l() == 1) return Recursion::Golden;
    if (rule.l() == 1) return rule.m() == 2 ? Recursion::Silver : Recursion::Precious;
    if (rule.m() == 1) return Recursion::Metal;
    return Recursion::General;
}

/// Whether the recursion for this rule carries the auxiliary t_n sequence.
inline bool carries_t(Recursion r) noexcept {
    return r == Recursion::Silver || r == Recursion::Precious || r == Recursion::General;
}

// ---------------------------------------------------------------------------
// Cell matrices

/// T_0 = T^B, T_1 = T^A, T_{n+1} = T_{n-1}^l T_n^m, built by matrix recursion.
inline Mat2 cell_matrix(const TilingRule& rule, const Mat2& tA, const Mat2& tB, int n) {
    if (n < 0) throw std::invalid_argument("cell_matrix: n must be >= 0");
    Mat2 prev = tB;
    Mat2 cur = tA;
    if (n == 0) return prev;
    for (int i = 2; i <= n; ++i) {
        Mat2 next = mat_pow(prev, rule.l()) * mat_pow(cur, rule.m());
        prev = cur;
        cur = next;
    }
    return cur;
}

inline Mat2 cell_matrix(const SystemSpec& spec, const TilingRule& rule, double omega, int n) {
    const Mat2 tA = element_matrix(spec, Letter::A, omega);
    const Mat2 tB = element_matrix(spec, Letter::B, omega);
    return cell_matrix(rule, tA, tB, n);
}

/// Ordered product of element matrices along a word; the first letter acts first.
inline Mat2 word_matrix(const std::string& letters, const Mat2& tA, const Mat2& tB) {
    Mat2 acc = Mat2::identity();
    for (char c : letters) acc = (c == 'A' ? tA : tB) * acc;
    return acc;
}

/// T_n by explicit product over word(rule, n). Oracle for the recursions.
inline Mat2 cell_matrix_direct(const SystemSpec& spec, const TilingRule& rule, double omega, int n,
                               std::int64_t cap = kDirectProductCap) {
    const TilingWord w = word(rule, n, cap);
    return word_matrix(w.letters, element_matrix(spec, Letter::A, omega),
                       element_matrix(spec, Letter::B, omega));
}

/// tr(T_n) from the explicit word product.
inline double direct_trace(const SystemSpec& spec, const TilingRule& rule, double omega, int n,
                           std::int64_t cap = kDirectProductCap) {
    return trace(cell_matrix_direct(spec, rule, omega, n, cap));
}

// ---------------------------------------------------------------------------
// Seeds and single steps

inline TraceSeed seed_from_matrices(const TilingRule& rule, const Mat2& tA, const Mat2& tB) {
    const Mat2 t2 = mat_pow(tB, rule.l()) * mat_pow(tA, rule.m());
    return {trace(tB), trace(tA), trace(t2), trace(tB * tA)};
}

inline TraceSeed seed_from_system(const SystemSpec& spec, const TilingRule& rule, double omega) {
    return seed_from_matrices(rule, element_matrix(spec, Letter::A, omega),
                              element_matrix(spec, Letter::B, omega));
}

/// x_{n+1} = x_n x_{n-1} - x_{n-2}.
inline double step_golden(double x_prev2, double x_prev1, double x_cur) noexcept {
    return x_cur * x_prev1 - x_prev2;
}

struct TraceStep {
    double x_next = 0.0;
    double t_next = 0.0;
};

/// t_{n+1} = x_n x_{n-1} - t_n, then x_{n+1} = x_n t_{n+1} - x_{n-1}.
inline TraceStep step_silver(double x_prev1, double x_cur, double t_cur) noexcept {
    const double t_next = x_cur * x_prev1 - t_cur;
    return {x_cur * t_next - x_prev1, t_next};
}

/// Precious-mean step (l = 1, m >= 2):
///   t_{n+1} = d_{m+1}(x_{n-1}) t_n - d_m(x_{n-1}) x_{n-2}
///   x_{n+1} = d_m(x_n) t_{n+1} - d_{m-1}(x_n) x_{n-1}
inline TraceStep step_precious(int m, double x_prev1, double x_cur, double t_cur, double x_prev2) {
    if (m < 2) throw std::invalid_argument("step_precious: m must be >= 2");
    const auto um = static_cast<unsigned>(m);
    const double t_next = cheb_eval(um + 1, x_prev1) * t_cur - cheb_eval(um, x_prev1) * x_prev2;
    const double x_next = cheb_eval(um, x_cur) * t_next - cheb_eval(um - 1, x_cur) * x_prev1;
    return {x_next, t_next};
}

/// Metal-mean step (m = 1, l >= 1), t eliminated:
///   x_{n+1} = d_l(x_{n-1}) [x_n x_{n-1} - d_{l+1}(x_{n-2}) + d_{l-1}(x_{n-2})] - x_n d_{l-1}(x_{n-1})
inline double step_metal(int l, double x_prev2, double x_prev1, double x_cur) {
    if (l < 1) throw std::invalid_argument("step_metal: l must be >= 1");
    const auto ul = static_cast<unsigned>(l);
    return cheb_eval(ul, x_prev1) *
               (x_cur * x_prev1 - cheb_eval(ul + 1, x_prev2) + cheb_eval(ul - 1, x_prev2)) -
           x_cur * cheb_eval(ul - 1, x_prev1);
}

/// General (m, l) step; t_{n+1} is evaluated first because x_{n+1} consumes it.
inline TraceStep step_general(const TilingRule& rule, double x_prev2, double x_prev1, double x_cur,
                              double t_cur) noexcept {
    const auto m = static_cast<unsigned>(rule.m());
    const auto l = static_cast<unsigned>(rule.l());
    const double t_next =
        cheb_eval(m + 1, x_prev1) * (cheb_eval(l, x_prev2) * t_cur - cheb_eval(l - 1, x_prev2) * x_prev1) -
        cheb_eval(m, x_prev1) * (cheb_eval(l + 1, x_prev2) - cheb_eval(l - 1, x_prev2));
    const double x_next =
        cheb_eval(m, x_cur) * (cheb_eval(l, x_prev1) * t_next - cheb_eval(l - 1, x_prev1) * x_cur) -
        cheb_eval(m - 1, x_cur) * (cheb_eval(l + 1, x_prev1) - cheb_eval(l - 1, x_prev1));
    return {x_next, t_next};
}

// ---------------------------------------------------------------------------
// Sequences

struct TraceSequence {
    TilingRule rule;
    std::vector<double> xs;         ///< x_0 .. x_{n_max}
    std::vector<double> ts;         ///< t_2 .. t_{n_max}; empty when the recursion has no t
    std::optional<int> escaped_at;  ///< first frozen index

    int n_max() const noexcept { return static_cast<int>(xs.size()) - 1; }
    double x(int n) const { return xs.at(static_cast<std::size_t>(n)); }
    bool has_t() const noexcept { return !ts.empty(); }
    double t(int n) const { return ts.at(static_cast<std::size_t>(n - 2)); }
    bool escaped(int n) const noexcept { return escaped_at && n >= *escaped_at; }
};

namespace detail {

inline bool escapes(double v) noexcept { return !std::isfinite(v) || std::abs(v) > kEscapeThreshold; }

inline double frozen_value(double v) noexcept {
    return std::signbit(v) && !std::isnan(v) ? -kSaturation : kSaturation;
}

} // namespace detail

/// Runs the rule's recursion from a seed up to x_{n_max}.
inline TraceSequence trace_sequence(const TilingRule& rule, const TraceSeed& seed, int n_max) {
    if (n_max < 2) throw std::invalid_argument("trace_sequence: n_max must be >= 2");
    const Recursion rec = recursion_for(rule);
    TraceSequence seq{rule, {}, {}, std::nullopt};
    seq.xs.reserve(static_cast<std::size_t>(n_max) + 1);
    seq.xs = {seed.x0, seed.x1, seed.x2};
    const bool with_t = carries_t(rec);
    if (with_t) {
        seq.ts.reserve(static_cast<std::size_t>(n_max) - 1);
        seq.ts.push_back(seed.t2);
    }

    for (int i = 0; i <= 2; ++i) {
        if (detail::escapes(seq.xs[i])) {
            seq.escaped_at = i;
            break;
        }
    }
    if (!seq.escaped_at && with_t && detail::escapes(seed.t2)) seq.escaped_at = 2;
    if (seq.escaped_at) {
        for (int i = *seq.escaped_at; i <= 2; ++i) seq.xs[i] = detail::frozen_value(seq.xs[i]);
    }

    for (int n = 2; n < n_max; ++n) {
        if (seq.escaped_at) {
            seq.xs.push_back(detail::frozen_value(seq.xs.back()));
            if (with_t) seq.ts.push_back(kSaturation);
            continue;
        }
        const double xc = seq.xs[n];
        const double xp1 = seq.xs[n - 1];
        const double xp2 = seq.xs[n - 2];
        double x_next = 0.0;
        double t_next = 0.0;
        switch (rec) {
        case Recursion::Golden: x_next = step_golden(xp2, xp1, xc); break;
        case Recursion::Metal: x_next = step_metal(rule.l(), xp2, xp1, xc); break;
        case Recursion::Silver: {
            const TraceStep s = step_silver(xp1, xc, seq.ts.back());
            x_next = s.x_next;
            t_next = s.t_next;
            break;
        }
        case Recursion::Precious: {
            const TraceStep s = step_precious(rule.m(), xp1, xc, seq.ts.back(), xp2);
            x_next = s.x_next;
            t_next = s.t_next;
            break;
        }
        case Recursion::General: {
            const TraceStep s = step_general(rule, xp2, xp1, xc, seq.ts.back());
            x_next = s.x_next;
            t_next = s.t_next;
            break;
        }
        }
        if (detail::escapes(x_next) || (with_t && detail::escapes(t_next))) {
            seq.escaped_at = n + 1;
            seq.xs.push_back(detail::frozen_value(x_next));
            if (with_t) seq.ts.push_back(detail::frozen_value(t_next));
        } else {
            seq.xs.push_back(x_next);
            if (with_t) seq.ts.push_back(t_next);
        }
    }
    // n_max == 2 leaves the vector at exactly three entries.
    seq.xs.resize(static_cast<std::size_t>(n_max) + 1);
    if (with_t) seq.ts.resize(static_cast<std::size_t>(n_max) - 1);
    return seq;
}

inline TraceSequence trace_sequence(const SystemSpec& spec, const TilingRule& rule, double omega,
                                    int n_max) {
    return trace_sequence(rule, seed_from_system(spec, rule, omega), n_max);
}

/// x_n for a single n; n = 0, 1 come straight from the element matrices.
inline double trace_at(const SystemSpec& spec, const TilingRule& rule, double omega, int n) {
    if (n < 0) throw std::invalid_argument("trace_at: n must be >= 0");
    if (n == 0) return trace(element_matrix(spec, Letter::B, omega));
    if (n == 1) return trace(element_matrix(spec, Letter::A, omega));
    return trace_sequence(spec, rule, omega, n).x(n);
}

} // namespace fibgap
