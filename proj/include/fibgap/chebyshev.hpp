#pragma once

/**
 * @file chebyshev.hpp
 * @brief The polynomial family d_k(x): d_0 = 0, d_1 = 1, d_k = x d_{k-1} - d_{k-2}.
 *
 * These are rescaled Chebyshev polynomials of the second kind, d_k(x) = U_{k-1}(x/2).
 * For a unimodular M with trace x they give M^k = d_k(x) M - d_{k-1}(x) I, which
 * is what makes every trace recursion in tracemap.hpp possible.
 */

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fibgap/mat2.hpp"

namespace fibgap {

/// Non-negative polynomial index.
struct ChebIndex {
    unsigned k = 0;

    constexpr ChebIndex() = default;
    constexpr explicit ChebIndex(unsigned value) : k(value) {}
};

/// d_k(x) by the three-term recursion. Values are clamped to +/-kSaturation
/// after every step so that escaped traces never produce inf - inf.
inline double cheb_eval(unsigned k, double x) noexcept {
    if (k == 0) return 0.0;
    double prev = 0.0;
    double cur = 1.0;
    for (unsigned i = 2; i <= k; ++i) {
        const double next = saturate(x * cur - prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

inline double cheb_eval(ChebIndex k, double x) noexcept { return cheb_eval(k.k, x); }

/// [d_0(x), ..., d_{k_max}(x)] in one pass.
inline std::vector<double> cheb_seq(unsigned k_max, double x) {
    std::vector<double> out;
    out.reserve(k_max + 1);
    out.push_back(0.0);
    if (k_max == 0) return out;
    out.push_back(1.0);
    for (unsigned i = 2; i <= k_max; ++i) out.push_back(saturate(x * out[i - 1] - out[i - 2]));
    return out;
}

inline std::vector<double> cheb_seq(ChebIndex k_max, double x) { return cheb_seq(k_max.k, x); }

/// Closed form through the roots of lambda^2 - x lambda + 1. Only valid for |x| > 2;
/// at |x| = 2 it is a removable 0/0, so callers use cheb_eval there.
inline double cheb_closed_form(unsigned k, double x) {
    if (!(std::abs(x) > 2.0)) throw std::domain_error("cheb_closed_form: requires |x| > 2");
    const double s = std::sqrt(x * x - 4.0);
    const double up = (x + s) / 2.0;
    const double down = (x - s) / 2.0;
    return (std::pow(up, static_cast<double>(k)) - std::pow(down, static_cast<double>(k))) / s;
}

/// Trace of M^k for unimodular M with tr(M) = x: d_{k+1}(x) - d_{k-1}(x).
inline double power_trace(unsigned k, double x) noexcept {
    if (k == 0) return 2.0;
    return saturate(cheb_eval(k + 1, x) - cheb_eval(k - 1, x));
}

} // namespace fibgap
