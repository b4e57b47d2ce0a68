#pragma once

/**
 * @file mat2.hpp
 * @brief Real 2x2 transfer-matrix arithmetic.
 *
 * Every wave system handled by the library is described by a real unimodular
 * 2x2 matrix per element. Products of many such matrices grow doubly
 * exponentially inside band gaps, so entries are clamped to +/-kSaturation and
 * a clamped matrix reports escaped() == true.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fibgap {

/// Magnitude at which matrix entries, traces and polynomial values are clamped.
inline constexpr double kSaturation = 1e300;

/// Clamp a value into [-kSaturation, kSaturation]. NaN is passed through.
inline double saturate(double v) noexcept {
    if (v > kSaturation) return kSaturation;
    if (v < -kSaturation) return -kSaturation;
    return v;
}

inline bool is_saturated(double v) noexcept { return std::abs(v) >= kSaturation; }

struct Mat2 {
    double a11 = 1.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 1.0;

    static constexpr Mat2 identity() noexcept { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr double det() const noexcept { return a11 * a22 - a12 * a21; }
    constexpr double trace() const noexcept { return a11 + a22; }

    constexpr Mat2 operator-() const noexcept { return {-a11, -a12, -a21, -a22}; }

    /// True when any entry sits at the saturation clamp or is NaN (inf - inf
    /// inside a product of clamped entries).
    bool escaped() const noexcept {
        auto bad = [](double v) { return !(std::abs(v) < kSaturation); };
        return bad(a11) || bad(a12) || bad(a21) || bad(a22);
    }

    bool operator==(const Mat2&) const = default;
};

/// Standard product a*b with saturating entries.
inline Mat2 mat_mul(const Mat2& a, const Mat2& b) noexcept {
    return {saturate(a.a11 * b.a11 + a.a12 * b.a21),
            saturate(a.a11 * b.a12 + a.a12 * b.a22),
            saturate(a.a21 * b.a11 + a.a22 * b.a21),
            saturate(a.a21 * b.a12 + a.a22 * b.a22)};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) noexcept { return mat_mul(a, b); }

/// a^p for p >= 1 by repeated squaring.
inline Mat2 mat_pow(Mat2 a, std::int64_t p) {
    if (p < 1) throw std::invalid_argument("mat_pow: exponent must be >= 1");
    Mat2 result = Mat2::identity();
    bool first = true;
    while (p > 0) {
        if (p & 1) {
            result = first ? a : mat_mul(result, a);
            first = false;
        }
        p >>= 1;
        if (p > 0) a = mat_mul(a, a);
    }
    return result;
}

inline double trace(const Mat2& a) noexcept { return a.a11 + a.a22; }

inline Mat2 inverse_unimodular(const Mat2& a) noexcept { return {a.a22, -a.a12, -a.a21, a.a11}; }

/// Scale used for the relative determinant test: the determinant is a difference
/// of two products, so rounding error is proportional to their magnitudes.
inline double det_scale(const Mat2& a) noexcept {
    return std::max(1.0, std::abs(a.a11 * a.a22) + std::abs(a.a12 * a.a21));
}

/// |det(a) - 1| relative to det_scale(a).
inline double unimodular_error(const Mat2& a) noexcept {
    return std::abs(a.det() - 1.0) / det_scale(a);
}

/// Relative determinant check. Escaped (clamped) matrices carry no usable
/// determinant and are reported as not unimodular.
inline bool is_unimodular(const Mat2& a, double rel_tol = 1e-9) noexcept {
    if (a.escaped()) return false;
    return unimodular_error(a) <= rel_tol;
}

} // namespace fibgap
