#pragma once

/**
 * @file tiling.hpp
 * @brief Generalised Fibonacci words generated by A -> A^m B^l, B -> A.
 *
 * Convention used throughout the library: a word lists elements left to right
 * in physical space, and the state vector propagates from the left end. The
 * transfer matrix of a word is therefore the product of element matrices taken
 * right to left (the first letter is the rightmost factor). With this choice
 * word(n+1) = word(n)^m ++ word(n-1)^l corresponds to T_{n+1} = T_{n-1}^l T_n^m.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "fibgap/errors.hpp"

namespace fibgap {

enum class Letter : char { A = 'A', B = 'B' };

/// Substitution parameters (m, l); both at least 1.
class TilingRule {
public:
    constexpr TilingRule() = default;
    constexpr TilingRule(int m, int l) : m_(m), l_(l) {
        if (m < 1 || l < 1) throw std::invalid_argument("TilingRule: m and l must be >= 1");
    }

    constexpr int m() const noexcept { return m_; }
    constexpr int l() const noexcept { return l_; }

    constexpr bool operator==(const TilingRule&) const = default;

private:
    int m_ = 1;
    int l_ = 1;
};

namespace rules {
inline constexpr TilingRule golden{1, 1};
inline constexpr TilingRule silver{2, 1};
inline constexpr TilingRule bronze{3, 1};
inline constexpr TilingRule copper{1, 2};
inline constexpr TilingRule nickel{1, 3};
} // namespace rules

inline std::string to_string(const TilingRule& rule) {
    return "(" + std::to_string(rule.m()) + "," + std::to_string(rule.l()) + ")";
}

/// Default cap on materialised word length.
inline constexpr std::int64_t kDefaultWordCap = 10'000'000;

struct TilingWord {
    std::string letters; ///< 'A'/'B' characters, left to right
    int order = 0;       ///< n of F_n

    std::size_t size() const noexcept { return letters.size(); }
};

namespace detail {

inline std::int64_t checked_mul_add(std::int64_t a, std::int64_t x, std::int64_t b, std::int64_t y) {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t s = 0;
    if (__builtin_mul_overflow(a, x, &p) || __builtin_mul_overflow(b, y, &q) ||
        __builtin_add_overflow(p, q, &s)) {
        throw OverflowError("generalised Fibonacci number exceeds 2^63 - 1");
    }
    return s;
}

} // namespace detail

/// F_n with F_0 = F_1 = 1 and F_n = m F_{n-1} + l F_{n-2}.
inline std::int64_t fib_number(const TilingRule& rule, int n) {
    if (n < 0) throw std::invalid_argument("fib_number: n must be >= 0");
    std::int64_t prev = 1;
    std::int64_t cur = 1;
    for (int i = 2; i <= n; ++i) {
        const std::int64_t next = detail::checked_mul_add(rule.m(), cur, rule.l(), prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Number of A and B letters in F_n, without building the word.
inline std::pair<std::int64_t, std::int64_t> letter_counts(const TilingRule& rule, int n) {
    if (n < 0) throw std::invalid_argument("letter_counts: n must be >= 0");
    std::pair<std::int64_t, std::int64_t> prev{0, 1}; // F_0 = B
    std::pair<std::int64_t, std::int64_t> cur{1, 0};  // F_1 = A
    if (n == 0) return prev;
    for (int i = 2; i <= n; ++i) {
        std::pair<std::int64_t, std::int64_t> next{
            detail::checked_mul_add(rule.m(), cur.first, rule.l(), prev.first),
            detail::checked_mul_add(rule.m(), cur.second, rule.l(), prev.second)};
        prev = cur;
        cur = next;
    }
    return cur;
}

/// The word F_n, built by concatenation: F_{n+1} = F_n^m F_{n-1}^l.
inline TilingWord word(const TilingRule& rule, int n, std::int64_t cap = kDefaultWordCap) {
    if (n < 0) throw std::invalid_argument("word: n must be >= 0");
    const std::int64_t length = fib_number(rule, n);
    if (length > cap) {
        throw LengthCapError("word F_" + std::to_string(n) + " has " + std::to_string(length) +
                             " letters, cap is " + std::to_string(cap));
    }
    std::string prev = "B";
    std::string cur = "A";
    if (n == 0) return {prev, 0};
    for (int i = 2; i <= n; ++i) {
        std::string next;
        next.reserve(static_cast<std::size_t>(rule.m()) * cur.size() +
                     static_cast<std::size_t>(rule.l()) * prev.size());
        for (int j = 0; j < rule.m(); ++j) next += cur;
        for (int j = 0; j < rule.l(); ++j) next += prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {std::move(cur), n};
}

/// sigma(m, l) = lim F_{n+1} / F_n = (m + sqrt(m^2 + 4l)) / 2.
inline double limit_ratio(const TilingRule& rule) noexcept {
    const double m = rule.m();
    const double l = rule.l();
    return (m + std::sqrt(m * m + 4.0 * l)) / 2.0;
}

} // namespace fibgap
