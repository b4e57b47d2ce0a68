#pragma once

/**
 * @file grid.hpp
 * @brief Linear frequency grids and an ordered parallel map over grid points.
 */

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fibgap {

struct FrequencyGrid {
    double omega_min = 0.0;
    double omega_max = 1.0;
    std::size_t points = 2;

    FrequencyGrid() = default;
    FrequencyGrid(double lo, double hi, std::size_t n) : omega_min(lo), omega_max(hi), points(n) {
        if (!(lo < hi)) throw std::invalid_argument("FrequencyGrid: omega_min must be < omega_max");
        if (n < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 points");
    }

    double step() const noexcept { return (omega_max - omega_min) / static_cast<double>(points - 1); }

    double at(std::size_t i) const noexcept {
        if (i + 1 == points) return omega_max;
        return omega_min + static_cast<double>(i) * step();
    }

    std::vector<double> values() const {
        std::vector<double> out(points);
        for (std::size_t i = 0; i < points; ++i) out[i] = at(i);
        return out;
    }
};

/// Closed frequency interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double w) const noexcept { return lo <= w && w <= hi; }
    bool intersects(const Interval& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
    bool within(const Interval& o) const noexcept { return o.lo <= lo && hi <= o.hi; }
    double mid() const noexcept { return 0.5 * (lo + hi); }
};

/// Worker count: FIBGAP_WORKERS if set and positive, else hardware concurrency.
inline unsigned default_workers() {
    if (const char* env = std::getenv("FIBGAP_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i in [0, n), evaluated on `workers` threads in contiguous
/// blocks. Results are ordered by index regardless of the worker count. The
/// first exception thrown by fn is rethrown after all workers join.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn, unsigned workers = 0) {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(n, begin + block);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// Bisection on a boolean predicate. `inside` satisfies pred, `outside` does not;
/// returns the last point known to satisfy pred once the bracket is below
/// rel_tol relative to the frequency scale.
template <class Pred>
double bisect_edge(double inside, double outside, Pred pred, double rel_tol = 1e-6) {
    for (int iter = 0; iter < 200; ++iter) {
        const double scale = std::max({std::abs(inside), std::abs(outside), 1e-300});
        if (std::abs(outside - inside) <= rel_tol * scale) break;
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        if (pred(mid)) inside = mid;
        else outside = mid;
    }
    return inside;
}

} // namespace fibgap
