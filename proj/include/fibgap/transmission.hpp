#pragma once

/**
 * @file transmission.hpp
 * @brief Finite stacks of tiling cells: global transfer matrix T_G and the
 *        transmission coefficient T_c = 1 / (T_G)_22.
 *
 * Segments are listed left to right; the first segment acts first on the
 * state vector, so T_G = T_{seg_k} ... T_{seg_1}.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fibgap/errors.hpp"
#include "fibgap/grid.hpp"
#include "fibgap/mat2.hpp"
#include "fibgap/systems.hpp"
#include "fibgap/tiling.hpp"
#include "fibgap/tracemap.hpp"

namespace fibgap {

/// One generalised Fibonacci cell F_order.
struct CellSegment {
    TilingRule rule;
    int order = 0;
};

using Segment = std::variant<CellSegment, TilingWord>;

inline std::int64_t segment_length(const Segment& s) {
    if (const auto* cell = std::get_if<CellSegment>(&s)) return fib_number(cell->rule, cell->order);
    return static_cast<std::int64_t>(std::get<TilingWord>(s).size());
}

class Stack {
public:
    Stack(std::vector<Segment> segments, SystemSpec spec, std::int64_t cap = kDefaultWordCap)
        : segments_(std::move(segments)), spec_(std::move(spec)) {
        if (segments_.empty()) throw std::invalid_argument("Stack: at least one segment required");
        std::int64_t total = 0;
        for (const auto& s : segments_) {
            if (const auto* w = std::get_if<TilingWord>(&s)) {
                if (w->letters.find_first_not_of("AB") != std::string::npos)
                    throw std::invalid_argument("Stack: words may only contain 'A' and 'B'");
            }
            if (__builtin_add_overflow(total, segment_length(s), &total))
                throw OverflowError("Stack: element count overflows");
        }
        if (total > cap)
            throw LengthCapError("Stack: " + std::to_string(total) + " elements exceeds cap " + std::to_string(cap));
        element_count_ = total;
    }

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const SystemSpec& spec() const noexcept { return spec_; }
    std::int64_t element_count() const noexcept { return element_count_; }

    /// The same segments in reverse order, each word reversed.
    Stack reversed() const {
        std::vector<Segment> rev;
        rev.reserve(segments_.size());
        for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
            if (const auto* cell = std::get_if<CellSegment>(&*it)) {
                TilingWord w = word(cell->rule, cell->order);
                std::reverse(w.letters.begin(), w.letters.end());
                rev.emplace_back(std::move(w));
            } else {
                TilingWord w = std::get<TilingWord>(*it);
                std::reverse(w.letters.begin(), w.letters.end());
                rev.emplace_back(std::move(w));
            }
        }
        return Stack(std::move(rev), spec_);
    }

private:
    std::vector<Segment> segments_;
    SystemSpec spec_;
    std::int64_t element_count_ = 0;
};

/// Cells F_first, ..., F_last joined left to right.
inline Stack quasicrystal_stack(const SystemSpec& spec, const TilingRule& rule, int first, int last) {
    if (first < 0 || last < first) throw std::invalid_argument("quasicrystal_stack: need 0 <= first <= last");
    std::vector<Segment> segs;
    for (int n = first; n <= last; ++n) segs.emplace_back(CellSegment{rule, n});
    return Stack(std::move(segs), spec);
}

/// `repeats` copies of F_n.
inline Stack periodic_sample(const TilingRule& rule, int n, int repeats, const SystemSpec& spec) {
    if (repeats < 1) throw std::invalid_argument("periodic_sample: repeats must be >= 1");
    if (n < 0) throw std::invalid_argument("periodic_sample: n must be >= 0");
    std::vector<Segment> segs(static_cast<std::size_t>(repeats), CellSegment{rule, n});
    return Stack(std::move(segs), spec);
}

inline Mat2 global_transfer(const Stack& stack, double omega) {
    const Mat2 tA = element_matrix(stack.spec(), Letter::A, omega);
    const Mat2 tB = element_matrix(stack.spec(), Letter::B, omega);
    Mat2 acc = Mat2::identity();
    for (const auto& s : stack.segments()) {
        if (const auto* cell = std::get_if<CellSegment>(&s)) {
            acc = cell_matrix(cell->rule, tA, tB, cell->order) * acc;
        } else {
            acc = word_matrix(std::get<TilingWord>(s).letters, tA, tB) * acc;
        }
    }
    return acc;
}

inline constexpr double kDegenerateEntry = 1e-300;
inline constexpr double kLogCap = 308.0;

/// 1 / (T_G)_22; throws DegenerateEntry when the entry vanishes.
inline double transmission_coefficient(const Stack& stack, double omega) {
    const double g22 = global_transfer(stack, omega).a22;
    if (!(std::abs(g22) >= kDegenerateEntry))
        throw DegenerateEntry("transmission_coefficient: |T_G22| below 1e-300");
    return 1.0 / g22;
}

enum class SampleFlag : unsigned char { None = 0, Pole = 1, Degenerate = 2 };

inline std::string_view to_string(SampleFlag f) noexcept {
    switch (f) {
    case SampleFlag::None: return "";
    case SampleFlag::Pole: return "pole";
    case SampleFlag::Degenerate: return "degenerate";
    }
    return "";
}

struct TransmissionSample {
    double omega = 0.0;
    double T_c = 0.0;
    double log10_abs_Tc = 0.0;
    SampleFlag flag = SampleFlag::None;
};

struct TransmissionProfile {
    FrequencyGrid grid;
    std::vector<TransmissionSample> values;
};

inline double capped_log10(double v) noexcept {
    const double a = std::abs(v);
    if (a == 0.0) return -kLogCap;
    if (!std::isfinite(a)) return kLogCap;
    return std::clamp(std::log10(a), -kLogCap, kLogCap);
}

inline TransmissionProfile transmission_profile(const Stack& stack, const FrequencyGrid& grid, unsigned workers = 0) {
    TransmissionProfile out;
    out.grid = grid;
    out.values = parallel_map(
        grid.points,
        [&](std::size_t i) {
            TransmissionSample s;
            s.omega = grid.at(i);
            try {
                s.T_c = transmission_coefficient(stack, s.omega);
            } catch (const BeamPoleError&) {
                s.T_c = std::numeric_limits<double>::quiet_NaN();
                s.log10_abs_Tc = std::numeric_limits<double>::quiet_NaN();
                s.flag = SampleFlag::Pole;
                return s;
            } catch (const DegenerateEntry&) {
                s.T_c = std::numeric_limits<double>::infinity();
                s.flag = SampleFlag::Degenerate;
            }
            s.log10_abs_Tc = capped_log10(s.T_c);
            return s;
        },
        workers);
    return out;
}

// ---------------------------------------------------------------------------
// Stack descriptors: "quasicrystal:0..6" or "periodic:n=3,repeats=7"

struct StackDescriptor {
    enum class Kind { Quasicrystal, Periodic } kind = Kind::Quasicrystal;
    int first = 0;
    int last = 0;
    int n = 0;
    int repeats = 1;
};

namespace detail {

inline int parse_int(std::string_view s, std::string_view what) {
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw ConfigError("stack descriptor: bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

} // namespace detail

inline StackDescriptor parse_stack_descriptor(std::string_view text) {
    StackDescriptor d;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ConfigError("stack descriptor: expected '<kind>:<args>'");
    const std::string_view kind = text.substr(0, colon);
    const std::string_view args = text.substr(colon + 1);
    if (kind == "quasicrystal") {
        const auto dots = args.find("..");
        if (dots == std::string_view::npos) throw ConfigError("stack descriptor: expected 'quasicrystal:a..b'");
        d.kind = StackDescriptor::Kind::Quasicrystal;
        d.first = detail::parse_int(args.substr(0, dots), "first order");
        d.last = detail::parse_int(args.substr(dots + 2), "last order");
        if (d.first < 0 || d.last < d.first) throw ConfigError("stack descriptor: need 0 <= a <= b");
        return d;
    }
    if (kind == "periodic") {
        d.kind = StackDescriptor::Kind::Periodic;
        bool have_n = false;
        bool have_repeats = false;
        std::string_view rest = args;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw ConfigError("stack descriptor: expected key=value");
            const std::string_view key = item.substr(0, eq);
            const std::string_view value = item.substr(eq + 1);
            if (key == "n") {
                d.n = detail::parse_int(value, "n");
                have_n = true;
            } else if (key == "repeats") {
                d.repeats = detail::parse_int(value, "repeats");
                have_repeats = true;
            } else {
                throw ConfigError("stack descriptor: unknown key '" + std::string(key) + "'");
            }
        }
        if (!have_n || !have_repeats) throw ConfigError("stack descriptor: periodic needs n= and repeats=");
        if (d.n < 0 || d.repeats < 1) throw ConfigError("stack descriptor: need n >= 0 and repeats >= 1");
        return d;
    }
    throw ConfigError("stack descriptor: unknown kind '" + std::string(kind) + "'");
}

inline Stack make_stack(const StackDescriptor& d, const SystemSpec& spec, const TilingRule& rule) {
    if (d.kind == StackDescriptor::Kind::Quasicrystal) return quasicrystal_stack(spec, rule, d.first, d.last);
    return periodic_sample(rule, d.n, d.repeats, spec);
}

} // namespace fibgap
