#pragma once

/**
 * @file validate.hpp
 * @brief Cross-module oracle suites. Every suite is a pure function of its
 *        options (including the seed), so reports are reproducible.
 *
 * Suites: chebyshev, recursion-oracle, soundness, dispersion, transmission.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fibgap/fibgap.hpp"
#include "fibgap/presets.hpp"

namespace fibgap {

struct ValidationCheck {
    ValidationCheck() = default;
    explicit ValidationCheck(std::string n) : name(std::move(n)) {}

    std::string name;
    bool passed = true;
    std::int64_t count = 0;    ///< cases evaluated
    std::int64_t failures = 0; ///< cases violating the check
    double max_error = 0.0;    ///< largest observed error, where meaningful
    std::string detail;        ///< first failure, if any

    void record(bool ok, double err = 0.0, const std::string& what = {}) {
        ++count;
        if (std::isfinite(err)) max_error = std::max(max_error, err);
        if (!ok) {
            ++failures;
            passed = false;
            if (detail.empty()) detail = what;
        }
    }
};

struct ValidationReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<ValidationCheck> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }
    void append(const ValidationReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

inline nlohmann::json to_json(const ValidationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"count", c.count},
                          {"failures", c.failures},
                          {"max_error", c.max_error},
                          {"detail", c.detail}});
    }
    return {{"suite", r.suite}, {"seed", r.seed}, {"passed", r.passed()}, {"checks", checks}};
}

/// Sample sizes. Defaults are the acceptance-scale values.
struct ValidationOptions {
    std::uint64_t seed = 42;
    int cheb_sandwich_samples = 10'000;
    int cheb_closed_form_samples = 2'000;
    int oracle_omegas = 200;   ///< per rule and system
    int oracle_n_max = 10;
    std::int64_t soundness_target = 10'000; ///< certified (omega, N) pairs
    int soundness_horizon = 20;
    int dispersion_samples = 500;
    int transmission_samples = 200;
    double det_tol = 1e-8;
};

/// Systems exercised by the suites: the reference mass-spring, rod and beam configurations.
inline std::vector<SystemSpec> reference_systems() {
    return {SystemSpec(presets::fig4_mass_spring()), SystemSpec(presets::fig5_rod()),
            SystemSpec(presets::fig7_beam())};
}

inline std::vector<TilingRule> oracle_rules() {
    return {rules::golden, rules::silver, rules::bronze, rules::copper, rules::nickel};
}

namespace detail {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline std::string case_label(const SystemSpec& spec, const TilingRule& rule, double omega, int n) {
    return std::string(to_string(spec.kind())) + " rule " + to_string(rule) + " omega=" + std::to_string(omega) +
           " n=" + std::to_string(n);
}

/// Word product accumulated in long double. The double-precision product loses
/// more digits to cancellation than the trace map does, so it cannot serve as
/// an oracle at the 1e-8 level on its own.
struct ExtendedMat2 {
    long double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
    bool overflowed = false; ///< an entry passed kOracleLimit; product abandoned
};

inline constexpr long double kOracleLimit = 1e120L;

inline ExtendedMat2 word_matrix_extended(const std::string& letters, const Mat2& tA, const Mat2& tB) {
    ExtendedMat2 acc;
    for (char c : letters) {
        const Mat2& e = c == 'A' ? tA : tB;
        const long double e11 = e.a11, e12 = e.a12, e21 = e.a21, e22 = e.a22;
        acc = {e11 * acc.a11 + e12 * acc.a21, e11 * acc.a12 + e12 * acc.a22, e21 * acc.a11 + e22 * acc.a21,
               e21 * acc.a12 + e22 * acc.a22, false};
        if (std::fabs(acc.a11) + std::fabs(acc.a12) + std::fabs(acc.a21) + std::fabs(acc.a22) > kOracleLimit) {
            acc.overflowed = true;
            break;
        }
    }
    return acc;
}

/// Any entry non-finite or beyond the trace-map escape threshold.
inline bool beyond_escape(const Mat2& m) noexcept {
    auto big = [](double v) { return !(std::abs(v) <= kEscapeThreshold); };
    return big(m.a11) || big(m.a12) || big(m.a21) || big(m.a22);
}

/// Uniform omega from the system's sampling window, avoiding omega = 0 and beam poles.
template <class Rng>
double draw_omega(const SystemSpec& spec, Rng& rng) {
    const Interval win = presets::sampling_window(spec);
    std::uniform_real_distribution<double> dist(win.lo, win.hi);
    for (;;) {
        const double w = dist(rng);
        if (!(w > 0.0)) continue;
        try {
            element_matrix(spec, Letter::A, w);
            element_matrix(spec, Letter::B, w);
            return w;
        } catch (const BeamPoleError&) {
        }
    }
}

} // namespace detail

// ---------------------------------------------------------------------------

inline ValidationReport validate_chebyshev(const ValidationOptions& opt = {}) {
    ValidationReport rep{"chebyshev", opt.seed, {}};
    std::mt19937_64 rng(opt.seed);

    ValidationCheck at_two{"d_k(2) = k, k <= 50"};
    for (unsigned k = 0; k <= 50; ++k) {
        const double v = cheb_eval(k, 2.0);
        at_two.record(v == static_cast<double>(k), std::abs(v - k), "k=" + std::to_string(k));
    }
    rep.checks.push_back(at_two);

    ValidationCheck closed{"closed form vs recursion, k <= 30, x in (2.0001, 10]"};
    std::uniform_real_distribution<double> xdist(2.0001, 10.0);
    std::uniform_int_distribution<unsigned> kdist(0, 30);
    for (int s = 0; s < opt.cheb_closed_form_samples; ++s) {
        const unsigned k = kdist(rng);
        const double x = std::nextafter(xdist(rng), 11.0);
        const double rec = cheb_eval(k, x);
        const double cf = cheb_closed_form(k, x);
        const double err = std::abs(cf - rec) / std::max(1.0, std::abs(rec));
        closed.record(err < 1e-10, err, "k=" + std::to_string(k) + " x=" + std::to_string(x));
    }
    rep.checks.push_back(closed);

    ValidationCheck sandwich{"|d_{k+1}| <= |x d_k| <= 2 |d_{k+1}|, |x| > 2, k >= 1"};
    std::uniform_int_distribution<unsigned> k1dist(1, 50);
    std::bernoulli_distribution sign(0.5);
    for (int s = 0; s < opt.cheb_sandwich_samples; ++s) {
        const unsigned k = k1dist(rng);
        double x = std::nextafter(std::uniform_real_distribution<double>(2.0, 10.0)(rng), 11.0);
        if (sign(rng)) x = -x;
        const double dk = std::abs(cheb_eval(k, x));
        const double dk1 = std::abs(cheb_eval(k + 1, x));
        const double mid = std::abs(x) * dk;
        // Both bounds can be tight to rounding; allow a few ulps.
        const double slack = 1e-13 * mid;
        const bool ok = dk1 <= mid + slack && mid <= 2.0 * dk1 + slack;
        sandwich.record(ok, 0.0, "k=" + std::to_string(k) + " x=" + std::to_string(x));
    }
    rep.checks.push_back(sandwich);

    ValidationCheck parity{"d_k(-x) = (-1)^(k+1) d_k(x), k <= 50"};
    std::uniform_real_distribution<double> pdist(-10.0, 10.0);
    for (int s = 0; s < 200; ++s) {
        const double x = pdist(rng);
        for (unsigned k = 0; k <= 50; ++k) {
            const double a = cheb_eval(k, -x);
            const double b = k % 2 == 1 ? cheb_eval(k, x) : -cheb_eval(k, x);
            parity.record(a == b, std::abs(a - b), "k=" + std::to_string(k) + " x=" + std::to_string(x));
        }
    }
    rep.checks.push_back(parity);
    return rep;
}

// ---------------------------------------------------------------------------

/// Trace-map recursion against explicit word products, plus det checks on
/// every element and cell matrix formed along the way.
inline ValidationReport validate_recursion_oracle(const ValidationOptions& opt = {}) {
    ValidationReport rep{"recursion-oracle", opt.seed, {}};
    std::mt19937_64 rng(opt.seed);
    ValidationCheck traces{"trace-map recursion vs direct product, relative error < 1e-8"};
    ValidationCheck dets{"det(T) = 1 for element and direct cell matrices"};
    for (const auto& spec : reference_systems()) {
        for (const auto& rule : oracle_rules()) {
            for (int s = 0; s < opt.oracle_omegas; ++s) {
                const double w = detail::draw_omega(spec, rng);
                const TraceSequence seq = trace_sequence(spec, rule, w, std::max(2, opt.oracle_n_max));
                const Mat2 tA = element_matrix(spec, Letter::A, w);
                const Mat2 tB = element_matrix(spec, Letter::B, w);
                dets.record(is_unimodular(tA, opt.det_tol), unimodular_error(tA), "element A");
                dets.record(is_unimodular(tB, opt.det_tol), unimodular_error(tB), "element B");
                for (int n = 0; n <= opt.oracle_n_max; ++n) {
                    const auto ext = detail::word_matrix_extended(word(rule, n, kDirectProductCap).letters, tA, tB);
                    const Mat2 direct{static_cast<double>(ext.a11), static_cast<double>(ext.a12),
                                      static_cast<double>(ext.a21), static_cast<double>(ext.a22)};
                    if (ext.overflowed || detail::beyond_escape(direct) || seq.escaped(n)) continue;
                    dets.record(is_unimodular(direct, opt.det_tol), unimodular_error(direct),
                                detail::case_label(spec, rule, w, n));
                    const double err = detail::rel_err(seq.x(n), static_cast<double>(ext.a11 + ext.a22));
                    traces.record(err < 1e-8, err, detail::case_label(spec, rule, w, n));
                }
            }
        }
    }
    rep.checks.push_back(traces);
    rep.checks.push_back(dets);
    return rep;
}

// ---------------------------------------------------------------------------

/// Certified (omega, N) pairs must have |x_n| > 2 for N <= n <= N + horizon,
/// confirmed by the matrix recursion T_{n+1} = T_{n-1}^l T_n^m (independent of
/// the trace map) until an entry passes the escape threshold.
inline ValidationReport validate_soundness(const ValidationOptions& opt = {}) {
    ValidationReport rep{"soundness", opt.seed, {}};
    std::mt19937_64 rng(opt.seed);
    const std::vector<TilingRule> rules_all = {rules::golden, rules::silver, rules::bronze, rules::copper,
                                               rules::nickel, TilingRule(4, 1), TilingRule(1, 4)};
    const auto systems = reference_systems();
    std::uniform_int_distribution<int> Ndist(0, 6);
    std::uniform_int_distribution<int> lookdist(0, 2);

    ValidationCheck sound{"certified omega: |x_n| > 2 for N <= n <= N + " + std::to_string(opt.soundness_horizon)};
    ValidationCheck dets{"det(T_n) = 1 along the matrix recursion (pre-saturation)"};
    std::int64_t certified = 0;
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = 200 * opt.soundness_target;
    std::size_t combo = 0;
    while (certified < opt.soundness_target && attempts < max_attempts) {
        ++attempts;
        const SystemSpec& spec = systems[combo % systems.size()];
        const TilingRule& rule = rules_all[(combo / systems.size()) % rules_all.size()];
        ++combo;
        const double w = detail::draw_omega(spec, rng);
        const int N = Ndist(rng);
        const MembershipOptions mopt{lookdist(rng)};
        const auto cert = membership(spec, rule, w, N, mopt);
        if (!cert) continue;
        ++certified;

        const Mat2 tA = element_matrix(spec, Letter::A, w);
        const Mat2 tB = element_matrix(spec, Letter::B, w);
        Mat2 prev = tB;
        Mat2 cur = tA;
        bool ok = true;
        std::string what;
        for (int n = 0; n <= N + opt.soundness_horizon; ++n) {
            const Mat2& tn = n == 0 ? prev : cur;
            if (detail::beyond_escape(tn)) break; // saturation reached
            dets.record(is_unimodular(tn, opt.det_tol), unimodular_error(tn), detail::case_label(spec, rule, w, n));
            if (n >= N && !(std::abs(trace(tn)) > 2.0)) {
                ok = false;
                what = detail::case_label(spec, rule, w, n) + " N=" + std::to_string(N) +
                       " x_n=" + std::to_string(trace(tn));
                break;
            }
            if (n >= 1) {
                Mat2 next = mat_pow(prev, rule.l()) * mat_pow(cur, rule.m());
                prev = cur;
                cur = next;
            }
        }
        sound.record(ok, 0.0, what);
    }
    rep.checks.push_back(sound);

    ValidationCheck enough{"certified pairs >= " + std::to_string(opt.soundness_target)};
    enough.record(certified >= opt.soundness_target, 0.0,
                  "only " + std::to_string(certified) + " certified in " + std::to_string(attempts) + " attempts");
    enough.count = certified;
    rep.checks.push_back(enough);
    rep.checks.push_back(dets);
    return rep;
}

// ---------------------------------------------------------------------------

inline ValidationReport validate_dispersion(const ValidationOptions& opt = {}) {
    ValidationReport rep{"dispersion", opt.seed, {}};
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> ndist(0, 8);

    ValidationCheck relation{"cos(K L_n) = x_n / 2 on pass bands, cosh(Im K L_n) = |x_n| / 2 on stop bands"};
    for (const auto& spec : reference_systems()) {
        for (int s = 0; s < opt.dispersion_samples; ++s) {
            const double w = detail::draw_omega(spec, rng);
            const int n = ndist(rng);
            const double x = trace_at(spec, rules::golden, w, n);
            const BlochPoint p = bloch_point(spec, rules::golden, n, w);
            if (std::abs(x) > kEscapeThreshold) continue;
            bool ok = p.propagating == (std::abs(x) <= 2.0);
            double err = 0.0;
            if (p.propagating) {
                err = std::abs(std::cos(p.K_L) - x / 2.0);
            } else {
                err = std::abs(std::cosh(p.attenuation) - std::abs(x) / 2.0) / std::max(1.0, std::abs(x));
                ok = ok && (p.negative_branch == (x < 0.0));
            }
            relation.record(ok && err < 1e-12, err, detail::case_label(spec, rules::golden, w, n));
        }
    }
    rep.checks.push_back(relation);

    ValidationCheck bands{"pass-band intervals contain only propagating grid points"};
    ValidationCheck sbg_disjoint{"S_4 intervals disjoint from pass bands of F_4..F_8"};
    for (const auto& spec : {SystemSpec(presets::fig4_mass_spring()), SystemSpec(presets::fig5_rod())}) {
        const Interval win = presets::sampling_window(spec);
        const FrequencyGrid grid(win.hi * 1e-3, win.hi, 600);
        const GapReport gaps = sweep(spec, rules::golden, grid, 4, {{}, 1e-9, 1});
        for (int n = 4; n <= 8; ++n) {
            const auto pb = passbands(spec, rules::golden, n, grid, 1e-9, 1);
            for (const auto& band : pb) {
                for (std::size_t i = 0; i < grid.points; ++i) {
                    if (band.contains(grid.at(i)))
                        bands.record(in_passband(spec, rules::golden, n, grid.at(i)), 0.0,
                                     detail::case_label(spec, rules::golden, grid.at(i), n));
                }
                for (const auto& g : gaps.intervals)
                    sbg_disjoint.record(!g.range.intersects(band), 0.0,
                                        detail::case_label(spec, rules::golden, g.range.mid(), n));
            }
        }
    }
    rep.checks.push_back(bands);
    rep.checks.push_back(sbg_disjoint);

    ValidationCheck symmetry{"canonical rod: x_n(omega) = x_n(2 Omega - omega) = x_n(omega + 2 Omega)"};
    const RodParams rod = presets::fig5_rod();
    const SystemSpec rspec(rod);
    const double half = presets::canonical_half_period(rod);
    std::uniform_real_distribution<double> wdist(0.0, 2.0 * half);
    for (int s = 0; s < opt.dispersion_samples; ++s) {
        const double w = wdist(rng);
        const int n = ndist(rng);
        const double x = trace_at(rspec, rules::golden, w, n);
        if (std::abs(x) > 1e6) continue; // reflected argument carries rounding amplified by growth
        const double xr = trace_at(rspec, rules::golden, 2.0 * half - w, n);
        const double xp = trace_at(rspec, rules::golden, w + 2.0 * half, n);
        const double err = std::max(detail::rel_err(xr, x), detail::rel_err(xp, x));
        symmetry.record(err < 1e-6, err, detail::case_label(rspec, rules::golden, w, n));
    }
    rep.checks.push_back(symmetry);
    return rep;
}

// ---------------------------------------------------------------------------

inline ValidationReport validate_transmission(const ValidationOptions& opt = {}) {
    ValidationReport rep{"transmission", opt.seed, {}};
    std::mt19937_64 rng(opt.seed);

    ValidationCheck dets{"det(T_G) = 1 for quasicrystal and periodic stacks"};
    ValidationCheck compose{"T_G([F_n, F_n]) = T_n^2, entrywise relative error < 1e-9"};
    ValidationCheck reversal{"rod and beam, reversed stack: (T_rev)_22 = (T_G)_11"};
    std::uniform_int_distribution<int> ndist(0, 6);
    for (const auto& spec : reference_systems()) {
        const Stack qc = quasicrystal_stack(spec, rules::golden, 0, 6);
        const Stack per = periodic_sample(rules::golden, 3, 7, spec);
        const Stack qc_rev = qc.reversed();
        for (int s = 0; s < opt.transmission_samples; ++s) {
            const double w = detail::draw_omega(spec, rng);
            for (const Stack* st : {&qc, &per}) {
                const Mat2 g = global_transfer(*st, w);
                if (!g.escaped())
                    dets.record(is_unimodular(g, opt.det_tol), unimodular_error(g),
                                detail::case_label(spec, rules::golden, w, -1));
            }
            const int n = ndist(rng);
            const Stack twice({CellSegment{rules::golden, n}, CellSegment{rules::golden, n}}, spec);
            const Mat2 g2 = global_transfer(twice, w);
            const Mat2 p2 = mat_pow(cell_matrix(spec, rules::golden, w, n), 2);
            if (!g2.escaped()) {
                const double scale = std::max({std::abs(p2.a11), std::abs(p2.a12), std::abs(p2.a21), std::abs(p2.a22),
                                               std::numeric_limits<double>::min()});
                const double err = std::max({std::abs(g2.a11 - p2.a11), std::abs(g2.a12 - p2.a12),
                                             std::abs(g2.a21 - p2.a21), std::abs(g2.a22 - p2.a22)}) /
                                   scale;
                compose.record(err < 1e-9, err, detail::case_label(spec, rules::golden, w, n));
            }
            // Needs T^A, T^B with equal diagonals (rod, beam); the mass-spring cell is not symmetric.
            if (spec.kind() == SystemKind::MassSpring) continue;
            const Mat2 g = global_transfer(qc, w);
            const Mat2 gr = global_transfer(qc_rev, w);
            if (!g.escaped() && !gr.escaped()) {
                const double err = detail::rel_err(gr.a22, g.a11);
                // Scale by the matrix size: cancellation in long products loses digits in proportion.
                const double scale = std::max(1.0, det_scale(g));
                reversal.record(std::abs(gr.a22 - g.a11) <= 1e-9 * scale, err,
                                detail::case_label(spec, rules::golden, w, -1));
            }
        }
    }
    rep.checks.push_back(dets);
    rep.checks.push_back(compose);
    rep.checks.push_back(reversal);

    ValidationCheck homogeneous{"homogeneous rod: |T_c| >= 1 everywhere (no stop bands)"};
    RodParams flat = presets::fig5_rod();
    flat.area_B = flat.area_A;
    const SystemSpec fspec(flat);
    const Stack hom = quasicrystal_stack(fspec, rules::golden, 0, 6);
    const Interval win = presets::sampling_window(fspec);
    const TransmissionProfile prof = transmission_profile(hom, FrequencyGrid(0.0, win.hi, 500), 1);
    for (const auto& v : prof.values)
        homogeneous.record(v.log10_abs_Tc >= -1e-9, std::max(0.0, -v.log10_abs_Tc),
                           "omega=" + std::to_string(v.omega));
    rep.checks.push_back(homogeneous);
    return rep;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& validation_suites() {
    static const std::vector<std::string> names = {"chebyshev", "recursion-oracle", "soundness", "dispersion",
                                                   "transmission", "all"};
    return names;
}

/// Runs a named suite; throws ConfigError for unknown names.
inline ValidationReport run_validation(const std::string& suite, const ValidationOptions& opt = {}) {
    if (suite == "chebyshev") return validate_chebyshev(opt);
    if (suite == "recursion-oracle") return validate_recursion_oracle(opt);
    if (suite == "soundness") return validate_soundness(opt);
    if (suite == "dispersion") return validate_dispersion(opt);
    if (suite == "transmission") return validate_transmission(opt);
    if (suite == "all") {
        ValidationReport all{"all", opt.seed, {}};
        using SuiteFn = ValidationReport (*)(const ValidationOptions&);
        for (SuiteFn fn : {validate_chebyshev, validate_recursion_oracle, validate_soundness,
                           validate_dispersion, validate_transmission}) {
            ValidationReport r = fn(opt);
            for (auto& c : r.checks) c.name = r.suite + ": " + c.name;
            all.append(r);
        }
        return all;
    }
    throw ConfigError("validate: unknown suite '" + suite + "'");
}

} // namespace fibgap
