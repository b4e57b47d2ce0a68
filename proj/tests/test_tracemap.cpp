#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fibgap/presets.hpp"
#include "fibgap/tracemap.hpp"

using namespace fibgap;

namespace {

std::vector<SystemSpec> systems() {
    return {SystemSpec(presets::fig4_mass_spring()), SystemSpec(presets::fig5_rod()),
            SystemSpec(presets::fig7_beam())};
}

Mat2 random_unimodular(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (;;) {
        const double a = d(rng), b = d(rng), c = d(rng);
        if (std::abs(a) < 0.2) continue;
        return {a, b, c, (1.0 + b * c) / a};
    }
}

} // namespace

TEST(TraceMap, StepExamples) {
    EXPECT_EQ(step_golden(3, 3, 3), 6);
    EXPECT_EQ(step_golden(2, 2, 2), 2);
    EXPECT_EQ(step_golden(0, 0, 7.5), 0);

    const TraceStep s = step_silver(2, 2, 2);
    EXPECT_EQ(s.t_next, 2);
    EXPECT_EQ(s.x_next, 2);
    const TraceStep z = step_silver(0, 1.5, 4.0);
    EXPECT_EQ(z.t_next, -4.0);
    EXPECT_EQ(z.x_next, 1.5 * -4.0);

    for (int m : {2, 4, 6}) EXPECT_EQ(step_precious(m, 0, 0, 0, 0).x_next, 0.0);
    for (int l = 1; l <= 6; ++l) EXPECT_DOUBLE_EQ(step_metal(l, 2, 2, 2), 2.0);
    EXPECT_THROW(step_precious(1, 1, 1, 1, 1), std::invalid_argument);
}

TEST(TraceMap, SeedExamples) {
    const SystemSpec ms(presets::fig4_mass_spring());
    const TraceSeed s0 = seed_from_system(ms, rules::golden, 0.0);
    EXPECT_EQ(s0.x0, 2.0);
    EXPECT_EQ(s0.x1, 2.0);
    EXPECT_EQ(s0.x2, 2.0);

    const RodParams p = presets::fig5_rod();
    const SystemSpec rod(p);
    for (double w : {1e3, 1.7e4, 3.3e4, 6e4}) {
        const TraceSeed s = seed_from_system(rod, rules::golden, w);
        const double th = std::sqrt(p.Q_A()) * w * p.length_A;
        EXPECT_NEAR(s.x0, 2 * std::cos(th), 1e-13);
        EXPECT_NEAR(s.x1, 2 * std::cos(th), 1e-13);
        const double ratio = p.area_A / p.area_B + p.area_B / p.area_A;
        EXPECT_NEAR(s.x2, 2 * std::cos(th) * std::cos(th) - ratio * std::sin(th) * std::sin(th), 1e-12);
    }
}

TEST(TraceMap, GoldenMassSpringStaticFixedPoint) {
    const SystemSpec ms(presets::fig4_mass_spring());
    const TraceSequence seq = trace_sequence(ms, rules::golden, 0.0, 15);
    for (double x : seq.xs) EXPECT_EQ(x, 2.0);
    EXPECT_FALSE(seq.escaped_at.has_value());
}

TEST(TraceMap, CellMatrixMatchesDirectProduct) {
    std::mt19937_64 rng(2);
    for (const auto& spec : systems()) {
        const Interval win = presets::sampling_window(spec);
        for (const TilingRule rule : {rules::golden, rules::silver, rules::copper, TilingRule(2, 2)}) {
            for (int s = 0; s < 20; ++s) {
                const double w = std::uniform_real_distribution<double>(win.hi * 0.01, win.hi * 0.3)(rng);
                for (int n = 0; n <= 6; ++n) {
                    Mat2 a, b;
                    try {
                        a = cell_matrix(spec, rule, w, n);
                        b = cell_matrix_direct(spec, rule, w, n);
                    } catch (const BeamPoleError&) {
                        continue;
                    }
                    if (a.escaped() || b.escaped()) continue;
                    const double scale = std::max({1.0, std::abs(b.a11), std::abs(b.a12) , std::abs(b.a21), std::abs(b.a22)});
                    EXPECT_NEAR(a.a11, b.a11, 1e-8 * scale);
                    EXPECT_NEAR(a.a22, b.a22, 1e-8 * scale);
                }
            }
        }
    }
}

TEST(TraceMap, DirectTraceBaseCells) {
    const SystemSpec rod(presets::fig8_rod());
    const double w = 2.2e4;
    EXPECT_EQ(direct_trace(rod, rules::golden, w, 0), trace(element_matrix(rod, Letter::B, w)));
    EXPECT_EQ(direct_trace(rod, rules::golden, w, 1), trace(element_matrix(rod, Letter::A, w)));
    const Mat2 ba = element_matrix(rod, Letter::B, w) * element_matrix(rod, Letter::A, w);
    EXPECT_NEAR(direct_trace(rod, rules::golden, w, 2), trace(ba), 1e-12);
    EXPECT_NEAR(seed_from_system(rod, rules::golden, w).t2, trace(ba), 1e-12);
}

TEST(TraceMap, RecursionsMatchDirectProducts) {
    std::mt19937_64 rng(4);
    for (const auto& spec : systems()) {
        const Interval win = presets::sampling_window(spec);
        for (const TilingRule rule : {rules::golden, rules::silver, rules::bronze, rules::copper, rules::nickel,
                                      TilingRule(2, 2), TilingRule(3, 2)}) {
            for (int s = 0; s < 25; ++s) {
                const double w = std::uniform_real_distribution<double>(0.0, win.hi)(rng);
                TraceSequence seq;
                try {
                    seq = trace_sequence(spec, rule, w, 8);
                } catch (const BeamPoleError&) {
                    continue;
                }
                const Mat2 tA = element_matrix(spec, Letter::A, w);
                const Mat2 tB = element_matrix(spec, Letter::B, w);
                for (int n = 0; n <= 8; ++n) {
                    if (fib_number(rule, n) > 20'000) break;
                    const Mat2 d = word_matrix(word(rule, n).letters, tA, tB);
                    if (seq.escaped(n) || std::abs(trace(d)) > 1e60) continue;
                    const double scale = std::max(1.0, det_scale(d));
                    EXPECT_LE(std::abs(seq.x(n) - trace(d)), 1e-9 * std::sqrt(scale) * std::max(1.0, std::abs(trace(d))))
                        << to_string(rule) << " n=" << n << " w=" << w;
                }
            }
        }
    }
}

// Specialised steps agree with the general recursion when fed the same,
// consistent trajectory: t_n and x_n must come from actual matrices.
TEST(TraceMap, SpecialisationsAgreeWithGeneral) {
    std::mt19937_64 rng(8);
    for (const TilingRule rule : {rules::golden, rules::silver, rules::bronze, TilingRule(5, 1), rules::copper,
                                  rules::nickel}) {
        for (int s = 0; s < 1000; ++s) {
            const Mat2 tA = random_unimodular(rng);
            const Mat2 tB = random_unimodular(rng);
            const Mat2 T0 = tB, T1 = tA;
            const Mat2 T2 = mat_pow(T0, rule.l()) * mat_pow(T1, rule.m());
            const Mat2 T3 = mat_pow(T1, rule.l()) * mat_pow(T2, rule.m());
            const double x0 = trace(T0), x1 = trace(T1), x2 = trace(T2), t2 = trace(T0 * T1);
            const TraceStep g = step_general(rule, x0, x1, x2, t2);
            const double want_x3 = trace(T3);
            const double want_t3 = trace(T1 * T2);
            const double tol = 1e-9 * std::max({1.0, det_scale(T3)});
            EXPECT_NEAR(g.x_next, want_x3, tol);
            EXPECT_NEAR(g.t_next, want_t3, 1e-9 * std::max(1.0, det_scale(T1 * T2)));
            switch (recursion_for(rule)) {
            case Recursion::Golden: EXPECT_NEAR(step_golden(x0, x1, x2), g.x_next, 1e-12 * std::max(1.0, std::abs(g.x_next))); break;
            case Recursion::Silver: {
                const TraceStep sv = step_silver(x1, x2, t2);
                EXPECT_NEAR(sv.x_next, g.x_next, 1e-12 * std::max(1.0, std::abs(g.x_next)) + 1e-10 * tol);
                EXPECT_NEAR(sv.t_next, g.t_next, 1e-12 * std::max(1.0, std::abs(g.t_next)) + 1e-10 * tol);
                const TraceStep pr = step_precious(2, x1, x2, t2, x0);
                EXPECT_NEAR(pr.x_next, sv.x_next, 1e-12 * std::max(1.0, std::abs(sv.x_next)));
                break;
            }
            case Recursion::Precious: {
                const TraceStep pr = step_precious(rule.m(), x1, x2, t2, x0);
                EXPECT_NEAR(pr.x_next, want_x3, tol);
                EXPECT_NEAR(pr.t_next, want_t3, 1e-9 * std::max(1.0, det_scale(T1 * T2)));
                break;
            }
            case Recursion::Metal: EXPECT_NEAR(step_metal(rule.l(), x0, x1, x2), want_x3, tol); break;
            case Recursion::General: break;
            }
        }
    }
}

TEST(TraceMap, MetalWithUnitLIsGolden) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-10, 10);
    for (int s = 0; s < 1000; ++s) {
        const double a = d(rng), b = d(rng), c = d(rng);
        EXPECT_EQ(step_metal(1, a, b, c), step_golden(a, b, c));
    }
}

TEST(TraceMap, SimilarityInvariance) {
    std::mt19937_64 rng(14);
    for (int s = 0; s < 300; ++s) {
        const Mat2 tA = random_unimodular(rng);
        const Mat2 tB = random_unimodular(rng);
        const Mat2 S = random_unimodular(rng);
        const Mat2 Si = inverse_unimodular(S);
        for (const TilingRule rule : {rules::golden, rules::silver, rules::copper, TilingRule(2, 2)}) {
            const TraceSeed a = seed_from_matrices(rule, tA, tB);
            const TraceSeed b = seed_from_matrices(rule, S * tA * Si, S * tB * Si);
            const TraceSequence sa = trace_sequence(rule, a, 5);
            const TraceSequence sb = trace_sequence(rule, b, 5);
            for (int n = 0; n <= 5; ++n) {
                if (sa.escaped(n)) break;
                EXPECT_NEAR(sa.x(n), sb.x(n), 1e-7 * std::max(1.0, std::abs(sa.x(n))));
            }
        }
    }
}

TEST(TraceMap, CanonicalRodHalfPeriodShift) {
    const RodParams p = presets::fig5_rod();
    const SystemSpec rod(p);
    const double shift = presets::canonical_half_period(p);
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> wd(0.0, 2 * shift);
    for (int s = 0; s < 300; ++s) {
        const double w = wd(rng);
        const TraceSequence a = trace_sequence(rod, rules::golden, w, 8);
        const TraceSequence b = trace_sequence(rod, rules::golden, w + shift, 8);
        for (int n = 0; n <= 8; ++n) {
            if (std::abs(a.x(n)) > 1e6) break;
            EXPECT_NEAR(std::abs(a.x(n)), std::abs(b.x(n)), 1e-7 * std::max(1.0, std::abs(a.x(n))));
        }
    }
}

TEST(TraceMap, EscapeFreezesSequence) {
    const SystemSpec ms(presets::fig4_mass_spring());
    // Far above both cutoffs every trace grows doubly exponentially.
    const TraceSequence seq = trace_sequence(ms, rules::golden, 200.0, 30);
    ASSERT_TRUE(seq.escaped_at.has_value());
    const int e = *seq.escaped_at;
    for (int n = e; n <= 30; ++n) {
        EXPECT_TRUE(seq.escaped(n));
        EXPECT_EQ(std::abs(seq.x(n)), kSaturation);
    }
    for (int n = 3; n < e; ++n) EXPECT_GE(std::abs(seq.x(n)), std::abs(seq.x(n - 1)));
}

TEST(TraceMap, TraceAtAndValidation) {
    const SystemSpec rod(presets::fig5_rod());
    EXPECT_EQ(trace_at(rod, rules::golden, 1e4, 0), trace(element_matrix(rod, Letter::B, 1e4)));
    EXPECT_EQ(trace_at(rod, rules::golden, 1e4, 6), trace_sequence(rod, rules::golden, 1e4, 6).x(6));
    EXPECT_THROW(trace_at(rod, rules::golden, 1e4, -1), std::invalid_argument);
    EXPECT_THROW(trace_sequence(rod, rules::golden, 1e4, 1), std::invalid_argument);
    const TraceSequence g = trace_sequence(rod, rules::golden, 1e4, 5);
    EXPECT_FALSE(g.has_t());
    EXPECT_TRUE(trace_sequence(rod, rules::silver, 1e4, 5).has_t());
}
