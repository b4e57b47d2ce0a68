#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fibgap/presets.hpp"
#include "fibgap/transmission.hpp"

using namespace fibgap;

TEST(Transmission, StackDescriptors) {
    const StackDescriptor q = parse_stack_descriptor("quasicrystal:0..6");
    EXPECT_EQ(q.kind, StackDescriptor::Kind::Quasicrystal);
    EXPECT_EQ(q.first, 0);
    EXPECT_EQ(q.last, 6);
    const StackDescriptor p = parse_stack_descriptor("periodic:n=3,repeats=7");
    EXPECT_EQ(p.kind, StackDescriptor::Kind::Periodic);
    EXPECT_EQ(p.n, 3);
    EXPECT_EQ(p.repeats, 7);
    for (const char* bad : {"", "quasicrystal", "quasicrystal:3..1", "quasicrystal:a..2", "periodic:n=3",
                            "periodic:n=3,repeats=0", "periodic:n=3,x=1", "lattice:1..2"})
        EXPECT_THROW(parse_stack_descriptor(bad), ConfigError) << bad;
}

TEST(Transmission, StackSizes) {
    const SystemSpec rod(presets::fig8_rod());
    // 1 + 1 + 2 + 3 + 5 + 8 + 13
    EXPECT_EQ(quasicrystal_stack(rod, rules::golden, 0, 6).element_count(), 33);
    EXPECT_EQ(periodic_sample(rules::golden, 3, 7, rod).element_count(), 21);
    EXPECT_THROW(Stack({TilingWord{"ABX", 0}}, rod), std::invalid_argument);
    EXPECT_THROW(Stack({CellSegment{rules::golden, 30}}, rod, 1000), LengthCapError);
    EXPECT_THROW(periodic_sample(rules::golden, 3, 0, rod), std::invalid_argument);
}

TEST(Transmission, SingleElement) {
    const SystemSpec rod(presets::fig8_rod());
    const Stack one({TilingWord{"A", 1}}, rod);
    const double w = 1.2e4;
    const Mat2 t = element_matrix(rod, Letter::A, w);
    EXPECT_EQ(global_transfer(one, w), t);
    EXPECT_EQ(transmission_coefficient(one, w), 1.0 / t.a22);
}

TEST(Transmission, OrderIsRightToLeft) {
    const SystemSpec rod(presets::fig8_rod());
    const double w = 2.9e4;
    const Stack ab({TilingWord{"AB", 2}}, rod);
    const Mat2 want = element_matrix(rod, Letter::B, w) * element_matrix(rod, Letter::A, w);
    const Mat2 got = global_transfer(ab, w);
    EXPECT_NEAR(got.a11, want.a11, 1e-12);
    EXPECT_NEAR(got.a21, want.a21, 1e-12 * std::abs(want.a21));
}

TEST(Transmission, CompositionAndUnimodularity) {
    std::mt19937_64 rng(6);
    for (const SystemSpec& spec : {SystemSpec(presets::fig4_mass_spring()), SystemSpec(presets::fig8_rod()),
                                   SystemSpec(presets::fig7_beam())}) {
        const Interval win = presets::sampling_window(spec);
        std::uniform_real_distribution<double> wd(0.0, win.hi);
        const Stack qc = quasicrystal_stack(spec, rules::golden, 0, 6);
        for (int s = 0; s < 200; ++s) {
            const double w = wd(rng);
            try {
                const Mat2 g = global_transfer(qc, w);
                if (!g.escaped()) {
                    EXPECT_TRUE(is_unimodular(g, 1e-8)) << unimodular_error(g);
                }
                Mat2 by_hand = Mat2::identity();
                for (int n = 0; n <= 6; ++n) by_hand = cell_matrix(spec, rules::golden, w, n) * by_hand;
                EXPECT_EQ(g, by_hand);
            } catch (const BeamPoleError&) {
            }
        }
    }
}

TEST(Transmission, ReversalSymmetricElements) {
    std::mt19937_64 rng(7);
    for (const SystemSpec& spec : {SystemSpec(presets::fig8_rod()), SystemSpec(presets::fig7_beam())}) {
        const Interval win = presets::sampling_window(spec);
        std::uniform_real_distribution<double> wd(0.0, win.hi);
        const Stack qc = quasicrystal_stack(spec, rules::golden, 0, 5);
        const Stack rev = qc.reversed();
        EXPECT_EQ(rev.element_count(), qc.element_count());
        for (int s = 0; s < 200; ++s) {
            const double w = wd(rng);
            try {
                const Mat2 g = global_transfer(qc, w);
                const Mat2 r = global_transfer(rev, w);
                EXPECT_LE(std::abs(r.a22 - g.a11), 1e-9 * det_scale(g));
            } catch (const BeamPoleError&) {
            }
        }
    }
}

TEST(Transmission, HomogeneousRodHasNoWells) {
    RodParams p = presets::fig8_rod();
    p.area_B = p.area_A;
    p.length_B = p.length_A;
    const SystemSpec rod(p);
    const Stack st = quasicrystal_stack(rod, rules::golden, 0, 6);
    const TransmissionProfile prof = transmission_profile(st, FrequencyGrid(0.0, 1e5, 1000));
    for (const auto& v : prof.values) {
        EXPECT_EQ(v.flag, SampleFlag::None);
        EXPECT_GE(v.log10_abs_Tc, -1e-9);
        // Total phase 33 sqrt(Q) omega l: T_c = 1 / cos(phase).
        const double phase = 33 * std::sqrt(p.Q_A()) * v.omega * p.length_A;
        EXPECT_NEAR(v.T_c * std::cos(phase), 1.0, 1e-8);
    }
}

TEST(Transmission, ProfileDeterministicAndFlagged) {
    const SystemSpec beam(presets::fig7_beam());
    const Stack st = quasicrystal_stack(beam, rules::golden, 0, 4);
    const double kpi = std::numbers::pi / 0.1;
    const double pole = std::pow(kpi * 0.05, 2);
    const FrequencyGrid grid(pole * 0.5, pole, 101);
    const TransmissionProfile a = transmission_profile(st, grid, 1);
    const TransmissionProfile b = transmission_profile(st, grid, 3);
    ASSERT_EQ(a.values.size(), 101u);
    EXPECT_EQ(a.values.back().flag, SampleFlag::Pole);
    EXPECT_TRUE(std::isnan(a.values.back().T_c));
    for (std::size_t i = 0; i + 1 < a.values.size(); ++i) {
        EXPECT_EQ(a.values[i].flag, b.values[i].flag);
        EXPECT_EQ(a.values[i].log10_abs_Tc, b.values[i].log10_abs_Tc);
    }
}

TEST(Transmission, CappedLog) {
    EXPECT_EQ(capped_log10(0.0), -kLogCap);
    EXPECT_EQ(capped_log10(std::numeric_limits<double>::infinity()), kLogCap);
    EXPECT_EQ(capped_log10(-100.0), 2.0);
}
