#include <gtest/gtest.h>

#include <random>

#include "fibgap/mat2.hpp"

using fibgap::Mat2;

namespace {

Mat2 random_unimodular(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (;;) {
        const double a = d(rng), b = d(rng), c = d(rng);
        if (std::abs(a) < 0.1) continue;
        return {a, b, c, (1.0 + b * c) / a};
    }
}

} // namespace

TEST(Mat2, IdentityProducts) {
    const Mat2 I = Mat2::identity();
    EXPECT_EQ(I * I, I);
    const Mat2 a{1.5, -2.0, 0.25, 3.0};
    EXPECT_EQ(a * I, a);
    EXPECT_EQ(I * a, a);
}

TEST(Mat2, RotationSquared) {
    const Mat2 r{0, 1, -1, 0};
    EXPECT_EQ(r * r, (Mat2{-1, 0, 0, -1}));
}

TEST(Mat2, PowerExamples) {
    EXPECT_EQ(fibgap::mat_pow(Mat2::identity(), 5), Mat2::identity());
    const Mat2 a{1.1, 0.3, -0.7, 0.8};
    EXPECT_EQ(fibgap::mat_pow(a, 1), a);
    const Mat2 four = fibgap::mat_pow(a, 4);
    const Mat2 ref = (a * a) * (a * a);
    EXPECT_DOUBLE_EQ(four.a11, ref.a11);
    EXPECT_DOUBLE_EQ(four.a12, ref.a12);
    EXPECT_DOUBLE_EQ(four.a21, ref.a21);
    EXPECT_DOUBLE_EQ(four.a22, ref.a22);
    EXPECT_THROW(fibgap::mat_pow(a, 0), std::invalid_argument);
}

TEST(Mat2, TraceExamples) {
    EXPECT_EQ(fibgap::trace(Mat2::identity()), 2.0);
    EXPECT_EQ(fibgap::trace(Mat2{-2, 0.05, 60, -2}), -4.0);
    EXPECT_EQ(fibgap::trace(Mat2{0, 1, -1, 0}), 0.0);
}

TEST(Mat2, PowerMatchesRepeatedProduct) {
    std::mt19937_64 rng(7);
    for (int s = 0; s < 200; ++s) {
        const Mat2 a = random_unimodular(rng);
        Mat2 acc = a;
        for (int p = 2; p <= 9; ++p) {
            acc = acc * a;
            const Mat2 pw = fibgap::mat_pow(a, p);
            const double scale = std::max({1.0, std::abs(acc.a11), std::abs(acc.a12), std::abs(acc.a21),
                                           std::abs(acc.a22)});
            EXPECT_NEAR(pw.a11, acc.a11, 1e-12 * scale);
            EXPECT_NEAR(pw.a22, acc.a22, 1e-12 * scale);
        }
    }
}

TEST(Mat2, DeterminantIsMultiplicative) {
    std::mt19937_64 rng(11);
    for (int s = 0; s < 1000; ++s) {
        const Mat2 a = random_unimodular(rng);
        const Mat2 b = random_unimodular(rng);
        EXPECT_TRUE(fibgap::is_unimodular(a * b)) << fibgap::unimodular_error(a * b);
    }
}

TEST(Mat2, SaturationClampsAndFlags) {
    const Mat2 big{1e200, 0, 0, 1e-200};
    const Mat2 sq = big * big;
    EXPECT_EQ(sq.a11, fibgap::kSaturation);
    EXPECT_TRUE(sq.escaped());
    EXPECT_FALSE(fibgap::is_unimodular(sq));
    EXPECT_FALSE(Mat2::identity().escaped());
    EXPECT_TRUE((Mat2{std::nan(""), 0, 0, 1}).escaped());
}

TEST(Mat2, InverseOfUnimodular) {
    std::mt19937_64 rng(3);
    const Mat2 a = random_unimodular(rng);
    const Mat2 p = a * fibgap::inverse_unimodular(a);
    EXPECT_NEAR(p.a11, 1.0, 1e-12);
    EXPECT_NEAR(p.a12, 0.0, 1e-12);
    EXPECT_NEAR(p.a21, 0.0, 1e-12);
    EXPECT_NEAR(p.a22, 1.0, 1e-12);
}
