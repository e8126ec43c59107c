#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "weylsum/circle.hpp"

using namespace weylsum;
using namespace weylsum::circle;

TEST(Moduli, AllCoprimeMass) {
    const auto m = build_moduli(10, 101);
    EXPECT_EQ(m.members, (std::vector<i64>{10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20}));
    EXPECT_EQ(m.L, 100);
    EXPECT_EQ(m.recomputed_mass(), m.L);
    const auto without = build_moduli(10, 11);
    EXPECT_EQ(without.L, 90);
    EXPECT_EQ(std::count(without.members.begin(), without.members.end(), 11), 0);
}

TEST(Moduli, PrimesMode) {
    const auto m = build_moduli(2, 7, ModuliMode::Primes);
    EXPECT_EQ(m.members, (std::vector<i64>{2, 3}));
    EXPECT_EQ(m.L, 3);
    EXPECT_THROW(build_moduli(1.5, 7), std::domain_error);
    EXPECT_THROW(build_moduli(2.1, 3, ModuliMode::Primes), std::domain_error);  // [2.1, 4.2] holds only the prime 3
}

TEST(Itilde, SingleFraction) {
    const auto a = build_itilde(make_moduli({2}), 0.25);
    EXPECT_EQ(a.value(0.5), 2.0);
    EXPECT_EQ(a.value(0.25), 2.0);
    EXPECT_EQ(a.value(0.2), 0.0);
    EXPECT_EQ(a.value(-3.0), 0.0);
    EXPECT_NEAR(a.l2_error(), 1.0, 1e-12);
    EXPECT_NEAR(a.total_mass(), 1.0, 1e-12);
    ASSERT_EQ(a.breakpoints().size(), 2U);
    EXPECT_EQ(a.breakpoints()[0].position, 0.25);
    EXPECT_EQ(a.breakpoints()[0].value, 2.0);
    EXPECT_EQ(a.breakpoints()[1].value, 0.0);
}

TEST(Itilde, SingleFractionMonteCarlo) {
    const auto a = build_itilde(make_moduli({2}), 0.25);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    const int samples = 2'000'000;
    double s = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double alpha = u(rng);
        const double d = (alpha >= 0 && alpha <= 1 ? 1.0 : 0.0) - a.value(alpha);
        s += d * d;
    }
    EXPECT_NEAR(2.0 * s / samples, 1.0, 0.01);
}

TEST(Itilde, WideIntervalCoversUnit) {
    // one interval [1/2 - 1, 1/2 + 1] of height 1/2: error = (1/2)^2 * 1 + (1/2)^2 * 1
    const auto a = build_itilde(make_moduli({2}), 1.0);
    EXPECT_NEAR(a.l2_error(), 0.25 + 0.25, 1e-14);
}

TEST(Itilde, MassAndBreakpointCount) {
    const auto m = build_moduli(20, 7);
    const auto a = build_itilde(m, 1e-3);
    EXPECT_NEAR(a.total_mass(), 1.0, 1e-12);
    EXPECT_LE(static_cast<i64>(a.breakpoints().size()), 2 * m.L);
}

TEST(Itilde, StepFunctionEqualsNaiveSum) {
    std::mt19937_64 rng(5);
    for (double delta : {1e-3, 0.01, 0.05}) {
        const auto a = build_itilde(build_moduli(20, 7), delta);
        std::uniform_real_distribution<double> u(-0.1, 1.1);
        for (int i = 0; i < 1000; ++i) {
            const double alpha = u(rng);
            ASSERT_EQ(a.value(alpha), itilde_value_naive(a, alpha));
        }
        // endpoints exactly
        for (const auto& b : a.breakpoints()) ASSERT_EQ(a.value(b.position), itilde_value_naive(a, b.position));
    }
}

TEST(Itilde, ThreePassIdentity) {
    for (double Q : {10.0, 40.0, 80.0}) {
        for (double delta : {1 / Q, std::pow(Q, -1.5), 1 / (Q * Q)}) {
            const auto a = build_itilde(build_moduli(Q, 7), delta);
            const double one = a.l2_error(), three = a.l2_error_three_pass();
            EXPECT_GE(one, 0.0);
            EXPECT_NEAR(one, three, 1e-10 * std::max(1.0, std::abs(one)));
            EXPECT_NEAR(a.total_mass(), 1.0, 1e-12);
        }
    }
}

TEST(Itilde, RatioBoundedAcrossScales) {
    for (double Q : {10.0, 20.0, 40.0, 80.0, 160.0}) {
        const auto r = l2_report(build_itilde(build_moduli(Q, 7), 1 / (Q * Q)));
        EXPECT_LE(r.ratio, 10.0) << Q;
    }
}

TEST(Itilde, RejectsBadDeltaAndWritesCsv) {
    EXPECT_THROW(build_itilde(make_moduli({3}), 0.0), std::domain_error);
    std::ostringstream out;
    build_itilde(make_moduli({2}), 0.25).write_csv(out);
    EXPECT_EQ(out.str().substr(0, 15), "position,value\n");
    EXPECT_TRUE(delta_in_range(10, 0.05));
    EXPECT_FALSE(delta_in_range(10, 0.5));
}
