#include <gtest/gtest.h>

#include <random>

#include "weylsum/expsums.hpp"

using namespace weylsum;
using namespace weylsum::expsums;

namespace {

// Kloosterman sum with inverses found by search and libm exponentials.
double kloosterman_oracle(i64 a, i64 b, i64 c) {
    std::complex<long double> s{0, 0};
    for (i64 x = 0; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        i64 xbar = 0;
        while ((x * xbar) % c != 1 % c) ++xbar;
        const long double phase = 2.0L * 3.14159265358979323846264L * static_cast<long double>(a * x + b * xbar) / c;
        s += std::complex<long double>(std::cos(phase), std::sin(phase));
    }
    return static_cast<double>(s.real());
}

}  // namespace

TEST(Kloosterman, SmallValues) {
    EXPECT_NEAR(kloosterman(1, 1, 2), 1.0, 1e-12);
    EXPECT_NEAR(kloosterman(1, 2, 5), -1.0 - std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(kloosterman(0, 0, 1), 1.0, 1e-12);
    for (i64 c = 1; c <= 60; ++c) EXPECT_NEAR(kloosterman(0, 0, c), static_cast<double>(totient(c)), 1e-9);
}

TEST(Kloosterman, MatchesBruteForce) {
    for (i64 c = 1; c <= 40; ++c)
        for (i64 a = -3; a < c; a += 2)
            for (i64 b = 0; b < c; b += 3) EXPECT_NEAR(kloosterman(a, b, c), kloosterman_oracle(a, b, c), 1e-9);
}

TEST(Kloosterman, Symmetric) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> cdist(1, 800);
    for (int i = 0; i < 300; ++i) {
        const i64 c = cdist(rng);
        std::uniform_int_distribution<i64> adist(-c, 2 * c);
        const i64 a = adist(rng), b = adist(rng);
        EXPECT_NEAR(kloosterman(a, b, c), kloosterman(b, a, c), 1e-8);
    }
}

TEST(Kloosterman, SharedTableAgrees) {
    const InverseTable t(84);
    for (i64 a = 0; a < 84; ++a) EXPECT_DOUBLE_EQ(kloosterman(a, 5, 84, t), kloosterman(a, 5, 84));
    EXPECT_THROW(kloosterman(1, 1, 85, t), std::invalid_argument);
}

TEST(Ramanujan, DivisorFormula) {
    for (i64 q : {2, 3, 5, 6, 30}) EXPECT_EQ(ramanujan_sum(1, q), mobius(q));
    EXPECT_EQ(ramanujan_sum(4, 8), -4);
    EXPECT_NEAR(kloosterman(4, 0, 8), -4.0, 1e-12);
    for (i64 c = 1; c <= 200; ++c) EXPECT_EQ(ramanujan_sum(c, c), totient(c));
}

TEST(Ramanujan, AgreesWithKloosterman) {
    for (i64 c = 1; c <= 500; ++c) {
        const InverseTable t(c);
        for (i64 a = 0; a <= c; ++a) ASSERT_NEAR(static_cast<double>(ramanujan_sum(a, c)), kloosterman(a, 0, c, t), 1e-8);
    }
}

TEST(Weil, MarginBelowOne) {
    EXPECT_NEAR(weil_margin(1, 1, 2), 1.0 / (2.0 * std::sqrt(2.0)), 1e-12);
    for (i64 c = 1; c <= 300; ++c) EXPECT_LE(weil_margin(0, 0, c), 1.0 + 1e-12);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<i64> cdist(1, 1500);
    for (int i = 0; i < 500; ++i) {
        const i64 c = cdist(rng);
        std::uniform_int_distribution<i64> adist(0, c - 1);
        EXPECT_LE(weil_margin(adist(rng), adist(rng), c), 1.0 + 1e-8);
    }
}

TEST(GcdTriple, SmallCases) {
    for (i64 c : {1, 7, 12}) {
        const auto r = gcd_triple_sum(1, 1, c);
        EXPECT_EQ(r.sum, 1);
        EXPECT_TRUE(r.bound_ok);
    }
    i64 hand = 0;
    for (i64 a = 1; a <= 4; ++a)
        for (i64 b = 1; b <= 4; ++b) hand += std::gcd(std::gcd(a, b), i64{12});
    const auto r = gcd_triple_sum(4, 4, 12);
    EXPECT_EQ(r.sum, hand);
    EXPECT_EQ(hand, 24);
    // the bound sum <= x y does not hold here; the flag must say so
    EXPECT_FALSE(r.bound_ok);
    EXPECT_FALSE(gcd_triple_sum(2, 2, 2).bound_ok);  // 1 + 1 + 1 + 2 = 5 > 4
    for (i64 x = 1; x <= 50; ++x)
        for (i64 y = 1; y <= 50; ++y) ASSERT_TRUE(gcd_triple_sum(x, y, 1).bound_ok);
    EXPECT_THROW(gcd_triple_sum(0.5, 2, 3), std::domain_error);
}
