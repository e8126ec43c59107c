#include <gtest/gtest.h>

#include <sstream>

#include "weylsum/pipeline/direct_sum.hpp"
#include "weylsum/pipeline/jutila.hpp"
#include "weylsum/pipeline/omega.hpp"
#include "weylsum/pipeline/params.hpp"
#include "weylsum/pipeline/poisson.hpp"
#include "weylsum/pipeline/sign_change.hpp"
#include "weylsum/pipeline/stilde.hpp"
#include "weylsum/pipeline/sweep.hpp"
#include "weylsum/pipeline/voronoi.hpp"

using namespace weylsum;
using namespace weylsum::pipeline;

namespace {

// tau(n) from q prod (1 - q^n)^24, for small n.
std::vector<long double> tau_small(int N) {
    std::vector<long double> poly(N + 1, 0);
    poly[0] = 1;
    for (int n = 1; n <= N; ++n)
        for (int rep = 0; rep < 24; ++rep)
            for (int j = N; j >= n; --j) poly[j] -= poly[j - n];
    std::vector<long double> tau(N + 1, 0);
    for (int n = 1; n <= N; ++n) tau[n] = poly[n - 1];
    return tau;
}

int legendre(i64 n, i64 p) {
    const i64 r = ((n % p) + p) % p;
    if (r == 0) return 0;
    i64 acc = 1;
    for (i64 i = 0; i < (p - 1) / 2; ++i) acc = acc * r % p;
    return acc == 1 ? 1 : -1;
}

const hecke::CuspForm& big_form() {
    static const auto f = hecke::load_or_compute("delta", 1'000'000, hecke::default_cache_dir());
    return f;
}

}  // namespace

TEST(Params, WindowArithmeticExample) {
    const auto e = make_params(1e4, 100000, 0.05);
    EXPECT_TRUE(e.in_window());
    EXPECT_NEAR(e.Q1, 11.7, 0.05);
    EXPECT_NEAR(e.Q2, 13.6, 0.05);
    EXPECT_TRUE(e.q2_in_range());
    EXPECT_TRUE(e.chain_holds());
    EXPECT_NEAR(e.Q1 * e.Q2, e.Q, 1e-9 * e.Q);
    EXPECT_FALSE(make_params(1e4, 1009, 0.05).in_window());
    EXPECT_THROW(make_params(1e4, 1009, 0.15), std::invalid_argument);
    EXPECT_THROW(make_params(1e4, 1009, 0.0), std::invalid_argument);
    EXPECT_THROW(make_params(1e4, 200003, 0.05), std::domain_error);
}

TEST(DirectSum, FrozenSharpValue) {
    const auto f = hecke::delta_form(100);
    const auto r = direct_sum(f, chars::quadratic_character(5), 10, SumWindow::Sharp);
    EXPECT_NEAR(r.value.real(), -1.281155174577062758578568, 1e-13);
    EXPECT_NEAR(r.value.imag(), 0.0, 1e-15);
    EXPECT_EQ(r.n_terms, 10);
}

TEST(DirectSum, SharpAgainstHandLoopAndCeiling) {
    const auto f = hecke::delta_form(3000);
    const auto tau = tau_small(60);
    for (u64 p : {7ULL, 13ULL}) {
        long double hand = 0;
        for (int n = 1; n <= 60; ++n) hand += tau[n] / std::pow(static_cast<long double>(n), 5.5L) * legendre(n, p);
        const auto r = direct_sum(f, chars::quadratic_character(p), 60, SumWindow::Sharp);
        EXPECT_NEAR(r.value.real(), static_cast<double>(hand), 1e-12);
        EXPECT_LE(std::abs(r.value), abs_lambda_sum(f, 60) + 1e-12);
    }
    EXPECT_THROW(direct_sum(f, chars::quadratic_character(7), 3001, SumWindow::Sharp), hecke::CoefficientCacheMiss);
    EXPECT_THROW(direct_sum(f, chars::quadratic_character(7), 2000, SumWindow::SmoothH1), hecke::CoefficientCacheMiss);
    EXPECT_THROW(direct_sum(f, chars::quadratic_character(7), 2e6, SumWindow::Sharp), std::domain_error);
}

TEST(DirectSum, SmoothDiffersFromSharpByTransitionMass) {
    const auto f = hecke::delta_form(5000);
    const auto chi = chars::quadratic_character(11);
    const double N = 1000;
    const cplx smooth = direct_sum(f, chi, N, SumWindow::SmoothH1).value;
    const cplx block = direct_sum(f, chi, 2 * N, SumWindow::Sharp).value - direct_sum(f, chi, N, SumWindow::Sharp).value;
    // h1 = 1 on [1.1, 1.9]; the difference lives on the two transitions
    double mass = 0.0;
    for (i64 n = 1001; n < 2000; ++n)
        if (n < 1100 || n > 1900) mass += std::abs(f.lambda(n));
    EXPECT_LE(std::abs(smooth - block), mass + 1e-9);
}

TEST(SignChange, FrozenAndBruteForce) {
    const auto f = hecke::delta_form(2000);
    EXPECT_EQ(*first_sign_disagreement(f, 5).index, 3);
    EXPECT_EQ(*first_sign_disagreement(f, 7).index, 2);
    EXPECT_EQ(*first_sign_disagreement(f, 11).index, 4);
    EXPECT_EQ(*first_sign_disagreement(f, 13).index, 4);
    const auto tau = tau_small(200);
    for (u64 p : primes_up_to(400)) {
        if (p == 2) continue;
        i64 expected = -1;
        for (int n = 1; n <= 200 && expected < 0; ++n)
            if (legendre(n, static_cast<i64>(p)) * tau[n] < 0) expected = n;
        const auto r = first_sign_disagreement(f, p);
        ASSERT_TRUE(r.index.has_value());
        if (expected > 0) {
            EXPECT_EQ(*r.index, expected) << p;
        }
        EXPECT_NEAR(r.normalized, static_cast<double>(*r.index) / std::pow(static_cast<double>(p), 2.0 / 3.0), 1e-12);
    }
    EXPECT_FALSE(first_sign_disagreement(hecke::delta_form(1), 7).index.has_value());
}

TEST(Jutila, CorrelationMatchesDirectPairs) {
    const auto f = hecke::delta_form(500);
    const auto A = sequence_A(f, 40), B = sequence_B(chars::make_character(13, 1), 40);
    const auto C = correlation(A, B);
    for (i64 d = C.lo; d <= C.hi(); d += 7) {
        cplx s{0, 0};
        for (i64 n = A.lo; n <= A.hi(); ++n) s += A.at(n) * B.at(n - d);
        EXPECT_LT(std::abs(s - C.at(d)), 1e-12);
    }
}

TEST(Jutila, TilingGivesExactSum) {
    const auto f = hecke::delta_form(500);
    for (u64 p : {5ULL, 13ULL}) {
        const auto A = sequence_A(f, 64), B = sequence_B(chars::quadratic_character(p), 64);
        const cplx S = smooth_sum(A, B);
        EXPECT_LT(std::abs(jutila_sum(A, B, circle::make_moduli({2}), 0.5) - S), 1e-12);
    }
}

TEST(Jutila, SingleModulusTripleLoop) {
    // (1/phi(q)) sum*_a sum_{n,m} A(n) B(m) e(a(n-m)/q) sin(2 pi delta (n-m))/(2 pi delta (n-m))
    const auto f = hecke::delta_form(500);
    const auto A = sequence_A(f, 30), B = sequence_B(chars::make_character(7, 2), 30);
    for (i64 q : {3, 4, 9}) {
        const double delta = 0.013;
        std::complex<long double> s{0, 0};
        for (i64 a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            for (i64 n = A.lo; n <= A.hi(); ++n) {
                for (i64 m = B.lo; m <= B.hi(); ++m) {
                    const long double d = static_cast<long double>(n - m);
                    const long double ph = 2.0L * std::numbers::pi_v<long double> * a * d / q;
                    const long double k = d == 0 ? 1.0L : std::sin(2.0L * std::numbers::pi_v<long double> * delta * d) /
                                                              (2.0L * std::numbers::pi_v<long double> * delta * d);
                    const auto ab = A.at(n) * B.at(m);
                    s += std::complex<long double>(ab.real(), ab.imag()) *
                         std::complex<long double>(std::cos(ph), std::sin(ph)) * k;
                }
            }
        }
        s /= static_cast<long double>(totient(q));
        const cplx got = jutila_sum(A, B, circle::make_moduli({q}), delta);
        EXPECT_LT(std::abs(got - cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()))), 1e-10) << q;
    }
}

TEST(Jutila, ApproxReportGuards) {
    const auto f = hecke::delta_form(5000);
    const auto r = approx_error_report(f, chars::quadratic_character(13), make_params(256, 13, 0.05));
    EXPECT_GT(r.L, 0);
    EXPECT_NEAR(r.ratio, r.abs_error * r.Q / (std::pow(256.0, 1.5) * std::log(r.Q * 256.0)), 1e-15);
    EXPECT_THROW(approx_error_report(f, chars::quadratic_character(13), make_params(2048, 13, 0.05)),
                 std::domain_error);
}

TEST(Voronoi, ResidueClassesAtScale50) {
    const VoronoiChecker v(big_form());
    for (const auto& r : v.check_all(5, 50)) EXPECT_LT(r.residual, 1e-6) << r.a;
    const auto one = v.check(1, 1, 50);
    EXPECT_LT(one.residual, 1e-6);
    // a -> a + q
    EXPECT_LT(std::abs(v.check(2, 7, 20).rhs - v.check(9, 7, 20).rhs), 1e-12);
    EXPECT_LT(std::abs(v.check(2, 7, 20).lhs - v.check(9, 7, 20).lhs), 1e-12);
    const cplx u = fitted_unimodular_constant(v.check_all(7, 20));
    EXPECT_LT(std::abs(u - cplx(1, 0)), 1e-6);
    EXPECT_THROW(v.check(2, 4, 20), std::domain_error);
}

TEST(Poisson, IdentityConjugationAndAblation) {
    const PoissonChecker c(chars::quadratic_character(13), 500);
    EXPECT_LT(c.check(3, 7, 0.0).residual, 1e-6);
    const auto chi = chars::make_character(101, 1);
    const PoissonChecker a(chi, 500), b(chi.conj(), 500);
    const auto r = a.check(3, 7, 0.001), s = b.check(-3, 7, -0.001);
    EXPECT_LT(std::abs(r.lhs - std::conj(s.lhs)), 1e-12 * std::abs(r.lhs));
    EXPECT_LT(std::abs(r.rhs - std::conj(s.rhs)), 1e-12 * std::abs(r.rhs));
    EXPECT_NEAR(r.residual, s.residual, 1e-12);
    EXPECT_GT(a.check(3, 7, 0.001, false).residual, 1e-2);
    EXPECT_THROW(a.check(1, 101, 0.0), std::domain_error);
}

TEST(Stilde, PrePostAndAverage) {
    const auto e = make_params(200, 13, 0.05);
    const StildeEngine eng(big_form(), chars::quadratic_character(13), e);
    const auto r = stilde_consistency(eng, 13, 200, 0.0);
    EXPECT_LT(r.relative, 1e-4);
    // x = 0: no twist, equal to summing S T over the reduced residues by hand
    cplx hand{0, 0};
    for (i64 q : eng.moduli().members) {
        for (i64 a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            cplx S{0, 0}, T{0, 0};
            for (i64 n = 200; n <= 400; ++n) S += bump::h1()(n / 200.0) * big_form().lambda(n) * e_frac(a * n, q);
            for (i64 m = 160; m <= 440; ++m)
                T += bump::h2()(m / 200.0) * chars::quadratic_character(13)(m) * e_frac(-a * m, q);
            hand += S * T;
        }
    }
    hand /= static_cast<double>(eng.moduli().L);
    EXPECT_LT(std::abs(hand - r.pre), 1e-10 * std::abs(hand));
    EXPECT_LT(std::abs(eng.x_average() - eng.jutila()), 1e-6 * std::abs(eng.jutila()));
}

TEST(Omega, PoissonSplitAndDiagonal) {
    const auto e = make_params(500, 1009, 0.05);
    const auto chi = chars::quadratic_character(1009);
    // pairwise coprime q2 and n below every q2: only the diagonal survives in the d = c part
    const auto r = compute_omega(big_form(), chi, {e, 11, {4, 5}, 0.0, 3});
    EXPECT_LT(r.poisson_relative, 1e-10);
    EXPECT_LT(std::abs(r.sigma0 - r.sigma0_kloosterman), 1e-8 * std::max(1.0, std::abs(r.sigma0)));
    EXPECT_LT(std::abs(r.case1 - r.case1_diagonal), 1e-10 * std::abs(r.case1_diagonal));
    EXPECT_LT(r.tail, 1e-10);
    const auto full = compute_omega(big_form(), chi, {e, 13, default_q2s(e, 13), 0.001, 0});
    EXPECT_LT(full.poisson_relative, 1e-10);
    EXPECT_GE(full.omega_direct.real(), 0.0);
    EXPECT_LE(full.ratio0, 10.0);
    EXPECT_LE(full.ratio_nonzero, 10.0);
    EXPECT_THROW(compute_omega(big_form(), chi, {e, 10, {4}, 0.0, 0}), std::domain_error);
}

TEST(Sweep, DeterministicAcrossWorkersAndRoundTrip) {
    const auto f = hecke::delta_form(5000);
    const auto cells = make_grid(log_spaced(100, 2000, 4), {101, 103, 1009}, {0.02, 0.05});
    const auto a = run_sweep(f, cells, 1), b = run_sweep(f, cells, 3);
    auto strip = [](std::vector<SweepRecord> rs) {
        for (auto& r : rs) r.seconds = 0;
        std::ostringstream s;
        write_sweep_csv(s, rs);
        return s.str();
    };
    EXPECT_EQ(strip(a), strip(b));
    std::ostringstream out;
    write_sweep_csv(out, a);
    std::istringstream in(out.str());
    const auto back = read_sweep_csv(in);
    ASSERT_EQ(back.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(back[i].ratio, a[i].ratio);
        EXPECT_EQ(back[i].p, a[i].p);
        EXPECT_EQ(back[i].window, a[i].window);
        EXPECT_LE(a[i].ratio, abs_lambda_sum(f, a[i].N) / a[i].denominator + 1e-12);
    }
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), sweep_csv_header);
    EXPECT_EQ(log_spaced(1000, 100000, 3), (std::vector<double>{1000, 10000, 100000}));
}
