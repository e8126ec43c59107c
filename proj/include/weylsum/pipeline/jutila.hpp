#pragma once

// Circle-method replacement of the diagonal n = m by the Farey-arc weight.
//
//   S~ = int I~(alpha) S_A(alpha) S_B(-alpha) dalpha = sum_d K(d) C(d)
//
// with A(n) = lambda(n) h1(n/N), B(m) = chi(m) h2(m/N), C(d) the correlation
// sum_{n - m = d} A(n) B(m) and K(d) = (1/L) sum_q c_q(d) sinc(2 pi delta d).

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "weylsum/bump.hpp"
#include "weylsum/characters.hpp"
#include "weylsum/circle.hpp"
#include "weylsum/expsums.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/pipeline/params.hpp"

namespace weylsum::pipeline {

/// Desk ceiling for the quadratic-cost sums.
inline constexpr double jutila_max_N = 2000.0;

/// Weighted sequence supported on [lo, lo + values.size()).
struct Sequence {
    i64 lo = 0;
    std::vector<cplx> values;

    i64 hi() const { return lo + static_cast<i64>(values.size()) - 1; }
    cplx at(i64 n) const { return (n < lo || n > hi()) ? cplx{0, 0} : values[static_cast<std::size_t>(n - lo)]; }
};

inline Sequence weighted_sequence(double N, const bump::BumpFunction& b, const auto& coefficient) {
    Sequence s;
    s.lo = std::max<i64>(1, static_cast<i64>(std::floor(b.lo() * N)));
    const auto hi = static_cast<i64>(std::ceil(b.hi() * N));
    for (i64 n = s.lo; n <= hi; ++n) s.values.push_back(b(static_cast<double>(n) / N) * coefficient(n));
    return s;
}

/// A(n) = lambda(n) h1(n/N).
inline Sequence sequence_A(const hecke::CuspForm& f, double N) {
    if (2.0 * N + 1 > static_cast<double>(f.n_max())) throw hecke::CoefficientCacheMiss("sequence_A: table too short");
    return weighted_sequence(N, bump::h1(), [&](i64 n) { return cplx{f.lambda(n), 0.0}; });
}

/// B(m) = chi(m) h2(m/N).
inline Sequence sequence_B(const chars::DirichletCharacter& chi, double N) {
    return weighted_sequence(N, bump::h2(), [&](i64 m) { return chi(m); });
}

/// C(d) = sum_{n - m = d} A(n) B(m) for d in [A.lo - B.hi, A.hi - B.lo].
inline Sequence correlation(const Sequence& A, const Sequence& B) {
    Sequence C;
    C.lo = A.lo - B.hi();
    C.values.assign(static_cast<std::size_t>(A.hi() - B.lo - C.lo + 1), cplx{0, 0});
    for (std::size_t i = 0; i < A.values.size(); ++i) {
        if (A.values[i] == cplx{0, 0}) continue;
        const i64 n = A.lo + static_cast<i64>(i);
        for (std::size_t j = 0; j < B.values.size(); ++j) {
            const i64 m = B.lo + static_cast<i64>(j);
            C.values[static_cast<std::size_t>(n - m - C.lo)] += A.values[i] * B.values[j];
        }
    }
    return C;
}

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// K(d) = (1/L) sum_q c_q(d) sinc(2 pi delta d) for d in [d_lo, d_hi].
inline std::vector<double> circle_kernel(const circle::ModuliSet& moduli, double delta, i64 d_lo, i64 d_hi) {
    std::vector<double> K(static_cast<std::size_t>(d_hi - d_lo + 1), 0.0);
    for (i64 q : moduli.members) {
        std::vector<double> cq(static_cast<std::size_t>(q));
        for (i64 r = 0; r < q; ++r) cq[static_cast<std::size_t>(r)] = static_cast<double>(expsums::ramanujan_sum(r, q));
        for (i64 d = d_lo; d <= d_hi; ++d) K[static_cast<std::size_t>(d - d_lo)] += cq[static_cast<std::size_t>(mod(d, q))];
    }
    for (i64 d = d_lo; d <= d_hi; ++d) {
        auto& k = K[static_cast<std::size_t>(d - d_lo)];
        k *= sinc(two_pi * delta * static_cast<double>(d)) / static_cast<double>(moduli.L);
    }
    return K;
}

/// sum_d K(d) C(d).
inline cplx jutila_sum(const Sequence& A, const Sequence& B, const circle::ModuliSet& moduli, double delta) {
    const auto C = correlation(A, B);
    const auto K = circle_kernel(moduli, delta, C.lo, C.hi());
    cplx s{0, 0};
    for (std::size_t i = 0; i < C.values.size(); ++i) s += K[i] * C.values[i];
    return s;
}

/// The smooth sum S = sum A(n) B(n); h2 = 1 on the support of h1.
inline cplx smooth_sum(const Sequence& A, const Sequence& B) {
    cplx s{0, 0};
    for (std::size_t i = 0; i < A.values.size(); ++i) s += A.values[i] * B.at(A.lo + static_cast<i64>(i));
    return s;
}

struct ApproxReport {
    double N = 0.0, theta = 0.0, Q = 0.0, delta = 0.0;
    i64 L = 0;
    cplx S{0, 0}, S_tilde{0, 0};
    double abs_error = 0.0;
    double ratio = 0.0;  // |S - S~| Q / (N^{3/2} log(QN))
    double seconds = 0.0;
};

inline ApproxReport approx_error_report(const hecke::CuspForm& f, const chars::DirichletCharacter& chi,
                                        const ExperimentParams& e) {
    if (e.N > jutila_max_N) throw std::domain_error("approx_error_report: N above the desk ceiling");
    const auto t0 = std::chrono::steady_clock::now();
    const auto moduli = circle::build_moduli(e.Q, chi.modulus());
    const auto A = sequence_A(f, e.N);
    const auto B = sequence_B(chi, e.N);
    ApproxReport r;
    r.N = e.N;
    r.theta = e.theta;
    r.Q = e.Q;
    r.delta = e.delta;
    r.L = moduli.L;
    r.S = smooth_sum(A, B);
    r.S_tilde = jutila_sum(A, B, moduli, e.delta);
    r.abs_error = std::abs(r.S - r.S_tilde);
    r.ratio = r.abs_error * e.Q / (std::pow(e.N, 1.5) * std::log(e.Q * e.N));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace weylsum::pipeline
