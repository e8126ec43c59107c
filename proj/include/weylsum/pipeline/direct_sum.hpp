#pragma once

// Direct evaluation of sum lambda_f(n) chi(n), sharp or against h1(n/N).

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "weylsum/bump.hpp"
#include "weylsum/characters.hpp"
#include "weylsum/hecke.hpp"

namespace weylsum::pipeline {

inline constexpr double direct_max_N = 1e6;

enum class SumWindow { Sharp, SmoothH1 };

struct SumResult {
    cplx value{0.0, 0.0};
    i64 n_terms = 0;
    std::string method;
    double seconds = 0.0;
};

/// Sharp: n <= N. Smooth: N < n < 2N weighted by h1(n/N).
inline SumResult direct_sum(const hecke::CuspForm& f, const chars::DirichletCharacter& chi, double N,
                            SumWindow window) {
    if (!(N >= 1.0) || N > direct_max_N) throw std::domain_error("direct_sum: N must lie in [1, 1e6]");
    const auto t0 = std::chrono::steady_clock::now();
    SumResult r;
    const auto chi_table = chi.table();
    const auto p = static_cast<i64>(chi.modulus());
    const auto& lambda = f.lambdas();
    if (window == SumWindow::Sharp) {
        const auto n_hi = static_cast<i64>(std::floor(N));
        if (n_hi > f.n_max()) throw hecke::CoefficientCacheMiss("direct_sum: coefficient table too short");
        r.method = "direct-sharp";
        for (i64 n = 1; n <= n_hi; ++n) r.value += lambda[n] * chi_table[n % p];
        r.n_terms = std::max<i64>(n_hi, 0);
    } else {
        const auto n_lo = static_cast<i64>(std::floor(N)) + 1;
        const auto n_hi = static_cast<i64>(std::ceil(2.0 * N)) - 1;
        if (n_hi > f.n_max()) throw hecke::CoefficientCacheMiss("direct_sum: coefficient table too short");
        r.method = "direct-smooth-h1";
        const auto& h1 = bump::h1();
        for (i64 n = n_lo; n <= n_hi; ++n) {
            const double w = h1(static_cast<double>(n) / N);
            if (w == 0.0) continue;
            r.value += w * lambda[n] * chi_table[n % p];
            ++r.n_terms;
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// sum_{n <= N} |lambda(n)|, the triangle-inequality ceiling for |S_sharp|.
inline double abs_lambda_sum(const hecke::CuspForm& f, double N) {
    const auto n_hi = static_cast<i64>(std::floor(N));
    if (n_hi > f.n_max()) throw hecke::CoefficientCacheMiss("abs_lambda_sum: coefficient table too short");
    double s = 0.0;
    for (i64 n = 1; n <= n_hi; ++n) s += std::abs(f.lambda(n));
    return s;
}

}  // namespace weylsum::pipeline
