#pragma once

// Numerical check of Voronoi summation for a level-one form:
//
//   sum lambda(n) e(an/q) b(n/Y)
//     = (2 pi i^k Y / q) sum lambda(n) e(-abar n/q) int b(u) J_{k-1}(4 pi sqrt(nYu)/q) du

#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "weylsum/hecke.hpp"
#include "weylsum/transforms.hpp"

namespace weylsum::pipeline {

struct VoronoiResult {
    i64 a = 0, q = 0;
    double Y = 0.0;
    cplx lhs{0, 0}, rhs{0, 0};
    double residual = 0.0;  // |lhs - rhs| / |lhs|, or absolute when |lhs| < 1e-6
    bool absolute = false;
    i64 dual_terms = 0;
};

class VoronoiChecker {
public:
    static constexpr double X_hi = 1200.0;
    static constexpr double tail_eps = 1e-13;

    explicit VoronoiChecker(const hecke::CuspForm& f, bump::BumpKind kind = bump::BumpKind::Mollifier)
        : f_(f), b_(kind), table_(transforms::hankel_table(kind, f.weight() - 1, 0.0, X_hi)) {
        X_cut_ = table_->decay_cutoff(tail_eps);
    }

    double dual_cutoff() const { return X_cut_; }

    /// Largest dual index the check needs at (q, Y).
    i64 dual_length(i64 q, double Y) const {
        const double s = X_cut_ * static_cast<double>(q) / (4.0 * std::numbers::pi);
        return static_cast<i64>(std::floor(s * s / Y)) + 1;
    }

    VoronoiResult check(i64 a, i64 q, double Y) const {
        if (q < 1) throw std::domain_error("voronoi: q must be >= 1");
        if (std::gcd(a, q) != 1) throw std::domain_error("voronoi: a must be coprime to q");
        VoronoiResult r;
        r.a = a;
        r.q = q;
        r.Y = Y;
        const i64 n_lo = static_cast<i64>(std::floor(b_.lo() * Y)), n_hi = static_cast<i64>(std::ceil(b_.hi() * Y));
        const i64 dual = dual_length(q, Y);
        if (std::max(n_hi, dual) > f_.n_max()) throw hecke::CoefficientCacheMiss("voronoi: table too short");
        const RootTable roots(q);
        for (i64 n = std::max<i64>(1, n_lo); n <= n_hi; ++n)
            r.lhs += b_(static_cast<double>(n) / Y) * f_.lambda(n) * roots[a * n];
        const i64 abar = inverse_mod(a, q);
        cplx s{0, 0};
        for (i64 n = 1; n <= dual; ++n) {
            const double X = transforms::bessel_scale(n, q, Y);
            if (X > X_cut_) break;
            s += f_.lambda(n) * roots[-abar * n] * (*table_)(X);
            r.dual_terms = n;
        }
        static const std::array<cplx, 4> ipow{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
        r.rhs = two_pi * ipow[static_cast<std::size_t>(f_.weight() % 4)] * Y / static_cast<double>(q) * s;
        r.absolute = std::abs(r.lhs) < 1e-6;
        r.residual = std::abs(r.lhs - r.rhs) / (r.absolute ? 1.0 : std::abs(r.lhs));
        return r;
    }

    /// Every reduced a mod q.
    std::vector<VoronoiResult> check_all(i64 q, double Y) const {
        std::vector<VoronoiResult> out;
        for (i64 a = (q == 1 ? 0 : 1); a < std::max<i64>(q, 1); ++a)
            if (std::gcd(a, q) == 1) out.push_back(check(a, q, Y));
        return out;
    }

private:
    const hecke::CuspForm& f_;
    bump::BumpFunction b_;
    std::shared_ptr<const transforms::HankelTable> table_;
    double X_cut_ = 0.0;
};

/// Unimodular u minimising sum |lhs - u rhs|^2; 1 when the normalisation is right.
inline cplx fitted_unimodular_constant(const std::vector<VoronoiResult>& rs) {
    cplx s{0, 0};
    for (const auto& r : rs) s += r.lhs * std::conj(r.rhs);
    return std::abs(s) == 0.0 ? cplx{1, 0} : s / std::abs(s);
}

}  // namespace weylsum::pipeline
