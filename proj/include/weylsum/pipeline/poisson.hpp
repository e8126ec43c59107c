#pragma once

// Twisted Poisson summation for
//
//   T(a, q, x) = sum_m chi(m) e(-am/q) e(-mx) h2(m/N)
//              = (N tau_chi / p) chi(q) sum_{m pbar = a (q)} chibar(m) h2-hat(Nx + mN/(pq)).

#include <cmath>
#include <stdexcept>

#include "weylsum/bump.hpp"
#include "weylsum/characters.hpp"
#include "weylsum/transforms.hpp"

namespace weylsum::pipeline {

/// Below this |lhs| the residual is reported absolute rather than relative.
inline constexpr double absolute_below = 1e-6;

struct PoissonResult {
    cplx lhs{0, 0}, rhs{0, 0};
    double residual = 0.0;
    bool absolute = false;
    i64 dual_terms = 0;
};

class PoissonChecker {
public:
    PoissonChecker(const chars::DirichletCharacter& chi, double N)
        : chi_(chi), N_(N), tau_(chars::gauss_sum(chi)), chi_table_(chi.table()), h2_(transforms::h2_table()) {
        xi_cut_ = h2_->decay_cutoff(1e-15);
    }

    u64 p() const { return chi_.modulus(); }
    cplx gauss_sum() const { return tau_; }

    /// Left side by direct summation over the support of h2.
    cplx direct(i64 a, i64 q, double x) const {
        const auto& h2 = bump::h2();
        const RootTable roots(q);
        const i64 lo = static_cast<i64>(std::floor(h2.lo() * N_)), hi = static_cast<i64>(std::ceil(h2.hi() * N_));
        const i64 P = static_cast<i64>(p());
        cplx s{0, 0};
        for (i64 m = std::max<i64>(lo, 1); m <= hi; ++m) {
            const double w = h2(static_cast<double>(m) / N_);
            if (w == 0.0) continue;
            s += w * chi_table_[static_cast<std::size_t>(m % P)] * roots[-a * m] * e(-static_cast<double>(m) * x);
        }
        return s;
    }

    /// Right side. With keep_congruence = false every m is summed: the ablation.
    cplx dual(i64 a, i64 q, double x, bool keep_congruence = true, i64* terms = nullptr) const {
        const i64 P = static_cast<i64>(p());
        if (std::gcd(q, P) != 1) throw std::domain_error("poisson: q must be coprime to p");
        const double scale = N_ / (static_cast<double>(P) * static_cast<double>(q));
        const i64 m_lo = static_cast<i64>(std::floor((-xi_cut_ - N_ * x) / scale));
        const i64 m_hi = static_cast<i64>(std::ceil((xi_cut_ - N_ * x) / scale));
        // m pbar = a (mod q)  <=>  m = a p (mod q)
        const i64 target = mod(a * P, q);
        cplx s{0, 0};
        i64 count = 0;
        i64 m = keep_congruence ? m_lo + mod(target - m_lo, q) : m_lo;
        const i64 step = keep_congruence ? q : 1;
        for (; m <= m_hi; m += step) {
            const double xi = N_ * x + static_cast<double>(m) * scale;
            if (!h2_->covers(xi)) continue;
            const cplx c = chi_table_[static_cast<std::size_t>(mod(m, P))];
            if (c == cplx{0, 0}) continue;
            s += std::conj(c) * (*h2_)(xi);
            ++count;
        }
        if (terms) *terms = count;
        return N_ * tau_ / static_cast<double>(P) * chi_(q) * s;
    }

    PoissonResult check(i64 a, i64 q, double x, bool keep_congruence = true) const {
        PoissonResult r;
        r.lhs = direct(a, q, x);
        r.rhs = dual(a, q, x, keep_congruence, &r.dual_terms);
        r.absolute = std::abs(r.lhs) < absolute_below;
        r.residual = std::abs(r.lhs - r.rhs) / (r.absolute ? 1.0 : std::abs(r.lhs));
        return r;
    }

private:
    chars::DirichletCharacter chi_;
    double N_;
    cplx tau_;
    std::vector<cplx> chi_table_;
    std::shared_ptr<const transforms::H2Table> h2_;
    double xi_cut_ = 0.0;
};

}  // namespace weylsum::pipeline
