#pragma once

// S~_x, the Farey-arc sum at a fixed shift x, before and after the two
// dual transforms.
//
// Before:  (1/L) sum_q sum*_a S(a, q, x) T(a, q, x) with
//          S = sum lambda(n) h1(n/N) e(an/q) e(nx),  T = sum chi(m) h2(m/N) e(-am/q) e(-mx).
// After:   (N^{7/4} tau_chi / (p L)) sum_q chi(q) q^{-1/2}
//            sum_{n, (m, q) = 1} lambda(n) n^{-1/4} chibar(m) e(-p mbar n/q) I1(n, x, q) I2(m, x, q).
//
// Both fold the n and m sums into residues mod q first.

#include <boost/math/quadrature/gauss.hpp>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "weylsum/characters.hpp"
#include "weylsum/circle.hpp"
#include "weylsum/expsums.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/pipeline/jutila.hpp"
#include "weylsum/pipeline/params.hpp"
#include "weylsum/transforms.hpp"

namespace weylsum::pipeline {

/// I1 kernels up to this Bessel argument; beyond it they are below 1e-9 of peak.
inline constexpr double i1_table_X_hi = 2500.0;
inline constexpr double i1_tail_eps = 1e-10;

/// G(X) = int h1(u) e(c u) J_{k-1}(X sqrt u) du for either sign of c.
class SignedHankel {
public:
    SignedHankel(int nu, double c)
        : conj_(c < 0.0), table_(transforms::hankel_table(bump::BumpKind::H1, nu, std::abs(c), i1_table_X_hi)) {
        cutoff_ = table_->decay_cutoff(i1_tail_eps);
    }
    cplx operator()(double X) const { return conj_ ? std::conj((*table_)(X)) : (*table_)(X); }
    double cutoff() const { return cutoff_; }

private:
    bool conj_;
    std::shared_ptr<const transforms::HankelTable> table_;
    double cutoff_ = 0.0;
};

/// n mod q folding of lambda(n) n^{-1/4} I1(n, x, q); n_cap > 0 truncates the n-sum.
inline std::vector<cplx> fold_dual_form(const hecke::CuspForm& f, const SignedHankel& G, i64 q, double N,
                                        i64 n_cap = 0) {
    const double s = G.cutoff() * static_cast<double>(q) / (4.0 * std::numbers::pi);
    auto n_hi = static_cast<i64>(std::floor(s * s / N));
    if (n_cap > 0) n_hi = std::min(n_hi, n_cap);
    if (n_hi > f.n_max()) throw hecke::CoefficientCacheMiss("fold_dual_form: table too short");
    std::vector<cplx> out(static_cast<std::size_t>(q), cplx{0, 0});
    const int k = f.weight();
    for (i64 n = 1; n <= n_hi; ++n) {
        const double X = transforms::bessel_scale(n, q, N);
        const cplx I1 = transforms::i1_prefactor(n, q, N, k) * G(X);
        out[static_cast<std::size_t>(n % q)] += f.lambda(n) * std::pow(static_cast<double>(n), -0.25) * I1;
    }
    return out;
}

class StildeEngine {
public:
    StildeEngine(const hecke::CuspForm& f, const chars::DirichletCharacter& chi, const ExperimentParams& e)
        : f_(f),
          chi_(chi),
          e_(e),
          moduli_(circle::build_moduli(e.Q, chi.modulus())),
          A_(sequence_A(f, e.N)),
          B_(sequence_B(chi, e.N)),
          tau_(chars::gauss_sum(chi)),
          chi_table_(chi.table()),
          h2_(transforms::h2_table()) {
        if (e.N > jutila_max_N) throw std::domain_error("StildeEngine: N above the desk ceiling");
    }

    const circle::ModuliSet& moduli() const { return moduli_; }

    cplx pre_transform(double x) const {
        cplx total{0, 0};
        for (i64 q : moduli_.members) {
            const RootTable roots(q);
            std::vector<cplx> ra(static_cast<std::size_t>(q)), rb(static_cast<std::size_t>(q));
            for (std::size_t i = 0; i < A_.values.size(); ++i) {
                const i64 n = A_.lo + static_cast<i64>(i);
                ra[static_cast<std::size_t>(n % q)] += A_.values[i] * e(static_cast<double>(n) * x);
            }
            for (std::size_t i = 0; i < B_.values.size(); ++i) {
                const i64 m = B_.lo + static_cast<i64>(i);
                rb[static_cast<std::size_t>(m % q)] += B_.values[i] * e(-static_cast<double>(m) * x);
            }
            for (i64 a = 1; a <= q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                cplx S{0, 0}, T{0, 0};
                for (i64 r = 0; r < q; ++r) {
                    S += ra[static_cast<std::size_t>(r)] * roots[a * r];
                    T += rb[static_cast<std::size_t>(r)] * roots[-a * r];
                }
                total += S * T;
            }
        }
        return total / static_cast<double>(moduli_.L);
    }

    cplx post_transform(double x) const {
        const double N = e_.N;
        const i64 P = static_cast<i64>(chi_.modulus());
        const SignedHankel G(f_.weight() - 1, N * x);
        const double xi_cut = h2_->decay_cutoff(1e-15);
        cplx total{0, 0};
        for (i64 q : moduli_.members) {
            const auto A1 = fold_dual_form(f_, G, q, N);
            // m mod q folding of chibar(m) I2(m, x, q)
            std::vector<cplx> B1(static_cast<std::size_t>(q), cplx{0, 0});
            const double scale = N / (static_cast<double>(P) * static_cast<double>(q));
            const i64 m_lo = static_cast<i64>(std::floor((-xi_cut - N * x) / scale));
            const i64 m_hi = static_cast<i64>(std::ceil((xi_cut - N * x) / scale));
            for (i64 m = m_lo; m <= m_hi; ++m) {
                const double xi = N * x + static_cast<double>(m) * scale;
                if (!h2_->covers(xi)) continue;
                B1[static_cast<std::size_t>(mod(m, q))] +=
                    std::conj(chi_table_[static_cast<std::size_t>(mod(m, P))]) * (*h2_)(xi);
            }
            const expsums::InverseTable inv(q);
            const RootTable roots(q);
            cplx inner{0, 0};
            for (std::size_t i = 0; i < inv.units().size(); ++i) {
                const i64 s = inv.units()[i], sbar = inv.inverses()[i];
                cplx acc{0, 0};
                for (i64 r = 0; r < q; ++r) acc += A1[static_cast<std::size_t>(r)] * roots[-P * sbar * r];
                inner += acc * B1[static_cast<std::size_t>(s)];
            }
            total += chi_(q) / std::sqrt(static_cast<double>(q)) * inner;
        }
        return std::pow(N, 1.75) * tau_ / (static_cast<double>(P) * static_cast<double>(moduli_.L)) * total;
    }

    /// (1/(2 delta)) int_{-delta}^{delta} S~_x dx by 9-point Gauss-Legendre.
    cplx x_average(bool post = false) const {
        using GL = boost::math::quadrature::gauss<double, 9>;
        const auto& abs = GL::abscissa();
        const auto& w = GL::weights();
        cplx s{0, 0};
        auto at = [&](double x) { return post ? post_transform(x) : pre_transform(x); };
        for (std::size_t i = 0; i < abs.size(); ++i) {
            if (abs[i] == 0.0) {
                s += w[i] * at(0.0);
            } else {
                s += w[i] * (at(abs[i] * e_.delta) + at(-abs[i] * e_.delta));
            }
        }
        return 0.5 * s;
    }

    /// The same average in closed form: sum_d K(d) C(d).
    cplx jutila() const { return jutila_sum(A_, B_, moduli_, e_.delta); }

private:
    const hecke::CuspForm& f_;
    chars::DirichletCharacter chi_;
    ExperimentParams e_;
    circle::ModuliSet moduli_;
    Sequence A_, B_;
    cplx tau_;
    std::vector<cplx> chi_table_;
    std::shared_ptr<const transforms::H2Table> h2_;
};

struct ConsistencyResult {
    u64 p = 0;
    double N = 0.0, x = 0.0;
    cplx pre{0, 0}, post{0, 0};
    double relative = 0.0;
    double seconds = 0.0;
};

inline ConsistencyResult stilde_consistency(const StildeEngine& engine, u64 p, double N, double x) {
    const auto t0 = std::chrono::steady_clock::now();
    ConsistencyResult r;
    r.p = p;
    r.N = N;
    r.x = x;
    r.pre = engine.pre_transform(x);
    r.post = engine.post_transform(x);
    r.relative = std::abs(r.pre - r.post) / std::max({std::abs(r.pre), std::abs(r.post), 1e-300});
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace weylsum::pipeline
