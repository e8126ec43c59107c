#pragma once

// The Cauchy-Schwarz quantity
//
//   Omega = sum_{(m, q1) = 1} W(m/M0) | sum_{q2} chi(q2) q2^{-1/2} [(m, q2) = 1] I2(m, x, q1 q2)
//                                     sum_n lambda(n) n^{-1/4} I1(n, x, q1 q2) e(-p mbar n/(q1 q2)) |^2
//
// computed directly and after Poisson in m modulo c = q1 q2 q2'. Each pair
// (q2, q2') then contributes
//
//   chi(q2) chibar(q2') (q2 q2')^{-1/2} (M0/c) sum_k I(k) sum_t D(t) S(k, -t; c)
//
// where D(t) collects a_n conj(a_n') over p(n q2' - n' q2) = t mod c. The k = 0
// term is the zero frequency; the rest goes through the DFT of D.

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "weylsum/characters.hpp"
#include "weylsum/expsums.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/pipeline/params.hpp"
#include "weylsum/pipeline/stilde.hpp"
#include "weylsum/transforms.hpp"

namespace weylsum::pipeline {

struct OmegaSetup {
    ExperimentParams params;
    i64 q1 = 0;
    std::vector<i64> q2s;
    double x = 0.0;
    i64 n_cap = 0;  // 0: every n up to the kernel decay
};

struct OmegaResult {
    i64 q1 = 0;
    double x = 0.0;
    cplx omega_direct{0, 0};
    cplx sigma0{0, 0};             // zero frequency via divisor-Moebius Ramanujan sums
    cplx sigma0_kloosterman{0, 0}; // the same via S(0, -t; c)
    cplx sigma_nonzero{0, 0};
    cplx case1{0, 0};              // d = c part of sigma0
    cplx case1_diagonal{0, 0};     // q2 = q2', n = n' only
    double poisson_relative = 0.0; // |direct - (sigma0 + sigma_nonzero)| / |direct|
    double ratio0 = 0.0;           // |sigma0| / (M0 N0^{1/2})
    double ratio_nonzero = 0.0;    // |sigma_nonzero| / (N0^{3/2} Q2^2 Q1^{1/2})
    double tail = 0.0;             // max |I(+-K)| / |I(0)| over pairs
    double seconds = 0.0;
};

/// W-hat is below 1e-12 of its peak beyond this frequency.
inline constexpr double window_bandwidth = 45.0;

/// q2 in [Q2, 2 Q2] coprime to q1 and p.
inline std::vector<i64> default_q2s(const ExperimentParams& e, i64 q1) {
    std::vector<i64> out;
    for (i64 q2 = static_cast<i64>(std::ceil(e.Q2)); static_cast<double>(q2) <= 2.0 * e.Q2; ++q2)
        if (std::gcd(q2, q1) == 1 && std::gcd(q2, static_cast<i64>(e.p)) == 1) out.push_back(q2);
    return out;
}

/// q1 in [Q1, 2 Q1] coprime to p.
inline std::vector<i64> default_q1s(const ExperimentParams& e) {
    std::vector<i64> out;
    for (i64 q1 = static_cast<i64>(std::ceil(e.Q1)); static_cast<double>(q1) <= 2.0 * e.Q1; ++q1)
        if (std::gcd(q1, static_cast<i64>(e.p)) == 1) out.push_back(q1);
    return out;
}

inline OmegaResult compute_omega(const hecke::CuspForm& f, const chars::DirichletCharacter& chi,
                                 const OmegaSetup& s) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& e = s.params;
    const double N = e.N, M0 = e.M0;
    const i64 P = static_cast<i64>(chi.modulus());
    if (s.q2s.empty()) throw std::domain_error("compute_omega: empty q2 range");
    for (i64 q2 : s.q2s)
        if (std::gcd(q2, s.q1) != 1 || std::gcd(s.q1 * q2, P) != 1)
            throw std::domain_error("compute_omega: q1 q2 must be coprime to p and q2 coprime to q1");

    OmegaResult out;
    out.q1 = s.q1;
    out.x = s.x;
    const SignedHankel G(f.weight() - 1, N * s.x);
    const auto h2 = transforms::h2_table();

    // a_{q2}(r): residues mod q1 q2 of lambda(n) n^{-1/4} I1(n, x, q1 q2)
    std::vector<std::vector<cplx>> folded;
    std::vector<double> diag_mass;  // sum_n |a_n|^2, only used for the diagonal
    for (i64 q2 : s.q2s) {
        folded.push_back(fold_dual_form(f, G, s.q1 * q2, N, s.n_cap));
        double m2 = 0.0;
        const i64 q = s.q1 * q2;
        const double scale = G.cutoff() * static_cast<double>(q) / (4.0 * std::numbers::pi);
        i64 n_hi = static_cast<i64>(std::floor(scale * scale / N));
        if (s.n_cap > 0) n_hi = std::min(n_hi, s.n_cap);
        for (i64 n = 1; n <= n_hi; ++n) {
            const cplx a = f.lambda(n) * std::pow(static_cast<double>(n), -0.25) *
                           transforms::i1_prefactor(n, q, N, f.weight()) * G(transforms::bessel_scale(n, q, N));
            m2 += std::norm(a);
        }
        diag_mass.push_back(m2);
    }

    // direct
    {
        const i64 m_lo = static_cast<i64>(std::ceil(-2.0 * M0)), m_hi = static_cast<i64>(std::floor(2.0 * M0));
        std::vector<RootTable> roots;
        for (i64 q2 : s.q2s) roots.emplace_back(s.q1 * q2);
        cplx total{0, 0};
        for (i64 m = m_lo; m <= m_hi; ++m) {
            const double w = bump::window()(static_cast<double>(m) / M0);
            if (w == 0.0) continue;
            cplx inner{0, 0};
            for (std::size_t i = 0; i < s.q2s.size(); ++i) {
                const i64 q2 = s.q2s[i], q = s.q1 * q2;
                if (std::gcd(m, q) != 1) continue;
                const i64 mbar = inverse_mod(mod(m, q), q);
                cplx acc{0, 0};
                for (i64 r = 0; r < q; ++r) acc += folded[i][static_cast<std::size_t>(r)] * roots[i][-P * mbar * r];
                const cplx I2 = (*h2)(transforms::i2_frequency(static_cast<double>(m), s.x, q, N, e.p));
                inner += chi(q2) / std::sqrt(static_cast<double>(q2)) * I2 * acc;
            }
            total += w * std::norm(inner);
        }
        out.omega_direct = total;
    }

    // Poisson, pair by pair
    for (std::size_t i = 0; i < s.q2s.size(); ++i) {
        for (std::size_t j = 0; j < s.q2s.size(); ++j) {
            const i64 q2 = s.q2s[i], q2p = s.q2s[j];
            const i64 c = s.q1 * q2 * q2p, qa = s.q1 * q2, qb = s.q1 * q2p;
            const cplx pref = chi(q2) * std::conj(chi(q2p)) / std::sqrt(static_cast<double>(q2 * q2p));

            std::vector<cplx> D(static_cast<std::size_t>(c), cplx{0, 0});
            for (i64 r = 0; r < qa; ++r) {
                const cplx ar = folded[i][static_cast<std::size_t>(r)];
                if (ar == cplx{0, 0}) continue;
                for (i64 rp = 0; rp < qb; ++rp) {
                    const i64 t = mod(P * mod(r * q2p - rp * q2, c), c);
                    D[static_cast<std::size_t>(t)] += ar * std::conj(folded[j][static_cast<std::size_t>(rp)]);
                }
            }

            const transforms::ImSetup im{N, e.p, M0, s.x, s.q1, q2, q2p};
            const double slope = M0 * N / (static_cast<double>(e.p) * static_cast<double>(std::min(qa, qb)));
            const auto K = static_cast<i64>(
                std::ceil(static_cast<double>(c) * (2.2 * slope + window_bandwidth) / M0));
            const transforms::ImIntegrator integrator(im, K, *h2, 12.0);
            const auto I = integrator.range(K);
            const cplx I0 = I[static_cast<std::size_t>(K)];
            out.tail = std::max(out.tail, std::max(std::abs(I.front()), std::abs(I.back())) / std::abs(I0));

            const double scale = M0 / static_cast<double>(c);
            const expsums::InverseTable inv(c);
            cplx z0{0, 0}, z0k{0, 0};
            for (i64 t = 0; t < c; ++t) {
                const cplx d = D[static_cast<std::size_t>(t)];
                if (d == cplx{0, 0}) continue;
                z0 += d * static_cast<double>(expsums::ramanujan_sum(t, c));
                z0k += d * expsums::kloosterman(0, -t, c, inv);
            }
            out.sigma0 += pref * scale * I0 * z0;
            out.sigma0_kloosterman += pref * scale * I0 * z0k;
            out.case1 += pref * scale * I0 * static_cast<double>(c) * D[0];

            // sum_{k != 0} I(k) sum_t D(t) S(k, -t; c) = sum_beta Dhat(beta-bar) Itilde(beta)
            const auto& roots = inv.roots();
            cplx nz{0, 0};
            for (std::size_t u = 0; u < inv.units().size(); ++u) {
                const i64 beta = inv.units()[u], bbar = inv.inverses()[u];
                cplx dhat{0, 0};
                for (i64 t = 0; t < c; ++t) dhat += D[static_cast<std::size_t>(t)] * roots[-t * bbar];
                cplx itilde{0, 0};
                for (i64 k = 1; k <= K; ++k)
                    itilde += I[static_cast<std::size_t>(K + k)] * roots[k * beta] +
                              I[static_cast<std::size_t>(K - k)] * roots[-k * beta];
                nz += dhat * itilde;
            }
            out.sigma_nonzero += pref * scale * nz;
            if (i == j) out.case1_diagonal += pref * scale * I0 * static_cast<double>(c) * diag_mass[i];
        }
    }

    const cplx poisson = out.sigma0 + out.sigma_nonzero;
    out.poisson_relative = std::abs(out.omega_direct - poisson) / std::max(std::abs(out.omega_direct), 1e-300);
    out.ratio0 = std::abs(out.sigma0) / (M0 * std::sqrt(e.N0));
    out.ratio_nonzero = std::abs(out.sigma_nonzero) / (std::pow(e.N0, 1.5) * e.Q2 * e.Q2 * std::sqrt(e.Q1));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace weylsum::pipeline
