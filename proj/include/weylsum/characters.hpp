#pragma once

// Dirichlet characters modulo an odd prime, realised through a discrete-log
// table. A character with index j sends g^k to e(jk/(p-1)); values are kept as
// exponents mod p-1 and only turned into complex numbers on evaluation.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "weylsum/arith.hpp"

namespace weylsum::chars {

class PrimeModulus {
public:
    explicit PrimeModulus(u64 p) : p_(p) {
        if (p < 3 || !is_prime(p)) throw std::invalid_argument("PrimeModulus: p must be an odd prime");
        g_ = find_primitive_root(p);
        dlog_.assign(p, 0);
        u64 x = 1;
        for (u64 k = 0; k + 1 < p; ++k) {
            dlog_[x] = static_cast<std::uint32_t>(k);
            x = mulmod(x, g_, p);
        }
        roots_.reserve(p - 1);
        for (u64 k = 0; k + 1 < p; ++k) roots_.push_back(e_frac(static_cast<i64>(k), static_cast<i64>(p - 1)));
    }

    u64 p() const { return p_; }
    u64 generator() const { return g_; }
    u64 group_order() const { return p_ - 1; }

    /// Index k with g^k = residue (mod p); residue must be coprime to p.
    u64 dlog(i64 residue) const {
        const u64 r = static_cast<u64>(mod(residue, static_cast<i64>(p_)));
        if (r == 0) throw std::domain_error("dlog of a multiple of p");
        return dlog_[r];
    }

    /// e(k/(p-1)).
    const cplx& root(u64 k) const { return roots_[k % (p_ - 1)]; }

    static u64 find_primitive_root(u64 p) {
        const auto factors = factorize(p - 1);
        for (u64 g = 2; g < p; ++g) {
            bool generates = true;
            for (auto [r, e] : factors) {
                (void)e;
                if (powmod(g, (p - 1) / r, p) == 1) {
                    generates = false;
                    break;
                }
            }
            if (generates) return g;
        }
        throw std::logic_error("no primitive root found");
    }

private:
    u64 p_;
    u64 g_ = 0;
    std::vector<std::uint32_t> dlog_;
    std::vector<cplx> roots_;
};

/// Shared, immutable modulus data; built once per prime.
inline std::shared_ptr<const PrimeModulus> prime_modulus(u64 p) {
    static std::mutex guard;
    static std::map<u64, std::shared_ptr<const PrimeModulus>> cache;
    std::lock_guard lock(guard);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    auto mod_data = std::make_shared<const PrimeModulus>(p);
    cache.emplace(p, mod_data);
    return mod_data;
}

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const PrimeModulus> modulus, u64 index)
        : modulus_(std::move(modulus)), index_(index) {
        if (!modulus_) throw std::invalid_argument("DirichletCharacter: null modulus");
        if (index_ >= modulus_->group_order()) throw std::invalid_argument("DirichletCharacter: index out of range");
    }

    u64 modulus() const { return modulus_->p(); }
    u64 index() const { return index_; }
    const PrimeModulus& modulus_data() const { return *modulus_; }

    /// chi(n) = e(exponent/(p-1)); nullopt when p | n.
    std::optional<u64> exponent(i64 n) const {
        const i64 p = static_cast<i64>(modulus_->p());
        if (mod(n, p) == 0) return std::nullopt;
        return static_cast<u64>(mulmod(index_, modulus_->dlog(n), modulus_->group_order()));
    }

    cplx operator()(i64 n) const {
        const auto k = exponent(n);
        return k ? modulus_->root(*k) : cplx{0.0, 0.0};
    }

    bool is_primitive() const { return index_ != 0; }
    bool is_quadratic() const { return 2 * index_ == modulus_->group_order(); }
    bool is_real() const { return index_ == 0 || is_quadratic(); }

    DirichletCharacter conj() const {
        const u64 order = modulus_->group_order();
        return {modulus_, (order - index_) % order};
    }

    /// Values chi(0..p-1), for tight loops.
    std::vector<cplx> table() const {
        std::vector<cplx> out(modulus_->p());
        for (u64 r = 0; r < modulus_->p(); ++r) out[r] = (*this)(static_cast<i64>(r));
        return out;
    }

private:
    std::shared_ptr<const PrimeModulus> modulus_;
    u64 index_;
};

inline DirichletCharacter make_character(u64 p, u64 j) {
    auto modulus = prime_modulus(p);
    if (j >= modulus->group_order()) throw std::invalid_argument("make_character: index must lie in 0..p-2");
    return {std::move(modulus), j};
}

inline DirichletCharacter quadratic_character(u64 p) { return make_character(p, (p - 1) / 2); }

/// tau_chi = sum_{x mod p} chi(x) e(x/p) by direct summation.
/// The principal character is rejected: its sum is -1, not of modulus sqrt(p).
inline cplx gauss_sum(const DirichletCharacter& chi) {
    if (!chi.is_primitive()) throw std::domain_error("gauss_sum: principal character is not primitive");
    const i64 p = static_cast<i64>(chi.modulus());
    cplx total{0.0, 0.0};
    for (i64 x = 1; x < p; ++x) total += chi(x) * e_frac(x, p);
    return total;
}

}  // namespace weylsum::chars
